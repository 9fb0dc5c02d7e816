#include "hull_lil/varopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "hull_lil/error.hpp"
#include "hull_lil/io.hpp"
#include "hull_lil/parallel.hpp"
#include "hull_lil/random.hpp"

namespace hull_lil::varopt {

namespace {

using Objective = double (*)(const std::vector<double>&, std::vector<double>*);

// Hull of (x_i, y_i) as counterclockwise indices, keeping points that lie on
// an edge up to rounding. Their shoelace gradient is the outward one-sided
// derivative, a valid subgradient of the (convex) hull area; the strict hull
// would give them zero and freeze polygonal iterates.
std::vector<std::size_t> hull_ccw(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  auto pops = [&](std::size_t o, std::size_t a, std::size_t b) {
    const double ax = x[a] - x[o], ay = y[a] - y[o];
    const double bx = x[b] - x[o], by = y[b] - y[o];
    const double turn = ax * by - ay * bx;
    return turn < -1e-12 * std::hypot(ax, ay) * std::hypot(bx, by) || (ax == 0.0 && ay == 0.0);
  };
  std::vector<std::size_t> h(2 * n + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && pops(h[k - 2], h[k - 1], order[i])) --k;
    h[k++] = order[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && pops(h[k - 2], h[k - 1], order[i])) --k;
    h[k++] = order[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  return h;
}

// Shoelace area with its gradient in the point coordinates.
double hull_area(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>* gx,
                 std::vector<double>* gy) {
  if (gx) gx->assign(x.size(), 0.0);
  if (gy) gy->assign(y.size(), 0.0);
  const auto h = hull_ccw(x, y);
  const std::size_t m = h.size();
  if (m < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = h[k];
    const std::size_t next = h[(k + 1) % m];
    const std::size_t prev = h[(k + m - 1) % m];
    twice += x[i] * y[next] - x[next] * y[i];
    if (gx) (*gx)[i] += 0.5 * (y[next] - y[prev]);
    if (gy) (*gy)[i] += 0.5 * (x[prev] - x[next]);
  }
  return 0.5 * twice;
}

std::vector<double> cumulative(const double* s, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> f(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) f[i + 1] = f[i] + s[i] * h;
  return f;
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) / static_cast<double>(n);
  t[n] = 1.0;
  return t;
}

// d/ds_j of an objective with value gradient df: h * sum_{i > j} df_i.
void chain_to_slopes(const std::vector<double>& df, double* out, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  double suffix = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    suffix += df[j + 1];
    out[j] = h * suffix;
  }
}

std::vector<double> slopes_of(const func::PLFunction& f) {
  std::vector<double> s(f.cells());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f.slope(i);
  return s;
}

func::PLFunction function_of(const double* s, std::size_t n) {
  return func::PLFunction::uniform(1.0, cumulative(s, n));
}

// Nonnegative concave candidate built from the bridge of f by the better of
// the two face symmetrizations. Neither step lowers the hull area at fixed cost.
bool reduce_graph(std::vector<double>& s) {
  const std::size_t n = s.size();
  const auto b = func::bridge(function_of(s.data(), n));
  if (std::all_of(b.values().begin(), b.values().end(), [](double v) { return v == 0.0; })) return false;
  double best = -1.0;
  std::vector<double> out;
  for (const auto sign : {func::Sign::plus, func::Sign::minus}) {
    const auto c = func::convexify(func::symmetrize(b, sign));
    std::vector<double> slopes(n);
    for (std::size_t i = 0; i < n; ++i) slopes[i] = static_cast<double>(n) * (c.values()[i + 1] - c.values()[i]);
    const double cost = slope_cost(slopes, 1);
    if (!(cost > 0.0)) continue;
    const double score = func::area(c) / std::sqrt(cost);
    if (score > best) {
      best = score;
      out = std::move(slopes);
    }
  }
  if (out.empty()) return false;
  s = std::move(out);
  return true;
}

// Hull boundary of the curve with its longest edge removed, at constant speed.
// It has the same hull and is no longer than the curve whenever the curve
// visits the hull vertices along the boundary.
bool reduce_curve(std::vector<double>& s) {
  const std::size_t n = s.size() / 2;
  const auto x = cumulative(s.data(), n);
  const auto y = cumulative(s.data() + n, n);
  auto h = hull_ccw(x, y);
  const std::size_t m = h.size();
  if (m < 3) return false;
  std::size_t cut = 0;
  double longest = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t a = h[k], b = h[(k + 1) % m];
    const double len = std::hypot(x[b] - x[a], y[b] - y[a]);
    if (len > longest) {
      longest = len;
      cut = k;
    }
  }
  std::vector<double> px, py, arc{0.0};
  for (std::size_t k = 1; k <= m; ++k) {
    const std::size_t i = h[(cut + k) % m];
    if (!px.empty()) arc.push_back(arc.back() + std::hypot(x[i] - px.back(), y[i] - py.back()));
    px.push_back(x[i]);
    py.push_back(y[i]);
  }
  const double total = arc.back();
  if (!(total > 0.0)) return false;
  std::vector<double> qx(n + 1), qy(n + 1);
  std::size_t seg = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double at = total * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 2 < arc.size() && arc[seg + 1] < at) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double w = len > 0.0 ? std::clamp((at - arc[seg]) / len, 0.0, 1.0) : 0.0;
    qx[j] = px[seg] + w * (px[seg + 1] - px[seg]);
    qy[j] = py[seg] + w * (py[seg + 1] - py[seg]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = static_cast<double>(n) * (qx[i + 1] - qx[i]);
    s[n + i] = static_cast<double>(n) * (qy[i + 1] - qy[i]);
  }
  return true;
}

using Reduction = bool (*)(std::vector<double>&);

struct Ascent {
  std::vector<double> slopes;
  double value = 0.0;
  std::vector<double> history;
  std::size_t iterations = 0;
  bool converged = false;
};

Ascent ascend(Objective objective, std::vector<double> s, std::size_t components, const OptimizerConfig& cfg) {
  const std::size_t n = s.size() / components;
  const double inv_h = static_cast<double>(n);
  project(s, components);
  Ascent out;
  std::vector<double> grad;
  std::vector<double> cand(s.size());
  std::vector<double> cand_grad;
  double value = objective(s, &grad);
  double step = cfg.initial_step > 0.0 ? cfg.initial_step : 0.1 / std::sqrt(static_cast<double>(n));
  const double max_step = step * 1e6;
  double window_best = value;
  std::size_t stall = 0;
  out.history.push_back(value);
  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < s.size(); ++i) cand[i] = s[i] + step * inv_h * grad[i];
    project(cand, components);
    const double cv = objective(cand, &cand_grad);
    if (cv > value) {
      s.swap(cand);
      grad.swap(cand_grad);
      value = cv;
      step = std::min(step * cfg.step_growth, max_step);
      out.history.push_back(value);
    } else {
      step *= cfg.step_decay;
    }
    if (value > window_best + cfg.tolerance) {
      window_best = value;
      stall = 0;
    } else if (++stall >= cfg.patience) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.slopes = std::move(s);
  out.value = value;
  return out;
}

// Ascent, then reduction moves that restart the ascent whenever they improve.
Ascent ascend_reduced(Objective objective, Reduction reduction, std::vector<double> s, std::size_t components,
                      const OptimizerConfig& cfg) {
  Ascent out = ascend(objective, std::move(s), components, cfg);
  if (!reduction) return out;
  for (std::size_t round = 0; round < cfg.reductions; ++round) {
    std::vector<double> cand = out.slopes;
    if (!reduction(cand)) break;
    const double cost = slope_cost(cand, components);
    if (!(cost > 0.0)) break;
    for (auto& v : cand) v /= std::sqrt(cost);
    if (!(objective(cand, nullptr) > out.value + cfg.tolerance)) break;
    Ascent next = ascend(objective, std::move(cand), components, cfg);
    if (!(next.value > out.value)) break;
    next.history.insert(next.history.begin(), out.history.begin(), out.history.end());
    next.iterations += out.iterations;
    out = std::move(next);
  }
  return out;
}

std::vector<double> refine(const std::vector<double>& s, std::size_t components) {
  const std::size_t n = s.size() / components;
  std::vector<double> r(2 * s.size());
  for (std::size_t c = 0; c < components; ++c)
    for (std::size_t i = 0; i < n; ++i) r[c * 2 * n + 2 * i] = r[c * 2 * n + 2 * i + 1] = s[c * n + i];
  return r;
}

std::vector<double> random_start(std::size_t n, std::size_t components, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  std::vector<double> s(n * components);
  for (auto& v : s) v = rng.normal();
  const double g = slope_cost(s, components);
  for (auto& v : s) v /= std::sqrt(g);
  return s;
}

std::vector<double> deterministic_start(Init init, std::size_t n, std::size_t components, double a) {
  switch (init) {
    case Init::f_star:
      if (components != 1) break;
      return slopes_of(func::f_star(1.0, 1.0, n));
    case Init::f_a:
      if (components != 1) break;
      return slopes_of(func::f_a_family(a, n).f);
    case Init::semicircle: {
      if (components != 2) break;
      // Arc-length parametrized half circle of radius 1/pi through the origin.
      const double r = 1.0 / std::numbers::pi;
      std::vector<double> s(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        const double a0 = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const double a1 = std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n);
        s[i] = static_cast<double>(n) * r * (std::cos(a0) - std::cos(a1));
        s[n + i] = static_cast<double>(n) * r * (std::sin(a1) - std::sin(a0));
      }
      return s;
    }
    case Init::random:
      break;
  }
  throw Error("initialization does not match the problem");
}

OptResult solve(const std::string& problem, Objective objective, Reduction reduction, std::size_t components,
                const OptimizerConfig& cfg) {
  cfg.validate();
  const bool random = cfg.init == Init::random;
  const std::size_t starts = random ? cfg.restarts : 1;
  std::vector<Ascent> runs(starts);
  parallel_for(starts, cfg.threads, [&](std::size_t r) {
    if (!random) {
      runs[r] = ascend_reduced(objective, reduction, deterministic_start(cfg.init, cfg.grid, components, cfg.init_a), components, cfg);
      return;
    }
    // Coarse-to-fine: fewer cells leave fewer spurious stationary points.
    std::size_t n = cfg.grid;
    while (n > cfg.coarse_grid && n % 2 == 0) n /= 2;
    auto s0 = random_start(n, components, cfg.seed, r);
    for (; n < cfg.grid; n *= 2) {
      const Ascent a = ascend_reduced(objective, reduction, std::move(s0), components, cfg);
      s0 = refine(a.slopes, components);
    }
    runs[r] = ascend_reduced(objective, reduction, std::move(s0), components, cfg);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < starts; ++r)
    if (runs[r].value > runs[best].value) best = r;

  OptResult out;
  out.problem = problem;
  out.grid = cfg.grid;
  out.restarts = starts;
  const Ascent& win = runs[best];
  out.value = win.value;
  out.history = win.history;
  out.iterations = win.iterations;
  out.converged = win.converged;
  for (std::size_t c = 0; c < components; ++c) out.argmax.push_back(function_of(win.slopes.data() + c * cfg.grid, cfg.grid));
  out.trace.push_back({cfg.grid, win.value});

  std::vector<double> s = win.slopes;
  std::size_t n = cfg.grid;
  for (std::size_t k = 0; k < cfg.refinements; ++k) {
    s = refine(s, components);
    n *= 2;
    const Ascent stage = ascend_reduced(objective, reduction, s, components, cfg);
    s = stage.slopes;
    out.converged = out.converged && stage.converged;
    out.trace.push_back({n, stage.value});
  }

  std::size_t converged_runs = 0;
  for (const auto& r : runs) converged_runs += r.converged ? 1 : 0;
  const double cost = slope_cost(win.slopes, components);
  out.certified = cost <= 1.0 + 1e-9;
  out.extras["gamma"] = cost;
  out.extras["best_restart"] = static_cast<double>(best);
  out.extras["converged_restarts"] = static_cast<double>(converged_runs);
  out.extras["initial_value"] = win.history.front();
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (grid < 16) throw Error("grid size must be at least 16");
  if (!(tolerance > 0.0)) throw Error("tolerance must be positive");
  if (coarse_grid < 2) throw Error("coarse grid must have at least two cells");
  if (restarts < 1) throw Error("at least one restart is required");
  if (patience < 1) throw Error("patience must be positive");
  if (!(step_growth >= 1.0) || !(step_decay > 0.0 && step_decay < 1.0)) throw Error("invalid step schedule");
}

double slope_cost(const std::vector<double>& slopes, std::size_t components) {
  const double h = static_cast<double>(components) / static_cast<double>(slopes.size());
  double sum = 0.0;
  for (double v : slopes) sum += v * v;
  return h * sum;
}

void project(std::vector<double>& slopes, std::size_t components) {
  const double g = slope_cost(slopes, components);
  if (g <= 1.0) return;
  const double scale = 1.0 / std::sqrt(g);
  for (auto& v : slopes) v *= scale;
}

double area_objective(const std::vector<double>& slopes, std::vector<double>* grad) {
  const std::size_t n = slopes.size();
  const auto t = uniform_grid(n);
  const auto f = cumulative(slopes.data(), n);
  std::vector<double> gy;
  const double a = hull_area(t, f, nullptr, grad ? &gy : nullptr);
  if (grad) {
    grad->resize(n);
    chain_to_slopes(gy, grad->data(), n);
  }
  return a;
}

double com_area_objective(const std::vector<double>& slopes, std::vector<double>* grad) {
  const std::size_t n = slopes.size();
  const auto t = uniform_grid(n);
  const auto f = cumulative(slopes.data(), n);
  std::vector<double> g(n + 1, 0.0);
  double cum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    cum += 0.5 * (t[k] - t[k - 1]) * (f[k - 1] + f[k]);
    g[k] = cum / t[k];
  }
  std::vector<double> dg;
  const double a = hull_area(t, g, nullptr, grad ? &dg : nullptr);
  if (grad) {
    // g_k = (1/k) sum over cells below k of (f_i + f_{i+1}) / 2.
    std::vector<double> w(n + 2, 0.0);
    for (std::size_t k = 1; k <= n; ++k) w[k] = dg[k] / static_cast<double>(k);
    std::vector<double> suffix(n + 2, 0.0);
    for (std::size_t k = n; k >= 1; --k) suffix[k] = suffix[k + 1] + w[k];
    std::vector<double> df(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) df[i] = 0.5 * (suffix[i] + suffix[i + 1]);
    grad->resize(n);
    chain_to_slopes(df, grad->data(), n);
  }
  return a;
}

double curve_area_objective(const std::vector<double>& slopes, std::vector<double>* grad) {
  const std::size_t n = slopes.size() / 2;
  const auto x = cumulative(slopes.data(), n);
  const auto y = cumulative(slopes.data() + n, n);
  std::vector<double> gx;
  std::vector<double> gy;
  const double a = hull_area(x, y, grad ? &gx : nullptr, grad ? &gy : nullptr);
  if (grad) {
    grad->resize(2 * n);
    chain_to_slopes(gx, grad->data(), n);
    chain_to_slopes(gy, grad->data() + n, n);
  }
  return a;
}

OptResult maximize_area_drift(const OptimizerConfig& config) {
  return solve("lambda2", area_objective, reduce_graph, 1, config);
}

OptResult maximize_com_area(const OptimizerConfig& config) {
  auto r = solve("theta-ascent", com_area_objective, nullptr, 1, config);
  r.extras["theta_bound"] = r.value / std::numbers::sqrt2;
  return r;
}

OptResult maximize_area_zero_drift(const OptimizerConfig& config) {
  return solve("v2", curve_area_objective, reduce_curve, 2, config);
}

PlanarOptimumReport verify_planar_optimum(double x, double gamma_value, std::size_t n, double tolerance) {
  if (n < 16) throw Error("grid size must be at least 16");
  PlanarOptimumReport rep;
  rep.x = x;
  rep.gamma = gamma_value;
  rep.grid = n;
  const auto f = func::f_star(x, gamma_value, n);
  rep.gamma_value = func::gamma(f);
  rep.area_value = func::area(f);
  rep.area_expected = std::sqrt(3.0 * gamma_value * x * x * x) / 6.0;

  const auto base = func::f_star(1.0, 1.0, n);
  const double a = std::sqrt(gamma_value * x);
  const auto scaled = func::rescale_affine(base, a, x);
  const double area_base = func::area(base);
  const double gamma_base = func::gamma(base);
  const double e1 = std::abs(func::area(scaled) - a * x * area_base) / std::max(1.0, a * x * area_base);
  const double e2 = std::abs(func::gamma(scaled) - a * a / x * gamma_base) / std::max(1.0, a * a / x * gamma_base);
  rep.transform_error = std::max(e1, e2);

  rep.pass = std::abs(rep.gamma_value - gamma_value) <= tolerance &&
             std::abs(rep.area_value - rep.area_expected) <= tolerance && rep.transform_error <= 1e-12;
  return rep;
}

OptResult theta_bound_from_family(const std::vector<double>& a_values, std::size_t n, std::size_t threads) {
  if (a_values.empty()) throw Error("no family parameters given");
  if (n < 16) throw Error("grid size must be at least 16");
  for (double a : a_values)
    if (!(a * a <= 27.0)) throw Error("f_a requires |a| <= sqrt(27)");
  std::vector<double> areas(a_values.size());
  parallel_for(a_values.size(), threads, [&](std::size_t i) {
    areas[i] = func::area(func::f_a_family(a_values[i], n).g);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < areas.size(); ++i)
    if (areas[i] > areas[best]) best = i;

  const auto member = func::f_a_family(a_values[best], n);
  const auto env = func::majorant(member.g);
  double t0 = 0.0;
  if (!env.faces.empty() && env.faces.back().v == n) {
    t0 = member.g.grid()[env.faces.back().u];
  } else if (env.extreme.size() >= 2) {
    t0 = member.g.grid()[env.extreme[env.extreme.size() - 2]];
  }

  OptResult out;
  out.problem = "theta-family";
  out.grid = n;
  out.restarts = a_values.size();
  out.value = areas[best];
  out.argmax = {member.f, member.g};
  out.trace.push_back({n, areas[best]});
  out.history = areas;
  out.iterations = a_values.size();
  out.converged = true;
  out.certified = true;
  out.extras["best_a"] = a_values[best];
  out.extras["t0"] = t0;
  out.extras["theta_bound"] = areas[best] / std::numbers::sqrt2;
  out.extras["integral_g"] = func::integral(member.g);
  out.extras["gamma_f"] = func::gamma(member.f);
  return out;
}

double evaluate_argmax(const OptResult& result) {
  if (result.argmax.empty()) throw Error("result has no argmax");
  const auto& f = result.argmax.front();
  if (result.problem == "lambda2") return func::area(f);
  if (result.problem == "theta-ascent") return func::area(func::running_average(f, f.cells()));
  if (result.problem == "theta-family") return func::area(result.argmax.at(1));
  if (result.problem == "v2") {
    const auto& g = result.argmax.at(1);
    std::vector<geom::Point2> pts(f.values().size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {f.values()[i], g.values()[i]};
    return geom::convex_hull_2d(pts).area();
  }
  throw Error("unknown problem '" + result.problem + "'");
}

void write_argmax_csv(const OptResult& result, std::ostream& out) {
  if (result.argmax.empty()) throw Error("result has no argmax");
  const auto& t = result.argmax.front().grid();
  if (result.problem == "theta-family") out << "t,f,g\r\n";
  else if (result.argmax.size() == 2) out << "t,f1,f2\r\n";
  else out << "t,f\r\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << io::format_double(t[i]);
    for (const auto& c : result.argmax) out << ',' << io::format_double(c.values()[i]);
    out << "\r\n";
  }
}

}  // namespace hull_lil::varopt
