#include "hull_lil/func.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "hull_lil/error.hpp"
#include "hull_lil/io.hpp"

namespace hull_lil::func {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void require_bridge(const PLFunction& f) {
  if (std::abs(f.end_value()) > 1e-12 * std::max(1.0, max_abs(f.values())))
    throw Error("function is not a bridge");
}

Envelope envelope(const PLFunction& f, bool upper) {
  const auto& t = f.grid();
  const auto& y = f.values();
  const std::size_t n = t.size();
  const double s = upper ? 1.0 : -1.0;
  auto pt = [&](std::size_t i) { return geom::Point2{t[i], s * y[i]}; };

  // Upper hull scanned left to right keeps only clockwise turns.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const auto o = pt(hull[hull.size() - 2]);
      const auto a = pt(hull.back());
      const auto b = pt(i);
      if (geom::orient(o, a, b) < -1e-14 * geom::norm(a - o) * geom::norm(b - o)) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  std::vector<double> env(n);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k];
    const std::size_t b = hull[k + 1];
    env[a] = y[a];
    const double slope = (y[b] - y[a]) / (t[b] - t[a]);
    for (std::size_t j = a + 1; j < b; ++j) env[j] = y[a] + slope * (t[j] - t[a]);
  }
  env[n - 1] = y[n - 1];

  const double tol = 1e-12 * max_abs(y);
  Envelope out{PLFunction(t, env), {}, {}};
  std::vector<double> touched = env;
  for (std::size_t j = 0; j < n; ++j) {
    if (s * (env[j] - y[j]) <= tol) {
      touched[j] = y[j];
      if (!out.extreme.empty() && j > out.extreme.back() + 1) out.faces.push_back({out.extreme.back(), j});
      out.extreme.push_back(j);
    }
  }
  out.function = PLFunction(t, std::move(touched));
  return out;
}

}  // namespace

PLFunction::PLFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2) throw Error("a piecewise-linear function needs at least one cell");
  if (grid_.size() != values_.size()) throw Error("grid and values differ in length");
  if (grid_[0] != 0.0) throw Error("grid must start at 0");
  if (values_[0] != 0.0) throw Error("f(0) must be 0");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) throw Error("non-finite grid or value");
    if (i > 0 && !(grid_[i] > grid_[i - 1])) throw Error("grid must be strictly increasing");
  }
}

PLFunction PLFunction::uniform(double x, std::vector<double> values) {
  if (!(x > 0.0)) throw Error("domain length must be positive");
  if (values.size() < 2) throw Error("a piecewise-linear function needs at least one cell");
  const std::size_t n = values.size() - 1;
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = x * static_cast<double>(i) / static_cast<double>(n);
  grid[n] = x;
  return PLFunction(std::move(grid), std::move(values));
}

double PLFunction::slope(std::size_t cell) const {
  return (values_[cell + 1] - values_[cell]) / (grid_[cell + 1] - grid_[cell]);
}

double PLFunction::operator()(double t) const {
  if (!(t >= 0.0 && t <= length())) throw Error("evaluation point outside the domain");
  if (t == length()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (t == grid_[i]) return values_[i];
  return values_[i] + slope(i) * (t - grid_[i]);
}

Envelope majorant(const PLFunction& f) { return envelope(f, true); }

Envelope minorant(const PLFunction& f) { return envelope(f, false); }

FaceDecomposition faces(const PLFunction& f) {
  auto up = majorant(f);
  auto lo = minorant(f);
  return {std::move(up.extreme), std::move(up.faces), std::move(lo.extreme), std::move(lo.faces)};
}

double gamma(const PLFunction& f) {
  const auto& t = f.grid();
  const auto& y = f.values();
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dy = y[i + 1] - y[i];
    g += dy * dy / (t[i + 1] - t[i]);
  }
  return g;
}

double gamma_between(const PLFunction& f, double a, double b) {
  const auto& t = f.grid();
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double lo = std::max(a, t[i]);
    const double hi = std::min(b, t[i + 1]);
    if (hi <= lo) continue;
    const double s = f.slope(i);
    g += s * s * (hi - lo);
  }
  return g;
}

double arc_length(const PLFunction& f) {
  const auto& t = f.grid();
  const auto& y = f.values();
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) len += std::hypot(t[i + 1] - t[i], y[i + 1] - y[i]);
  return len;
}

double integral(const PLFunction& f) {
  const auto& t = f.grid();
  const auto& y = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  return s;
}

double integral_between(const PLFunction& f, double a, double b) {
  const auto& t = f.grid();
  const auto& y = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double lo = std::max(a, t[i]);
    const double hi = std::min(b, t[i + 1]);
    if (hi <= lo) continue;
    const double sl = f.slope(i);
    const double ylo = y[i] + sl * (lo - t[i]);
    const double yhi = y[i] + sl * (hi - t[i]);
    s += 0.5 * (hi - lo) * (ylo + yhi);
  }
  return s;
}

double area(const PLFunction& f) {
  const auto up = majorant(f).function.values();
  const auto lo = minorant(f).function.values();
  const auto& t = f.grid();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    s += 0.5 * (t[i + 1] - t[i]) * ((up[i] - lo[i]) + (up[i + 1] - lo[i + 1]));
  return s;
}

geom::ConvexPolygon space_time_hull(const PLFunction& f) {
  std::vector<geom::Point2> pts(f.grid().size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {f.grid()[i], f.values()[i]};
  return geom::convex_hull_2d(pts);
}

PLFunction bridge(const PLFunction& f) {
  if (std::abs(f.length() - 1.0) > 1e-12) throw Error("bridge requires the domain [0, 1]; rescale first");
  std::vector<double> v = f.values();
  const double end = f.end_value();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f.grid()[i] * end;
  v.back() = 0.0;
  return PLFunction(f.grid(), std::move(v));
}

PLFunction symmetrize(const PLFunction& f, Sign sign) {
  require_bridge(f);
  if (max_abs(f.values()) == 0.0) throw Error("symmetrization of the zero function is undefined");
  const bool plus = sign == Sign::plus;
  const Envelope env = plus ? majorant(f) : minorant(f);
  const auto& t = f.grid();
  const auto& y = f.values();
  std::vector<double> grid;
  std::vector<double> vals;
  grid.reserve(t.size());
  vals.reserve(t.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    grid.push_back(t[j]);
    vals.push_back(plus ? y[j] : -y[j]);
    if (k < env.faces.size() && env.faces[k].u == j) {
      const std::size_t u = env.faces[k].u;
      const std::size_t v = env.faces[k].v;
      const double ends = y[u] + y[v];
      for (std::size_t i = v - 1; i > u; --i) {
        grid.push_back(t[u] + t[v] - t[i]);
        vals.push_back(plus ? ends - y[i] : y[i] - ends);
      }
      j = v - 1;
      ++k;
    }
  }
  vals.front() = 0.0;
  vals.back() = 0.0;
  return PLFunction(std::move(grid), std::move(vals));
}

PLFunction convexify(const PLFunction& f) {
  require_bridge(f);
  const double tol = 1e-12 * std::max(1.0, max_abs(f.values()));
  for (double v : f.values())
    if (v < -tol) throw Error("convexify requires a nonnegative bridge");
  return majorant(f).function;
}

PLFunction running_average(const PLFunction& f, std::size_t m) {
  if (m < f.cells()) throw Error("output refinement must be at least the input cell count");
  const auto& t = f.grid();
  const auto& y = f.values();
  const double x = f.length();
  std::vector<double> cum(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) cum[i + 1] = cum[i] + 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);

  std::vector<double> g(m + 1, 0.0);
  std::size_t cell = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double tk = k == m ? x : x * static_cast<double>(k) / static_cast<double>(m);
    while (cell + 2 < t.size() && t[cell + 1] <= tk) ++cell;
    double integ;
    if (tk == t[cell + 1]) {
      integ = cum[cell + 1];
    } else {
      const double yt = y[cell] + f.slope(cell) * (tk - t[cell]);
      integ = cum[cell] + 0.5 * (tk - t[cell]) * (y[cell] + yt);
    }
    g[k] = integ / tk;
  }
  return PLFunction::uniform(x, std::move(g));
}

PLFunction f_star(double x, double gamma_value, std::size_t n) {
  if (!(x > 0.0) || !(gamma_value > 0.0)) throw Error("f_star requires x > 0 and gamma > 0");
  if (n < 2) throw Error("f_star requires at least two cells");
  const double c = std::sqrt(3.0 * gamma_value / (x * x * x));
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = i == n ? x : x * static_cast<double>(i) / static_cast<double>(n);
    v[i] = c * u * (x - u);
  }
  return PLFunction::uniform(x, std::move(v));
}

FamilyMember f_a_family(double a, std::size_t n) {
  if (!(a * a <= 27.0)) throw Error("f_a requires |a| <= sqrt(27)");
  if (n < 2) throw Error("f_a requires at least two cells");
  const double s = std::sqrt(1.0 - a * a / 27.0);
  const double b = 2.0 * a / 3.0 + 1.5 * s;
  const double c = 2.0 * a / 3.0 + s;
  std::vector<double> fv(n + 1, 0.0);
  std::vector<double> gv(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = i == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n);
    const double lg = std::log(t);
    fv[i] = a * t * t * lg - b * t * t + c * t;
    gv[i] = a * (t * t * lg / 3.0 - t * t / 9.0) - b * t * t / 3.0 + c * t / 2.0;
  }
  return {PLFunction::uniform(1.0, std::move(fv)), PLFunction::uniform(1.0, std::move(gv))};
}

PLFunction rescale_affine(const PLFunction& f, double a, double x) {
  if (!(a > 0.0) || !(x > 0.0)) throw Error("affine rescaling requires a > 0 and x > 0");
  std::vector<double> grid = f.grid();
  std::vector<double> vals = f.values();
  for (auto& t : grid) t *= x;
  for (auto& v : vals) v *= a;
  return PLFunction(std::move(grid), std::move(vals));
}

PLFunction random_pl(StreamRng& rng, std::size_t n, double target_gamma, bool jitter_grid) {
  if (n < 1) throw Error("random function needs at least one cell");
  if (!(target_gamma > 0.0)) throw Error("target cost must be positive");
  std::vector<double> grid(n + 1, 0.0);
  if (jitter_grid) {
    for (std::size_t i = 1; i <= n; ++i) grid[i] = grid[i - 1] + 0.25 + 1.5 * rng.uniform();
    const double total = grid[n];
    for (auto& t : grid) t /= total;
  } else {
    for (std::size_t i = 1; i <= n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  grid[n] = 1.0;
  std::vector<double> slopes(n);
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    slopes[i] = rng.normal();
    g += slopes[i] * slopes[i] * (grid[i + 1] - grid[i]);
  }
  const double scale = std::sqrt(target_gamma / g);
  std::vector<double> vals(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) vals[i + 1] = vals[i] + scale * slopes[i] * (grid[i + 1] - grid[i]);
  return PLFunction(std::move(grid), std::move(vals));
}

PLFunction random_bridge(StreamRng& rng, std::size_t n, double target_gamma, bool jitter_grid) {
  const PLFunction b = bridge(random_pl(rng, n, target_gamma, jitter_grid));
  const double g = gamma(b);
  if (!(g > 0.0)) return b;
  return rescale_affine(b, std::sqrt(target_gamma / g), 1.0);
}

void write_csv(const PLFunction& f, std::ostream& out) {
  out << "t,f\r\n";
  for (std::size_t i = 0; i < f.grid().size(); ++i)
    out << io::format_double(f.grid()[i]) << ',' << io::format_double(f.values()[i]) << "\r\n";
}

PLFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,f") throw Error("expected header t,f");
  std::vector<double> grid;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto row = io::parse_list(line);
    if (row.size() != 2) throw Error("expected two columns in '" + line + "'");
    grid.push_back(row[0]);
    vals.push_back(row[1]);
  }
  return PLFunction(std::move(grid), std::move(vals));
}

}  // namespace hull_lil::func
