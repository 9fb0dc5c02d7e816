#include "hull_lil/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hull_lil/error.hpp"
#include "hull_lil/func.hpp"
#include "hull_lil/geom.hpp"
#include "hull_lil/lil.hpp"
#include "hull_lil/random.hpp"
#include "hull_lil/walk.hpp"

namespace hull_lil::verify {

namespace {

class Tally {
 public:
  explicit Tally(std::string name) {
    r_.name = std::move(name);
    r_.worst = -INFINITY;
  }

  // Records a case whose violation is `excess` (<= 0 means satisfied).
  void bound(double excess) { record(!(excess <= 0.0), excess); }

  // Records |a - b| <= tol.
  void close(double a, double b, double tol) {
    const double err = std::abs(a - b);
    record(!(err <= tol), err);
  }

  CheckResult result() const {
    CheckResult r = r_;
    if (r.cases == 0) r.worst = 0.0;
    return r;
  }

 private:
  void record(bool failed, double value) {
    ++r_.cases;
    if (failed) ++r_.failures;
    r_.worst = std::max(r_.worst, std::isnan(value) ? INFINITY : value);
  }

  CheckResult r_;
};

geom::ConvexPolygon random_polygon(StreamRng& rng, std::vector<geom::Point2>& pts) {
  const double sx = 0.2 + 3.0 * rng.uniform();
  const double sy = 0.2 + 3.0 * rng.uniform();
  const std::size_t m = 3 + rng.below(28);
  for (std::size_t i = 0; i < m; ++i) pts.push_back({sx * (2.0 * rng.uniform() - 1.0), sy * (2.0 * rng.uniform() - 1.0)});
  pts.push_back({0.0, 0.0});
  return geom::convex_hull_2d(pts);
}

SuiteReport steiner_suite(const VerifyOptions& opt) {
  SuiteReport rep{"steiner", {}, {}};
  StreamRng rng(opt.seed, 101);

  Tally steiner("parallel-body area equals the Minkowski sum of polygon and disk");
  Tally homog("intrinsic volumes are homogeneous of order k under dilation");
  Tally idem("hull of the hull vertices is the same polygon");
  for (std::size_t i = 0; i < opt.polygons; ++i) {
    std::vector<geom::Point2> pts;
    const auto poly = random_polygon(rng, pts);
    const double lambda = 2.0 * rng.uniform();
    std::vector<std::pair<double, double>> v;
    for (const auto& p : poly.vertices()) v.emplace_back(p.x, p.y);
    const double expect = minkowski_disk_area(v, lambda);
    steiner.close(geom::parallel_body_area_2d(poly, lambda), expect, 1e-10 * std::max(1.0, expect));

    const auto iv = geom::intrinsic_volumes_2d(poly);
    for (double s : {0.5, 2.0, 7.0}) {
      const auto sv = geom::intrinsic_volumes_2d(poly.scaled(s));
      for (int k = 0; k <= 2; ++k) {
        const double want = std::pow(s, k) * iv[k];
        homog.close(sv[k], want, 1e-12 * std::max(1.0, want));
      }
    }
    idem.bound(geom::convex_hull_2d(poly.vertices()) == poly ? 0.0 : 1.0);
  }
  rep.checks.push_back(steiner.result());

  Tally rect("box intrinsic volumes equal elementary symmetric polynomials of the sides");
  for (std::size_t i = 0; i < 100; ++i) {
    const double h = 5.0 * rng.uniform();
    const double r = 2.0 * rng.uniform();
    for (int d = 1; d <= 6; ++d) {
      std::vector<double> sides{h};
      for (int j = 1; j < d; ++j) sides.push_back(2.0 * r);
      for (int k = 1; k <= d; ++k) {
        const double want = elementary_symmetric(sides, k);
        rect.close(geom::rectangle_intrinsic_volume(d, k, h, r), want, 1e-12 * std::max(1.0, std::abs(want)));
      }
    }
  }
  rep.checks.push_back(rect.result());
  rep.checks.push_back(homog.result());

  Tally smooth("intrinsic volumes change by at most those of the ball containing the symmetric difference");
  for (std::size_t i = 0; i < opt.polygons; ++i) {
    std::vector<geom::Point2> shared;
    random_polygon(rng, shared);
    auto a = shared;
    auto b = shared;
    const std::size_t extra = rng.below(4);
    for (std::size_t j = 0; j < extra; ++j) {
      a.push_back({4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0});
      b.push_back({4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0});
    }
    const auto c1 = geom::convex_hull_2d(a);
    const auto c2 = geom::convex_hull_2d(b);
    const double r = geom::symmetric_difference_radius(c1, c2);
    const auto v1 = geom::intrinsic_volumes_2d(c1);
    const auto v2 = geom::intrinsic_volumes_2d(c2);
    const double ball[3] = {1.0, std::numbers::pi * r, std::numbers::pi * r * r};
    for (int k = 1; k <= 2; ++k)
      smooth.bound(std::abs(v1[k] - v2[k]) - ball[k] - 1e-12 * std::max(1.0, std::max(v1[k], v2[k])));
  }
  rep.checks.push_back(smooth.result());
  rep.checks.push_back(idem.result());
  return rep;
}

SuiteReport lemmas_suite(const VerifyOptions& opt) {
  SuiteReport rep{"lemmas-s5", {}, {}};
  StreamRng rng(opt.seed, 202);
  Tally bridge_gamma("bridge lowers the cost by exactly f(1)^2");
  Tally bridge_area("bridge preserves the majorant-minorant area");
  Tally sym_gamma("symmetrization preserves the cost");
  Tally sym_excess("symmetrized integrals equal int(2 maj - f) and int(f - 2 min)");
  Tally sym_shape("symmetrizations are nonnegative bridges above the majorant");
  Tally sym_area("the better symmetrization does not lose area");
  Tally convex("concave majorant of a nonnegative bridge keeps area and does not raise cost");
  Tally iso("bridge integral is at most sqrt(cost / 12)");
  Tally half1("integral over [0, 1/2] is at most sqrt(cost on [0, 1/2] / 24)");
  Tally half2("bridge integral over [1/2, 1] is at most sqrt(cost on [1/2, 1] / 24)");
  Tally arc("squared arc length is at most 1 + cost");

  const std::size_t grid = std::max<std::size_t>(opt.grid, 2);
  for (std::size_t i = 0; i < opt.functions; ++i) {
    const double target = 0.05 + 4.0 * rng.uniform();
    const bool jitter = i % 2 == 1;
    const auto f = func::random_pl(rng, grid, target, jitter);
    const double g = func::gamma(f);

    const auto fb = func::bridge(f);
    const double gb = func::gamma(fb);
    bridge_gamma.close(gb, g - f.end_value() * f.end_value(), 1e-9 * std::max(1.0, g));
    const double af = func::area(f);
    bridge_area.close(func::area(fb), af, 1e-10 * std::max(1.0, af));

    arc.bound(func::arc_length(f) * func::arc_length(f) - (1.0 + g) - 1e-12 * (1.0 + g));
    half1.bound(func::integral_between(f, 0.0, 0.5) - std::sqrt(func::gamma_between(f, 0.0, 0.5) / 24.0) - 1e-12);

    iso.bound(func::integral(fb) - std::sqrt(gb / 12.0) - 1e-12);
    half2.bound(func::integral_between(fb, 0.5, 1.0) - std::sqrt(func::gamma_between(fb, 0.5, 1.0) / 24.0) - 1e-12);

    const auto sp = func::symmetrize(fb, func::Sign::plus);
    const auto sm = func::symmetrize(fb, func::Sign::minus);
    const double tol = 1e-9 * std::max(1.0, gb);
    sym_gamma.close(func::gamma(sp), gb, tol);
    sym_gamma.close(func::gamma(sm), gb, tol);
    const auto maj = func::majorant(fb).function;
    const auto min = func::minorant(fb).function;
    const double ifb = func::integral(fb);
    sym_excess.close(func::integral(sp), 2.0 * func::integral(maj) - ifb, 1e-9);
    sym_excess.close(func::integral(sm), ifb - 2.0 * func::integral(min), 1e-9);

    double shape = 0.0;
    for (const auto* s : {&sp, &sm}) {
      for (double v : s->values()) shape = std::max(shape, -v);
      shape = std::max(shape, std::abs(s->end_value()));
    }
    for (std::size_t j = 0; j < fb.grid().size(); ++j) {
      const double t = fb.grid()[j];
      shape = std::max(shape, maj.values()[j] - sp(t));
      shape = std::max(shape, -min.values()[j] - sm(t));
    }
    sym_shape.bound(shape - 1e-12);

    const double ab = func::area(fb);
    sym_area.bound(ab - std::max(func::area(sp), func::area(sm)) - 1e-12 * std::max(1.0, ab));

    const auto cv = func::convexify(sp);
    const double asp = func::area(sp);
    convex.close(func::area(cv), asp, 1e-12 * std::max(1.0, asp));
    convex.bound(func::gamma(cv) - func::gamma(sp) - 1e-12 * std::max(1.0, gb));
  }
  for (const auto* t : {&bridge_gamma, &bridge_area, &sym_gamma, &sym_excess, &sym_shape, &sym_area, &convex, &iso,
                        &half1, &half2, &arc})
    rep.checks.push_back(t->result());
  return rep;
}

SuiteReport scaling_suite(const VerifyOptions& opt) {
  SuiteReport rep{"scaling", {}, {}};
  Tally psi("anisotropic scaling divides hull area by n ell(n)");
  Tally com("centre of mass stays inside the hull");
  Tally interp("interpolated path has the same hull");
  StreamRng pick(opt.seed, 303);
  for (std::size_t p = 0; p < opt.paths; ++p) {
    const double angle = 2.0 * std::numbers::pi * pick.uniform();
    const double speed = 0.25 + 2.0 * pick.uniform();
    Eigen::VectorXd mu(2);
    mu << speed * std::cos(angle), speed * std::sin(angle);
    Eigen::MatrixXd sigma(2, 2);
    const double a = 0.5 + pick.uniform();
    const double c = 0.5 + pick.uniform();
    const double b = 0.4 * std::sqrt(a * c) * (2.0 * pick.uniform() - 1.0);
    sigma << a, b, b, c;
    const auto model = walk::IncrementModel::gaussian(mu, sigma);
    const auto path = walk::generate_walk(model, opt.path_length, opt.seed, p);
    const auto red = walk::reduced_covariance(sigma, mu);
    const auto scaled = walk::scale_psi(path, red);
    std::vector<geom::Point2> sp(path.size());
    for (std::size_t i = 0; i < sp.size(); ++i) sp[i] = {scaled[2 * i], scaled[2 * i + 1]};
    const auto pts = path.points_2d();
    const auto hull = geom::convex_hull_2d(pts);
    const double n = static_cast<double>(path.steps());
    const double lhs = geom::convex_hull_2d(sp).area() * n * walk::khinchin_ell(path.steps());
    psi.close(lhs / hull.area(), 1.0, 1e-9);

    const auto g = walk::centre_of_mass(path);
    std::size_t outside = 0;
    std::vector<geom::Point2> grow_pts;
    std::size_t added = 0;
    for (std::size_t i = 0; i < path.size(); i += 97) {
      grow_pts.insert(grow_pts.end(), pts.begin() + static_cast<std::ptrdiff_t>(added),
                      pts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      added = i + 1;
      const auto prefix = geom::convex_hull_2d(grow_pts);
      grow_pts = prefix.vertices();
      if (!prefix.contains({g[2 * i], g[2 * i + 1]}, 1e-9)) ++outside;
    }
    com.bound(static_cast<double>(outside));

    if (p < 10) {
      std::vector<geom::Point2> fine;
      const std::size_t m = 3 * path.steps();
      for (std::size_t j = 0; j <= m; ++j) {
        const auto y = walk::interpolate(path, static_cast<double>(j) / static_cast<double>(m));
        fine.push_back({y[0], y[1]});
      }
      const auto h2 = geom::convex_hull_2d(fine);
      interp.close(h2.area() / hull.area(), 1.0, 1e-9);
    }
  }
  rep.checks.push_back(psi.result());
  rep.checks.push_back(com.result());
  rep.checks.push_back(interp.result());
  return rep;
}

SuiteReport stability_suite(const VerifyOptions& opt) {
  SuiteReport rep{"stability", {}, {}};
  Eigen::VectorXd mu(2);
  mu << 1.0, 0.0;
  const auto model = walk::IncrementModel::gaussian(mu, Eigen::MatrixXd::Identity(2, 2));
  std::vector<std::size_t> ns;
  for (std::size_t n = std::min<std::size_t>(1000, opt.n_max); n < opt.n_max; n *= 10) ns.push_back(n);
  ns.push_back(opt.n_max);
  if (opt.k > ns.front()) throw Error("k must not exceed the smallest n");
  Tally grow("permuting the first k increments moves the hull only inside a ball that does not grow with n");
  for (const auto seed : opt.stability_seeds) {
    const auto radii = lil::permutation_stability_probe(model, ns, opt.k, opt.permutations, seed);
    for (std::size_t i = 0; i < ns.size(); ++i) rep.radii.push_back({seed, ns[i], radii[i]});
    grow.bound(radii.back() - 1.1 * radii.front());
  }
  rep.checks.push_back(grow.result());
  return rep;
}

}  // namespace

bool SuiteReport::pass() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
}

std::vector<std::string> suite_names() { return {"steiner", "lemmas-s5", "scaling", "stability"}; }

SuiteReport run_suite(const std::string& name, const VerifyOptions& options) {
  if (name == "steiner") return steiner_suite(options);
  if (name == "lemmas-s5") return lemmas_suite(options);
  if (name == "scaling") return scaling_suite(options);
  if (name == "stability") return stability_suite(options);
  throw Error("unknown suite '" + name + "'");
}

double minkowski_disk_area(const std::vector<std::pair<double, double>>& v, double radius) {
  const std::size_t n = v.size();
  if (n == 0) throw Error("empty polygon");
  if (n == 1) return std::numbers::pi * radius * radius;
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ax = v[i].first - v[0].first, ay = v[i].second - v[0].second;
    const double bx = v[i + 1].first - v[0].first, by = v[i + 1].second - v[0].second;
    area += 0.5 * (ax * by - ay * bx);
  }
  double sectors = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = v[(i + n - 1) % n];
    const auto& q = v[i];
    const auto& r = v[(i + 1) % n];
    const double ix = q.first - p.first, iy = q.second - p.second;
    const double ox = r.first - q.first, oy = r.second - q.second;
    area += radius * std::hypot(ox, oy);  // rectangle on edge q -> r
    const double turn = std::atan2(ix * oy - iy * ox, ix * ox + iy * oy);
    sectors += 0.5 * radius * radius * turn;
  }
  return area + sectors;
}

double elementary_symmetric(const std::vector<double>& values, int k) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (double x : values)
    for (std::size_t j = values.size(); j >= 1; --j) e[j] += x * e[j - 1];
  if (k < 0 || static_cast<std::size_t>(k) > values.size()) return 0.0;
  return e[static_cast<std::size_t>(k)];
}

void print_table(const SuiteReport& report, std::ostream& out) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  out << "suite " << report.suite << "\n";
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  cases  failures  worst       status\n";
  for (const auto& c : report.checks) {
    std::ostringstream worst;
    worst << std::scientific << std::setprecision(2) << c.worst;
    out << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << std::right << std::setw(5) << c.cases
        << "  " << std::setw(8) << c.failures << "  " << std::left << std::setw(10) << worst.str() << "  "
        << (c.pass() ? "PASS" : "FAIL") << "\n";
  }
  out << (report.pass() ? "all checks passed" : "some checks failed") << "\n";
}

}  // namespace hull_lil::verify
