#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hull_lil/error.hpp"
#include "hull_lil/func.hpp"
#include "hull_lil/geom.hpp"
#include "hull_lil/random.hpp"
#include "hull_lil/varopt.hpp"

using namespace hull_lil;
using func::PLFunction;

namespace {

const double kLambda2 = std::sqrt(3.0) / 6.0;
const double kV2 = 1.0 / (2.0 * std::numbers::pi);

PLFunction from_slopes(const double* s, std::size_t n) {
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i + 1] = v[i] + s[i] / n;
  return PLFunction::uniform(1.0, std::move(v));
}

std::vector<double> random_slopes(StreamRng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& x : s) x = rng.normal();
  return s;
}

using Objective = double (*)(const std::vector<double>&, std::vector<double>*);

double max_fd_error(Objective obj, std::vector<double> s) {
  std::vector<double> g;
  obj(s, &g);
  double worst = 0.0;
  const double h = 1e-7;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s[i];
    s[i] = x + h;
    const double up = obj(s, nullptr);
    s[i] = x - h;
    const double dn = obj(s, nullptr);
    s[i] = x;
    worst = std::max(worst, std::abs((up - dn) / (2.0 * h) - g[i]));
  }
  return worst;
}

double sup_distance(const PLFunction& a, const PLFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

varopt::OptimizerConfig small_config() {
  varopt::OptimizerConfig c;
  c.grid = 256;
  c.restarts = 4;
  c.refinements = 1;
  return c;
}

}  // namespace

TEST_CASE("objectives agree with direct hull computations") {
  StreamRng rng(21, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.below(50);
    const auto s = random_slopes(rng, n);
    const auto f = from_slopes(s.data(), n);
    CHECK(varopt::area_objective(s, nullptr) == doctest::Approx(func::area(f)).epsilon(1e-12));
    CHECK(varopt::com_area_objective(s, nullptr) ==
          doctest::Approx(func::area(func::running_average(f, n))).epsilon(1e-10));

    const auto s2 = random_slopes(rng, 2 * n);
    const auto f1 = from_slopes(s2.data(), n);
    const auto f2 = from_slopes(s2.data() + n, n);
    std::vector<geom::Point2> pts;
    for (std::size_t i = 0; i <= n; ++i) pts.push_back({f1.values()[i], f2.values()[i]});
    CHECK(varopt::curve_area_objective(s2, nullptr) ==
          doctest::Approx(geom::convex_hull_2d(pts).area()).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central differences at generic points") {
  StreamRng rng(22, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 8 + rng.below(24);
    CHECK(max_fd_error(varopt::area_objective, random_slopes(rng, n)) < 1e-6);
    CHECK(max_fd_error(varopt::com_area_objective, random_slopes(rng, n)) < 1e-6);
    CHECK(max_fd_error(varopt::curve_area_objective, random_slopes(rng, 2 * n)) < 1e-6);
  }
}

TEST_CASE("cost and projection") {
  std::vector<double> s{1.0, 2.0, 3.0, 4.0};
  CHECK(varopt::slope_cost(s, 1) == doctest::Approx(30.0 / 4.0));
  CHECK(varopt::slope_cost(s, 2) == doctest::Approx(30.0 / 2.0));
  varopt::project(s, 1);
  CHECK(varopt::slope_cost(s, 1) == doctest::Approx(1.0));
  CHECK(s[1] / s[0] == doctest::Approx(2.0));
  std::vector<double> inside{0.1, -0.2};
  const auto copy = inside;
  varopt::project(inside, 1);
  CHECK(inside == copy);
}

TEST_CASE("configuration validation") {
  auto c = small_config();
  c.grid = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.step_decay = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_config();
  c.coarse_grid = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_NOTHROW(small_config().validate());
}

TEST_CASE("drift area maximizer reaches sqrt(3)/6 at the parabola") {
  varopt::OptimizerConfig c;
  c.grid = 512;
  c.restarts = 8;
  const auto r = varopt::maximize_area_drift(c);
  CHECK(r.converged);
  CHECK(std::abs(r.value - kLambda2) <= 1e-4);
  CHECK(r.value <= kLambda2 + 1e-9);
  CHECK(varopt::evaluate_argmax(r) == doctest::Approx(r.value).epsilon(1e-9));
  const auto& f = r.argmax[0];
  CHECK(func::gamma(f) <= 1.0 + 1e-9);
  const auto fs = func::f_star(1.0, 1.0, f.cells());
  std::vector<double> neg(fs.values());
  for (auto& v : neg) v = -v;
  const double d = std::min(sup_distance(f, fs), sup_distance(f, PLFunction(fs.grid(), neg)));
  CHECK(d <= 0.02);
  // Trace over grid doublings never loses value by more than discretization.
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].value >= r.trace[i - 1].value - 1e-6);
  CHECK(std::abs(r.trace.back().value - kLambda2) <= 1e-4);
}

TEST_CASE("single random starts all reach the maximum") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto c = small_config();
    c.restarts = 1;
    c.seed = seed;
    const auto r = varopt::maximize_area_drift(c);
    CAPTURE(seed);
    CHECK(std::abs(r.value - kLambda2) < 0.05);
  }
}

TEST_CASE("starting at the parabola gives no improvement beyond discretization") {
  auto c = small_config();
  c.init = varopt::Init::f_star;
  c.refinements = 0;
  c.grid = 512;
  const auto r = varopt::maximize_area_drift(c);
  const double gain = r.value - r.extras.at("initial_value");
  CHECK(gain >= -1e-12);
  // The grid-512 parabola is below its continuum value by O(1/N^2).
  CHECK(gain < 1e-5);
}

TEST_CASE("no random feasible function beats the drift area maximum") {
  StreamRng rng(23, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = func::random_pl(rng, 8 + rng.below(200), rng.uniform(), trial % 2 == 0);
    CHECK(func::area(f) <= kLambda2 + 1e-12);
  }
}

TEST_CASE("zero-drift curve maximizer reaches 1/(2 pi)") {
  auto c = small_config();
  c.grid = 512;
  c.restarts = 4;
  const auto r = varopt::maximize_area_zero_drift(c);
  CHECK(r.argmax.size() == 2);
  CHECK(std::abs(r.value - kV2) <= 1e-4);
  CHECK(r.value <= kV2 + 1e-9);
  CHECK(varopt::evaluate_argmax(r) == doctest::Approx(r.value).epsilon(1e-9));
  CHECK(func::gamma(r.argmax[0]) + func::gamma(r.argmax[1]) <= 1.0 + 1e-9);

  auto sc = small_config();
  sc.init = varopt::Init::semicircle;
  sc.refinements = 0;
  sc.grid = 512;
  const auto s = varopt::maximize_area_zero_drift(sc);
  CHECK(s.value - s.extras.at("initial_value") < 1e-5);
  CHECK(std::abs(s.value - kV2) <= 1e-5);
}

TEST_CASE("centre-of-mass ascent improves on the family seed") {
  auto c = small_config();
  c.init = varopt::Init::f_a;
  c.grid = 512;
  c.refinements = 0;
  const auto r = varopt::maximize_com_area(c);
  CHECK(r.value >= 0.127894);
  CHECK(r.value >= r.extras.at("initial_value"));
  CHECK(r.extras.at("theta_bound") == doctest::Approx(r.value / std::numbers::sqrt2));
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
  CHECK(varopt::evaluate_argmax(r) == doctest::Approx(r.value).epsilon(1e-9));
  CHECK(func::gamma(r.argmax[0]) <= 1.0 + 1e-9);
}

TEST_CASE("planar optimum verification") {
  for (auto [x, g] : {std::pair{1.0, 1.0}, {4.0, 1.0}, {2.0, 3.0}}) {
    const auto rep = varopt::verify_planar_optimum(x, g, 2000);
    CAPTURE(x);
    CAPTURE(g);
    CHECK(rep.pass);
    CHECK(rep.area_expected == doctest::Approx(std::sqrt(3.0 * g * x * x * x) / 6.0));
    CHECK(rep.transform_error <= 1e-12);
  }
  CHECK_THROWS_AS(varopt::verify_planar_optimum(1.0, 1.0, 4), Error);
}

TEST_CASE("family scan") {
  const double a0 = 6.0 * std::sqrt(3.0 / 7.0);
  const auto r = varopt::theta_bound_from_family({a0}, 100000);
  CHECK(std::abs(r.extras.at("integral_g") - std::sqrt(21.0) / 36.0) <= 1e-6);
  CHECK(r.value == doctest::Approx(0.12780973).epsilon(1e-6));
  std::vector<double> as;
  for (int i = 0; i <= 20; ++i) as.push_back(3.9 + 0.01 * i);
  const auto s = varopt::theta_bound_from_family(as, 20000, 2);
  CHECK(s.extras.at("best_a") == doctest::Approx(4.06).epsilon(1e-9));
  CHECK(s.extras.at("theta_bound") == doctest::Approx(s.value / std::numbers::sqrt2));
  CHECK(s.value >= r.value);
  CHECK_THROWS_AS(varopt::theta_bound_from_family({6.0}, 100), Error);
  CHECK_THROWS_AS(varopt::theta_bound_from_family({}, 100), Error);
}

TEST_CASE("argmax CSV has one column per component") {
  auto c = small_config();
  c.grid = 32;
  c.refinements = 0;
  c.restarts = 1;
  const auto r = varopt::maximize_area_zero_drift(c);
  std::ostringstream out;
  varopt::write_argmax_csv(r, out);
  CHECK(out.str().rfind("t,f1,f2\r\n", 0) == 0);
}
