#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hull_lil/error.hpp"
#include "hull_lil/random.hpp"
#include "hull_lil/verify.hpp"

using namespace hull_lil;

namespace {

double brute_elementary(const std::vector<double>& x, int k) {
  double s = 0.0;
  const std::size_t n = x.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) p *= x[i];
    s += p;
  }
  return s;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials") {
  StreamRng rng(8, 0);
  std::vector<double> x(9);
  for (auto& v : x) v = rng.normal();
  for (int k = 0; k <= 9; ++k) CHECK(verify::elementary_symmetric(x, k) == doctest::Approx(brute_elementary(x, k)));
  CHECK(verify::elementary_symmetric(x, 10) == 0.0);
}

TEST_CASE("Minkowski sum with a disk") {
  // Unit square: 1 + 4 r + pi r^2.
  const std::vector<std::pair<double, double>> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(verify::minkowski_disk_area(sq, 0.5) == doctest::Approx(1.0 + 2.0 + std::numbers::pi / 4.0));
  // Triangle (0,0),(3,0),(0,4): area 6, perimeter 12.
  const std::vector<std::pair<double, double>> tri{{0, 0}, {3, 0}, {0, 4}};
  CHECK(verify::minkowski_disk_area(tri, 2.0) == doctest::Approx(6.0 + 24.0 + 4.0 * std::numbers::pi));
  CHECK(verify::minkowski_disk_area(tri, 0.0) == doctest::Approx(6.0));
}

TEST_CASE("suites pass with reduced sizes") {
  verify::VerifyOptions o;
  o.functions = 100;
  o.polygons = 40;
  o.paths = 10;
  o.path_length = 2000;
  o.n_max = 10000;
  for (const auto& name : verify::suite_names()) {
    CAPTURE(name);
    const auto rep = verify::run_suite(name, o);
    CHECK(rep.suite == name);
    CHECK(!rep.checks.empty());
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.pass());
    }
    CHECK(rep.pass());
    std::ostringstream out;
    verify::print_table(rep, out);
    CHECK(out.str().find(rep.checks.front().name) != std::string::npos);
  }
  CHECK_THROWS_AS(verify::run_suite("nonsense", o), Error);
}

TEST_CASE("stability suite reports one radius row per seed and n") {
  verify::VerifyOptions o;
  o.n_max = 10000;
  o.stability_seeds = {6, 7};
  const auto rep = verify::run_suite("stability", o);
  CHECK(rep.pass());
  CHECK(rep.radii.size() % 2 == 0);
  CHECK(rep.radii.front().seed == 6);
  CHECK(rep.radii.back().seed == 7);
}
