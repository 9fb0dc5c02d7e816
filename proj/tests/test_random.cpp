#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hull_lil/random.hpp"

using hull_lil::StreamRng;

TEST_CASE("streams are reproducible and distinct") {
  StreamRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  std::vector<std::uint64_t> xa, xc, xd;
  for (int i = 0; i < 100; ++i) {
    const auto v = a.next_u64();
    CHECK(v == b.next_u64());
    xa.push_back(v);
    xc.push_back(c.next_u64());
    xd.push_back(d.next_u64());
  }
  CHECK(xa != xc);
  CHECK(xa != xd);
  CHECK(a.counter() == 100);
}

TEST_CASE("counter-based outputs do not depend on how many were drawn elsewhere") {
  StreamRng a(7, 0);
  StreamRng b(7, 1);
  for (int i = 0; i < 1000; ++i) b.next_u64();
  StreamRng a2(7, 0);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == a2.next_u64());
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
  StreamRng r(1, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  const double mean = s / n;
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("normal has zero mean, unit variance and light tails") {
  StreamRng r(2, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  int beyond3 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
    if (std::abs(z) > 3.0) ++beyond3;
  }
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
  // P(|Z| > 3) = 0.0026998
  CHECK(std::abs(beyond3 / double(n) - 0.0026998) < 5.0 * std::sqrt(0.0027 / n));
}

TEST_CASE("below covers its range uniformly") {
  StreamRng r(3, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5.0 * std::sqrt(n / 7.0));
  CHECK(r.below(1) == 0);
}
