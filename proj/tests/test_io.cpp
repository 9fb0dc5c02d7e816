#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hull_lil/error.hpp"
#include "hull_lil/io.hpp"
#include "hull_lil/random.hpp"

using namespace hull_lil;

TEST_CASE("format_double is shortest and round trips") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(-1.5e-300) == "-1.5e-300");
  StreamRng rng(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.below(40)) - 20);
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("lists and vectors") {
  CHECK(io::parse_list("1,0") == std::vector<double>{1.0, 0.0});
  CHECK(io::parse_list(" 0.5 , -2e1") == std::vector<double>{0.5, -20.0});
  CHECK(io::parse_vector("3,4").norm() == doctest::Approx(5.0));
  CHECK_THROWS_AS(io::parse_list(""), Error);
  CHECK_THROWS_AS(io::parse_list("1,,2"), Error);
  CHECK_THROWS_AS(io::parse_list("1,x"), Error);
  CHECK_THROWS_AS(io::parse_list("1.5abc"), Error);
  CHECK_THROWS_AS(io::parse_list("inf"), Error);
}

TEST_CASE("matrices") {
  CHECK(io::parse_matrix("I", 3) == Eigen::MatrixXd::Identity(3, 3));
  const auto m = io::parse_matrix("1,2,3,4", 2);
  CHECK(m(0, 1) == 2.0);
  CHECK(m(1, 0) == 3.0);
  CHECK_THROWS_WITH_AS(io::parse_matrix("1,2,3", 2), "matrix needs 4 entries, got 3", Error);
}

TEST_CASE("write_file replaces content") {
  const auto path = (std::filesystem::temp_directory_path() / "hull_lil_io_test.txt").string();
  io::write_file(path, "first\r\nline");
  io::write_file(path, "ab");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "ab");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::write_file("/nonexistent-dir/x/y.txt", "z"), Error);
}
