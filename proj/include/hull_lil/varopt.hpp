#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hull_lil/func.hpp"

namespace hull_lil::varopt {

enum class Init { random, f_star, f_a, semicircle };

struct OptimizerConfig {
  std::size_t grid = 512;
  std::size_t restarts = 8;
  std::size_t max_iterations = 5000;
  /// 0 selects 0.1 / sqrt(N).
  double initial_step = 0.0;
  double step_growth = 2.0;
  double step_decay = 0.5;
  double tolerance = 1e-12;
  /// Stop once the best value has not improved by `tolerance` for this many iterations.
  std::size_t patience = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  Init init = Init::random;
  double init_a = 4.059781;
  /// Number of grid doublings after the base solve.
  std::size_t refinements = 2;
  /// Random starts are drawn and ascended on the coarsest halving of `grid`
  /// not below this, then refined up to `grid`.
  std::size_t coarse_grid = 4;
  /// Rounds of hull-reduction moves after each ascent (area problems only).
  std::size_t reductions = 10;

  void validate() const;
};

struct TracePoint {
  std::size_t grid = 0;
  double value = 0.0;
};

struct OptResult {
  std::string problem;
  std::size_t grid = 0;
  std::size_t restarts = 0;
  double value = 0.0;
  /// One component for scalar problems, two for the planar curve problem.
  std::vector<func::PLFunction> argmax;
  std::vector<TracePoint> trace;
  /// Objective after every accepted step of the winning base solve.
  std::vector<double> history;
  std::size_t iterations = 0;
  bool converged = false;
  bool certified = false;
  std::map<std::string, double> extras;
};

/// Hull area of the graph of a PL function; value and gradient with respect to
/// the cell slopes on a uniform grid.
double area_objective(const std::vector<double>& slopes, std::vector<double>* grad);
/// Hull area of the graph of the running average of f.
double com_area_objective(const std::vector<double>& slopes, std::vector<double>* grad);
/// Hull area of the planar curve whose component slopes are stored as
/// [s1_0..s1_{N-1}, s2_0..s2_{N-1}].
double curve_area_objective(const std::vector<double>& slopes, std::vector<double>* grad);

/// h * sum s^2 with h = 1 / (cells per component).
double slope_cost(const std::vector<double>& slopes, std::size_t components);
/// Rescales onto the unit cost sphere when the cost exceeds 1; otherwise unchanged.
void project(std::vector<double>& slopes, std::size_t components);

OptResult maximize_area_drift(const OptimizerConfig& config);
OptResult maximize_com_area(const OptimizerConfig& config);
OptResult maximize_area_zero_drift(const OptimizerConfig& config);

struct PlanarOptimumReport {
  double x = 0.0;
  double gamma = 0.0;
  std::size_t grid = 0;
  double gamma_value = 0.0;
  double area_value = 0.0;
  double area_expected = 0.0;
  /// Largest violation of the affine scaling identities, evaluated directly.
  double transform_error = 0.0;
  bool pass = false;
};

PlanarOptimumReport verify_planar_optimum(double x, double gamma, std::size_t n, double tolerance = 1e-4);

/// Extras: best_a, t0, theta_bound, integral_g, gamma_f.
OptResult theta_bound_from_family(const std::vector<double>& a_values, std::size_t n, std::size_t threads = 1);

/// Re-evaluates the problem objective from the returned argmax.
double evaluate_argmax(const OptResult& result);

/// CSV of the argmax: t,f or t,f1,f2.
void write_argmax_csv(const OptResult& result, std::ostream& out);

}  // namespace hull_lil::varopt
