#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hull_lil/walk.hpp"

namespace hull_lil::lil {

enum class Functional { v1, area, volume, diameter, com_area };
enum class Regime { drift, zero_drift };

std::string to_string(Functional f);
std::string to_string(Regime r);
Functional parse_functional(const std::string& name);

struct LilSpec {
  Functional functional = Functional::area;
  Regime regime = Regime::drift;
  walk::IncrementModel model;

  /// Throws on a regime that contradicts the drift or an unsupported dimension.
  void validate() const;
  /// Homogeneity order of the functional (k for V_k, 1 for the diameter).
  int order() const;
};

/// Drift: sqrt(2^{k-1} n^{k+1} (log log n)^{k-1}); zero drift: ell(n)^order.
double normalizer(const LilSpec& spec, std::size_t n);

/// Known limsup constant under `normalizer`, if any.
std::optional<double> theoretical_constant(const LilSpec& spec);

/// Geometric grid of `count` checkpoints from min(1000, n_max) to n_max.
std::vector<std::size_t> default_checkpoints(std::size_t n_max, std::size_t count = 20);

struct RunningMaxTrace {
  std::vector<std::size_t> checkpoints;
  std::vector<std::uint64_t> replicas;         // replica (stream) indices, ascending
  std::vector<std::vector<double>> values;     // [replica][checkpoint]
  std::vector<std::vector<double>> running_max;
  std::vector<double> merged;                  // max over replicas of running_max

  /// Union of the replica sets; both traces must share checkpoints and replica
  /// indices must be disjoint.
  static RunningMaxTrace merge(const RunningMaxTrace& a, const RunningMaxTrace& b);

  friend bool operator==(const RunningMaxTrace&, const RunningMaxTrace&) = default;
};

/// Normalized functional of one replica at each checkpoint, streaming the walk.
std::vector<double> replica_values(const LilSpec& spec, const std::vector<std::size_t>& checkpoints,
                                   std::uint64_t seed, std::uint64_t replica);

/// Replicas first_replica, ..., first_replica + replicas - 1; chunks of one run
/// recombine exactly through RunningMaxTrace::merge.
RunningMaxTrace estimate_limsup(const LilSpec& spec, std::size_t n_max, std::vector<std::size_t> checkpoints,
                                std::size_t replicas, std::uint64_t seed, std::size_t threads = 1,
                                std::uint64_t first_replica = 0);

/// CSV with header n,replica,value,running_max.
void write_trace_csv(const RunningMaxTrace& trace, std::ostream& out);

/// Largest symmetric-difference radius between the hull of the walk and the
/// hull after permuting its first k increments, over `permutations` sampled
/// permutations, for each n (planar walks with drift).
std::vector<double> permutation_stability_probe(const walk::IncrementModel& model,
                                                const std::vector<std::size_t>& n_values, std::size_t k,
                                                std::size_t permutations, std::uint64_t seed);

}  // namespace hull_lil::lil
