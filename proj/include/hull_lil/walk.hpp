#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hull_lil/geom.hpp"
#include "hull_lil/random.hpp"

namespace hull_lil::walk {

enum class IncrementKind { gaussian, rademacher_lattice, uniform_ball };

std::string to_string(IncrementKind kind);
IncrementKind parse_increment_kind(const std::string& name);

/// Law of one increment Z: drift mu plus a centred noise with covariance Sigma.
///
/// Gaussian noise is Sigma^{1/2} F xi with xi standard normal and F the
/// positively oriented drift frame (identity when mu = 0). F xi is again
/// standard normal, so the law is N(mu, Sigma); expressing xi in the drift
/// frame makes the sample path rotate with mu when Sigma = I.
/// Rademacher-lattice noise has i.i.d. +-1 coordinates; uniform-ball noise is
/// uniform on the ball of radius sqrt(d + 2). Both have Sigma = I.
class IncrementModel {
 public:
  static IncrementModel gaussian(Eigen::VectorXd drift, Eigen::MatrixXd covariance);
  static IncrementModel rademacher_lattice(Eigen::VectorXd drift);
  static IncrementModel uniform_ball(Eigen::VectorXd drift);

  IncrementKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(drift_.size()); }
  const Eigen::VectorXd& drift() const { return drift_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& sqrt_covariance() const { return sqrt_covariance_; }
  bool has_drift() const { return drift_.norm() > 0.0; }

  /// Writes one increment into out[0..d).
  void sample(StreamRng& rng, std::span<double> out) const;

 private:
  IncrementModel(IncrementKind kind, Eigen::VectorXd drift, Eigen::MatrixXd covariance);

  IncrementKind kind_;
  Eigen::VectorXd drift_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd sqrt_covariance_;
  Eigen::MatrixXd noise_map_;  // Sigma^{1/2} F
};

/// Symmetric nonnegative square root; eigenvalues above -1e-12 are clipped to 0.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m);

/// Orthonormal basis (columns) with first column mu / |mu|, completed by
/// Gram-Schmidt over the standard basis (axes within 1e-8 of the span are
/// skipped) and oriented to determinant +1.
Eigen::MatrixXd drift_frame(const Eigen::VectorXd& mu);

struct ReducedCovariance {
  Eigen::MatrixXd matrix;  // (d-1) x (d-1)
  double determinant = 0.0;
  Eigen::MatrixXd frame;   // d x d, first column mu-hat
};

ReducedCovariance reduced_covariance(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& mu);

/// Trajectory S_0 = 0, ..., S_n stored row-major.
class WalkPath {
 public:
  WalkPath(IncrementModel model, std::uint64_t seed, std::vector<double> coords);

  int dim() const { return model_.dim(); }
  std::size_t steps() const { return coords_.size() / dim() - 1; }
  std::size_t size() const { return coords_.size() / dim(); }
  std::span<const double> point(std::size_t i) const;
  const std::vector<double>& coords() const { return coords_; }
  const IncrementModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  /// Planar view of a d = 2 path.
  std::vector<geom::Point2> points_2d() const;

 private:
  IncrementModel model_;
  std::uint64_t seed_;
  std::vector<double> coords_;
};

/// Step-by-step generator; the stream index separates replicas sharing a seed.
class WalkStream {
 public:
  WalkStream(const IncrementModel& model, std::uint64_t seed, std::uint64_t stream = 0);

  /// Advances one step and returns S_n.
  std::span<const double> next();
  std::span<const double> position() const { return position_; }
  std::span<const double> last_increment() const { return increment_; }
  std::size_t steps() const { return steps_; }

 private:
  const IncrementModel* model_;
  StreamRng rng_;
  std::vector<double> position_;
  std::vector<double> increment_;
  std::size_t steps_ = 0;
};

WalkPath generate_walk(const IncrementModel& model, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream = 0);

/// G_0 = 0, G_n = (1/n) sum_{i=1}^n S_i, row-major like WalkPath::coords.
std::vector<double> centre_of_mass(const WalkPath& path);

/// 1 for n <= 2, sqrt(2 n log log n) otherwise.
double khinchin_ell(std::size_t n);

/// Rotates every S_k into the drift frame and divides the drift coordinate by
/// n and the others by ell(n). Row-major output.
std::vector<double> scale_psi(const WalkPath& path, const ReducedCovariance& frame);

/// Y_n(t) = S_floor(nt) + (nt - floor(nt)) Z_{floor(nt)+1}.
std::vector<double> interpolate(const WalkPath& path, double t);

/// CSV with header i,x1,...,xd.
void write_csv(const WalkPath& path, std::ostream& out);

}  // namespace hull_lil::walk
