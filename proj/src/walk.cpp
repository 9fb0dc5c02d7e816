#include "hull_lil/walk.hpp"

#include <cmath>
#include <ostream>

#include "hull_lil/error.hpp"
#include "hull_lil/io.hpp"

namespace hull_lil::walk {

std::string to_string(IncrementKind kind) {
  switch (kind) {
    case IncrementKind::gaussian:
      return "gaussian";
    case IncrementKind::rademacher_lattice:
      return "rademacher-lattice";
    case IncrementKind::uniform_ball:
      return "uniform-ball";
  }
  return "unknown";
}

IncrementKind parse_increment_kind(const std::string& name) {
  if (name == "gaussian") return IncrementKind::gaussian;
  if (name == "rademacher-lattice" || name == "rademacher") return IncrementKind::rademacher_lattice;
  if (name == "uniform-ball") return IncrementKind::uniform_ball;
  throw Error("unknown increment model '" + name + "'");
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error("covariance must be square");
  if (!m.allFinite()) throw Error("covariance must be finite");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw Error("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd ev = eig.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-12) throw Error("covariance is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd drift_frame(const Eigen::VectorXd& mu) {
  const Eigen::Index d = mu.size();
  const double len = mu.norm();
  if (!(len > 0.0)) throw Error("drift frame undefined");
  Eigen::MatrixXd frame(d, d);
  frame.col(0) = mu / len;
  Eigen::Index filled = 1;
  for (Eigen::Index axis = 0; axis < d && filled < d; ++axis) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, axis);
    for (Eigen::Index j = 0; j < filled; ++j) v -= frame.col(j).dot(v) * frame.col(j);
    const double n = v.norm();
    if (n < 1e-8) continue;
    frame.col(filled++) = v / n;
  }
  if (d > 1 && frame.determinant() < 0) frame.col(d - 1) *= -1.0;
  return frame;
}

ReducedCovariance reduced_covariance(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& mu) {
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
    throw Error("covariance and drift dimensions differ");
  symmetric_sqrt(sigma);  // validates symmetry and semidefiniteness
  ReducedCovariance out;
  out.frame = drift_frame(mu);
  const Eigen::MatrixXd conj = out.frame.transpose() * sigma * out.frame;
  const Eigen::Index m = mu.size() - 1;
  out.matrix = conj.bottomRightCorner(m, m);
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  out.determinant = m == 0 ? 1.0 : std::max(0.0, out.matrix.determinant());
  return out;
}

IncrementModel::IncrementModel(IncrementKind kind, Eigen::VectorXd drift, Eigen::MatrixXd covariance)
    : kind_(kind), drift_(std::move(drift)), covariance_(std::move(covariance)) {
  if (drift_.size() < 1) throw Error("dimension must be at least 1");
  if (!drift_.allFinite()) throw Error("drift must be finite");
  if (covariance_.rows() != drift_.size() || covariance_.cols() != drift_.size())
    throw Error("covariance and drift dimensions differ");
  sqrt_covariance_ = symmetric_sqrt(covariance_);
  noise_map_ = sqrt_covariance_;
  if (has_drift() && dim() > 1) noise_map_ = sqrt_covariance_ * drift_frame(drift_);
}

IncrementModel IncrementModel::gaussian(Eigen::VectorXd drift, Eigen::MatrixXd covariance) {
  return IncrementModel(IncrementKind::gaussian, std::move(drift), std::move(covariance));
}

IncrementModel IncrementModel::rademacher_lattice(Eigen::VectorXd drift) {
  const auto d = drift.size();
  return IncrementModel(IncrementKind::rademacher_lattice, std::move(drift),
                        Eigen::MatrixXd::Identity(d, d));
}

IncrementModel IncrementModel::uniform_ball(Eigen::VectorXd drift) {
  const auto d = drift.size();
  return IncrementModel(IncrementKind::uniform_ball, std::move(drift), Eigen::MatrixXd::Identity(d, d));
}

void IncrementModel::sample(StreamRng& rng, std::span<double> out) const {
  const int d = dim();
  switch (kind_) {
    case IncrementKind::gaussian: {
      double xi[8];
      std::vector<double> heap;
      double* z = xi;
      if (d > 8) {
        heap.resize(d);
        z = heap.data();
      }
      for (int i = 0; i < d; ++i) z[i] = rng.normal();
      for (int r = 0; r < d; ++r) {
        double acc = drift_[r];
        for (int c = 0; c < d; ++c) acc += noise_map_(r, c) * z[c];
        out[r] = acc;
      }
      return;
    }
    case IncrementKind::rademacher_lattice:
      for (int i = 0; i < d; ++i) out[i] = drift_[i] + ((rng.next_u64() >> 63) ? 1.0 : -1.0);
      return;
    case IncrementKind::uniform_ball: {
      double sq = 0.0;
      for (int i = 0; i < d; ++i) {
        out[i] = rng.normal();
        sq += out[i] * out[i];
      }
      const double radius = std::sqrt(d + 2.0) * std::pow(rng.uniform(), 1.0 / d);
      const double scale = radius / std::sqrt(sq);
      for (int i = 0; i < d; ++i) out[i] = drift_[i] + scale * out[i];
      return;
    }
  }
}

WalkPath::WalkPath(IncrementModel model, std::uint64_t seed, std::vector<double> coords)
    : model_(std::move(model)), seed_(seed), coords_(std::move(coords)) {
  const auto d = static_cast<std::size_t>(model_.dim());
  if (coords_.size() < d || coords_.size() % d != 0) throw Error("path coordinates do not match dimension");
  for (std::size_t i = 0; i < d; ++i)
    if (coords_[i] != 0.0) throw Error("path must start at the origin");
}

std::span<const double> WalkPath::point(std::size_t i) const {
  const auto d = static_cast<std::size_t>(dim());
  return std::span<const double>(coords_).subspan(i * d, d);
}

std::vector<geom::Point2> WalkPath::points_2d() const {
  if (dim() != 2) throw Error("planar view requires d = 2");
  std::vector<geom::Point2> pts(size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {coords_[2 * i], coords_[2 * i + 1]};
  return pts;
}

WalkStream::WalkStream(const IncrementModel& model, std::uint64_t seed, std::uint64_t stream)
    : model_(&model), rng_(seed, stream), position_(model.dim(), 0.0), increment_(model.dim(), 0.0) {}

std::span<const double> WalkStream::next() {
  model_->sample(rng_, increment_);
  for (std::size_t i = 0; i < position_.size(); ++i) position_[i] += increment_[i];
  ++steps_;
  return position_;
}

WalkPath generate_walk(const IncrementModel& model, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream) {
  const auto d = static_cast<std::size_t>(model.dim());
  std::vector<double> coords((n + 1) * d, 0.0);
  WalkStream ws(model, seed, stream);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto p = ws.next();
    std::copy(p.begin(), p.end(), coords.begin() + k * d);
  }
  return WalkPath(model, seed, std::move(coords));
}

std::vector<double> centre_of_mass(const WalkPath& path) {
  const auto d = static_cast<std::size_t>(path.dim());
  std::vector<double> out(path.size() * d, 0.0);
  std::vector<double> sum(d, 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto s = path.point(k);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += s[j];
      out[k * d + j] = sum[j] / static_cast<double>(k);
    }
  }
  return out;
}

double khinchin_ell(std::size_t n) {
  if (n <= 2) return 1.0;
  const double x = static_cast<double>(n);
  return std::sqrt(2.0 * x * std::log(std::log(x)));
}

std::vector<double> scale_psi(const WalkPath& path, const ReducedCovariance& frame) {
  if (!path.model().has_drift()) throw Error("drift frame undefined");
  const std::size_t n = path.steps();
  if (n < 1) throw Error("scaling requires at least one step");
  const auto d = static_cast<std::size_t>(path.dim());
  if (static_cast<std::size_t>(frame.frame.rows()) != d) throw Error("frame dimension mismatch");
  const double along = 1.0 / static_cast<double>(n);
  const double across = 1.0 / khinchin_ell(n);
  std::vector<double> out(path.size() * d);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto s = path.point(k);
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += frame.frame(c, r) * s[c];
      out[k * d + r] = acc * (r == 0 ? along : across);
    }
  }
  return out;
}

std::vector<double> interpolate(const WalkPath& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("interpolation time must lie in [0, 1]");
  const std::size_t n = path.steps();
  const auto d = static_cast<std::size_t>(path.dim());
  const auto end = path.point(n);
  if (t == 1.0 || n == 0) return {end.begin(), end.end()};
  const double nt = static_cast<double>(n) * t;
  const auto k = std::min(static_cast<std::size_t>(std::floor(nt)), n - 1);
  const double frac = nt - static_cast<double>(k);
  const auto a = path.point(k);
  const auto b = path.point(k + 1);
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = frac == 0.0 ? a[j] : a[j] + frac * (b[j] - a[j]);
  return out;
}

void write_csv(const WalkPath& path, std::ostream& out) {
  const auto d = static_cast<std::size_t>(path.dim());
  out << "i";
  for (std::size_t j = 1; j <= d; ++j) out << ",x" << j;
  out << "\r\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << k;
    for (double v : path.point(k)) out << ',' << io::format_double(v);
    out << "\r\n";
  }
}

}  // namespace hull_lil::walk
