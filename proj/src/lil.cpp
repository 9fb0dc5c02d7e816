#include "hull_lil/lil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "hull_lil/error.hpp"
#include "hull_lil/geom.hpp"
#include "hull_lil/io.hpp"
#include "hull_lil/parallel.hpp"

namespace hull_lil::lil {

namespace {

constexpr std::size_t kBlock = 65536;

// Hull of a growing point stream, rebuilt from the current hull vertices plus
// the buffered points whenever a block fills or a value is requested.
class StreamingHull {
 public:
  explicit StreamingHull(int dim) : dim_(dim) {}

  void add(std::span<const double> p) {
    if (dim_ == 2) buf2_.push_back({p[0], p[1]});
    else buf3_.push_back({p[0], p[1], p[2]});
    if (buf2_.size() + buf3_.size() >= kBlock) flush();
  }

  void flush() {
    if (dim_ == 2) {
      if (buf2_.empty()) return;
      buf2_.insert(buf2_.end(), hull2_.vertices().begin(), hull2_.vertices().end());
      hull2_ = geom::convex_hull_2d(buf2_);
      buf2_.clear();
    } else {
      if (buf3_.empty()) return;
      buf3_.insert(buf3_.end(), verts3_.begin(), verts3_.end());
      const geom::ConvexHull3d h(buf3_);
      verts3_ = h.vertices();
      volume3_ = h.volume();
      diameter3_ = h.diameter();
      buf3_.clear();
    }
  }

  double value(Functional f) {
    flush();
    switch (f) {
      case Functional::v1:
        return 0.5 * hull2_.perimeter();
      case Functional::area:
      case Functional::com_area:
        return hull2_.area();
      case Functional::volume:
        return volume3_;
      case Functional::diameter:
        return dim_ == 2 ? hull2_.diameter() : diameter3_;
    }
    return 0.0;
  }

 private:
  int dim_;
  std::vector<geom::Point2> buf2_;
  std::vector<geom::Point3> buf3_;
  geom::ConvexPolygon hull2_;
  std::vector<geom::Point3> verts3_;
  double volume3_ = 0.0;
  double diameter3_ = 0.0;
};

void check_checkpoints(const std::vector<std::size_t>& cps, std::size_t n_max) {
  if (cps.empty()) throw Error("no checkpoints");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 3) throw Error("checkpoints must be at least 3");
    if (cps[i] > n_max) throw Error("checkpoints must not exceed n_max");
    if (i > 0 && cps[i] <= cps[i - 1]) throw Error("checkpoints must be strictly increasing");
  }
}

}  // namespace

std::string to_string(Functional f) {
  switch (f) {
    case Functional::v1:
      return "V1";
    case Functional::area:
      return "area";
    case Functional::volume:
      return "volume";
    case Functional::diameter:
      return "diameter";
    case Functional::com_area:
      return "com-area";
  }
  return "unknown";
}

std::string to_string(Regime r) { return r == Regime::drift ? "drift" : "zero-drift"; }

Functional parse_functional(const std::string& name) {
  if (name == "V1" || name == "v1" || name == "perimeter") return Functional::v1;
  if (name == "area" || name == "V2" || name == "v2") return Functional::area;
  if (name == "volume" || name == "V3" || name == "v3") return Functional::volume;
  if (name == "diameter") return Functional::diameter;
  if (name == "com-area") return Functional::com_area;
  throw Error("unknown functional '" + name + "'");
}

void LilSpec::validate() const {
  const bool drift = model.has_drift();
  if (regime == Regime::drift && !drift) throw Error("drift regime requires a nonzero drift");
  if (regime == Regime::zero_drift && drift) throw Error("zero-drift regime requires zero drift");
  const int d = model.dim();
  switch (functional) {
    case Functional::v1:
    case Functional::area:
    case Functional::com_area:
      if (d != 2) throw Error(to_string(functional) + " is implemented for d = 2 only");
      break;
    case Functional::volume:
      if (d != 3) throw Error("volume is implemented for d = 3 only");
      break;
    case Functional::diameter:
      if (d != 2 && d != 3) throw Error("diameter is implemented for d = 2 or 3");
      break;
  }
}

int LilSpec::order() const {
  switch (functional) {
    case Functional::v1:
    case Functional::diameter:
      return 1;
    case Functional::area:
    case Functional::com_area:
      return 2;
    case Functional::volume:
      return 3;
  }
  return 0;
}

double normalizer(const LilSpec& spec, std::size_t n) {
  if (n < 3) throw Error("normalizer requires n >= 3");
  const int k = spec.order();
  if (spec.regime == Regime::zero_drift) return std::pow(walk::khinchin_ell(n), k);
  const double x = static_cast<double>(n);
  const double ll = std::log(std::log(x));
  return std::sqrt(std::pow(2.0, k - 1) * std::pow(x, k + 1) * std::pow(ll, k - 1));
}

std::optional<double> theoretical_constant(const LilSpec& spec) {
  const auto& mu = spec.model.drift();
  const auto& sigma = spec.model.covariance();
  if (spec.regime == Regime::drift) {
    switch (spec.functional) {
      case Functional::v1:
      case Functional::diameter:
        return mu.norm();
      case Functional::area: {
        const auto red = walk::reduced_covariance(sigma, mu);
        return std::sqrt(3.0) / 6.0 * mu.norm() * std::sqrt(red.determinant);
      }
      default:
        return std::nullopt;
    }
  }
  switch (spec.functional) {
    case Functional::area:
      return std::sqrt(std::max(0.0, sigma.determinant())) / (2.0 * std::numbers::pi);
    case Functional::diameter: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
      return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    }
    default:
      return std::nullopt;
  }
}

std::vector<std::size_t> default_checkpoints(std::size_t n_max, std::size_t count) {
  if (n_max < 3) throw Error("n_max must be at least 3");
  const std::size_t lo = std::min<std::size_t>(1000, n_max);
  std::vector<std::size_t> out;
  if (count <= 1 || lo == n_max) return {n_max};
  const double ratio = std::log(static_cast<double>(n_max) / static_cast<double>(lo));
  for (std::size_t i = 0; i < count; ++i) {
    const double v = static_cast<double>(lo) * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
    std::size_t n = i + 1 == count ? n_max : static_cast<std::size_t>(std::llround(v));
    n = std::clamp<std::size_t>(n, 3, n_max);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

RunningMaxTrace RunningMaxTrace::merge(const RunningMaxTrace& a, const RunningMaxTrace& b) {
  if (a.replicas.empty()) return b;
  if (b.replicas.empty()) return a;
  if (a.checkpoints != b.checkpoints) throw Error("cannot merge traces with different checkpoints");
  RunningMaxTrace out;
  out.checkpoints = a.checkpoints;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.replicas.size() || j < b.replicas.size()) {
    const bool take_a = j == b.replicas.size() || (i < a.replicas.size() && a.replicas[i] < b.replicas[j]);
    if (i < a.replicas.size() && j < b.replicas.size() && a.replicas[i] == b.replicas[j])
      throw Error("cannot merge traces sharing a replica");
    const RunningMaxTrace& src = take_a ? a : b;
    const std::size_t k = take_a ? i++ : j++;
    out.replicas.push_back(src.replicas[k]);
    out.values.push_back(src.values[k]);
    out.running_max.push_back(src.running_max[k]);
  }
  out.merged.resize(out.checkpoints.size());
  for (std::size_t c = 0; c < out.checkpoints.size(); ++c) out.merged[c] = std::max(a.merged[c], b.merged[c]);
  return out;
}

std::vector<double> replica_values(const LilSpec& spec, const std::vector<std::size_t>& checkpoints,
                                   std::uint64_t seed, std::uint64_t replica) {
  spec.validate();
  check_checkpoints(checkpoints, checkpoints.empty() ? 0 : checkpoints.back());
  const int d = spec.model.dim();
  const bool com = spec.functional == Functional::com_area;
  StreamingHull hull(d);
  std::vector<double> origin(d, 0.0);
  hull.add(origin);
  walk::WalkStream ws(spec.model, seed, replica);
  std::vector<double> sum(d, 0.0);
  std::vector<double> g(d, 0.0);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  std::size_t c = 0;
  for (std::size_t n = 1; c < checkpoints.size(); ++n) {
    const auto s = ws.next();
    if (com) {
      for (int j = 0; j < d; ++j) {
        sum[j] += s[j];
        g[j] = sum[j] / static_cast<double>(n);
      }
      hull.add(g);
    } else {
      hull.add(s);
    }
    if (n == checkpoints[c]) {
      out.push_back(hull.value(spec.functional) / normalizer(spec, n));
      ++c;
    }
  }
  return out;
}

RunningMaxTrace estimate_limsup(const LilSpec& spec, std::size_t n_max, std::vector<std::size_t> checkpoints,
                                std::size_t replicas, std::uint64_t seed, std::size_t threads,
                                std::uint64_t first_replica) {
  spec.validate();
  if (replicas < 1) throw Error("at least one replica is required");
  if (checkpoints.empty()) checkpoints = default_checkpoints(n_max);
  check_checkpoints(checkpoints, n_max);

  RunningMaxTrace trace;
  trace.checkpoints = checkpoints;
  trace.values.resize(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    trace.values[r] = replica_values(spec, checkpoints, seed, first_replica + r);
  });
  trace.merged.assign(checkpoints.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < replicas; ++r) {
    trace.replicas.push_back(first_replica + r);
    std::vector<double> rm(checkpoints.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      m = std::max(m, trace.values[r][c]);
      rm[c] = m;
      trace.merged[c] = std::max(trace.merged[c], m);
    }
    trace.running_max.push_back(std::move(rm));
  }
  return trace;
}

void write_trace_csv(const RunningMaxTrace& trace, std::ostream& out) {
  out << "n,replica,value,running_max\r\n";
  for (std::size_t r = 0; r < trace.replicas.size(); ++r)
    for (std::size_t c = 0; c < trace.checkpoints.size(); ++c)
      out << trace.checkpoints[c] << ',' << trace.replicas[r] << ',' << io::format_double(trace.values[r][c]) << ','
          << io::format_double(trace.running_max[r][c]) << "\r\n";
}

std::vector<double> permutation_stability_probe(const walk::IncrementModel& model,
                                                const std::vector<std::size_t>& n_values, std::size_t k,
                                                std::size_t permutations, std::uint64_t seed) {
  if (!model.has_drift()) throw Error("drift frame undefined: the stability probe requires a nonzero drift");
  if (model.dim() != 2) throw Error("the stability probe is implemented for d = 2 only");
  if (n_values.empty()) return {};
  std::vector<std::size_t> order(n_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return n_values[a] < n_values[b]; });
  const std::size_t n_min = n_values[order.front()];
  if (k > n_min) throw Error("k must not exceed the smallest n");

  // Positions are summed in increment order so permuted prefixes reuse the
  // exact same arithmetic as the original walk.
  walk::WalkStream ws(model, seed, 0);
  std::vector<geom::Point2> inc(k);
  std::vector<geom::Point2> prefix(k + 1);
  for (std::size_t j = 1; j <= k; ++j) {
    ws.next();
    const auto z = ws.last_increment();
    inc[j - 1] = {z[0], z[1]};
    prefix[j] = prefix[j - 1] + inc[j - 1];
  }

  StreamRng prng(seed, 1);
  std::vector<std::vector<geom::Point2>> permuted;
  for (std::size_t p = 0; p < permutations; ++p) {
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t i = k; i > 1; --i) std::swap(perm[i - 1], perm[prng.below(i)]);
    std::vector<geom::Point2> pts(k + 1);
    for (std::size_t j = 1; j <= k; ++j) pts[j] = pts[j - 1] + inc[perm[j - 1]];
    permuted.push_back(std::move(pts));
  }

  std::vector<double> radii(n_values.size(), 0.0);
  std::vector<geom::Point2> tail{prefix[k]};
  geom::ConvexPolygon tail_hull = geom::convex_hull_2d(tail);
  tail.clear();
  geom::Point2 pos = prefix[k];
  std::size_t steps = k;
  for (std::size_t oi : order) {
    const std::size_t n = n_values[oi];
    while (steps < n) {
      ws.next();
      const auto z = ws.last_increment();
      pos = pos + geom::Point2{z[0], z[1]};
      tail.push_back(pos);
      ++steps;
      if (tail.size() >= kBlock) {
        tail.insert(tail.end(), tail_hull.vertices().begin(), tail_hull.vertices().end());
        tail_hull = geom::convex_hull_2d(tail);
        tail.clear();
      }
    }
    if (!tail.empty()) {
      tail.insert(tail.end(), tail_hull.vertices().begin(), tail_hull.vertices().end());
      tail_hull = geom::convex_hull_2d(tail);
      tail.clear();
    }
    std::vector<geom::Point2> base(tail_hull.vertices());
    base.insert(base.end(), prefix.begin(), prefix.end());
    const auto full = geom::convex_hull_2d(base);
    double worst = 0.0;
    for (const auto& pts : permuted) {
      std::vector<geom::Point2> alt(tail_hull.vertices());
      alt.insert(alt.end(), pts.begin(), pts.end());
      worst = std::max(worst, geom::symmetric_difference_radius(full, geom::convex_hull_2d(alt)));
    }
    radii[oi] = worst;
  }
  return radii;
}

}  // namespace hull_lil::lil
