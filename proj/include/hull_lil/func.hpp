#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hull_lil/geom.hpp"
#include "hull_lil/random.hpp"

namespace hull_lil::func {

/// Piecewise-linear f on [0, x] with f(0) = 0, given by its values on a
/// strictly increasing grid 0 = t_0 < ... < t_N = x.
class PLFunction {
 public:
  PLFunction(std::vector<double> grid, std::vector<double> values);

  /// Grid t_i = x i / N.
  static PLFunction uniform(double x, std::vector<double> values);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cells() const { return grid_.size() - 1; }
  double length() const { return grid_.back(); }
  double end_value() const { return values_.back(); }
  double slope(std::size_t cell) const;

  double operator()(double t) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Open face (t_u, t_v) between two grid indices.
struct Face {
  std::size_t u = 0;
  std::size_t v = 0;
};

/// Concave majorant (or convex minorant) on the grid of f, with the grid
/// indices where it touches f and the faces where it lies strictly off f.
struct Envelope {
  PLFunction function;
  std::vector<std::size_t> extreme;
  std::vector<Face> faces;
};

struct FaceDecomposition {
  std::vector<std::size_t> upper_extreme;
  std::vector<Face> upper_faces;
  std::vector<std::size_t> lower_extreme;
  std::vector<Face> lower_faces;
};

Envelope majorant(const PLFunction& f);
Envelope minorant(const PLFunction& f);
FaceDecomposition faces(const PLFunction& f);

/// Integral of f'^2.
double gamma(const PLFunction& f);
/// Integral of f'^2 over [a, b], cells split exactly at a and b.
double gamma_between(const PLFunction& f, double a, double b);
double arc_length(const PLFunction& f);
double integral(const PLFunction& f);
double integral_between(const PLFunction& f, double a, double b);

/// Integral of (majorant - minorant).
double area(const PLFunction& f);
geom::ConvexPolygon space_time_hull(const PLFunction& f);

/// f(u) - u f(1) on [0, 1].
PLFunction bridge(const PLFunction& f);

enum class Sign { plus, minus };

/// Face-by-face time reversal across the majorant (plus) or minorant (minus).
/// Reflected cells land on the grid u + v - t_j, so the result is exact.
PLFunction symmetrize(const PLFunction& f, Sign sign);

/// Concave majorant of a nonnegative bridge.
PLFunction convexify(const PLFunction& f);

/// g(t) = (1/t) int_0^t f, exact at the M + 1 points of a uniform grid.
PLFunction running_average(const PLFunction& f, std::size_t m);

/// sqrt(3 gamma / x^3) u (x - u) sampled on N cells.
PLFunction f_star(double x, double gamma, std::size_t n);

struct FamilyMember {
  PLFunction f;
  PLFunction g;  // running average of the analytic f_a, closed form
};

/// f_a(t) = a t^2 log t - (2a/3 + 3s/2) t^2 + (2a/3 + s) t, s = sqrt(1 - a^2/27).
FamilyMember f_a_family(double a, std::size_t n);

/// u -> a f(u / x) on [0, x L] where L is the domain length of f.
PLFunction rescale_affine(const PLFunction& f, double a, double x);

/// Gaussian slopes rescaled to the target cost; jittered cells when
/// `jitter_grid` is set.
PLFunction random_pl(StreamRng& rng, std::size_t n, double target_gamma, bool jitter_grid = false);
PLFunction random_bridge(StreamRng& rng, std::size_t n, double target_gamma, bool jitter_grid = false);

/// Two-column CSV with header t,f.
void write_csv(const PLFunction& f, std::ostream& out);
PLFunction read_csv(std::istream& in);

}  // namespace hull_lil::func
