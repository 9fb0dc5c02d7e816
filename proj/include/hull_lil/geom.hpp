#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hull_lil::geom {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

double norm(Point2 p);
double cross(Point2 a, Point2 b);
/// Orientation of (o, a, b): > 0 for a left turn.
double orient(Point2 o, Point2 a, Point2 b);

/// Counterclockwise, strictly convex vertex list of a planar convex hull.
/// One vertex encodes a point, two a segment.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  /// Wraps an already canonical vertex list; throws if it is not strictly convex
  /// and counterclockwise.
  static ConvexPolygon from_ccw(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool is_degenerate() const { return vertices_.size() < 3; }

  double area() const;
  /// Boundary length; a segment of length L has perimeter 2L.
  double perimeter() const;
  double diameter() const;
  double max_norm() const;

  /// Closed containment with a relative tolerance on the edge orientation test.
  bool contains(Point2 p, double rel_tol = 1e-12) const;

  ConvexPolygon scaled(double factor) const;

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  friend ConvexPolygon convex_hull_2d(std::span<const Point2> points);
  explicit ConvexPolygon(std::vector<Point2> v) : vertices_(std::move(v)) {}

  std::vector<Point2> vertices_;
};

/// Monotone-chain hull; collinear boundary points are dropped.
ConvexPolygon convex_hull_2d(std::span<const Point2> points);

/// Intrinsic volumes (V0, ..., Vd) of a convex body.
struct IntrinsicVolumes {
  std::vector<double> values;

  double operator[](std::size_t k) const { return values.at(k); }
  std::size_t dimension() const { return values.empty() ? 0 : values.size() - 1; }
};

/// (1, perimeter / 2, area).
IntrinsicVolumes intrinsic_volumes_2d(const ConvexPolygon& poly);

/// V_k of the box [0, h] x [-r, r]^{d-1}.
double rectangle_intrinsic_volume(int d, int k, double h, double r);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

double binomial(int n, int k);

/// Area of the parallel body at distance lambda (Steiner polynomial).
double parallel_body_area_2d(const ConvexPolygon& poly, double lambda);

/// Smallest r with p1 symmetric-difference p2 inside the closed ball B(0, r).
double symmetric_difference_radius(const ConvexPolygon& p1, const ConvexPolygon& p2);

/// Incremental 3-d hull. Degenerate (coplanar) input keeps every distinct point
/// as a vertex and reports zero volume.
class ConvexHull3d {
 public:
  struct Face {
    std::size_t a, b, c;
  };

  explicit ConvexHull3d(std::span<const Point3> points);

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  double volume() const { return volume_; }
  double diameter() const;
  bool is_degenerate() const { return faces_.empty(); }

 private:
  std::vector<Point3> vertices_;
  std::vector<Face> faces_;  // indices into vertices_, outward orientation
  double volume_ = 0.0;
};

double convex_hull_volume_3d(std::span<const Point3> points);

}  // namespace hull_lil::geom
