#include "hull_lil/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hull_lil/error.hpp"

namespace hull_lil::geom {

namespace {

constexpr double kCollinearTol = 1e-12;

bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// True when b is not a strict left turn from (o, a), up to the relative tolerance.
bool not_left(Point2 o, Point2 a, Point2 b) {
  const double scale = norm(a - o) * norm(b - o);
  return orient(o, a, b) <= kCollinearTol * scale;
}

double shoelace(std::span<const Point2> v) {
  if (v.size() < 3) return 0.0;
  const Point2 base = v[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) twice += cross(v[i] - base, v[i + 1] - base);
  return 0.5 * twice;
}

// Sutherland-Hodgman step for a convex vertex loop; keeps the closed side where
// orient(a, b, p) has the sign of `side`.
std::vector<Point2> clip(const std::vector<Point2>& poly, Point2 a, Point2 b, double side) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % n];
    const double sp = side * orient(a, b, p);
    const double sq = side * orient(a, b, q);
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double max_norm_of(std::span<const Point2> pts) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, norm(p));
  return r;
}

// Parameter interval [lo, hi] of the segment p + t (q - p), t in [0, 1], lying in
// `other`. Returns false when the intersection has zero length.
bool segment_overlap(Point2 p, Point2 q, const ConvexPolygon& other, double& lo, double& hi) {
  const auto& w = other.vertices();
  const Point2 d = q - p;
  const double len = norm(d);
  lo = 0.0;
  hi = 1.0;
  if (w.size() >= 3) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Point2 a = w[i];
      const Point2 b = w[(i + 1) % w.size()];
      // orient(a, b, p + t d) = f0 + t * f1 must be >= 0.
      const double f0 = orient(a, b, p);
      const double f1 = cross(b - a, d);
      const double tol = kCollinearTol * norm(b - a) * (len + norm(p - a));
      if (std::abs(f1) <= tol) {
        if (f0 < -tol) return false;
        continue;
      }
      const double t = -f0 / f1;
      if (f1 > 0) lo = std::max(lo, t);
      else hi = std::min(hi, t);
    }
    return hi - lo > kCollinearTol;
  }
  if (w.size() == 2) {
    const Point2 a = w[0];
    const Point2 b = w[1];
    const double tol = kCollinearTol * len * std::max({norm(a - p), norm(b - p), len});
    if (std::abs(cross(d, a - p)) > tol || std::abs(cross(d, b - p)) > tol) return false;
    const double dd = d.x * d.x + d.y * d.y;
    const double ta = ((a - p).x * d.x + (a - p).y * d.y) / dd;
    const double tb = ((b - p).x * d.x + (b - p).y * d.y) / dd;
    lo = std::max(0.0, std::min(ta, tb));
    hi = std::min(1.0, std::max(ta, tb));
    return hi - lo > kCollinearTol;
  }
  return false;
}

// Farthest origin distance over the closure of a \ b.
double farthest_in_difference(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& v = a.vertices();
  if (v.empty()) return 0.0;
  if (v.size() == 1) return b.contains(v[0]) ? 0.0 : norm(v[0]);
  if (v.size() == 2) {
    double lo = 0.0;
    double hi = 1.0;
    if (!segment_overlap(v[0], v[1], b, lo, hi)) return max_norm_of(v);
    const Point2 d = v[1] - v[0];
    double r = 0.0;
    if (lo > kCollinearTol) r = std::max({r, norm(v[0]), norm(v[0] + lo * d)});
    if (hi < 1.0 - kCollinearTol) r = std::max({r, norm(v[1]), norm(v[0] + hi * d)});
    return r;
  }
  if (b.size() < 3) return a.max_norm();

  // a \ b is the disjoint union over edges j of b of the pieces of a lying
  // outside edge j and inside edges 0..j-1.
  const auto& w = b.vertices();
  const double area_tol = kCollinearTol * std::max(a.area(), b.area());
  std::vector<Point2> remaining = v;
  double r = 0.0;
  for (std::size_t j = 0; j < w.size() && remaining.size() >= 3; ++j) {
    const Point2 e0 = w[j];
    const Point2 e1 = w[(j + 1) % w.size()];
    const auto outside = clip(remaining, e0, e1, -1.0);
    if (outside.size() >= 3 && shoelace(outside) > area_tol) r = std::max(r, max_norm_of(outside));
    remaining = clip(remaining, e0, e1, 1.0);
  }
  return r;
}

}  // namespace

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double orient(Point2 o, Point2 a, Point2 b) { return cross(a - o, b - o); }

ConvexPolygon ConvexPolygon::from_ccw(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  for (const auto& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("non-finite vertex");
  if (n == 2 && vertices[0] == vertices[1]) throw Error("duplicate vertex");
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 o = vertices[i];
      const Point2 a = vertices[(i + 1) % n];
      const Point2 b = vertices[(i + 2) % n];
      if (not_left(o, a, b)) throw Error("vertex list is not strictly convex and counterclockwise");
    }
  }
  return ConvexPolygon(std::move(vertices));
}

double ConvexPolygon::area() const { return shoelace(vertices_); }

double ConvexPolygon::perimeter() const {
  const std::size_t n = vertices_.size();
  if (n < 2) return 0.0;
  double len = 0.0;
  for (std::size_t i = 0; i < n; ++i) len += norm(vertices_[(i + 1) % n] - vertices_[i]);
  return len;
}

double ConvexPolygon::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      best = std::max(best, norm(vertices_[j] - vertices_[i]));
  return best;
}

double ConvexPolygon::max_norm() const { return max_norm_of(vertices_); }

bool ConvexPolygon::contains(Point2 p, double rel_tol) const {
  const std::size_t n = vertices_.size();
  if (n == 0) return false;
  if (n == 1) return norm(p - vertices_[0]) <= rel_tol * std::max(1.0, norm(p));
  if (n == 2) {
    const Point2 a = vertices_[0];
    const Point2 d = vertices_[1] - a;
    const double len = norm(d);
    const double tol = rel_tol * len * std::max({len, norm(p - a), 1.0});
    if (std::abs(cross(d, p - a)) > tol) return false;
    const double t = ((p - a).x * d.x + (p - a).y * d.y) / (len * len);
    return t >= -rel_tol && t <= 1.0 + rel_tol;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    if (orient(a, b, p) < -rel_tol * norm(b - a) * std::max(norm(p - a), norm(b - a))) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::scaled(double factor) const {
  if (!(factor > 0)) throw Error("scale factor must be positive");
  std::vector<Point2> v = vertices_;
  for (auto& p : v) p = factor * p;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon convex_hull_2d(std::span<const Point2> points) {
  if (points.empty()) throw Error("empty point set");
  std::vector<Point2> p(points.begin(), points.end());
  for (const auto& q : p)
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) throw Error("non-finite point");
  std::sort(p.begin(), p.end(), lex_less);
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const std::size_t n = p.size();
  if (n < 3) return ConvexPolygon(std::move(p));

  std::vector<Point2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && not_left(h[k - 2], h[k - 1], p[i])) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && not_left(h[k - 2], h[k - 1], p[i])) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return ConvexPolygon(std::move(h));
}

IntrinsicVolumes intrinsic_volumes_2d(const ConvexPolygon& poly) {
  return {{1.0, 0.5 * poly.perimeter(), poly.area()}};
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double rectangle_intrinsic_volume(int d, int k, double h, double r) {
  if (d < 1 || k < 1 || k > d) throw Error("intrinsic volume index k must satisfy 1 <= k <= d");
  if (h < 0 || r < 0) throw Error("rectangle side lengths must be nonnegative");
  const double w = 2.0 * r;
  return binomial(d - 1, k - 1) * h * std::pow(w, k - 1) + binomial(d - 1, k) * std::pow(w, k);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
}

double parallel_body_area_2d(const ConvexPolygon& poly, double lambda) {
  if (lambda < 0) throw Error("parallel distance must be nonnegative");
  const auto v = intrinsic_volumes_2d(poly);
  // sum_k lambda^{2-k} kappa_{2-k} V_k with kappa_0 = 1, kappa_1 = 2, kappa_2 = pi.
  return v[2] + lambda * 2.0 * v[1] + lambda * lambda * std::numbers::pi * v[0];
}

double symmetric_difference_radius(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  constexpr Point2 origin{0.0, 0.0};
  if (!p1.contains(origin) || !p2.contains(origin)) throw Error("hulls must contain origin");
  if (p1 == p2) return 0.0;
  return std::max(farthest_in_difference(p1, p2), farthest_in_difference(p2, p1));
}

double convex_hull_volume_3d(std::span<const Point3> points) {
  if (points.size() < 4) return 0.0;
  return ConvexHull3d(points).volume();
}

}  // namespace hull_lil::geom
