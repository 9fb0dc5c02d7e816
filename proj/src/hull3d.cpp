#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "hull_lil/geom.hpp"

namespace hull_lil::geom {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 sub(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 cross3(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot3(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double len3(Vec3 a) { return std::sqrt(dot3(a, a)); }

struct WorkFace {
  std::array<std::size_t, 3> v;
  Vec3 normal;  // unit, outward
  double offset;
  bool alive = true;
};

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

ConvexHull3d::ConvexHull3d(std::span<const Point3> input) {
  std::vector<Point3> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Point3& a, const Point3& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) {
    vertices_ = std::move(pts);
    return;
  }

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  for (const auto& p : pts) scale = std::max(scale, len3(sub(p, pts[0])));
  const double eps = 1e-12 * std::max(scale, 1e-300);

  // Initial simplex: extreme pair, farthest from their line, farthest from their plane.
  std::size_t i0 = 0, i1 = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (len3(sub(pts[i], pts[0])) > len3(sub(pts[i1], pts[0]))) i1 = i;
  if (len3(sub(pts[i1], pts[i0])) <= eps) {
    vertices_ = std::move(pts);
    return;
  }
  const Vec3 axis = sub(pts[i1], pts[i0]);
  std::size_t i2 = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = len3(cross3(axis, sub(pts[i], pts[i0]))) / len3(axis);
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps) {
    vertices_ = std::move(pts);
    return;
  }
  Vec3 pn = cross3(axis, sub(pts[i2], pts[i0]));
  pn = {pn.x / len3(pn), pn.y / len3(pn), pn.z / len3(pn)};
  std::size_t i3 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(dot3(pn, sub(pts[i], pts[i0])));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) {
    vertices_ = std::move(pts);
    return;
  }

  std::vector<WorkFace> faces;
  std::unordered_map<std::uint64_t, std::size_t> edge_face;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Vec3 n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    const double l = len3(n);
    n = {n.x / l, n.y / l, n.z / l};
    faces.push_back({{a, b, c}, n, dot3(n, {pts[a].x, pts[a].y, pts[a].z})});
    const std::size_t f = faces.size() - 1;
    edge_face[edge_key(a, b)] = f;
    edge_face[edge_key(b, c)] = f;
    edge_face[edge_key(c, a)] = f;
  };
  auto signed_dist = [&](const WorkFace& f, const Point3& p) {
    return dot3(f.normal, {p.x, p.y, p.z}) - f.offset;
  };

  // Orient the tetrahedron outward.
  if (dot3(cross3(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0])), sub(pts[i3], pts[i0])) > 0)
    std::swap(i1, i2);
  add_face(i0, i1, i2);
  add_face(i0, i3, i1);
  add_face(i1, i3, i2);
  add_face(i2, i3, i0);

  std::vector<std::size_t> visible;
  std::vector<std::pair<std::size_t, std::size_t>> horizon;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].alive && signed_dist(faces[f], pts[p]) > eps) visible.push_back(f);
    if (visible.empty()) continue;
    for (auto f : visible) faces[f].alive = false;
    horizon.clear();
    for (auto f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) {
        const std::size_t a = v[e];
        const std::size_t b = v[(e + 1) % 3];
        const auto it = edge_face.find(edge_key(b, a));
        if (it != edge_face.end() && faces[it->second].alive) horizon.emplace_back(a, b);
      }
    }
    for (const auto& [a, b] : horizon) add_face(a, b, p);
    // Compact dead faces occasionally so the visibility scan stays proportional to the hull.
    if (faces.size() > 64 && faces.size() > 4 * static_cast<std::size_t>(std::count_if(
                                                  faces.begin(), faces.end(),
                                                  [](const WorkFace& f) { return f.alive; }))) {
      std::vector<WorkFace> kept;
      for (auto& f : faces)
        if (f.alive) kept.push_back(f);
      faces.clear();
      edge_face.clear();
      for (auto& f : kept) add_face(f.v[0], f.v[1], f.v[2]);
    }
  }

  std::vector<std::size_t> remap(pts.size(), static_cast<std::size_t>(-1));
  const Point3 ref = pts[i0];
  double six_vol = 0.0;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    std::array<std::size_t, 3> idx{};
    for (int k = 0; k < 3; ++k) {
      if (remap[f.v[k]] == static_cast<std::size_t>(-1)) {
        remap[f.v[k]] = vertices_.size();
        vertices_.push_back(pts[f.v[k]]);
      }
      idx[k] = remap[f.v[k]];
    }
    faces_.push_back({idx[0], idx[1], idx[2]});
    six_vol += dot3(sub(pts[f.v[0]], ref), cross3(sub(pts[f.v[1]], ref), sub(pts[f.v[2]], ref)));
  }
  volume_ = six_vol / 6.0;
}

double ConvexHull3d::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      best = std::max(best, len3(sub(vertices_[j], vertices_[i])));
  return best;
}

}  // namespace hull_lil::geom
