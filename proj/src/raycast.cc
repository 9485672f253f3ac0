#include "bimsynth/raycast.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bimsynth {

std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& a,
                                              const Vec3& b, const Vec3& c,
                                              double t_min, double t_max) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (!(t > t_min && t < t_max)) return std::nullopt;
  return TriangleHit{t, u, v};
}

namespace {

constexpr std::uint32_t kLeafSize = 4;

// Slab test; returns the entry distance or +inf on a miss.
double box_entry(const Vec3& lo, const Vec3& hi, const Vec3& origin,
                 const Vec3& inv_dir, double t_min, double t_max) {
  double t0 = t_min, t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    double tn = (lo[k] - origin[k]) * inv_dir[k];
    double tf = (hi[k] - origin[k]) * inv_dir[k];
    if (std::isnan(tn) || std::isnan(tf)) {
      // Ray parallel to the slab and starting on its boundary plane.
      if (origin[k] < lo[k] || origin[k] > hi[k]) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    if (tn > tf) std::swap(tn, tf);
    t0 = std::max(t0, tn);
    t1 = std::min(t1, tf);
    if (t0 > t1) return std::numeric_limits<double>::infinity();
  }
  return t0;
}

Vec3 inverse_direction(const Vec3& d) {
  return {1.0 / d.x(), 1.0 / d.y(), 1.0 / d.z()};
}

}  // namespace

TriangleBvh::TriangleBvh(const std::vector<const TriMesh*>& meshes) {
  for (std::uint32_t obj = 0; obj < meshes.size(); ++obj) {
    const TriMesh& m = *meshes[obj];
    for (std::uint32_t f = 0; f < m.faces.size(); ++f) {
      const auto [a, b, c] = m.triangle(f);
      tris_.push_back({a, b, c, obj, f});
    }
  }
  order_.resize(tris_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!tris_.empty()) {
    nodes_.reserve(2 * tris_.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(tris_.size()));
  }
}

TriangleBvh TriangleBvh::from_scene(const SemanticScene& scene) {
  std::vector<const TriMesh*> meshes;
  meshes.reserve(scene.objects.size());
  for (const auto& obj : scene.objects) meshes.push_back(&obj.mesh);
  return TriangleBvh(meshes);
}

std::uint32_t TriangleBvh::build(std::uint32_t begin, std::uint32_t end) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  Vec3 clo = lo, chi = hi;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Tri& t = tris_[order_[i]];
    for (const Vec3* p : {&t.a, &t.b, &t.c}) {
      lo = lo.cwiseMin(*p);
      hi = hi.cwiseMax(*p);
    }
    const Vec3 centroid = (t.a + t.b + t.c) / 3.0;
    clo = clo.cwiseMin(centroid);
    chi = chi.cwiseMax(centroid);
  }
  // Conservative padding so rounding in the slab test never culls a hit on
  // a flat (axis-aligned) box face.
  const double pad = 1e-9 * (1.0 + std::max(lo.cwiseAbs().maxCoeff(),
                                            hi.cwiseAbs().maxCoeff()));
  nodes_[index].lo = lo.array() - pad;
  nodes_[index].hi = hi.array() + pad;

  const std::uint32_t n = end - begin;
  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  if (n <= kLeafSize || chi[axis] - clo[axis] <= 0.0) {
    nodes_[index].first = begin;
    nodes_[index].count = n;
    return index;
  }
  const std::uint32_t mid = begin + n / 2;
  auto key = [&](std::uint32_t id) {
    const Tri& t = tris_[id];
    return std::pair{t.a[axis] + t.b[axis] + t.c[axis], id};
  };
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t x, std::uint32_t y) { return key(x) < key(y); });
  build(begin, mid);  // left child lands at index + 1
  const std::uint32_t right = build(mid, end);
  nodes_[index].first = right;
  nodes_[index].count = 0;
  return index;
}

std::optional<Hit> TriangleBvh::nearest(const Ray& ray, double t_min,
                                        double t_max) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv = inverse_direction(ray.direction);
  std::optional<Hit> best;
  double best_t = t_max;
  std::array<std::uint32_t, 128> stack;
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    // Ties at best_t must still be visited so the lowest primitive wins.
    if (box_entry(node.lo, node.hi, ray.origin, inv, t_min, best_t) > best_t) {
      continue;
    }
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t id = order_[i];
        const Tri& tri = tris_[id];
        const auto h = intersect_triangle(ray, tri.a, tri.b, tri.c, t_min,
                                          std::nextafter(best_t, kInfinity));
        if (!h) continue;
        if (!best || h->t < best_t || (h->t == best_t && id < best->primitive)) {
          best_t = h->t;
          best = Hit{h->t, tri.object, id, tri.face};
        }
      }
      continue;
    }
    const std::uint32_t self = static_cast<std::uint32_t>(&node - nodes_.data());
    stack[top++] = node.first;
    stack[top++] = self + 1;
  }
  return best;
}

bool TriangleBvh::occluded(const Ray& ray, double t_min, double t_max) const {
  if (nodes_.empty()) return false;
  const Vec3 inv = inverse_direction(ray.direction);
  std::array<std::uint32_t, 128> stack;
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!std::isfinite(box_entry(node.lo, node.hi, ray.origin, inv, t_min,
                                 t_max))) {
      continue;
    }
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Tri& tri = tris_[order_[i]];
        if (intersect_triangle(ray, tri.a, tri.b, tri.c, t_min, t_max)) {
          return true;
        }
      }
      continue;
    }
    const std::uint32_t self = static_cast<std::uint32_t>(&node - nodes_.data());
    stack[top++] = node.first;
    stack[top++] = self + 1;
  }
  return false;
}

}  // namespace bimsynth
