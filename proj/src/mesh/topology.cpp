#include "forge/mesh/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {
namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

std::uint64_t undirected_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

std::vector<Mesh> connected_components(const Mesh& m) {
  if (m.triangles.empty()) fail(ErrorCode::EmptyMesh, "connected components of empty mesh");
  DisjointSet sets(m.vertices.size());
  for (const Triangle& t : m.triangles) {
    sets.unite(t[0], t[1]);
    sets.unite(t[1], t[2]);
  }
  std::unordered_map<int, std::size_t> slot;
  std::vector<Mesh> parts;
  for (const Triangle& t : m.triangles) {
    const int root = sets.find(t[0]);
    auto [it, inserted] = slot.try_emplace(root, parts.size());
    if (inserted) {
      parts.emplace_back();
      parts.back().vertices = m.vertices;
      parts.back().name = m.name + "_" + std::to_string(it->second);
    }
    parts[it->second].triangles.push_back(t);
  }
  for (Mesh& p : parts) p = compact(p);
  return parts;
}

CrossSection cross_section(const Mesh& m, const Plane& plane) {
  if (!is_watertight(m)) fail(ErrorCode::NonWatertightInput, "cross section needs a watertight mesh");
  const Plane p = Plane::make(plane.origin, plane.normal);
  const auto [u, v] = p.basis();

  std::vector<double> dist(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) dist[i] = p.signed_distance(m.vertices[i]);
  // Vertices on the plane count as positive so every crossing is a proper one.
  auto positive = [&](int i) { return dist[i] >= 0.0; };
  auto crossing = [&](int i, int j) -> Vec3 {
    if (i > j) std::swap(i, j);
    const double t = dist[i] / (dist[i] - dist[j]);
    return m.vertices[i] + (m.vertices[j] - m.vertices[i]) * t;
  };

  struct Segment {
    std::uint64_t from_key;
    std::uint64_t to_key;
    Vec3 from;
    Vec3 to;
  };
  std::vector<Segment> segments;
  for (const Triangle& t : m.triangles) {
    std::array<std::pair<int, int>, 2> cut{};
    int n_cut = 0;
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (positive(a) != positive(b) && n_cut < 2) cut[n_cut++] = {a, b};
    }
    if (n_cut != 2) continue;
    Segment s{undirected_key(cut[0].first, cut[0].second), undirected_key(cut[1].first, cut[1].second),
              crossing(cut[0].first, cut[0].second), crossing(cut[1].first, cut[1].second)};
    const Vec3 tri_normal = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    // Material lies to the left of p.normal x tri_normal.
    if ((s.to - s.from).dot(p.normal.cross(tri_normal)) < 0.0) {
      std::swap(s.from, s.to);
      std::swap(s.from_key, s.to_key);
    }
    segments.push_back(s);
  }

  CrossSection out;
  double twice_area = 0.0;
  Vec2 moment = Vec2::Zero();
  auto to2d = [&](const Vec3& q) { return Vec2((q - p.origin).dot(u), (q - p.origin).dot(v)); };
  for (const Segment& s : segments) {
    const Vec2 a = to2d(s.from);
    const Vec2 b = to2d(s.to);
    const double cross = a.x() * b.y() - b.x() * a.y();
    twice_area += cross;
    moment += (a + b) * cross;
  }
  out.area = std::max(0.0, 0.5 * twice_area);
  if (std::abs(twice_area) > 0.0) {
    const Vec2 c = moment / (3.0 * twice_area);
    out.centroid = p.origin + c.x() * u + c.y() * v;
  } else {
    out.centroid = p.origin;
  }

  std::unordered_map<std::uint64_t, std::size_t> by_start;
  for (std::size_t i = 0; i < segments.size(); ++i) by_start.emplace(segments[i].from_key, i);
  std::vector<bool> used(segments.size(), false);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (used[i]) continue;
    std::vector<Vec3> loop;
    std::size_t cur = i;
    while (!used[cur]) {
      used[cur] = true;
      loop.push_back(segments[cur].from);
      auto it = by_start.find(segments[cur].to_key);
      if (it == by_start.end()) break;
      cur = it->second;
    }
    if (loop.size() >= 3) out.loops.push_back(std::move(loop));
  }
  return out;
}

}  // namespace forge
