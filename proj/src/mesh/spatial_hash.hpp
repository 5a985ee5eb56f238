#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "forge/mesh/mesh.hpp"

namespace forge::detail {

// Merges points closer than a tolerance. The first point inserted in a
// neighbourhood becomes the representative, so results depend only on
// insertion order.
class VertexWelder {
 public:
  explicit VertexWelder(double tolerance) : tol_(tolerance), cell_(tolerance > 0 ? tolerance : 1e-12) {}

  int insert(const Vec3& p) {
    const std::int64_t cx = cell_index(p.x());
    const std::int64_t cy = cell_index(p.y());
    const std::int64_t cz = cell_index(p.z());
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(key(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (int idx : it->second) {
            if ((points_[idx] - p).norm() <= tol_) return idx;
          }
        }
      }
    }
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    cells_[key(cx, cy, cz)].push_back(idx);
    return idx;
  }

  const std::vector<Vec3>& points() const { return points_; }
  std::vector<Vec3> take_points() { return std::move(points_); }

 private:
  std::int64_t cell_index(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }

  static std::uint64_t key(std::int64_t x, std::int64_t y, std::int64_t z) {
    // Collisions only cost extra distance checks.
    auto h = [](std::int64_t v) { return static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ull; };
    return h(x) ^ (h(y) >> 1) ^ (h(z) << 1) ^ static_cast<std::uint64_t>(z);
  }

  double tol_;
  double cell_;
  std::vector<Vec3> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace forge::detail
