#include "forge/mesh/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

// Region test on the Voronoi regions of the triangle's features.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Collinear triangle: fall back to the nearest edge.
    Vec3 best = closest_point_on_segment(p, a, b);
    for (const Vec3& q : {closest_point_on_segment(p, b, c), closest_point_on_segment(p, c, a)}) {
      if ((q - p).squaredNorm() < (best - p).squaredNorm()) best = q;
    }
    return best;
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return a + ab * v + ac * w;
}

namespace {

struct Face {
  std::array<int, 3> v{};
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  bool alive = true;
  std::vector<int> outside;
  int visit = 0;

  double distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

class QuickHull {
 public:
  QuickHull(std::span<const Vec3> pts, double eps) : pts_(pts), eps_(eps) {}

  // Seeds with a tetrahedron (indices), then grows until every point is inside.
  void run(const std::array<int, 4>& tet) {
    const Vec3 inner = (pts_[tet[0]] + pts_[tet[1]] + pts_[tet[2]] + pts_[tet[3]]) / 4.0;
    const std::array<std::array<int, 3>, 4> faces{{{tet[0], tet[1], tet[2]},
                                                   {tet[0], tet[3], tet[1]},
                                                   {tet[0], tet[2], tet[3]},
                                                   {tet[1], tet[3], tet[2]}}};
    for (auto f : faces) {
      Face face = make_face(f[0], f[1], f[2]);
      if (face.distance(inner) > 0.0) face = make_face(f[0], f[2], f[1]);
      add_face(std::move(face));
    }
    std::vector<int> all(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) all[i] = static_cast<int>(i);
    assign(all, 0);

    for (int round = 0; round < 8; ++round) {
      grow();
      // Points orphaned during growth are re-checked against the final hull.
      std::vector<const Face*> live;
      for (const Face& f : faces_) {
        if (f.alive) live.push_back(&f);
      }
      std::vector<int> stray;
      for (std::size_t i = 0; i < pts_.size(); ++i) {
        for (const Face* f : live) {
          if (f->distance(pts_[i]) > eps_) {
            stray.push_back(static_cast<int>(i));
            break;
          }
        }
      }
      if (stray.empty()) return;
      assign(stray, 0);
    }
  }

  std::vector<std::array<int, 3>> alive_faces() const {
    std::vector<std::array<int, 3>> out;
    for (const Face& f : faces_) {
      if (f.alive) out.push_back(f.v);
    }
    return out;
  }

 private:
  Face make_face(int a, int b, int c) const {
    Face f;
    f.v = {a, b, c};
    const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    const double len = n.norm();
    f.normal = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
    f.offset = f.normal.dot(pts_[a]);
    return f;
  }

  int add_face(Face f) {
    const int idx = static_cast<int>(faces_.size());
    for (int k = 0; k < 3; ++k) edges_[edge_key(f.v[k], f.v[(k + 1) % 3])] = idx;
    faces_.push_back(std::move(f));
    return idx;
  }

  void kill_face(int idx) {
    Face& f = faces_[idx];
    f.alive = false;
    for (int k = 0; k < 3; ++k) {
      auto it = edges_.find(edge_key(f.v[k], f.v[(k + 1) % 3]));
      if (it != edges_.end() && it->second == idx) edges_.erase(it);
    }
  }

  // Gives each point to the face it lies farthest outside of, among faces
  // with index >= first_face.
  void assign(const std::vector<int>& points, int first_face) {
    for (int p : points) {
      int best = -1;
      double best_d = eps_;
      for (int f = first_face; f < static_cast<int>(faces_.size()); ++f) {
        if (!faces_[f].alive) continue;
        const double d = faces_[f].distance(pts_[p]);
        if (d > best_d) {
          best_d = d;
          best = f;
        }
      }
      if (best >= 0) faces_[best].outside.push_back(p);
    }
  }

  void grow() {
    for (;;) {
      int face_idx = -1;
      const int n_faces = static_cast<int>(faces_.size());
      for (int step = 0; step < n_faces; ++step) {
        const int f = (cursor_hint_ + step) % n_faces;
        if (faces_[f].alive && !faces_[f].outside.empty()) {
          face_idx = f;
          break;
        }
      }
      if (face_idx < 0) return;
      cursor_hint_ = face_idx;

      const Face& seed = faces_[face_idx];
      int apex = seed.outside.front();
      double far = seed.distance(pts_[apex]);
      for (int p : seed.outside) {
        const double d = seed.distance(pts_[p]);
        if (d > far) {
          far = d;
          apex = p;
        }
      }
      const Vec3& ap = pts_[apex];

      ++visit_stamp_;
      std::vector<int> visible{face_idx};
      faces_[face_idx].visit = visit_stamp_;
      for (std::size_t i = 0; i < visible.size(); ++i) {
        const Face& f = faces_[visible[i]];
        for (int k = 0; k < 3; ++k) {
          auto it = edges_.find(edge_key(f.v[(k + 1) % 3], f.v[k]));
          if (it == edges_.end()) continue;
          Face& nb = faces_[it->second];
          if (nb.visit == visit_stamp_ || !nb.alive) continue;
          if (nb.distance(ap) > eps_) {
            nb.visit = visit_stamp_;
            visible.push_back(it->second);
          }
        }
      }

      std::vector<std::pair<int, int>> horizon;
      for (int vi : visible) {
        const Face& f = faces_[vi];
        for (int k = 0; k < 3; ++k) {
          const int a = f.v[k];
          const int b = f.v[(k + 1) % 3];
          auto it = edges_.find(edge_key(b, a));
          if (it == edges_.end() || faces_[it->second].visit != visit_stamp_) horizon.emplace_back(a, b);
        }
      }

      std::vector<int> orphans;
      for (int vi : visible) {
        Face& f = faces_[vi];
        for (int p : f.outside) {
          if (p != apex) orphans.push_back(p);
        }
        f.outside.clear();
        f.outside.shrink_to_fit();
        kill_face(vi);
      }
      const int first_new = static_cast<int>(faces_.size());
      for (const auto& [a, b] : horizon) add_face(make_face(a, b, apex));
      assign(orphans, first_new);
    }
  }

  std::span<const Vec3> pts_;
  double eps_;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
  int visit_stamp_ = 0;
  int cursor_hint_ = 0;
};

// Andrew's monotone chain on 2D coordinates; returns CCW indices without
// collinear points.
std::vector<int> hull_2d(const std::vector<Vec2>& pts, double eps) {
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  auto cross = [&](int o, int a, int b) {
    const Vec2 oa = pts[a] - pts[o];
    const Vec2 ob = pts[b] - pts[o];
    const double len = std::max(oa.norm(), ob.norm());
    return (oa.x() * ob.y() - oa.y() * ob.x()) / (len > 0 ? len : 1.0);
  };
  std::vector<int> hull(2 * order.size());
  std::size_t k = 0;
  for (int idx : order) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], idx) <= eps) --k;
    hull[k++] = idx;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    const int idx = order[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], idx) <= eps) --k;
    hull[k++] = idx;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  return hull;
}

}  // namespace

ConvexHull ConvexHull::build(std::span<const Vec3> points) {
  if (points.empty()) fail(ErrorCode::EmptyWorkspace, "convex hull of an empty point set");
  ConvexHull hull;
  Box3 box = Box3::empty();
  for (const Vec3& p : points) box.expand(p);
  const double scale = std::max(1.0, box.extents().maxCoeff());
  const double eps = 1e-9 * scale;
  hull.tolerance_ = eps;

  // Farthest pair among the axis extremes.
  std::array<int, 6> extremes{};
  for (int axis = 0; axis < 3; ++axis) {
    int lo = 0, hi = 0;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      if (points[i][axis] < points[lo][axis]) lo = i;
      if (points[i][axis] > points[hi][axis]) hi = i;
    }
    extremes[2 * axis] = lo;
    extremes[2 * axis + 1] = hi;
  }
  int i0 = extremes[0], i1 = extremes[1];
  double best = -1.0;
  for (int a : extremes) {
    for (int b : extremes) {
      const double d = (points[a] - points[b]).squaredNorm();
      if (d > best) {
        best = d;
        i0 = a;
        i1 = b;
      }
    }
  }
  if (std::sqrt(best) <= eps) {
    hull.dimension_ = 0;
    hull.vertices_ = {points[i0]};
    return hull;
  }

  const Vec3 dir = (points[i1] - points[i0]).normalized();
  int i2 = -1;
  double line_dist = eps;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const Vec3 r = points[i] - points[i0];
    const double d = (r - r.dot(dir) * dir).norm();
    if (d > line_dist) {
      line_dist = d;
      i2 = i;
    }
  }
  if (i2 < 0) {
    int lo = i0, hi = i0;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      const double t = (points[i] - points[i0]).dot(dir);
      if (t < (points[lo] - points[i0]).dot(dir)) lo = i;
      if (t > (points[hi] - points[i0]).dot(dir)) hi = i;
    }
    hull.dimension_ = 1;
    hull.vertices_ = {points[lo], points[hi]};
    return hull;
  }

  const Vec3 normal = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
  int i3 = -1;
  double plane_dist = eps;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const double d = std::abs(normal.dot(points[i] - points[i0]));
    if (d > plane_dist) {
      plane_dist = d;
      i3 = i;
    }
  }
  if (i3 < 0) {
    const Plane plane{points[i0], normal};
    const auto [u, v] = plane.basis();
    std::vector<Vec2> flat(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vec3 r = points[i] - points[i0];
      flat[i] = Vec2(r.dot(u), r.dot(v));
    }
    const std::vector<int> ring = hull_2d(flat, eps);
    hull.dimension_ = 2;
    hull.plane_normal_ = normal;
    for (int idx : ring) hull.vertices_.push_back(points[idx]);
    for (int k = 1; k + 1 < static_cast<int>(ring.size()); ++k) hull.facets_.push_back({0, k, k + 1});
    return hull;
  }

  QuickHull qh(points, eps);
  qh.run({i0, i1, i2, i3});
  std::unordered_map<int, int> remap;
  for (const auto& f : qh.alive_faces()) {
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] = remap.try_emplace(f[k], static_cast<int>(hull.vertices_.size()));
      if (inserted) hull.vertices_.push_back(points[f[k]]);
      t[k] = it->second;
    }
    hull.facets_.push_back(t);
  }
  hull.dimension_ = 3;
  for (const Triangle& t : hull.facets_) {
    const Vec3& a = hull.vertices_[t[0]];
    Vec3 n = (hull.vertices_[t[1]] - a).cross(hull.vertices_[t[2]] - a);
    const double len = n.norm();
    n = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
    hull.normals_.push_back(n);
    hull.offsets_.push_back(n.dot(a));
  }
  return hull;
}

double ConvexHull::volume() const {
  if (dimension_ < 3) return 0.0;
  const Vec3 ref = vertices_.front();
  double six_v = 0.0;
  for (const Triangle& t : facets_) {
    six_v += (vertices_[t[0]] - ref).dot((vertices_[t[1]] - ref).cross(vertices_[t[2]] - ref));
  }
  return six_v / 6.0;
}

double ConvexHull::signed_distance(const Vec3& p) const {
  switch (dimension_) {
    case 3: {
      double d = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < normals_.size(); ++i) d = std::max(d, normals_[i].dot(p) - offsets_[i]);
      return d;
    }
    case 2:
    case 1:
    case 0: return (closest_surface_point(p) - p).norm();
    default: fail(ErrorCode::EmptyWorkspace, "distance to an empty hull");
  }
}

Vec3 ConvexHull::closest_surface_point(const Vec3& p) const {
  switch (dimension_) {
    case 0: return vertices_.front();
    case 1: return closest_point_on_segment(p, vertices_[0], vertices_[1]);
    case 2:
    case 3: {
      Vec3 best = vertices_.front();
      double best_d = std::numeric_limits<double>::infinity();
      for (const Triangle& t : facets_) {
        const Vec3 q = closest_point_on_triangle(p, vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
        const double d = (q - p).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = q;
        }
      }
      if (facets_.empty() && vertices_.size() >= 2) {
        // Fully collinear polygon left by the 2D pass.
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
          const Vec3 q = closest_point_on_segment(p, vertices_[i], vertices_[i + 1]);
          if ((q - p).squaredNorm() < best_d) {
            best_d = (q - p).squaredNorm();
            best = q;
          }
        }
      }
      return best;
    }
    default: fail(ErrorCode::EmptyWorkspace, "closest point on an empty hull");
  }
}

double ConvexHull::distance(const Vec3& p) const {
  if (contains(p)) return 0.0;
  return (closest_surface_point(p) - p).norm();
}

}  // namespace forge
