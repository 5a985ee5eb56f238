#include "forge/mesh/csg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "forge/error.hpp"

namespace forge {
namespace {

// ---------------------------------------------------------------------------
// Exact path: BSP classification of convex polygon fragments.
// ---------------------------------------------------------------------------

struct Polygon {
  std::vector<Vec3> v;
  Vec3 n;
  double w = 0.0;
};

struct SplitPlane {
  Vec3 n;
  double w = 0.0;
};

enum Side : unsigned { kCoplanar = 0, kFront = 1, kBack = 2, kSpanning = 3 };

struct SplitResult {
  std::vector<Polygon> coplanar_same;
  std::vector<Polygon> coplanar_opposite;
  std::vector<Polygon> front;
  std::vector<Polygon> back;

  void clear() {
    coplanar_same.clear();
    coplanar_opposite.clear();
    front.clear();
    back.clear();
  }
};

void split_polygon(const SplitPlane& plane, const Polygon& poly, double eps, SplitResult& out) {
  unsigned poly_type = 0;
  thread_local std::vector<unsigned> types;
  types.resize(poly.v.size());
  for (std::size_t i = 0; i < poly.v.size(); ++i) {
    const double t = plane.n.dot(poly.v[i]) - plane.w;
    const unsigned type = t < -eps ? kBack : (t > eps ? kFront : kCoplanar);
    poly_type |= type;
    types[i] = type;
  }
  switch (poly_type) {
    case kCoplanar:
      (plane.n.dot(poly.n) > 0 ? out.coplanar_same : out.coplanar_opposite).push_back(poly);
      return;
    case kFront: out.front.push_back(poly); return;
    case kBack: out.back.push_back(poly); return;
    default: break;
  }
  Polygon f{{}, poly.n, poly.w};
  Polygon b{{}, poly.n, poly.w};
  const std::size_t count = poly.v.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = (i + 1) % count;
    const unsigned ti = types[i];
    const unsigned tj = types[j];
    const Vec3& vi = poly.v[i];
    const Vec3& vj = poly.v[j];
    if (ti != kBack) f.v.push_back(vi);
    if (ti != kFront) b.v.push_back(vi);
    if ((ti | tj) == kSpanning) {
      const double t = (plane.w - plane.n.dot(vi)) / plane.n.dot(vj - vi);
      const Vec3 p = vi + (vj - vi) * t;
      f.v.push_back(p);
      b.v.push_back(p);
    }
  }
  if (f.v.size() >= 3) out.front.push_back(std::move(f));
  if (b.v.size() >= 3) out.back.push_back(std::move(b));
}

struct BspNode {
  SplitPlane plane;
  int front = -1;
  int back = -1;
};

class BspTree {
 public:
  BspTree(std::vector<Polygon> polygons, double eps) : eps_(eps) {
    if (polygons.empty()) return;
    struct Work {
      int node;
      std::vector<Polygon> polys;
    };
    std::vector<Work> stack;
    nodes_.push_back({});
    stack.push_back({0, std::move(polygons)});
    SplitResult parts;
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      const SplitPlane plane = choose_splitter(work.polys);
      nodes_[work.node].plane = plane;
      parts.clear();
      for (const Polygon& p : work.polys) split_polygon(plane, p, eps_, parts);
      if (!parts.front.empty()) {
        const int idx = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_[work.node].front = idx;
        stack.push_back({idx, std::move(parts.front)});
        parts.front = {};
      }
      if (!parts.back.empty()) {
        const int idx = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_[work.node].back = idx;
        stack.push_back({idx, std::move(parts.back)});
        parts.back = {};
      }
    }
  }

  bool empty() const { return nodes_.empty(); }

  // Sorts fragments of `poly` into outside/inside of the solid. Coplanar
  // fragments are routed to the front (outside) or back subtree per flag.
  void classify(const Polygon& poly, bool same_to_front, bool opposite_to_front, std::vector<Polygon>& outside,
                std::vector<Polygon>& inside) const {
    if (nodes_.empty()) {
      outside.push_back(poly);
      return;
    }
    struct Work {
      int node;
      Polygon poly;
    };
    std::vector<Work> stack{{0, poly}};
    SplitResult parts;
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      const BspNode& node = nodes_[work.node];
      parts.clear();
      split_polygon(node.plane, work.poly, eps_, parts);
      auto route = [](std::vector<Polygon>& src, std::vector<Polygon>& front, std::vector<Polygon>& back, bool to_front) {
        for (Polygon& p : src) (to_front ? front : back).push_back(std::move(p));
      };
      route(parts.coplanar_same, parts.front, parts.back, same_to_front);
      route(parts.coplanar_opposite, parts.front, parts.back, opposite_to_front);
      for (Polygon& p : parts.back) {
        if (node.back >= 0) {
          stack.push_back({node.back, std::move(p)});
        } else {
          inside.push_back(std::move(p));
        }
      }
      for (Polygon& p : parts.front) {
        if (node.front >= 0) {
          stack.push_back({node.front, std::move(p)});
        } else {
          outside.push_back(std::move(p));
        }
      }
    }
  }

 private:
  SplitPlane choose_splitter(const std::vector<Polygon>& polys) const {
    constexpr std::size_t kCandidates = 5;
    constexpr std::size_t kSample = 48;
    if (polys.size() <= 2) return {polys.front().n, polys.front().w};
    const std::size_t cand_count = std::min(kCandidates, polys.size());
    const std::size_t sample_count = std::min(kSample, polys.size());
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cand_count; ++c) {
      const Polygon& cand = polys[c * polys.size() / cand_count];
      int front = 0, back = 0, spans = 0;
      for (std::size_t s = 0; s < sample_count; ++s) {
        const Polygon& p = polys[s * polys.size() / sample_count];
        unsigned type = 0;
        for (const Vec3& v : p.v) {
          const double t = cand.n.dot(v) - cand.w;
          type |= t < -eps_ ? kBack : (t > eps_ ? kFront : kCoplanar);
        }
        if (type == kFront) ++front;
        if (type == kBack) ++back;
        if (type == kSpanning) ++spans;
      }
      const double score = 8.0 * spans + std::abs(front - back);
      if (score < best_score) {
        best_score = score;
        best = c * polys.size() / cand_count;
      }
    }
    return {polys[best].n, polys[best].w};
  }

  double eps_;
  std::vector<BspNode> nodes_;
};

std::vector<Polygon> to_polygons(const Mesh& m) {
  std::vector<Polygon> out;
  out.reserve(m.triangles.size());
  for (const Triangle& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    const Vec3 cross = (b - a).cross(c - a);
    const double len = cross.norm();
    if (!(len > 0.0)) continue;
    const Vec3 n = cross / len;
    out.push_back({{a, b, c}, n, n.dot(a)});
  }
  return out;
}

Box3 polygon_box(const Polygon& p) {
  Box3 box = Box3::empty();
  for (const Vec3& v : p.v) box.expand(v);
  return box;
}

Mesh polygons_to_mesh(const std::vector<Polygon>& polys, double tolerance) {
  Mesh raw;
  for (const Polygon& p : polys) {
    const int base = static_cast<int>(raw.vertices.size());
    raw.vertices.insert(raw.vertices.end(), p.v.begin(), p.v.end());
    for (std::size_t k = 1; k + 1 < p.v.size(); ++k) {
      raw.triangles.push_back({base, base + static_cast<int>(k), base + static_cast<int>(k) + 1});
    }
  }
  Mesh welded = weld(raw, tolerance);
  return weld(repair_t_junctions(welded, tolerance), tolerance);
}

std::optional<Mesh> exact_boolean(const Mesh& a, const Mesh& b, BooleanOp op, double eps) {
  std::vector<Polygon> pa = to_polygons(a);
  std::vector<Polygon> pb = to_polygons(b);
  const Box3 box_a = bounding_box(a).inflated(eps * 4);
  const Box3 box_b = bounding_box(b).inflated(eps * 4);
  const BspTree tree_a(pa, eps);
  const BspTree tree_b(pb, eps);

  // Coplanar routing per operation; see the keep/drop table in the header of
  // each branch below.
  bool a_same_front = true, a_opp_front = false, keep_a_outside = true;
  bool b_same_front = false, b_opp_front = false, keep_b_outside = true;
  switch (op) {
    case BooleanOp::UNION:
      // Shared same-facing faces are kept once (from a), touching faces vanish.
      a_same_front = true, a_opp_front = false, keep_a_outside = true;
      b_same_front = false, b_opp_front = false, keep_b_outside = true;
      break;
    case BooleanOp::INTERSECT:
      a_same_front = false, a_opp_front = true, keep_a_outside = false;
      b_same_front = true, b_opp_front = true, keep_b_outside = false;
      break;
    case BooleanOp::SUBTRACT:
      a_same_front = false, a_opp_front = true, keep_a_outside = true;
      b_same_front = true, b_opp_front = true, keep_b_outside = false;
      break;
  }

  std::vector<Polygon> keep_a, keep_b, discard;
  for (const Polygon& p : pa) {
    if (!polygon_box(p).overlaps(box_b)) {
      (keep_a_outside ? keep_a : discard).push_back(p);
      continue;
    }
    if (keep_a_outside) {
      tree_b.classify(p, a_same_front, a_opp_front, keep_a, discard);
    } else {
      tree_b.classify(p, a_same_front, a_opp_front, discard, keep_a);
    }
    discard.clear();
  }
  for (const Polygon& p : pb) {
    if (!polygon_box(p).overlaps(box_a)) {
      if (keep_b_outside) keep_b.push_back(p);
      continue;
    }
    if (keep_b_outside) {
      tree_a.classify(p, b_same_front, b_opp_front, keep_b, discard);
    } else {
      tree_a.classify(p, b_same_front, b_opp_front, discard, keep_b);
    }
    discard.clear();
  }
  if (op == BooleanOp::SUBTRACT) {
    for (Polygon& p : keep_b) {
      std::reverse(p.v.begin(), p.v.end());
      p.n = -p.n;
      p.w = -p.w;
    }
  }
  keep_a.insert(keep_a.end(), std::make_move_iterator(keep_b.begin()), std::make_move_iterator(keep_b.end()));
  if (keep_a.empty()) return Mesh{};
  Mesh result = polygons_to_mesh(keep_a, eps);
  if (result.triangles.empty()) return Mesh{};
  if (!is_watertight(result)) return std::nullopt;

  // Guard against classification slips that still produce closed output.
  const double va = volume(a);
  const double vb = volume(b);
  const double vr = volume(result);
  const double slack = 1e-6 * (std::abs(va) + std::abs(vb)) + 1e-9;
  bool plausible = vr >= -slack;
  switch (op) {
    case BooleanOp::INTERSECT: plausible = plausible && vr <= std::min(va, vb) + slack; break;
    case BooleanOp::SUBTRACT: plausible = plausible && vr <= va + slack; break;
    case BooleanOp::UNION: plausible = plausible && vr >= std::max(va, vb) - slack && vr <= va + vb + slack; break;
  }
  if (!plausible) return std::nullopt;
  return result;
}

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// ---------------------------------------------------------------------------
// Voxel path.
// ---------------------------------------------------------------------------

class Occupancy {
 public:
  Occupancy(const Box3& region, double res, int nx, int ny, int nz)
      : origin_(region.min), res_(res), nx_(nx), ny_(ny), nz_(nz), cells_(static_cast<std::size_t>(nx) * ny * nz, 0) {}

  void rasterize(const Mesh& m) {
    // Rays along +X through cell centers, slightly perturbed off lattice lines
    // so that they never graze mesh edges laid out on round coordinates.
    const double dy = 1.2345678e-4 * res_;
    const double dz = 7.6543211e-5 * res_;
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(ny_) * nz_);
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      Box3 box = Box3::empty();
      for (int k : m.triangles[t]) box.expand(m.vertices[k]);
      const int j0 = std::max(0, static_cast<int>(std::floor((box.min.y() - origin_.y()) / res_ - 0.5)));
      const int j1 = std::min(ny_ - 1, static_cast<int>(std::ceil((box.max.y() - origin_.y()) / res_ - 0.5)));
      const int k0 = std::max(0, static_cast<int>(std::floor((box.min.z() - origin_.z()) / res_ - 0.5)));
      const int k1 = std::min(nz_ - 1, static_cast<int>(std::ceil((box.max.z() - origin_.z()) / res_ - 0.5)));
      for (int k = k0; k <= k1; ++k) {
        for (int j = j0; j <= j1; ++j) buckets[static_cast<std::size_t>(k) * ny_ + j].push_back(t);
      }
    }
    std::vector<std::pair<double, int>> hits;
    for (int k = 0; k < nz_; ++k) {
      for (int j = 0; j < ny_; ++j) {
        const double y = origin_.y() + (j + 0.5) * res_ + dy;
        const double z = origin_.z() + (k + 0.5) * res_ + dz;
        hits.clear();
        for (int t : buckets[static_cast<std::size_t>(k) * ny_ + j]) {
          const Vec3& a = m.vertices[m.triangles[t][0]];
          const Vec3& b = m.vertices[m.triangles[t][1]];
          const Vec3& c = m.vertices[m.triangles[t][2]];
          // Barycentric coordinates of (y, z) in the YZ projection.
          const double det = (b.y() - a.y()) * (c.z() - a.z()) - (c.y() - a.y()) * (b.z() - a.z());
          if (std::abs(det) < 1e-18) continue;
          const double u = ((y - a.y()) * (c.z() - a.z()) - (c.y() - a.y()) * (z - a.z())) / det;
          const double v = ((b.y() - a.y()) * (z - a.z()) - (y - a.y()) * (b.z() - a.z())) / det;
          if (u < 0.0 || v < 0.0 || u + v > 1.0) continue;
          const double x = a.x() + u * (b.x() - a.x()) + v * (c.x() - a.x());
          // det > 0 means the normal's x component is positive: the ray leaves.
          hits.emplace_back(x, det > 0 ? -1 : 1);
        }
        if (hits.empty()) continue;
        std::sort(hits.begin(), hits.end());
        int winding = 0;
        std::size_t h = 0;
        for (int i = 0; i < nx_; ++i) {
          const double x = origin_.x() + (i + 0.5) * res_;
          while (h < hits.size() && hits[h].first < x) winding += hits[h++].second;
          if (winding > 0) cells_[index(i, j, k)] = 1;
        }
      }
    }
  }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny_ + j) * nx_ + i;
  }
  bool at(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= nx_ || j >= ny_ || k >= nz_) return false;
    return cells_[index(i, j, k)] != 0;
  }
  std::vector<std::uint8_t>& cells() { return cells_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  Mesh surface() const {
    Mesh m;
    m.name = "voxel";
    std::unordered_map<std::uint64_t, int> lattice;
    auto vertex = [&](int i, int j, int k) {
      const std::uint64_t key = (static_cast<std::uint64_t>(k) * (ny_ + 1) + j) * (nx_ + 1) + i;
      auto [it, inserted] = lattice.try_emplace(key, static_cast<int>(m.vertices.size()));
      if (inserted) m.vertices.push_back(origin_ + Vec3(i, j, k) * res_);
      return it->second;
    };
    auto quad = [&](int a, int b, int c, int d) {
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    };
    for (int k = 0; k < nz_; ++k) {
      for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
          if (!at(i, j, k)) continue;
          if (!at(i - 1, j, k)) quad(vertex(i, j, k), vertex(i, j, k + 1), vertex(i, j + 1, k + 1), vertex(i, j + 1, k));
          if (!at(i + 1, j, k))
            quad(vertex(i + 1, j, k), vertex(i + 1, j + 1, k), vertex(i + 1, j + 1, k + 1), vertex(i + 1, j, k + 1));
          if (!at(i, j - 1, k)) quad(vertex(i, j, k), vertex(i + 1, j, k), vertex(i + 1, j, k + 1), vertex(i, j, k + 1));
          if (!at(i, j + 1, k))
            quad(vertex(i, j + 1, k), vertex(i, j + 1, k + 1), vertex(i + 1, j + 1, k + 1), vertex(i + 1, j + 1, k));
          if (!at(i, j, k - 1)) quad(vertex(i, j, k), vertex(i, j + 1, k), vertex(i + 1, j + 1, k), vertex(i + 1, j, k));
          if (!at(i, j, k + 1))
            quad(vertex(i, j, k + 1), vertex(i + 1, j, k + 1), vertex(i + 1, j + 1, k + 1), vertex(i, j + 1, k + 1));
        }
      }
    }
    return m;
  }

 private:
  Vec3 origin_;
  double res_;
  int nx_, ny_, nz_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace

Mesh repair_t_junctions(const Mesh& input, double tolerance) {
  Mesh cur = input;
  for (int iter = 0; iter < 64; ++iter) {
    std::unordered_set<std::uint64_t> directed;
    directed.reserve(cur.triangles.size() * 3);
    for (const Triangle& t : cur.triangles) {
      for (int k = 0; k < 3; ++k) directed.insert(edge_key(t[k], t[(k + 1) % 3]));
    }
    struct Open {
      int tri;
      int edge;
    };
    std::vector<Open> open;
    std::vector<int> candidates;
    for (int ti = 0; ti < static_cast<int>(cur.triangles.size()); ++ti) {
      const Triangle& t = cur.triangles[ti];
      for (int k = 0; k < 3; ++k) {
        const int a = t[k];
        const int b = t[(k + 1) % 3];
        if (!directed.contains(edge_key(b, a))) {
          open.push_back({ti, k});
          candidates.push_back(a);
          candidates.push_back(b);
        }
      }
    }
    if (open.empty()) break;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::sort(candidates.begin(), candidates.end(),
              [&](int l, int r) { return cur.vertices[l].x() < cur.vertices[r].x(); });
    std::vector<double> xs(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) xs[i] = cur.vertices[candidates[i]].x();

    // At most one edge split per triangle per pass; later passes pick up the rest.
    std::vector<std::pair<int, std::vector<int>>> plan(cur.triangles.size(), {-1, {}});
    bool any = false;
    for (const Open& o : open) {
      if (plan[o.tri].first >= 0) continue;
      const Triangle& t = cur.triangles[o.tri];
      const int ia = t[o.edge];
      const int ib = t[(o.edge + 1) % 3];
      const Vec3& a = cur.vertices[ia];
      const Vec3& b = cur.vertices[ib];
      const Vec3 ab = b - a;
      const double len2 = ab.squaredNorm();
      if (len2 <= 0.0) continue;
      const double len = std::sqrt(len2);
      const double lo = std::min(a.x(), b.x()) - tolerance;
      const double hi = std::max(a.x(), b.x()) + tolerance;
      std::vector<std::pair<double, int>> on_edge;
      for (auto it = std::lower_bound(xs.begin(), xs.end(), lo); it != xs.end() && *it <= hi; ++it) {
        const int w = candidates[static_cast<std::size_t>(it - xs.begin())];
        if (w == ia || w == ib) continue;
        const Vec3& p = cur.vertices[w];
        const double s = (p - a).dot(ab) / len2;
        if (s * len <= tolerance || (1.0 - s) * len <= tolerance) continue;
        if ((a + s * ab - p).norm() > tolerance) continue;
        on_edge.emplace_back(s, w);
      }
      if (on_edge.empty()) continue;
      std::sort(on_edge.begin(), on_edge.end());
      std::vector<int> chain;
      for (const auto& [s, w] : on_edge) {
        if (chain.empty() || chain.back() != w) chain.push_back(w);
      }
      plan[o.tri] = {o.edge, std::move(chain)};
      any = true;
    }
    if (!any) break;
    std::vector<Triangle> next;
    next.reserve(cur.triangles.size() + open.size() * 2);
    for (int ti = 0; ti < static_cast<int>(cur.triangles.size()); ++ti) {
      const Triangle& t = cur.triangles[ti];
      const auto& [edge, chain] = plan[ti];
      if (edge < 0) {
        next.push_back(t);
        continue;
      }
      const int a = t[edge];
      const int b = t[(edge + 1) % 3];
      const int c = t[(edge + 2) % 3];
      int prev = a;
      for (int w : chain) {
        next.push_back({prev, w, c});
        prev = w;
      }
      next.push_back({prev, b, c});
    }
    cur.triangles = std::move(next);
  }
  return cur;
}

Mesh voxel_boolean(const Mesh& a, const Mesh& b, BooleanOp op, double resolution, long long max_cells) {
  if (!(resolution > 0.0)) fail(ErrorCode::BooleanFailure, "voxel resolution must be positive");
  Box3 region = Box3::empty();
  const Box3 ba = a.empty() ? Box3::empty() : bounding_box(a);
  const Box3 bb = b.empty() ? Box3::empty() : bounding_box(b);
  switch (op) {
    case BooleanOp::INTERSECT:
      if (a.empty() || b.empty() || !ba.overlaps(bb)) return Mesh{};
      region = Box3{ba.min.cwiseMax(bb.min), ba.max.cwiseMin(bb.max)};
      break;
    case BooleanOp::SUBTRACT:
      if (a.empty()) return Mesh{};
      region = ba;
      break;
    case BooleanOp::UNION:
      if (!a.empty()) region.expand(ba.min), region.expand(ba.max);
      if (!b.empty()) region.expand(bb.min), region.expand(bb.max);
      if (a.empty() && b.empty()) return Mesh{};
      break;
  }
  region = region.inflated(resolution);
  double res = resolution;
  auto dims = [&](double r) {
    const Vec3 e = region.extents() / r;
    return std::array<long long, 3>{static_cast<long long>(std::ceil(e.x())), static_cast<long long>(std::ceil(e.y())),
                                    static_cast<long long>(std::ceil(e.z()))};
  };
  auto n = dims(res);
  while (n[0] * n[1] * n[2] > max_cells) {
    res *= 1.25;
    n = dims(res);
  }
  Occupancy occ_a(region, res, static_cast<int>(n[0]), static_cast<int>(n[1]), static_cast<int>(n[2]));
  Occupancy occ_b(region, res, static_cast<int>(n[0]), static_cast<int>(n[1]), static_cast<int>(n[2]));
  if (!a.empty()) occ_a.rasterize(a);
  if (!b.empty()) occ_b.rasterize(b);
  auto& ca = occ_a.cells();
  const auto& cb = occ_b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    switch (op) {
      case BooleanOp::INTERSECT: ca[i] = ca[i] && cb[i]; break;
      case BooleanOp::SUBTRACT: ca[i] = ca[i] && !cb[i]; break;
      case BooleanOp::UNION: ca[i] = ca[i] || cb[i]; break;
    }
  }
  return occ_a.surface();
}

BooleanResult boolean_op_detailed(const Mesh& a, const Mesh& b, BooleanOp op, const CsgOptions& options) {
  // Empty operands are legal and short-circuit.
  if (a.empty() || b.empty()) {
    switch (op) {
      case BooleanOp::INTERSECT: return {Mesh{}, false};
      case BooleanOp::SUBTRACT: return {a, false};
      case BooleanOp::UNION: return {a.empty() ? b : a, false};
    }
  }
  if (!is_watertight(a)) fail(ErrorCode::NonWatertightInput, "left operand '" + a.name + "' is not watertight");
  if (!is_watertight(b)) fail(ErrorCode::NonWatertightInput, "right operand '" + b.name + "' is not watertight");

  if (!options.force_voxel) {
    if (auto exact = exact_boolean(a, b, op, options.plane_epsilon)) {
      exact->name = a.name;
      return {std::move(*exact), false};
    }
  }
  if (!options.allow_voxel_fallback) fail(ErrorCode::BooleanFailure, "exact boolean did not produce a closed mesh");
  Mesh voxel = voxel_boolean(a, b, op, options.voxel_resolution, options.max_voxel_cells);
  voxel.name = a.name;
  return {std::move(voxel), true};
}

Mesh boolean_op(const Mesh& a, const Mesh& b, BooleanOp op, const CsgOptions& options) {
  return boolean_op_detailed(a, b, op, options).mesh;
}

}  // namespace forge
