#pragma once

// Exact geometry of three-dimensional lattice polytopes. Everything here is
// integer arithmetic; coordinates inside 4*Delta_3 are tiny so int64 never
// overflows for the determinants involved.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace k3forge {

using LatticePoint = IVec3;

/// Inequality normal . x >= offset with a primitive integer normal.
struct Facet {
  IVec3 normal{};
  std::int64_t offset = 0;

  bool contains(const IVec3& x) const { return dot(normal, x) >= offset; }
  bool onBoundary(const IVec3& x) const { return dot(normal, x) == offset; }
  std::int64_t slack(const IVec3& x) const { return dot(normal, x) - offset; }

  friend auto operator<=>(const Facet&, const Facet&) = default;
};

struct LatticePolytope {
  std::vector<LatticePoint> vertices;       // sorted
  std::vector<LatticePoint> latticePoints;  // sorted
  std::vector<Facet> facets;                // sorted
  std::int64_t normalizedVolume = 0;

  bool contains(const IVec3& x) const {
    return std::all_of(facets.begin(), facets.end(),
                       [&](const Facet& f) { return f.contains(x); });
  }

  bool containsStrictly(const IVec3& x) const {
    return std::all_of(facets.begin(), facets.end(),
                       [&](const Facet& f) { return f.slack(x) > 0; });
  }

  /// Points of the polytope lying on the given facet.
  std::vector<LatticePoint> pointsOn(const Facet& f) const {
    std::vector<LatticePoint> out;
    for (const auto& q : latticePoints)
      if (f.onBoundary(q)) out.push_back(q);
    return out;
  }

  friend bool operator==(const LatticePolytope&, const LatticePolytope&) = default;
};

namespace detail {

inline std::int64_t cross2(const std::array<std::int64_t, 2>& o,
                           const std::array<std::int64_t, 2>& a,
                           const std::array<std::int64_t, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Coordinate to drop when projecting a plane with this normal to 2D.
inline int projectionAxis(const IVec3& normal) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::llabs(normal[i]) > std::llabs(normal[axis])) axis = i;
  return axis;
}

inline std::array<std::int64_t, 2> project(const IVec3& v, int axis) {
  std::array<std::int64_t, 2> out{};
  int k = 0;
  for (int i = 0; i < 3; ++i)
    if (i != axis) out[k++] = v[i];
  return out;
}

/// Extreme points of a coplanar point set, in cyclic order (monotone chain).
inline std::vector<IVec3> planarHullCycle(std::vector<IVec3> pts, const IVec3& normal) {
  int axis = projectionAxis(normal);
  std::sort(pts.begin(), pts.end(), [&](const IVec3& a, const IVec3& b) {
    return project(a, axis) < project(b, axis);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<IVec3> hull(2 * pts.size());
  std::size_t k = 0;
  auto turn = [&](const IVec3& o, const IVec3& a, const IVec3& b) {
    return cross2(project(o, axis), project(a, axis), project(b, axis));
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline int affineRank(std::span<const IVec3> pts) {
  if (pts.empty()) return -1;
  const IVec3& o = pts[0];
  std::size_t i = 1;
  while (i < pts.size() && isZero(pts[i] - o)) ++i;
  if (i == pts.size()) return 0;
  IVec3 u = pts[i] - o;
  std::size_t j = i + 1;
  while (j < pts.size() && isZero(cross(u, pts[j] - o))) ++j;
  if (j == pts.size()) return 1;
  IVec3 n = cross(u, pts[j] - o);
  for (std::size_t k = j + 1; k < pts.size(); ++k)
    if (dot(n, pts[k] - o) != 0) return 3;
  return 2;
}

}  // namespace detail

/// 3! times the Euclidean volume of the polytope described by `facets` and
/// its `vertices`, summed over fans of the facet polygons from one apex.
inline std::int64_t normalizedVolumeOf(std::span<const Facet> facets,
                                       std::span<const IVec3> vertices) {
  if (vertices.empty()) return 0;
  const IVec3& apex = vertices.front();
  std::int64_t total = 0;
  for (const Facet& f : facets) {
    if (f.onBoundary(apex)) continue;
    std::vector<IVec3> onFacet;
    for (const auto& v : vertices)
      if (f.onBoundary(v)) onFacet.push_back(v);
    auto cycle = detail::planarHullCycle(onFacet, f.normal);
    for (std::size_t i = 1; i + 1 < cycle.size(); ++i)
      total += std::llabs(det3(cycle[0] - apex, cycle[i] - apex, cycle[i + 1] - apex));
  }
  return total;
}

/// All integer points satisfying every facet inequality, by bounding-box scan.
inline std::vector<LatticePoint> enumerateLatticePoints(std::span<const Facet> facets,
                                                        std::span<const IVec3> vertices) {
  std::vector<LatticePoint> out;
  if (vertices.empty()) return out;
  IVec3 lo = vertices[0], hi = vertices[0];
  for (const auto& v : vertices)
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  for (auto x = lo[0]; x <= hi[0]; ++x)
    for (auto y = lo[1]; y <= hi[1]; ++y)
      for (auto z = lo[2]; z <= hi[2]; ++z) {
        IVec3 q{x, y, z};
        bool inside = std::all_of(facets.begin(), facets.end(),
                                  [&](const Facet& f) { return f.contains(q); });
        if (inside) out.push_back(q);
      }
  return out;
}

/// Points among `candidates` whose supporting facets pin them down, i.e. the
/// normals of the facets through the point have rank three.
inline std::vector<LatticePoint> extremePoints(std::span<const Facet> facets,
                                               std::span<const IVec3> candidates) {
  std::vector<LatticePoint> out;
  for (const auto& q : candidates) {
    std::vector<IVec3> normals;
    for (const auto& f : facets)
      if (f.onBoundary(q)) normals.push_back(f.normal);
    bool pinned = false;
    for (std::size_t a = 0; a < normals.size() && !pinned; ++a)
      for (std::size_t b = a + 1; b < normals.size() && !pinned; ++b)
        for (std::size_t c = b + 1; c < normals.size() && !pinned; ++c)
          pinned = det3(normals[a], normals[b], normals[c]) != 0;
    if (pinned) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Assembles a polytope from a known facet list.
inline LatticePolytope polytopeFromFacets(std::vector<Facet> facets,
                                          std::span<const IVec3> generators) {
  LatticePolytope P;
  std::sort(facets.begin(), facets.end());
  P.facets = std::move(facets);
  P.vertices = extremePoints(P.facets, generators);
  P.vertices.erase(std::unique(P.vertices.begin(), P.vertices.end()), P.vertices.end());
  P.latticePoints = enumerateLatticePoints(P.facets, P.vertices);
  P.normalizedVolume = normalizedVolumeOf(P.facets, P.vertices);
  return P;
}

/// Exact convex hull by testing every spanned plane. Cubic in the number of
/// input points times a linear scan, which is fine for the <= 35 point inputs
/// this library sees.
inline LatticePolytope convexHull(std::span<const LatticePoint> input) {
  std::vector<IVec3> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (detail::affineRank(pts) < 3)
    throw DegenerateInput("convexHull: points do not span three dimensions");

  std::set<Facet> facets;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        IVec3 normal = primitive(cross(pts[j] - pts[i], pts[k] - pts[i]));
        if (isZero(normal)) continue;
        std::int64_t c = dot(normal, pts[i]);
        bool above = true, below = true;
        for (const auto& q : pts) {
          auto s = dot(normal, q) - c;
          above &= s >= 0;
          below &= s <= 0;
        }
        if (above) facets.insert({normal, c});
        if (below) facets.insert({-normal, -c});
      }
  return polytopeFromFacets({facets.begin(), facets.end()}, pts);
}

inline std::int64_t latticePointCount(const LatticePolytope& P) {
  return static_cast<std::int64_t>(P.latticePoints.size());
}

inline std::int64_t normalizedVolume(const LatticePolytope& P) { return P.normalizedVolume; }

inline std::vector<LatticePoint> interiorLatticePoints(const LatticePolytope& P) {
  std::vector<LatticePoint> out;
  for (const auto& q : P.latticePoints)
    if (P.containsStrictly(q)) out.push_back(q);
  return out;
}

/// Every facet at lattice distance one from the unique interior point.
inline bool isReflexive(const LatticePolytope& P) {
  auto interior = interiorLatticePoints(P);
  if (interior.size() != 1)
    throw NotCanonical("isReflexive: polytope has " + std::to_string(interior.size()) +
                       " interior lattice points");
  const auto& p = interior.front();
  return std::all_of(P.facets.begin(), P.facets.end(),
                     [&](const Facet& f) { return f.slack(p) == 1; });
}

// ---------------------------------------------------------------------------
// S4 symmetry of 4*Delta_3

using HomogeneousExponent = std::array<int, 4>;

inline constexpr int kDegree = 4;

inline HomogeneousExponent homogenize(const LatticePoint& q) {
  return {static_cast<int>(q[0]), static_cast<int>(q[1]), static_cast<int>(q[2]),
          static_cast<int>(kDegree - q[0] - q[1] - q[2])};
}

inline LatticePoint dehomogenize(const HomogeneousExponent& e) { return {e[0], e[1], e[2]}; }

inline bool insideSimplex(const LatticePoint& q) {
  return q[0] >= 0 && q[1] >= 0 && q[2] >= 0 && q[0] + q[1] + q[2] <= kDegree;
}

/// The 24 permutations of four homogeneous coordinates, identity first.
inline const std::vector<std::array<int, 4>>& s4Permutations() {
  static const std::vector<std::array<int, 4>> perms = [] {
    std::vector<std::array<int, 4>> out;
    std::array<int, 4> p{0, 1, 2, 3};
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return perms;
}

/// Image of an exponent vector: coordinate i of the result is coordinate
/// perm[i] of the input.
inline HomogeneousExponent permute(const HomogeneousExponent& e, const std::array<int, 4>& perm) {
  return {e[perm[0]], e[perm[1]], e[perm[2]], e[perm[3]]};
}

struct CanonicalKey {
  std::vector<HomogeneousExponent> key;

  /// "4000|0400|..." rendering used in files.
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i) s += '|';
      for (int c : key[i]) s += static_cast<char>('0' + c);
    }
    return s;
  }

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

inline CanonicalKey s4CanonicalKey(std::span<const LatticePoint> points) {
  std::vector<HomogeneousExponent> homogeneous;
  for (const auto& q : points) {
    if (!insideSimplex(q)) throw OutOfSimplex("s4CanonicalKey: point outside 4*Delta_3");
    homogeneous.push_back(homogenize(q));
  }
  CanonicalKey best;
  bool first = true;
  for (const auto& perm : s4Permutations()) {
    std::vector<HomogeneousExponent> image;
    image.reserve(homogeneous.size());
    for (const auto& e : homogeneous) image.push_back(permute(e, perm));
    std::sort(image.begin(), image.end());
    if (first || image < best.key) best.key = std::move(image);
    first = false;
  }
  return best;
}

inline CanonicalKey s4CanonicalKey(const LatticePolytope& P) {
  return s4CanonicalKey(P.latticePoints);
}

/// The fourth dilation of the standard tetrahedron.
inline LatticePolytope fourSimplex() {
  std::vector<LatticePoint> v{{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 4}};
  return convexHull(v);
}

inline constexpr LatticePoint kInteriorPoint{1, 1, 1};

}  // namespace k3forge
