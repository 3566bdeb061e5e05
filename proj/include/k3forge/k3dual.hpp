#pragma once

// K3 polytopes: the simple 3-polytope dual to a unimodular central
// triangulation. Combinatorics are read off the triangulation; geometry is
// recovered exactly from a weight vector as the region where the monomial at
// the interior point attains the tropical minimum.

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "core.hpp"
#include "lattice.hpp"
#include "triangulate.hpp"

namespace k3forge {

using FVector = std::array<std::int64_t, 3>;

struct K3Combinatorics {
  FVector fVector{};
  std::vector<int> boundaryPoints;            // configuration index per facet
  std::vector<std::vector<int>> facetLists;   // sorted simplex indices per facet
  std::vector<std::pair<int, int>> edges;     // simplex pairs sharing a triangle
};

/// (Vol, 3 Vol / 2, Vol / 2 + 2), checked against direct counts in T.
inline FVector dualFVector(const PointConfiguration<3>& cfg, const CentralTriangulation& T) {
  std::int64_t vol = totalVolume<3>(cfg, T);
  if (vol % 2 != 0) throw OddVolume("dualFVector: odd normalized volume " + std::to_string(vol));
  FVector formula{vol, 3 * vol / 2, vol / 2 + 2};

  std::set<int> boundary;
  std::set<std::array<int, 2>> triangles;  // through p, keyed by the other two
  for (const auto& s : T.simplices) {
    std::vector<int> rest;
    for (int v : s)
      if (v != cfg.interior) rest.push_back(v);
    if (rest.size() != 3) throw Error("dualFVector: simplex misses the interior point");
    boundary.insert(rest.begin(), rest.end());
    triangles.insert({rest[0], rest[1]});
    triangles.insert({rest[0], rest[2]});
    triangles.insert({rest[1], rest[2]});
  }
  FVector direct{static_cast<std::int64_t>(T.simplices.size()),
                 static_cast<std::int64_t>(triangles.size()),
                 static_cast<std::int64_t>(boundary.size())};
  if (direct != formula) throw Error("dualFVector: direct counts disagree with the volume formula");
  return formula;
}

inline K3Combinatorics dualCombinatorics(const PointConfiguration<3>& cfg,
                                         const CentralTriangulation& T) {
  K3Combinatorics k;
  k.fVector = dualFVector(cfg, T);
  std::map<int, std::vector<int>> byPoint;
  std::map<std::array<int, 2>, std::vector<int>> byTriangle;
  for (int i = 0; i < static_cast<int>(T.simplices.size()); ++i) {
    std::vector<int> rest;
    for (int v : T.simplices[i])
      if (v != cfg.interior) {
        rest.push_back(v);
        byPoint[v].push_back(i);
      }
    byTriangle[{rest[0], rest[1]}].push_back(i);
    byTriangle[{rest[0], rest[2]}].push_back(i);
    byTriangle[{rest[1], rest[2]}].push_back(i);
  }
  for (auto& [q, list] : byPoint) {
    k.boundaryPoints.push_back(q);
    k.facetLists.push_back(list);
  }
  for (const auto& [tri, list] : byTriangle) {
    if (list.size() != 2) throw Error("dualCombinatorics: triangle through p not shared by two simplices");
    k.edges.emplace_back(list[0], list[1]);
  }
  std::sort(k.edges.begin(), k.edges.end());
  return k;
}

inline bool satisfiesEuler(const FVector& f) { return f[0] - f[1] + f[2] == 2; }
inline bool isSimpleFVector(const FVector& f) { return 3 * f[0] == 2 * f[1]; }

// ---------------------------------------------------------------------------
// Canonical form of the vertex-facet incidence graph

namespace detail {

/// Canonical labeling of a bipartite graph with parts {0..n0-1} (vertices)
/// and {n0..n0+n1-1} (facets) by individualization and refinement. The key
/// is the lexicographically smallest sorted edge list over all leaves of the
/// search tree, so it depends only on the isomorphism class.
class BipartiteCanon {
 public:
  BipartiteCanon(int n0, const std::vector<std::vector<int>>& facets)
      : n0_(n0), n_(n0 + static_cast<int>(facets.size())), adj_(n_) {
    for (int f = 0; f < static_cast<int>(facets.size()); ++f)
      for (int v : facets[f]) {
        if (v < 0 || v >= n0) throw Error("graphCanonicalKey: vertex index out of range");
        adj_[v].push_back(n0 + f);
        adj_[n0 + f].push_back(v);
      }
  }

  std::vector<std::pair<int, int>> run() {
    std::vector<int> color(n_);
    for (int v = 0; v < n_; ++v) color[v] = v < n0_ ? 0 : 1;
    refine(color);
    search(color);
    return best_;
  }

 private:
  // Colors are dense ranks; refinement splits by (color, neighbor colors).
  void refine(std::vector<int>& color) const {
    int classes = -1;
    while (true) {
      std::vector<std::pair<std::vector<int>, int>> sig(n_);
      for (int v = 0; v < n_; ++v) {
        std::vector<int> s{color[v]};
        std::vector<int> nb;
        for (int w : adj_[v]) nb.push_back(color[w]);
        std::sort(nb.begin(), nb.end());
        s.insert(s.end(), nb.begin(), nb.end());
        sig[v] = {std::move(s), v};
      }
      std::vector<std::vector<int>> keys;
      for (auto& s : sig) keys.push_back(s.first);
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (int v = 0; v < n_; ++v)
        color[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) -
                                    keys.begin());
      int now = static_cast<int>(keys.size());
      if (now == classes) return;
      classes = now;
    }
  }

  void search(const std::vector<int>& color) {
    // First smallest non-singleton color class, a labeling-invariant choice.
    std::vector<int> size(n_, 0);
    for (int c : color) ++size[c];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (size[c] > 1) {
        target = c;
        break;
      }
    if (target < 0) {
      std::vector<std::pair<int, int>> edges;
      for (int v = 0; v < n0_; ++v)
        for (int w : adj_[v]) edges.emplace_back(color[v], color[w]);
      std::sort(edges.begin(), edges.end());
      if (best_.empty() || edges < best_) best_ = std::move(edges);
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (color[v] != target) continue;
      // Individualize v: it keeps color target, its classmates move up by one.
      std::vector<int> next(n_);
      for (int w = 0; w < n_; ++w) next[w] = color[w] > target || (color[w] == target && w != v)
                                                 ? color[w] + 1
                                                 : color[w];
      refine(next);
      search(next);
    }
  }

  int n0_, n_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> best_;
};

}  // namespace detail

/// Canonical string for a vertex-facet incidence structure given as facet
/// lists over vertices 0..n0-1.
inline std::string incidenceCanonicalKey(int n0, const std::vector<std::vector<int>>& facets) {
  auto edges = detail::BipartiteCanon(n0, facets).run();
  std::string key = std::to_string(n0) + "," + std::to_string(facets.size()) + ":";
  for (const auto& [a, b] : edges) key += std::to_string(a) + "-" + std::to_string(b) + " ";
  return key;
}

inline constexpr std::int64_t kDefaultGraphBound = 40;

inline std::string graphCanonicalKey(const K3Combinatorics& k,
                                     std::int64_t maxVertices = kDefaultGraphBound) {
  if (k.fVector[0] > maxVertices)
    throw TooLarge("graphCanonicalKey: " + std::to_string(k.fVector[0]) + " vertices exceed bound");
  return incidenceCanonicalKey(static_cast<int>(k.fVector[0]), k.facetLists);
}

// ---------------------------------------------------------------------------
// Exact geometry

using RVec3 = std::array<Rational, 3>;

struct Halfspace {
  RVec3 normal;  // normal . x >= offset
  Rational offset;
};

struct RationalPolytope3 {
  std::vector<Halfspace> hRep;              // irredundant, one per facet
  std::vector<RVec3> vRep;                  // sorted
  std::vector<std::vector<int>> facets;     // per hRep row, vertices in cyclic order
  std::vector<std::pair<int, int>> edges;   // sorted vertex pairs

  FVector fVector() const {
    return {static_cast<std::int64_t>(vRep.size()), static_cast<std::int64_t>(edges.size()),
            static_cast<std::int64_t>(facets.size())};
  }
};

namespace detail {

inline Rational rdot(const RVec3& a, const RVec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline RVec3 rsub(const RVec3& a, const RVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline RVec3 rcross(const RVec3& a, const RVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Solves rows . x = rhs for a 3x3 system; false if singular.
inline bool solve3(const std::array<RVec3, 3>& rows, const std::array<Rational, 3>& rhs, RVec3& x) {
  Rational det = rdot(rows[0], rcross(rows[1], rows[2]));
  if (det == 0) return false;
  // Cramer via the adjugate columns.
  RVec3 c0 = rcross(rows[1], rows[2]);
  RVec3 c1 = rcross(rows[2], rows[0]);
  RVec3 c2 = rcross(rows[0], rows[1]);
  for (int i = 0; i < 3; ++i) x[i] = (rhs[0] * c0[i] + rhs[1] * c1[i] + rhs[2] * c2[i]) / det;
  return true;
}

inline int affineRankR(const std::vector<RVec3>& pts) {
  if (pts.empty()) return -1;
  std::vector<RVec3> basis;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RVec3 d = rsub(pts[i], pts[0]);
    if (basis.empty()) {
      if (d != RVec3{}) basis.push_back(d);
    } else if (basis.size() == 1) {
      if (rcross(basis[0], d) != RVec3{}) basis.push_back(d);
    } else if (rdot(d, rcross(basis[0], basis[1])) != 0) {
      return 3;
    }
  }
  return static_cast<int>(basis.size());
}

template <typename Int>
Int gcdAbs(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline BigInt toBig(const BigInt& v) { return v; }
inline BigInt toBig(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<unsigned long long>(u >> 64);
  r <<= 64;
  r += static_cast<unsigned long long>(u);
  return neg ? BigInt(-r) : r;
}

/// Feasible vertices of { n_k . x >= o_k / scale } from all plane triples,
/// each with the mask of planes it lies on (at most 64 planes). Points are
/// deduplicated as reduced (X, det) before any rational is built.
template <typename Int>
void planeTripleVertices(const std::vector<IVec3>& n, const std::vector<Int>& o, const BigInt& scale,
                         std::map<RVec3, std::uint64_t>& out) {
  const std::size_t m = n.size();
  std::map<std::array<Int, 4>, std::uint64_t> found;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      IVec3 ab = cross(n[a], n[b]);
      for (std::size_t c = b + 1; c < m; ++c) {
        std::int64_t det = dot(ab, n[c]);
        if (det == 0) continue;
        IVec3 c0 = cross(n[b], n[c]), c1 = cross(n[c], n[a]);
        std::array<Int, 3> X;
        for (int i = 0; i < 3; ++i) X[i] = o[a] * Int(c0[i]) + o[b] * Int(c1[i]) + o[c] * Int(ab[i]);
        bool inside = true;
        std::uint64_t tight = 0;
        for (std::size_t k = 0; k < m && inside; ++k) {
          Int lhs = X[0] * Int(n[k][0]) + X[1] * Int(n[k][1]) + X[2] * Int(n[k][2]);
          Int rhs = o[k] * Int(det);
          inside = det > 0 ? lhs >= rhs : lhs <= rhs;
          if (lhs == rhs) tight |= std::uint64_t{1} << k;
        }
        if (!inside) continue;
        Int d = det > 0 ? Int(det) : Int(-det);
        if (det < 0)
          for (auto& x : X) x = -x;
        Int g = gcdAbs(gcdAbs(X[0], X[1]), gcdAbs(X[2], d));
        found[{X[0] / g, X[1] / g, X[2] / g, d / g}] |= tight;
      }
    }
  for (const auto& [key, tight] : found) {
    BigInt den = toBig(key[3]) * scale;
    RVec3 x{Rational(toBig(key[0]), den), Rational(toBig(key[1]), den), Rational(toBig(key[2]), den)};
    out[std::move(x)] |= tight;
  }
}

}  // namespace detail

/// Bounded region of the complement of the tropical surface where the
/// monomial at p is minimal: { x : w_p + p.x <= w_v + v.x for all v != p }.
inline RationalPolytope3 boundedRegion(std::span<const LatticePoint> support,
                                       std::span<const Rational> weights, const LatticePoint& p) {
  using detail::rdot;
  if (support.size() != weights.size()) throw Error("boundedRegion: weight count mismatch");
  auto pIt = std::find(support.begin(), support.end(), p);
  if (pIt == support.end()) throw Error("boundedRegion: p is not in the support");
  const Rational& wp = weights[pIt - support.begin()];

  // One halfspace per primitive direction, keeping the tightest offset.
  std::map<IVec3, Rational> strongest;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == p) continue;
    IVec3 d = support[i] - p;
    IVec3 u = primitive(d);
    std::int64_t scale = d[0] != 0 ? d[0] / u[0] : d[1] != 0 ? d[1] / u[1] : d[2] / u[2];
    Rational off = (wp - weights[i]) / scale;
    auto [it, fresh] = strongest.emplace(u, off);
    if (!fresh && off > it->second) it->second = off;
  }

  // Bounded iff the directions positively span space, i.e. p is interior.
  std::vector<LatticePoint> cone{IVec3{0, 0, 0}};
  for (const auto& [u, off] : strongest) cone.push_back(u);
  bool interior = false;
  try {
    auto hull = convexHull(cone);
    interior = hull.containsStrictly(IVec3{0, 0, 0});
  } catch (const DegenerateInput&) {
  }
  if (!interior) throw Unbounded("boundedRegion: p is not interior to the support");

  std::vector<Halfspace> hs;
  for (const auto& [u, off] : strongest) hs.push_back({{Rational(u[0]), Rational(u[1]), Rational(u[2])}, off});

  // Vertices: feasible intersections of three planes, in integers after
  // clearing the offsets' denominators.
  std::vector<IVec3> normals;
  BigInt scale = 1;
  for (const auto& [u, off] : strongest) {
    normals.push_back(u);
    BigInt d = boost::multiprecision::denominator(off);
    scale = scale / boost::multiprecision::gcd(scale, d) * d;
  }
  std::vector<BigInt> offsets;
  BigInt largest = 0;
  for (const auto& h : hs) {
    offsets.push_back(boost::multiprecision::numerator(Rational(h.offset * scale)));
    largest = std::max(largest, BigInt(abs(offsets.back())));
  }
  if (hs.size() > 64) throw TooLarge("boundedRegion: more than 64 directions");
  std::map<RVec3, std::uint64_t> vertexSet;
  if (largest < (BigInt(1) << 40)) {
    std::vector<__int128> small;
    for (const auto& o : offsets) small.push_back(static_cast<long long>(o));
    detail::planeTripleVertices<__int128>(normals, small, scale, vertexSet);
  } else {
    detail::planeTripleVertices<BigInt>(normals, offsets, scale, vertexSet);
  }
  RationalPolytope3 poly;
  std::vector<std::uint64_t> onPlanes;
  for (auto& [x, mask] : vertexSet) {
    poly.vRep.push_back(x);
    onPlanes.push_back(mask);
  }
  if (detail::affineRankR(poly.vRep) < 3)
    throw EmptyInterior("boundedRegion: region has empty interior");

  // Two vertices of a face span an edge of it iff they share a second plane:
  // planes have distinct normals, so the shared line meets the region in an edge.
  std::map<std::pair<int, int>, int> edgeFacets;
  const int nv = static_cast<int>(poly.vRep.size());
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    std::vector<int> tight;
    for (int v = 0; v < nv; ++v)
      if (onPlanes[v] & bit) tight.push_back(v);
    if (tight.size() < 3) continue;  // touches in an edge or a vertex only

    std::map<int, std::vector<int>> nb;
    for (std::size_t i = 0; i < tight.size(); ++i)
      for (std::size_t j = i + 1; j < tight.size(); ++j)
        if ((onPlanes[tight[i]] & onPlanes[tight[j]]) & ~bit) {
          nb[tight[i]].push_back(tight[j]);
          nb[tight[j]].push_back(tight[i]);
        }
    std::vector<int> cycle{tight[0]};
    for (int prev = -1, cur = tight[0];;) {
      const auto& next = nb[cur];
      if (next.size() != 2) throw Error("boundedRegion: facet boundary is not a cycle");
      int step = next[0] != prev ? next[0] : next[1];
      if (step == tight[0]) break;
      cycle.push_back(step);
      prev = cur;
      cur = step;
    }
    if (cycle.size() != tight.size()) throw Error("boundedRegion: facet boundary is not a cycle");

    // Counter-clockwise seen from outside, i.e. around the outward normal -n.
    const Halfspace& h = hs[k];
    RVec3 turn = detail::rcross(detail::rsub(poly.vRep[cycle[1]], poly.vRep[cycle[0]]),
                                detail::rsub(poly.vRep[cycle[2]], poly.vRep[cycle[1]]));
    if (rdot(turn, h.normal) > 0) std::reverse(cycle.begin() + 1, cycle.end());
    poly.hRep.push_back(h);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      int u = cycle[i], w = cycle[(i + 1) % cycle.size()];
      edgeFacets[{std::min(u, w), std::max(u, w)}]++;
    }
    poly.facets.push_back(std::move(cycle));
  }
  for (const auto& [e, count] : edgeFacets) {
    if (count != 2) throw Error("boundedRegion: boundary is not a closed surface");
    poly.edges.push_back(e);
  }
  return poly;
}

/// Heights given on a point configuration, read as tropical weights.
inline RationalPolytope3 boundedRegion(const PointConfiguration<3>& cfg,
                                       std::span<const Rational> heights) {
  return boundedRegion(std::span<const LatticePoint>(cfg.points), heights, cfg.points[cfg.interior]);
}

/// Writes an OFF mesh; coordinates are rounded to doubles only here.
inline void exportMesh(const RationalPolytope3& poly, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("exportMesh: cannot open " + path);
  out << "OFF\n" << poly.vRep.size() << " " << poly.facets.size() << " " << poly.edges.size() << "\n";
  out << std::setprecision(17);
  for (const auto& v : poly.vRep)
    out << v[0].convert_to<double>() << " " << v[1].convert_to<double>() << " "
        << v[2].convert_to<double>() << "\n";
  for (const auto& f : poly.facets) {
    out << f.size();
    for (int v : f) out << " " << v;
    out << "\n";
  }
  if (!out) throw Error("exportMesh: write failed for " + path);
}

/// A smooth tropical quartic with full support 4*Delta_3: S4-symmetric
/// weights by monomial shape, -9 on xyz.
inline std::vector<Rational> smoothQuarticWeights(std::span<const LatticePoint> support) {
  std::vector<Rational> w;
  for (const auto& q : support) {
    std::array<int, 3> e{static_cast<int>(q[0]), static_cast<int>(q[1]), static_cast<int>(q[2])};
    std::sort(e.rbegin(), e.rend());
    int deg = e[0] + e[1] + e[2];
    int value = 0;
    if (deg == 4) value = e[0] == 4 ? 5 : e[0] == 3 ? 3 : e[0] == 2 && e[1] == 2 ? 2 : 0;
    else if (deg == 3) value = e[0] == 3 ? 3 : e[0] == 2 ? 0 : -9;
    else if (deg == 2) value = e[0] == 2 ? 2 : 0;
    else if (deg == 1) value = 3;
    else value = 5;
    w.emplace_back(value);
  }
  return w;
}

}  // namespace k3forge
