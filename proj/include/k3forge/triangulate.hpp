#pragma once

// Central triangulations of canonical polytopes via per-facet fine
// triangulations, plus regularity certification through exact LPs and the
// lower-hull projection that turns heights back into a subdivision.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "core.hpp"
#include "lattice.hpp"
#include "ratlp.hpp"

namespace k3forge {

template <int D>
using IVec = std::array<std::int64_t, D>;

template <int D>
using SimplexIndices = std::array<int, D + 1>;

template <int D>
struct PointConfiguration {
  std::vector<IVec<D>> points;
  int interior = -1;  // distinguished index, -1 when not applicable

  std::size_t size() const { return points.size(); }
};

template <int D>
struct Triangulation {
  std::vector<SimplexIndices<D>> simplices;  // each sorted, list sorted

  void normalize() {
    for (auto& s : simplices) std::sort(s.begin(), s.end());
    std::sort(simplices.begin(), simplices.end());
  }
  friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

using CentralTriangulation = Triangulation<3>;

struct HeightCertificate {
  std::vector<Rational> heights;
};

/// A cell of a subdivision: sorted point indices.
using Cell = std::vector<int>;

namespace detail {

template <int D>
std::int64_t smallDet(std::array<IVec<D>, D> m) {
  if constexpr (D == 1) {
    return m[0][0];
  } else if constexpr (D == 2) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  } else {
    static_assert(D == 3);
    return det3({m[0][0], m[0][1], m[0][2]}, {m[1][0], m[1][1], m[1][2]},
                {m[2][0], m[2][1], m[2][2]});
  }
}

template <int D>
IVec<D> sub(const IVec<D>& a, const IVec<D>& b) {
  IVec<D> r{};
  for (int i = 0; i < D; ++i) r[i] = a[i] - b[i];
  return r;
}

/// Signed D! volume of a simplex given by point indices.
template <int D>
std::int64_t simplexDet(const PointConfiguration<D>& cfg, const SimplexIndices<D>& s) {
  std::array<IVec<D>, D> m{};
  for (int i = 0; i < D; ++i) m[i] = sub<D>(cfg.points[s[i + 1]], cfg.points[s[0]]);
  return smallDet<D>(m);
}

/// Barycentric coordinates of point `a` with respect to simplex `s`, as
/// integer numerators over the common denominator `den` (Cramer's rule).
template <int D>
std::array<std::int64_t, D + 1> barycentricNumerators(const PointConfiguration<D>& cfg,
                                                      const SimplexIndices<D>& s, int a,
                                                      std::int64_t& den) {
  den = simplexDet<D>(cfg, s);
  std::array<std::int64_t, D + 1> lambda{};
  std::int64_t rest = den;
  for (int k = 1; k <= D; ++k) {
    SimplexIndices<D> t = s;
    t[k] = a;
    lambda[k] = simplexDet<D>(cfg, t);
    rest -= lambda[k];
  }
  lambda[0] = rest;
  return lambda;
}

using P2 = std::array<std::int64_t, 2>;

inline std::int64_t orient2(const P2& a, const P2& b, const P2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

/// Interiors of two CCW triangles are disjoint iff an edge line of one of
/// them weakly separates the two.
inline bool trianglesInteriorDisjoint(const std::array<P2, 3>& A, const std::array<P2, 3>& B) {
  auto separates = [](const std::array<P2, 3>& T, const std::array<P2, 3>& U) {
    for (int e = 0; e < 3; ++e) {
      const P2& a = T[e];
      const P2& b = T[(e + 1) % 3];
      bool allOutside = true;
      for (const auto& u : U) allOutside &= orient2(a, b, u) <= 0;
      if (allOutside) return true;
    }
    return false;
  };
  return separates(A, B) || separates(B, A);
}

}  // namespace detail

/// Fine triangulations of the lattice polygon whose lattice points are `pts`
/// (all of them, in any order). Each triangulation lists CCW index triples,
/// normalized to sorted order.
inline std::vector<Triangulation<2>> facetFineTriangulations(std::span<const detail::P2> pts) {
  using detail::orient2;
  using detail::P2;
  const int n = static_cast<int>(pts.size());
  std::vector<Triangulation<2>> out;
  if (n < 3) return out;

  // Hull vertices, then unit boundary edges oriented counter-clockwise.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a] < pts[b]; });
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && orient2(pts[hull[k - 2]], pts[hull[k - 1]], pts[order[i]]) <= 0) --k;
    hull[k++] = order[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && orient2(pts[hull[k - 2]], pts[hull[k - 1]], pts[order[i]]) <= 0) --k;
    hull[k++] = order[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return out;  // collinear input

  std::set<std::pair<int, int>> boundary;
  for (std::size_t h = 0; h < hull.size(); ++h) {
    int a = hull[h], b = hull[(h + 1) % hull.size()];
    std::vector<int> onEdge;
    for (int i = 0; i < n; ++i) {
      if (orient2(pts[a], pts[b], pts[i]) != 0) continue;
      auto dx = pts[b][0] - pts[a][0], dy = pts[b][1] - pts[a][1];
      auto t = (pts[i][0] - pts[a][0]) * dx + (pts[i][1] - pts[a][1]) * dy;
      if (t >= 0 && t <= dx * dx + dy * dy) onEdge.push_back(i);
    }
    std::sort(onEdge.begin(), onEdge.end(), [&](int u, int v) {
      auto dx = pts[b][0] - pts[a][0], dy = pts[b][1] - pts[a][1];
      return (pts[u][0] - pts[a][0]) * dx + (pts[u][1] - pts[a][1]) * dy <
             (pts[v][0] - pts[a][0]) * dx + (pts[v][1] - pts[a][1]) * dy;
    });
    for (std::size_t e = 0; e + 1 < onEdge.size(); ++e) boundary.emplace(onEdge[e], onEdge[e + 1]);
  }

  // Empty lattice triangles, indexed by their CCW edges.
  std::map<std::pair<int, int>, std::vector<int>> apexes;
  std::int64_t polygonArea = 0;
  for (std::size_t h = 1; h + 1 < hull.size(); ++h)
    polygonArea += orient2(pts[hull[0]], pts[hull[h]], pts[hull[h + 1]]);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        if (orient2(pts[a], pts[b], pts[c]) <= 0) continue;
        bool empty = true;
        for (int q = 0; q < n && empty; ++q) {
          if (q == a || q == b || q == c) continue;
          empty = !(orient2(pts[a], pts[b], pts[q]) >= 0 && orient2(pts[b], pts[c], pts[q]) >= 0 &&
                    orient2(pts[c], pts[a], pts[q]) >= 0);
        }
        if (empty) apexes[{a, b}].push_back(c);
      }

  std::vector<std::array<int, 3>> placed;
  std::set<std::pair<int, int>> open = boundary, closed;
  std::function<void()> recurse = [&] {
    if (open.empty()) {
      std::int64_t area = 0;
      Triangulation<2> T;
      for (const auto& t : placed) {
        area += orient2(pts[t[0]], pts[t[1]], pts[t[2]]);
        T.simplices.push_back({t[0], t[1], t[2]});
      }
      if (area != polygonArea) throw Error("facetFineTriangulations: area mismatch");
      T.normalize();
      out.push_back(std::move(T));
      return;
    }
    auto edge = *open.begin();
    auto it = apexes.find(edge);
    if (it == apexes.end()) return;
    for (int c : it->second) {
      std::pair<int, int> e1{edge.second, c}, e2{c, edge.first};
      if (closed.count(e1) || closed.count(e2)) continue;
      std::array<P2, 3> tri{pts[edge.first], pts[edge.second], pts[c]};
      bool ok = true;
      for (const auto& t : placed) {
        if (!detail::trianglesInteriorDisjoint(tri, {pts[t[0]], pts[t[1]], pts[t[2]]})) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      auto savedOpen = open;
      auto savedClosed = closed;
      open.erase(edge);
      closed.insert(edge);
      for (const auto& e : {e1, e2}) {
        closed.insert(e);
        if (open.count(e)) open.erase(e);
        else open.emplace(e.second, e.first);
      }
      placed.push_back({edge.first, edge.second, c});
      recurse();
      placed.pop_back();
      open = std::move(savedOpen);
      closed = std::move(savedClosed);
    }
  };
  recurse();
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.simplices < b.simplices; });
  return out;
}

/// Point configuration of all lattice points of P with the unique interior
/// point marked.
inline PointConfiguration<3> configurationOf(const LatticePolytope& P) {
  PointConfiguration<3> cfg;
  cfg.points = P.latticePoints;
  auto interior = interiorLatticePoints(P);
  if (interior.size() != 1) throw NotCanonical("configurationOf: polytope is not canonical");
  cfg.interior = static_cast<int>(std::lower_bound(cfg.points.begin(), cfg.points.end(),
                                                   interior.front()) -
                                  cfg.points.begin());
  return cfg;
}

/// Per-facet fine triangulations expressed in configuration indices.
inline std::vector<std::vector<std::vector<std::array<int, 3>>>> facetTriangulationChoices(
    const LatticePolytope& P, const PointConfiguration<3>& cfg) {
  std::vector<std::vector<std::vector<std::array<int, 3>>>> choices;
  for (const Facet& f : P.facets) {
    std::vector<int> global;
    std::vector<detail::P2> local;
    int axis = detail::projectionAxis(f.normal);
    for (std::size_t i = 0; i < cfg.points.size(); ++i)
      if (f.onBoundary(cfg.points[i])) {
        global.push_back(static_cast<int>(i));
        local.push_back(detail::project(cfg.points[i], axis));
      }
    std::vector<std::vector<std::array<int, 3>>> facetChoices;
    for (const auto& T : facetFineTriangulations(local)) {
      std::vector<std::array<int, 3>> tris;
      for (const auto& s : T.simplices) tris.push_back({global[s[0]], global[s[1]], global[s[2]]});
      facetChoices.push_back(std::move(tris));
    }
    choices.push_back(std::move(facetChoices));
  }
  return choices;
}

/// Streams every central fine triangulation of a canonical polytope: the
/// Cartesian product of fine facet triangulations, coned over the interior
/// point. The callback returns false to stop early. Returns the number of
/// triangulations emitted.
inline std::size_t centralTriangulations(
    const LatticePolytope& P, const std::function<bool(const CentralTriangulation&)>& sink) {
  auto cfg = configurationOf(P);
  auto choices = facetTriangulationChoices(P, cfg);
  for (const auto& c : choices)
    if (c.empty()) return 0;
  std::vector<std::size_t> digit(choices.size(), 0);
  std::size_t emitted = 0;
  while (true) {
    CentralTriangulation T;
    for (std::size_t f = 0; f < choices.size(); ++f)
      for (const auto& tri : choices[f][digit[f]])
        T.simplices.push_back({cfg.interior, tri[0], tri[1], tri[2]});
    T.normalize();
    ++emitted;
    if (!sink(T)) return emitted;
    std::size_t f = 0;
    while (f < digit.size() && ++digit[f] == choices[f].size()) digit[f++] = 0;
    if (f == digit.size()) return emitted;
  }
}

/// Number of central triangulations without materializing them.
inline std::size_t countCentralTriangulations(const LatticePolytope& P) {
  auto cfg = configurationOf(P);
  std::size_t total = 1;
  for (const auto& c : facetTriangulationChoices(P, cfg)) total *= c.size();
  return total;
}

template <int D>
bool isUnimodular(const PointConfiguration<D>& cfg, const Triangulation<D>& T) {
  for (const auto& s : T.simplices) {
    auto d = detail::simplexDet<D>(cfg, s);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

template <int D>
std::int64_t totalVolume(const PointConfiguration<D>& cfg, const Triangulation<D>& T) {
  std::int64_t v = 0;
  for (const auto& s : T.simplices) v += std::llabs(detail::simplexDet<D>(cfg, s));
  return v;
}

// ---------------------------------------------------------------------------
// Regularity

enum class RegularityRows {
  Walls,  // one row per interior ridge: the opposite apex lifts above
  Full,   // one row per (simplex, point not in simplex) pair
};

/// Secondary-cone system of a triangulation in the heights of all points,
/// with the heights of the first simplex's vertices pinned to zero. Returns
/// the system over the free heights and the map from free variable to point.
template <int D>
StrictSystem secondaryConeSystem(const PointConfiguration<D>& cfg, const Triangulation<D>& T,
                                 RegularityRows mode, std::vector<int>& freePoints) {
  const int n = static_cast<int>(cfg.size());
  std::vector<int> variable(n, -1);
  freePoints.clear();
  std::vector<char> pinned(n, 0);
  if (!T.simplices.empty())
    for (int v : T.simplices.front()) pinned[v] = 1;
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) {
      variable[i] = static_cast<int>(freePoints.size());
      freePoints.push_back(i);
    }

  StrictSystem sys;
  sys.dimension = freePoints.size();
  auto addRow = [&](const SimplexIndices<D>& s, int a) {
    std::int64_t den = 0;
    auto lambda = detail::barycentricNumerators<D>(cfg, s, a, den);
    // h_a - sum lambda_i h_i > 0, scaled by den (sign matters).
    std::vector<Rational> row(sys.dimension);
    std::int64_t sgn = den > 0 ? 1 : -1;
    if (variable[a] >= 0) row[variable[a]] += sgn * den;
    for (int i = 0; i <= D; ++i)
      if (variable[s[i]] >= 0) row[variable[s[i]]] -= sgn * lambda[i];
    sys.add(std::move(row), 0, Relation::Strict);
  };

  if (mode == RegularityRows::Full) {
    for (const auto& s : T.simplices)
      for (int a = 0; a < n; ++a)
        if (std::find(s.begin(), s.end(), a) == s.end()) addRow(s, a);
  } else {
    std::map<std::array<int, D>, std::vector<std::pair<int, int>>> ridges;  // ridge -> (simplex, apex)
    for (std::size_t k = 0; k < T.simplices.size(); ++k) {
      const auto& s = T.simplices[k];
      for (int drop = 0; drop <= D; ++drop) {
        std::array<int, D> r{};
        for (int i = 0, j = 0; i <= D; ++i)
          if (i != drop) r[j++] = s[i];
        ridges[r].emplace_back(static_cast<int>(k), s[drop]);
      }
    }
    for (const auto& [ridge, sides] : ridges) {
      if (sides.size() != 2) continue;
      addRow(T.simplices[sides[0].first], sides[1].second);
    }
  }
  return sys;
}

/// Exact regularity test. Returns heights inducing T, or nothing when T is
/// not regular.
template <int D>
std::optional<HeightCertificate> isRegular(const PointConfiguration<D>& cfg,
                                           const Triangulation<D>& T,
                                           RegularityRows mode = RegularityRows::Walls) {
  std::vector<int> freePoints;
  auto sys = secondaryConeSystem<D>(cfg, T, mode, freePoints);
  auto result = solveStrict(sys);
  if (!result.feasible()) return std::nullopt;
  HeightCertificate cert;
  cert.heights.assign(cfg.size(), Rational(0));
  for (std::size_t v = 0; v < freePoints.size(); ++v) cert.heights[freePoints[v]] = (*result.witness)[v];
  return cert;
}

namespace detail {

/// Laplace expansion; sizes here never exceed four.
template <typename Num>
Num laplaceDet(const std::vector<std::vector<Num>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Num total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<Num>> minor(n - 1, std::vector<Num>(n - 1));
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor[r - 1][k++] = m[r][j];
    Num term = m[0][c] * laplaceDet(minor);
    if (c % 2) total -= term;
    else total += term;
  }
  return total;
}

template <int D, typename Num>
std::vector<Cell> lowerCells(const PointConfiguration<D>& cfg, const std::vector<Num>& H) {
  const int n = static_cast<int>(cfg.size());
  std::set<Cell> cells;
  SimplexIndices<D> s{};
  std::array<Num, D + 1> cof{};
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == D + 1) {
      // value(a) = det of the lifted edge vectors (L_i - L_0) with L_a - L_0
      // appended; its sign relative to the projected orientation says whether
      // a lifts above the hyperplane through the lifted simplex.
      std::vector<std::vector<Num>> rows(D, std::vector<Num>(D + 1));
      for (int i = 0; i < D; ++i) {
        for (int k = 0; k < D; ++k) rows[i][k] = Num(cfg.points[s[i + 1]][k] - cfg.points[s[0]][k]);
        rows[i][D] = H[s[i + 1]] - H[s[0]];
      }
      for (int k = 0; k <= D; ++k) {
        std::vector<std::vector<Num>> minor(D, std::vector<Num>(D));
        for (int i = 0; i < D; ++i)
          for (int j = 0, c = 0; j <= D; ++j)
            if (j != k) minor[i][c++] = rows[i][j];
        Num m = laplaceDet(minor);
        cof[k] = ((D + k) % 2) ? Num(-m) : m;
      }
      if (cof[D] == 0) return;
      const bool positive = cof[D] > 0;
      Cell cell;
      for (int a = 0; a < n; ++a) {
        Num value = (H[a] - H[s[0]]) * cof[D];
        for (int k = 0; k < D; ++k) value += Num(cfg.points[a][k] - cfg.points[s[0]][k]) * cof[k];
        if (value != 0 && ((value < 0) == positive)) return;
        if (value == 0) cell.push_back(a);
      }
      cells.insert(std::move(cell));
      return;
    }
    for (int i = start; i < n; ++i) {
      s[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  return {cells.begin(), cells.end()};
}

}  // namespace detail

/// Lower faces of the lifted configuration, projected back: the regular
/// subdivision induced by `heights`. Brute force over (D+1)-subsets with
/// exact integer arithmetic after clearing denominators.
template <int D>
std::vector<Cell> regularSubdivision(const PointConfiguration<D>& cfg,
                                     std::span<const Rational> heights) {
  const int n = static_cast<int>(cfg.size());
  if (static_cast<int>(heights.size()) != n) throw Error("regularSubdivision: height count mismatch");
  BigInt scale = 1;
  for (const auto& h : heights) {
    BigInt d = boost::multiprecision::denominator(h);
    scale = scale / boost::multiprecision::gcd(scale, d) * d;
  }
  std::vector<BigInt> H(n);
  BigInt largest = 0;
  for (int i = 0; i < n; ++i) {
    H[i] = boost::multiprecision::numerator(Rational(heights[i] * scale));
    largest = std::max(largest, BigInt(abs(H[i])));
  }
  if (largest < (BigInt(1) << 40)) {
    std::vector<__int128> small(n);
    for (int i = 0; i < n; ++i) small[i] = static_cast<long long>(H[i]);
    return detail::lowerCells<D, __int128>(cfg, small);
  }
  return detail::lowerCells<D, BigInt>(cfg, H);
}

template <int D>
std::vector<Cell> cellsOf(const Triangulation<D>& T) {
  std::vector<Cell> cells;
  for (const auto& s : T.simplices) cells.emplace_back(s.begin(), s.end());
  std::sort(cells.begin(), cells.end());
  return cells;
}

/// Certificate contract: the heights induce exactly the triangulation.
template <int D>
bool certifies(const PointConfiguration<D>& cfg, const Triangulation<D>& T,
               const HeightCertificate& cert) {
  return regularSubdivision<D>(cfg, cert.heights) == cellsOf<D>(T);
}

}  // namespace k3forge
