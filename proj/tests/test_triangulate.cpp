#include <gtest/gtest.h>

#include <queue>
#include <set>

#include "fixtures.hpp"
#include "k3forge/k3dual.hpp"
#include "k3forge/triangulate.hpp"

using namespace k3forge;
using detail::P2;

namespace {

std::vector<P2> dilatedTriangle(int k) {
  std::vector<P2> pts;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; i + j <= k; ++j) pts.push_back({i, j});
  return pts;
}

std::vector<P2> grid(int a, int b) {
  std::vector<P2> pts;
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= b; ++j) pts.push_back({i, j});
  return pts;
}

// Independent count: breadth-first search over diagonal flips from one fine
// triangulation. Triangulations using every point of a planar set are
// connected by such flips.
std::size_t flipGraphSize(const std::vector<P2>& pts, const Triangulation<2>& start) {
  using Tri = std::vector<std::array<int, 3>>;
  auto norm = [](Tri t) {
    for (auto& s : t) std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    return t;
  };
  Tri s0(start.simplices.begin(), start.simplices.end());
  std::set<Tri> seen{norm(s0)};
  std::queue<Tri> q;
  q.push(norm(s0));
  while (!q.empty()) {
    Tri t = q.front();
    q.pop();
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b) {
        std::vector<int> shared;
        for (int x : t[a])
          for (int y : t[b])
            if (x == y) shared.push_back(x);
        if (shared.size() != 2) continue;
        int u = -1, v = -1;
        for (int x : t[a])
          if (x != shared[0] && x != shared[1]) u = x;
        for (int x : t[b])
          if (x != shared[0] && x != shared[1]) v = x;
        auto o1 = detail::orient2(pts[u], pts[v], pts[shared[0]]);
        auto o2 = detail::orient2(pts[u], pts[v], pts[shared[1]]);
        if (!((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0))) continue;  // quadrilateral not convex
        Tri n = t;
        n[a] = {u, v, shared[0]};
        n[b] = {u, v, shared[1]};
        n = norm(n);
        if (seen.insert(n).second) q.push(n);
      }
  }
  return seen.size();
}

PointConfiguration<2> config2(const std::vector<P2>& pts) { return {pts, -1}; }

}  // namespace

TEST(FacetTriangulations, SmallPolygons) {
  EXPECT_EQ(facetFineTriangulations(dilatedTriangle(1)).size(), 1u);
  EXPECT_EQ(facetFineTriangulations(grid(1, 1)).size(), 2u);
}

TEST(FacetTriangulations, MatchFlipGraph) {
  for (const auto& pts : {dilatedTriangle(2), dilatedTriangle(3), grid(2, 1), grid(2, 2), grid(3, 1)}) {
    auto all = facetFineTriangulations(pts);
    ASSERT_FALSE(all.empty());
    EXPECT_EQ(all.size(), flipGraphSize(pts, all.front()));
    std::set<std::vector<SimplexIndices<2>>> distinct;
    for (const auto& T : all) {
      distinct.insert(T.simplices);
      EXPECT_TRUE(isUnimodular<2>(config2(pts), T));
    }
    EXPECT_EQ(distinct.size(), all.size());
  }
  // Pinned after the flip-graph cross-check.
  EXPECT_EQ(facetFineTriangulations(dilatedTriangle(2)).size(), 4u);
}

TEST(CentralTriangulations, FivePointPolytope) {
  auto P = convexHull(fixtures::fivePoint());
  std::vector<CentralTriangulation> all;
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    all.push_back(T);
    return true;
  });
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].simplices.size(), 4u);
  auto cfg = configurationOf(P);
  EXPECT_TRUE(isUnimodular<3>(cfg, all[0]));
  auto cert = isRegular<3>(cfg, all[0]);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(certifies<3>(cfg, all[0], *cert));
}

TEST(CentralTriangulations, Octahedron) {
  auto P = convexHull(fixtures::octahedron());
  EXPECT_EQ(countCentralTriangulations(P), 1u);
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    EXPECT_EQ(T.simplices.size(), 8u);
    EXPECT_TRUE(isUnimodular<3>(configurationOf(P), T));
    return true;
  });
}

// Volume additivity, unimodularity and the boundary/cone bijection on a
// stream prefix of the full simplex.
TEST(CentralTriangulations, FourSimplexPrefix) {
  auto P = fourSimplex();
  auto cfg = configurationOf(P);
  std::size_t seen = 0;
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    EXPECT_EQ(T.simplices.size(), 64u);
    EXPECT_EQ(totalVolume<3>(cfg, T), 64);
    EXPECT_TRUE(isUnimodular<3>(cfg, T));
    CentralTriangulation recone;
    for (const auto& s : T.simplices) {
      std::vector<int> rest;
      for (int v : s)
        if (v != cfg.interior) rest.push_back(v);
      EXPECT_EQ(rest.size(), 3u);
      if (rest.size() != 3) return false;
      recone.simplices.push_back({cfg.interior, rest[0], rest[1], rest[2]});
    }
    recone.normalize();
    EXPECT_EQ(recone, T);
    return ++seen < 25;
  });
  EXPECT_EQ(seen, 25u);
}

TEST(CentralTriangulations, NonCanonicalRejected) {
  std::vector<LatticePoint> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_THROW(configurationOf(convexHull(tet)), NotCanonical);
}

TEST(Unimodularity, UnrefinedSimplex) {
  auto P = fourSimplex();
  auto cfg = configurationOf(P);
  Triangulation<3> T;
  SimplexIndices<3> corners{};
  int k = 0;
  for (std::size_t i = 0; i < cfg.points.size(); ++i)
    if (std::find(P.vertices.begin(), P.vertices.end(), cfg.points[i]) != P.vertices.end())
      corners[k++] = static_cast<int>(i);
  T.simplices.push_back(corners);
  EXPECT_FALSE(isUnimodular<3>(cfg, T));
  EXPECT_EQ(totalVolume<3>(cfg, T), 64);
}

TEST(Regularity, NonRegularControl) {
  PointConfiguration<2> cfg{{{0, 0}, {4, 0}, {2, 4}, {1, 1}, {3, 1}, {2, 3}}, -1};
  Triangulation<2> T{{{3, 4, 5}, {0, 1, 3}, {1, 3, 4}, {1, 2, 4}, {2, 4, 5}, {0, 2, 5}, {0, 3, 5}}};
  T.normalize();
  EXPECT_EQ(totalVolume<2>(cfg, T), 16);
  EXPECT_FALSE(isRegular<2>(cfg, T, RegularityRows::Walls).has_value());
  EXPECT_FALSE(isRegular<2>(cfg, T, RegularityRows::Full).has_value());
  // The opposite twist is not regular either.
  Triangulation<2> M{{{3, 4, 5}, {0, 1, 4}, {0, 3, 4}, {1, 2, 5}, {1, 4, 5}, {0, 2, 3}, {2, 3, 5}}};
  M.normalize();
  EXPECT_FALSE(isRegular<2>(cfg, M).has_value());
}

TEST(Regularity, WallsAndFullAgreeInThePlane) {
  for (const auto& pts : {dilatedTriangle(3), grid(2, 2), grid(3, 1)}) {
    auto cfg = config2(pts);
    for (const auto& T : facetFineTriangulations(pts)) {
      auto walls = isRegular<2>(cfg, T, RegularityRows::Walls);
      auto full = isRegular<2>(cfg, T, RegularityRows::Full);
      ASSERT_EQ(walls.has_value(), full.has_value());
      if (walls) {
        EXPECT_TRUE(certifies<2>(cfg, T, *walls));
        EXPECT_TRUE(certifies<2>(cfg, T, *full));
      }
    }
  }
}

TEST(Regularity, WallsAndFullAgreeInSpace) {
  auto P = convexHull(fixtures::withNonRegular());
  auto cfg = configurationOf(P);
  int regular = 0, nonRegular = 0;
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    auto walls = isRegular<3>(cfg, T, RegularityRows::Walls);
    auto full = isRegular<3>(cfg, T, RegularityRows::Full);
    EXPECT_EQ(walls.has_value(), full.has_value());
    if (walls) {
      ++regular;
      EXPECT_TRUE(certifies<3>(cfg, T, *walls));
      EXPECT_TRUE(certifies<3>(cfg, T, *full));
    } else {
      ++nonRegular;
    }
    return true;
  });
  EXPECT_GT(regular, 0);
  EXPECT_GT(nonRegular, 0);
}

// Adding an affine function to certificate heights keeps them certifying.
TEST(Regularity, AffineShiftInvariance) {
  auto P = convexHull(fixtures::withNonRegular());
  auto cfg = configurationOf(P);
  int checked = 0;
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    auto cert = isRegular<3>(cfg, T);
    if (!cert) return true;
    HeightCertificate shifted = *cert;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      const auto& q = cfg.points[i];
      shifted.heights[i] += Rational(3, 2) * q[0] - 5 * q[1] + Rational(1, 7) * q[2] + 11;
    }
    EXPECT_TRUE(certifies<3>(cfg, T, shifted));
    return ++checked < 10;
  });
  EXPECT_GT(checked, 0);
}

TEST(RegularSubdivision, EqualHeightsGiveTheTrivialSubdivision) {
  auto P = convexHull(fixtures::octahedron());
  auto cfg = configurationOf(P);
  std::vector<Rational> h(cfg.size(), Rational(5));
  auto cells = regularSubdivision<3>(cfg, h);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].size(), cfg.size());
}

TEST(RegularSubdivision, SmoothQuarticIsUnimodular) {
  auto P = fourSimplex();
  auto cfg = configurationOf(P);
  auto cells = regularSubdivision<3>(cfg, smoothQuarticWeights(cfg.points));
  ASSERT_EQ(cells.size(), 64u);
  Triangulation<3> T;
  for (const auto& c : cells) {
    ASSERT_EQ(c.size(), 4u);
    T.simplices.push_back({c[0], c[1], c[2], c[3]});
  }
  T.normalize();
  EXPECT_TRUE(isUnimodular<3>(cfg, T));
  EXPECT_EQ(totalVolume<3>(cfg, T), 64);
  EXPECT_EQ(dualFVector(cfg, T), (FVector{64, 96, 34}));
}

TEST(RegularSubdivision, HeightCountMismatch) {
  auto cfg = configurationOf(fourSimplex());
  std::vector<Rational> h(3);
  EXPECT_THROW(regularSubdivision<3>(cfg, h), Error);
}
