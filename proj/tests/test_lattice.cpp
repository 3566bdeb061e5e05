#include <gtest/gtest.h>

#include <random>

#include "k3forge/catalog.hpp"
#include "k3forge/lattice.hpp"
#include "k3forge/simplex_masks.hpp"

using namespace k3forge;

namespace {

const LatticePoint p = kInteriorPoint;

LatticePolytope octahedron() {
  std::vector<LatticePoint> pts;
  for (int a = 0; a < 3; ++a)
    for (int s : {-1, 1}) {
      LatticePoint q = p;
      q[a] += s;
      pts.push_back(q);
    }
  return convexHull(pts);
}

LatticePolytope unitTetrahedron(std::int64_t k = 1) {
  std::vector<LatticePoint> pts{{0, 0, 0}, {k, 0, 0}, {0, k, 0}, {0, 0, k}};
  return convexHull(pts);
}

// V-rep and H-rep agree on every vertex and lattice point; vertices are
// lattice points; each facet carries at least three vertices.
void expectConsistent(const LatticePolytope& P) {
  for (const auto& v : P.vertices) {
    EXPECT_TRUE(P.contains(v));
    EXPECT_TRUE(std::binary_search(P.latticePoints.begin(), P.latticePoints.end(), v));
  }
  for (const auto& q : P.latticePoints) EXPECT_TRUE(P.contains(q));
  for (const auto& f : P.facets) {
    int on = 0;
    for (const auto& v : P.vertices) on += f.onBoundary(v);
    EXPECT_GE(on, 3);
  }
}

}  // namespace

TEST(Rational, StringRoundTrip) {
  for (const char* s : {"0/1", "3/4", "-7/2", "12345678901234567890/7"}) EXPECT_EQ(toString(parseRational(s)), s);
  EXPECT_EQ(toString(parseRational("6/8")), "3/4");
  EXPECT_EQ(toString(parseRational("5")), "5/1");
  EXPECT_THROW(parseRational("1/0"), ParseError);
  EXPECT_THROW(parseRational("x"), ParseError);
}

TEST(ConvexHull, FourSimplex) {
  auto P = fourSimplex();
  EXPECT_EQ(P.facets.size(), 4u);
  EXPECT_EQ(P.vertices.size(), 4u);
  EXPECT_EQ(latticePointCount(P), 35);
  EXPECT_EQ(normalizedVolume(P), 64);
  EXPECT_EQ(interiorLatticePoints(P), std::vector<LatticePoint>{p});
  EXPECT_TRUE(isReflexive(P));
  expectConsistent(P);
}

TEST(ConvexHull, Octahedron) {
  auto P = octahedron();
  EXPECT_EQ(P.facets.size(), 8u);
  EXPECT_EQ(latticePointCount(P), 7);
  EXPECT_EQ(normalizedVolume(P), 8);
  EXPECT_TRUE(isReflexive(P));
  expectConsistent(P);
}

TEST(ConvexHull, Tetrahedra) {
  auto T = unitTetrahedron();
  EXPECT_EQ(latticePointCount(T), 4);
  EXPECT_EQ(normalizedVolume(T), 1);
  EXPECT_TRUE(interiorLatticePoints(T).empty());
  EXPECT_THROW(isReflexive(T), NotCanonical);
  auto T2 = unitTetrahedron(2);
  EXPECT_EQ(latticePointCount(T2), 10);
  EXPECT_TRUE(interiorLatticePoints(T2).empty());
  expectConsistent(T2);
}

TEST(ConvexHull, DegenerateInput) {
  std::vector<LatticePoint> coplanar{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  EXPECT_THROW(convexHull(coplanar), DegenerateInput);
  std::vector<LatticePoint> collinear{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  EXPECT_THROW(convexHull(collinear), DegenerateInput);
}

TEST(CanonicalKey, FourSimplexIsItsOwnKey) {
  auto P = fourSimplex();
  std::vector<HomogeneousExponent> sorted;
  for (const auto& q : P.latticePoints) sorted.push_back(homogenize(q));
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(s4CanonicalKey(P).key, sorted);
}

TEST(CanonicalKey, InvariantUnderAllPermutations) {
  std::mt19937_64 rng(7);
  const auto& all = fourSimplex().latticePoints;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LatticePoint> pts;
    for (const auto& q : all)
      if (rng() % 3 == 0) pts.push_back(q);
    if (pts.empty()) continue;
    auto key = s4CanonicalKey(pts);
    for (const auto& perm : s4Permutations()) {
      std::vector<LatticePoint> image;
      for (const auto& q : pts) image.push_back(dehomogenize(permute(homogenize(q), perm)));
      EXPECT_EQ(s4CanonicalKey(image).key, key.key);
    }
  }
}

TEST(CanonicalKey, OutOfSimplex) {
  std::vector<LatticePoint> bad{{5, 0, 0}};
  EXPECT_THROW(s4CanonicalKey(bad), OutOfSimplex);
  std::vector<LatticePoint> negative{{-1, 0, 0}};
  EXPECT_THROW(s4CanonicalKey(negative), OutOfSimplex);
}

TEST(SimplexMasks, MaskRoundTripAndPolytope) {
  const auto& t = SimplexMasks::instance();
  auto oct = octahedron();
  PointMask m = t.maskOf(oct.latticePoints);
  EXPECT_EQ(std::popcount(m), 7);
  EXPECT_EQ(t.pointsOf(m), oct.latticePoints);
  auto P = t.polytope(m);
  EXPECT_EQ(P.vertices, oct.vertices);
  EXPECT_EQ(P.normalizedVolume, 8);
  // The canonical representative has the same key as every image.
  PointMask c = t.canonicalMask(m);
  for (std::size_t g = 0; g < s4Permutations().size(); ++g) EXPECT_EQ(t.canonicalMask(t.image(m, g)), c);
  EXPECT_EQ(t.canonicalMask(t.fullMask()), t.fullMask());
}

TEST(SimplexMasks, RandomHullsAgreeWithConvexHull) {
  const auto& t = SimplexMasks::instance();
  std::mt19937_64 rng(11);
  const auto& all = fourSimplex().latticePoints;
  int tested = 0;
  while (tested < 200) {
    std::vector<LatticePoint> pts;
    for (const auto& q : all)
      if (rng() % 4 == 0) pts.push_back(q);
    LatticePolytope P;
    try {
      P = convexHull(pts);
    } catch (const DegenerateInput&) {
      continue;
    }
    ++tested;
    expectConsistent(P);
    auto Q = t.polytope(t.maskOf(P.latticePoints));
    EXPECT_EQ(Q.latticePoints, P.latticePoints);
    EXPECT_EQ(Q.vertices, P.vertices);
    EXPECT_EQ(Q.normalizedVolume, P.normalizedVolume);
  }
}
