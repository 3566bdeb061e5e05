// Catalog properties over the full enumeration (computed once per binary).

#include <gtest/gtest.h>

#include <random>

#include "k3forge/adeclass.hpp"
#include "k3forge/catalog.hpp"
#include "k3forge/triangulate.hpp"

using namespace k3forge;

namespace {

Catalog& catalog() {
  static Catalog cat = [] {
    Catalog c = enumerateCanonical(2);
    markMinimal(c);
    assignWitnesses(c);
    return c;
  }();
  return cat;
}

PointMask octahedronMask() {
  std::vector<LatticePoint> pts{{1, 1, 1}, {0, 1, 1}, {2, 1, 1}, {1, 0, 1}, {1, 2, 1}, {1, 1, 0}, {1, 1, 2}};
  return SimplexMasks::instance().canonicalMask(SimplexMasks::instance().maskOf(pts));
}

}  // namespace

TEST(Catalog, Counts) {
  const auto& cat = catalog();
  EXPECT_EQ(cat.size(), 356461u);
  EXPECT_EQ(filterReflexive(cat).size(), 15139u);
  int minimal = 0;
  for (const auto& e : cat.entries()) minimal += e.minimal.value_or(false);
  EXPECT_EQ(minimal, 115);
}

TEST(Catalog, IdsArePositionsAndOrderIsVolumeThenKey) {
  const auto& es = catalog().entries();
  for (std::size_t i = 0; i < es.size(); ++i) {
    ASSERT_EQ(es[i].id, static_cast<int>(i));
    if (i > 0) {
      ASSERT_LE(es[i - 1].volume, es[i].volume);
      if (es[i - 1].volume == es[i].volume) ASSERT_TRUE(keyLess(es[i - 1].mask, es[i].mask));
    }
  }
}

TEST(Catalog, EnumerationIndependentOfWorkers) {
  Catalog serial = enumerateCanonical(1);
  const auto& a = serial.entries();
  const auto& b = catalog().entries();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].mask, b[i].mask);
}

TEST(Catalog, ClosedUnderCanonicalTrims) {
  std::vector<std::uint32_t> scratch;
  std::vector<PointMask> trims;
  for (const auto& e : catalog().entries()) {
    canonicalTrims(e.mask, scratch, trims);
    for (auto c : trims) ASSERT_NE(catalog().find(c), nullptr);
  }
}

TEST(Catalog, EntriesAreCanonicalRepresentatives) {
  const auto& t = SimplexMasks::instance();
  for (const auto& e : catalog().entries()) {
    ASSERT_EQ(t.canonicalMask(e.mask), e.mask);
    ASSERT_TRUE(t.interiorContainsCenter(e.mask));
  }
}

TEST(Catalog, KeyInvariantOnSampledEntries) {
  std::mt19937_64 rng(3);
  const auto& es = catalog().entries();
  for (int trial = 0; trial < 100; ++trial) {
    const auto& e = es[rng() % es.size()];
    auto key = e.key();
    auto pts = e.points();
    for (const auto& perm : s4Permutations()) {
      std::vector<LatticePoint> image;
      for (const auto& q : pts) image.push_back(dehomogenize(permute(homogenize(q), perm)));
      EXPECT_EQ(s4CanonicalKey(image), key);
    }
  }
}

TEST(Catalog, ReflexiveLatticePointIdentity) {
  for (const auto& e : catalog().entries())
    if (e.reflexive) ASSERT_EQ(e.latticePointCount(), e.volume / 2 + 3) << e.id;
}

TEST(Catalog, ReflexiveFlagMatchesLatticeDistance) {
  std::mt19937_64 rng(5);
  const auto& es = catalog().entries();
  for (int trial = 0; trial < 2000; ++trial) {
    const auto& e = es[rng() % es.size()];
    EXPECT_EQ(isReflexive(e.polytope()), e.reflexive);
  }
}

TEST(Catalog, CanonicalNonReflexiveWitness) {
  const CatalogEntry* witness = nullptr;
  for (const auto& e : catalog().entries())
    if (!e.reflexive) {
      witness = &e;
      break;
    }
  ASSERT_NE(witness, nullptr);
  auto P = witness->polytope();
  EXPECT_EQ(interiorLatticePoints(P).size(), 1u);
  EXPECT_FALSE(isReflexive(P));
}

TEST(Minimality, Examples) {
  const auto& cat = catalog();
  const CatalogEntry* oct = cat.find(octahedronMask());
  ASSERT_NE(oct, nullptr);
  EXPECT_TRUE(oct->minimal.value());
  EXPECT_TRUE(isMinimalReflexive(oct->mask));
  EXPECT_EQ(minimalWitness(cat, oct->mask).id, oct->id);

  PointMask full = SimplexMasks::instance().fullMask();
  EXPECT_FALSE(isMinimalReflexive(full));
  const auto& w = minimalWitness(cat, full);
  EXPECT_LE(w.latticePointCount(), 9);
}

TEST(Minimality, TrimSearchAgreesWithContainment) {
  std::vector<int> byTrims;
  for (const auto& e : catalog().entries())
    if (e.minimal.value_or(false)) byTrims.push_back(e.id);
  EXPECT_EQ(minimalIdsByContainment(catalog()), byTrims);
}

TEST(Minimality, MinimalEntriesHaveNoReflexiveDescendant) {
  for (const auto& e : catalog().entries()) {
    if (!e.minimal.value_or(false)) continue;
    EXPECT_FALSE(hasReflexiveProperDescendant(e.mask));
    EXPECT_TRUE(isMinimalReflexive(e.mask));
  }
}

TEST(Minimality, EveryReflexiveEntryHasAContainedMinimalWitness) {
  const auto& cat = catalog();
  const auto& t = SimplexMasks::instance();
  for (const auto& e : cat.entries()) {
    if (!e.reflexive) {
      EXPECT_FALSE(e.minimalWitnessId.has_value());
      continue;
    }
    ASSERT_TRUE(e.minimalWitnessId.has_value()) << e.id;
    const auto& w = cat.entries()[*e.minimalWitnessId];
    ASSERT_TRUE(w.minimal.value());
    bool inside = false;
    for (std::size_t g = 0; g < s4Permutations().size() && !inside; ++g)
      inside = (t.image(w.mask, g) & ~e.mask) == 0;
    ASSERT_TRUE(inside) << e.id;
    if (e.minimal.value()) EXPECT_EQ(w.id, e.id);
  }
}

TEST(Minimality, NonReflexiveHasNoWitness) {
  for (const auto& e : catalog().entries())
    if (!e.reflexive) {
      EXPECT_THROW(minimalWitness(catalog(), e.mask), NotCanonical);
      break;
    }
}

// (1,1,1) interior to conv(S) iff every plane through it has monomials of S
// strictly on both sides; checked on catalog supports and on random subsets.
TEST(Mumford, FixedCoordinateEquivalence) {
  std::mt19937_64 rng(9);
  const auto& es = catalog().entries();
  for (int trial = 0; trial < 100; ++trial) {
    const auto& e = es[rng() % es.size()];
    EXPECT_TRUE(halfspacesAllOccupied(e.points()));
  }
  const auto& all = fourSimplex().latticePoints;
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LatticePoint> pts;
    int keep = 6 + static_cast<int>(rng() % 15);
    for (const auto& q : all)
      if (static_cast<int>(rng() % 35) < keep && q != kInteriorPoint) pts.push_back(q);
    bool interior = false;
    try {
      interior = convexHull(pts).containsStrictly(kInteriorPoint);
    } catch (const DegenerateInput&) {
      interior = false;
    }
    EXPECT_EQ(halfspacesAllOccupied(pts), interior);
    (interior ? positives : negatives)++;
  }
  EXPECT_GT(positives, 0);
  EXPECT_GT(negatives, 0);
}

TEST(Unimodularity, NonReflexiveEntryHasNonUnimodularCentralTriangulation) {
  int checked = 0;
  for (const auto& e : catalog().entries()) {
    if (e.reflexive || e.latticePointCount() > 10) continue;
    auto P = e.polytope();
    auto cfg = configurationOf(P);
    bool bad = false;
    centralTriangulations(P, [&](const CentralTriangulation& T) {
      bad = !isUnimodular<3>(cfg, T);
      return !bad;
    });
    EXPECT_TRUE(bad) << e.id;
    if (++checked == 200) break;
  }
  EXPECT_EQ(checked, 200);
}
