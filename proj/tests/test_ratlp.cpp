#include <gtest/gtest.h>

#include <random>

#include "k3forge/ratlp.hpp"

using namespace k3forge;

namespace {

std::vector<Rational> row(std::initializer_list<int> xs) {
  std::vector<Rational> r;
  for (int x : xs) r.emplace_back(x);
  return r;
}

Rational randomRational(std::mt19937_64& rng, int range = 9) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 5);
  return Rational(num(rng), den(rng));
}

}  // namespace

TEST(SolveStrict, SingleStrictRow) {
  StrictSystem s{1, {}};
  s.add(row({1}), 0, Relation::Strict);
  auto r = solveStrict(s);
  ASSERT_TRUE(r.feasible());
  EXPECT_GT((*r.witness)[0], 0);
  EXPECT_TRUE(s.satisfiedBy(*r.witness));
}

TEST(SolveStrict, StrictAgainstWeak) {
  StrictSystem s{1, {}};
  s.add(row({1}), 0, Relation::Strict);
  s.add(row({-1}), 0, Relation::GreaterEqual);
  EXPECT_FALSE(solveStrict(s).feasible());
}

TEST(SolveStrict, EqualityThroughTwoWeakRows) {
  StrictSystem s{2, {}};
  s.add(row({1, 1}), 3, Relation::GreaterEqual);
  s.add(row({-1, -1}), -3, Relation::GreaterEqual);
  s.add(row({1, -1}), 0, Relation::Strict);
  auto r = solveStrict(s);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ((*r.witness)[0] + (*r.witness)[1], 3);
}

TEST(SolveStrict, EmptySystemIsFeasible) {
  StrictSystem s{3, {}};
  EXPECT_TRUE(solveStrict(s).feasible());
}

TEST(SolveStrict, WrongDimensionRejected) {
  StrictSystem s{2, {}};
  EXPECT_THROW(s.add(row({1}), 0, Relation::Strict), Error);
}

// Rows built around a hidden interior point are feasible; adding the reverse
// of a strict row makes them infeasible. Positive rescaling never changes the
// answer.
TEST(SolveStrict, RandomPlantedSystems) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4;
    std::vector<Rational> x0(n);
    for (auto& v : x0) v = randomRational(rng);
    StrictSystem s{n, {}};
    std::size_t m = 1 + rng() % 8;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<Rational> a(n);
      Rational ax = 0;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = randomRational(rng);
        ax += a[i] * x0[i];
      }
      bool strict = rng() % 2;
      Rational slack = strict ? Rational(1 + rng() % 3, 2) : Rational(rng() % 2);
      s.add(a, ax - slack, strict ? Relation::Strict : Relation::GreaterEqual);
    }
    auto r = solveStrict(s);
    ASSERT_TRUE(r.feasible());
    EXPECT_TRUE(s.satisfiedBy(*r.witness));

    StrictSystem scaled = s;
    for (auto& rw : scaled.rows) {
      Rational f(1 + rng() % 7, 1 + rng() % 5);
      for (auto& a : rw.coeffs) a *= f;
      rw.rhs *= f;
    }
    EXPECT_TRUE(solveStrict(scaled).feasible());

    // a.x > b together with a.x <= b.
    StrictSystem broken = s;
    const auto& first = s.rows.front();
    std::vector<Rational> neg;
    for (const auto& a : first.coeffs) neg.push_back(-a);
    bool zeroRow = std::all_of(first.coeffs.begin(), first.coeffs.end(), [](const Rational& a) { return a == 0; });
    broken.rows.front().relation = Relation::Strict;
    broken.add(neg, -first.rhs, Relation::GreaterEqual);
    if (!zeroRow) EXPECT_FALSE(solveStrict(broken).feasible());
  }
}

TEST(SolveStrict, HomogeneousConeWitnessScales) {
  // x > y > z > 0: the cone is open; any positive multiple stays inside.
  StrictSystem s{3, {}};
  s.add(row({1, -1, 0}), 0, Relation::Strict);
  s.add(row({0, 1, -1}), 0, Relation::Strict);
  s.add(row({0, 0, 1}), 0, Relation::Strict);
  auto r = solveStrict(s);
  ASSERT_TRUE(r.feasible());
  auto w = *r.witness;
  for (auto& v : w) v *= Rational(7, 3);
  EXPECT_TRUE(s.satisfiedBy(w));
}
