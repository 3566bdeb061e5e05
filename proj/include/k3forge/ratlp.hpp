#pragma once

// Exact feasibility of mixed strict / non-strict linear systems over the
// rationals. Strict rows are handled by homogenizing the system (a cone is
// invariant under positive scaling) and then demanding slack one, which turns
// the problem into an ordinary phase-one simplex run with Bland's rule.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace k3forge {

enum class Relation { Strict, GreaterEqual };

struct StrictRow {
  std::vector<Rational> coeffs;
  Rational rhs = 0;
  Relation relation = Relation::Strict;

  bool satisfiedBy(const std::vector<Rational>& x) const {
    Rational lhs = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) lhs += coeffs[i] * x[i];
    return relation == Relation::Strict ? lhs > rhs : lhs >= rhs;
  }
};

struct StrictSystem {
  std::size_t dimension = 0;
  std::vector<StrictRow> rows;

  void add(std::vector<Rational> coeffs, Rational rhs, Relation rel) {
    if (coeffs.size() != dimension) throw Error("StrictSystem: row has wrong dimension");
    rows.push_back({std::move(coeffs), std::move(rhs), rel});
  }

  bool satisfiedBy(const std::vector<Rational>& x) const {
    for (const auto& r : rows)
      if (!r.satisfiedBy(x)) return false;
    return true;
  }
};

enum class Feasibility { Feasible, Infeasible };

struct FeasibilityResult {
  Feasibility status = Feasibility::Infeasible;
  std::optional<std::vector<Rational>> witness;

  bool feasible() const { return status == Feasibility::Feasible; }
};

namespace detail {

/// Dense phase-one tableau for  A x >= c,  x free,  c in {0, 1}.
/// Returns a feasible x or nothing.
class PhaseOneSimplex {
 public:
  PhaseOneSimplex(const std::vector<std::vector<Rational>>& A, const std::vector<int>& c)
      : m_(A.size()), n_(A.empty() ? 0 : A[0].size()) {
    // Columns: u (n), v (n), slack (m), artificial (one per row with c = 1).
    std::size_t artificials = 0;
    for (int ci : c) artificials += ci != 0;
    cols_ = 2 * n_ + m_ + artificials;
    T_.assign(m_, std::vector<Rational>(cols_ + 1));
    basis_.assign(m_, 0);
    std::size_t art = 2 * n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      int sign = c[i] == 0 ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) {
        T_[i][j] = sign * A[i][j];
        T_[i][n_ + j] = -sign * A[i][j];
      }
      T_[i][2 * n_ + i] = -sign;
      T_[i][cols_] = c[i];
      if (c[i] == 0) {
        basis_[i] = 2 * n_ + i;
      } else {
        T_[i][art] = 1;
        basis_[i] = art++;
      }
    }
    firstArtificial_ = 2 * n_ + m_;
  }

  std::optional<std::vector<Rational>> solve() {
    // Reduced costs of  min sum(artificial).
    std::vector<Rational> cost(cols_ + 1);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= firstArtificial_)
        for (std::size_t j = 0; j <= cols_; ++j) cost[j] -= T_[i][j];
    for (std::size_t j = firstArtificial_; j < cols_; ++j) cost[j] += 1;

    const std::size_t maxPivots = 50000;
    for (std::size_t iter = 0; iter < maxPivots; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter == cols_) break;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (T_[i][enter] <= 0) continue;
        Rational ratio = T_[i][cols_] / T_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) break;  // cannot happen for a bounded phase-one objective
      pivot(leave, enter, cost);
    }
    if (cost[cols_] != 0) return std::nullopt;  // -objective stays negative

    std::vector<Rational> x(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] += T_[i][cols_];
      else if (basis_[i] < 2 * n_) x[basis_[i] - n_] -= T_[i][cols_];
    }
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t e, std::vector<Rational>& cost) {
    Rational inv = 1 / T_[r][e];
    for (auto& v : T_[r])
      if (v != 0) v *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || T_[i][e] == 0) continue;
      Rational f = T_[i][e];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (T_[r][j] != 0) T_[i][j] -= f * T_[r][j];
    }
    if (cost[e] != 0) {
      Rational f = cost[e];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (T_[r][j] != 0) cost[j] -= f * T_[r][j];
    }
    basis_[r] = e;
  }

  std::size_t m_, n_, cols_ = 0, firstArtificial_ = 0;
  std::vector<std::vector<Rational>> T_;
  std::vector<std::size_t> basis_;
};

inline BigInt lcmOfDenominators(const std::vector<Rational>& v, const Rational& extra) {
  BigInt l = boost::multiprecision::denominator(extra);
  for (const auto& q : v) {
    BigInt d = boost::multiprecision::denominator(q);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

}  // namespace detail

/// Decides feasibility exactly and returns a witness satisfying every row.
inline FeasibilityResult solveStrict(const StrictSystem& sys) {
  const std::size_t n = sys.dimension;
  bool homogeneous = true;
  for (const auto& r : sys.rows) homogeneous &= r.rhs == 0;

  // Homogenize with an extra coordinate t > 0 when needed:  a.x - b t (rel) 0.
  const std::size_t dim = homogeneous ? n : n + 1;
  std::vector<std::vector<Rational>> A;
  std::vector<int> c;
  for (const auto& r : sys.rows) {
    std::vector<Rational> row(r.coeffs.begin(), r.coeffs.end());
    if (!homogeneous) row.push_back(-r.rhs);
    Rational scale(detail::lcmOfDenominators(row, Rational(0)));
    for (auto& v : row) v *= scale;
    A.push_back(std::move(row));
    c.push_back(r.relation == Relation::Strict ? 1 : 0);
  }
  if (!homogeneous) {
    std::vector<Rational> row(dim);
    row[n] = 1;
    A.push_back(std::move(row));
    c.push_back(1);
  }

  FeasibilityResult result;
  if (A.empty()) {
    result.status = Feasibility::Feasible;
    result.witness = std::vector<Rational>(n);
    return result;
  }
  auto x = detail::PhaseOneSimplex(A, c).solve();
  if (!x) return result;
  std::vector<Rational> witness(x->begin(), x->begin() + n);
  if (!homogeneous)
    for (auto& v : witness) v /= (*x)[n];
  if (!sys.satisfiedBy(witness)) throw Error("solveStrict: witness failed exact re-check");
  result.status = Feasibility::Feasible;
  result.witness = std::move(witness);
  return result;
}

}  // namespace k3forge
