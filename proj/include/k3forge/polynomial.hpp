#pragma once

// Truncated power series in three variables with exact rational coefficients.
// Storage is dense over the monomials of degree <= kJet; products skip zero
// coefficients, so sparse germs stay cheap.

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "core.hpp"

namespace k3forge {

inline constexpr int kJet = 6;

using Exponent3 = std::array<int, 3>;

namespace detail {

struct MonomialTable {
  std::vector<Exponent3> exps;  // graded, then lexicographically descending in x
  int index[kJet + 1][kJet + 1][kJet + 1];

  MonomialTable() {
    for (auto& a : index)
      for (auto& b : a)
        for (auto& c : b) c = -1;
    for (int d = 0; d <= kJet; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          int c = d - a - b;
          index[a][b][c] = static_cast<int>(exps.size());
          exps.push_back({a, b, c});
        }
  }

  static const MonomialTable& instance() {
    static const MonomialTable table;
    return table;
  }
};

}  // namespace detail

class Poly3 {
 public:
  static int size() { return static_cast<int>(detail::MonomialTable::instance().exps.size()); }
  static const Exponent3& exponent(int i) { return detail::MonomialTable::instance().exps[i]; }
  static int indexOf(const Exponent3& e) {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] > kJet) return -1;
    return detail::MonomialTable::instance().index[e[0]][e[1]][e[2]];
  }
  static int degree(int i) {
    const auto& e = exponent(i);
    return e[0] + e[1] + e[2];
  }

  Poly3() : c_(size()) {}

  static Poly3 variable(int v) {
    Poly3 p;
    Exponent3 e{0, 0, 0};
    e[v] = 1;
    p.c_[indexOf(e)] = 1;
    return p;
  }

  static Poly3 monomial(const Exponent3& e, const Rational& coeff) {
    Poly3 p;
    int i = indexOf(e);
    if (i >= 0) p.c_[i] = coeff;
    return p;
  }

  const Rational& operator[](int i) const { return c_[i]; }
  Rational& operator[](int i) { return c_[i]; }

  Rational coeff(const Exponent3& e) const {
    int i = indexOf(e);
    return i < 0 ? Rational(0) : c_[i];
  }

  bool isZero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
  }

  /// Lowest degree with a nonzero coefficient; kJet + 1 for the zero jet.
  int order() const {
    for (int i = 0; i < size(); ++i)
      if (c_[i] != 0) return degree(i);
    return kJet + 1;
  }

  Poly3 homogeneousPart(int d) const {
    Poly3 p;
    for (int i = 0; i < size(); ++i)
      if (degree(i) == d) p.c_[i] = c_[i];
    return p;
  }

  /// Jet of order k: terms of degree <= k.
  Poly3 jet(int k) const {
    Poly3 p;
    for (int i = 0; i < size(); ++i)
      if (degree(i) <= k) p.c_[i] = c_[i];
    return p;
  }

  /// Whether only the variables flagged in `allowed` occur.
  bool onlyIn(std::array<bool, 3> allowed) const {
    for (int i = 0; i < size(); ++i) {
      if (c_[i] == 0) continue;
      const auto& e = exponent(i);
      for (int v = 0; v < 3; ++v)
        if (e[v] > 0 && !allowed[v]) return false;
    }
    return true;
  }

  Poly3& operator+=(const Poly3& o) {
    for (int i = 0; i < size(); ++i)
      if (o.c_[i] != 0) c_[i] += o.c_[i];
    return *this;
  }
  Poly3& operator-=(const Poly3& o) {
    for (int i = 0; i < size(); ++i)
      if (o.c_[i] != 0) c_[i] -= o.c_[i];
    return *this;
  }
  Poly3& operator*=(const Rational& s) {
    for (auto& q : c_)
      if (q != 0) q *= s;
    return *this;
  }

  friend Poly3 operator+(Poly3 a, const Poly3& b) { return a += b; }
  friend Poly3 operator-(Poly3 a, const Poly3& b) { return a -= b; }
  friend Poly3 operator*(Poly3 a, const Rational& s) { return a *= s; }

  friend Poly3 operator*(const Poly3& a, const Poly3& b) {
    Poly3 r;
    std::vector<int> na, nb;
    for (int i = 0; i < size(); ++i) {
      if (a.c_[i] != 0) na.push_back(i);
      if (b.c_[i] != 0) nb.push_back(i);
    }
    for (int i : na) {
      const auto& ei = exponent(i);
      for (int j : nb) {
        const auto& ej = exponent(j);
        int k = indexOf({ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]});
        if (k >= 0) r.c_[k] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  friend bool operator==(const Poly3& a, const Poly3& b) { return a.c_ == b.c_; }

  /// this(phi_0, phi_1, phi_2), truncated. The images must have no constant term.
  Poly3 compose(const std::array<Poly3, 3>& phi) const {
    for (const auto& p : phi)
      if (p[0] != 0) throw Error("Poly3::compose: substitution has a constant term");
    std::array<std::vector<Poly3>, 3> powers;
    for (int v = 0; v < 3; ++v) {
      powers[v].push_back(Poly3::monomial({0, 0, 0}, 1));
      for (int k = 1; k <= kJet; ++k) powers[v].push_back(powers[v].back() * phi[v]);
    }
    Poly3 r;
    for (int i = 0; i < size(); ++i) {
      if (c_[i] == 0) continue;
      const auto& e = exponent(i);
      Poly3 term = powers[0][e[0]] * powers[1][e[1]];
      term = term * powers[2][e[2]];
      term *= c_[i];
      r += term;
    }
    return r;
  }

  std::string str() const {
    static const char* names = "xyz";
    std::string s;
    for (int i = 0; i < size(); ++i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += "(" + toString(c_[i]) + ")";
      const auto& e = exponent(i);
      for (int v = 0; v < 3; ++v)
        if (e[v] > 0) s += std::string(1, names[v]) + (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<Rational> c_;
};

/// A polynomial coordinate change x -> phi(x) fixing the origin.
struct Substitution {
  std::array<Poly3, 3> images;
  std::string label;

  static Substitution identity(std::string label = "identity") {
    return {{Poly3::variable(0), Poly3::variable(1), Poly3::variable(2)}, std::move(label)};
  }

  /// Linear part as a matrix: row v holds the coefficients of phi_v.
  std::array<std::array<Rational, 3>, 3> linearPart() const {
    std::array<std::array<Rational, 3>, 3> m;
    for (int v = 0; v < 3; ++v)
      for (int w = 0; w < 3; ++w) {
        Exponent3 e{0, 0, 0};
        e[w] = 1;
        m[v][w] = images[v].coeff(e);
      }
    return m;
  }

  /// Inverse modulo terms of degree > kJet. Solves psi = L^{-1}(v - N(psi))
  /// by fixed-point iteration; each pass fixes one more degree.
  Substitution inverse() const {
    auto L = linearPart();
    Rational det = L[0][0] * (L[1][1] * L[2][2] - L[1][2] * L[2][1]) -
                   L[0][1] * (L[1][0] * L[2][2] - L[1][2] * L[2][0]) +
                   L[0][2] * (L[1][0] * L[2][1] - L[1][1] * L[2][0]);
    if (det == 0) throw Error("Substitution::inverse: linear part is singular");
    std::array<std::array<Rational, 3>, 3> inv;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        inv[i][j] = (L[i1][j1] * L[i2][j2] - L[i1][j2] * L[i2][j1]) / det;
      }
    std::array<Poly3, 3> nonlinear;
    for (int v = 0; v < 3; ++v) {
      nonlinear[v] = images[v];
      for (int i = 0; i < Poly3::size(); ++i)
        if (Poly3::degree(i) == 1) nonlinear[v][i] = 0;
    }
    auto applyInv = [&](const std::array<Poly3, 3>& rhs) {
      std::array<Poly3, 3> out;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (inv[i][j] != 0) out[i] += rhs[j] * inv[i][j];
      return out;
    };
    std::array<Poly3, 3> vars{Poly3::variable(0), Poly3::variable(1), Poly3::variable(2)};
    std::array<Poly3, 3> psi = applyInv(vars);
    for (int pass = 1; pass < kJet; ++pass) {
      std::array<Poly3, 3> rhs;
      for (int v = 0; v < 3; ++v) rhs[v] = vars[v] - nonlinear[v].compose(psi);
      psi = applyInv(rhs);
    }
    return {psi, "inverse of " + label};
  }

  /// (this o other)(x) = this(other(x)).
  Substitution after(const Substitution& other) const {
    Substitution r;
    for (int v = 0; v < 3; ++v) r.images[v] = images[v].compose(other.images);
    r.label = label + " after " + other.label;
    return r;
  }
};

}  // namespace k3forge
