#pragma once

// Singularities of generic quartic surfaces with a prescribed Newton
// polytope: coordinate-point multiplicities, reduction of the local germ to
// an ADE normal form by explicit coordinate changes, base-locus checks, and
// the resulting GIT stability verdicts.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "polynomial.hpp"

namespace k3forge {

// ---------------------------------------------------------------------------
// Supports and generic coefficients

struct QuarticSupport {
  std::vector<HomogeneousExponent> monomials;  // sorted

  static QuarticSupport of(std::span<const LatticePoint> points) {
    QuarticSupport s;
    for (const auto& q : points) {
      if (!insideSimplex(q)) throw OutOfSimplex("QuarticSupport: point outside 4*Delta_3");
      s.monomials.push_back(homogenize(q));
    }
    std::sort(s.monomials.begin(), s.monomials.end());
    return s;
  }
};

struct CoordinatePoint {
  int point = 0;         // index of the nonzero homogeneous coordinate
  int multiplicity = 0;  // generic order of vanishing
};

/// Coordinate points where the generic member vanishes to order >= 2.
inline std::vector<CoordinatePoint> singularCoordinatePoints(const QuarticSupport& S) {
  std::vector<CoordinatePoint> out;
  for (int u = 0; u < 4; ++u) {
    int order = kDegree;
    for (const auto& m : S.monomials) order = std::min(order, kDegree - m[u]);
    if (order >= 2) out.push_back({u, order});
  }
  return out;
}

/// Nonzero rationals with numerator and denominator up to 10^6, determined by
/// the seed.
inline std::vector<Rational> sampleGenericCoefficients(const QuarticSupport& S, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> num(-1000000, 1000000), den(1, 1000000);
  std::vector<Rational> c;
  for (std::size_t i = 0; i < S.monomials.size(); ++i) {
    std::int64_t n = 0;
    while (n == 0) n = num(rng);
    c.emplace_back(BigInt(n), BigInt(den(rng)));
  }
  return c;
}

/// Local germ at a coordinate point: that variable is set to one and the
/// other three, in their original order, become x, y, z.
inline Poly3 dehomogenize(const QuarticSupport& S, std::span<const Rational> coeffs, int point) {
  Poly3 g;
  for (std::size_t i = 0; i < S.monomials.size(); ++i) {
    Exponent3 e{};
    for (int v = 0, k = 0; v < 4; ++v)
      if (v != point) e[k++] = S.monomials[i][v];
    g += Poly3::monomial(e, coeffs[i]);
  }
  return g;
}

// ---------------------------------------------------------------------------
// ADE types

struct AdeType {
  char family = 'U';  // 'A', 'D', 'E', or 'U' for unclassified
  int index = 0;

  static AdeType unclassified() { return {}; }
  bool classified() const { return family != 'U'; }
  std::string str() const { return classified() ? family + std::to_string(index) : "Unclassified"; }
  friend auto operator<=>(const AdeType&, const AdeType&) = default;
};

inline AdeType parseAdeType(const std::string& s) {
  if (s == "Unclassified") return AdeType::unclassified();
  if (s.size() < 2 || (s[0] != 'A' && s[0] != 'D' && s[0] != 'E'))
    throw ParseError("bad ADE type: " + s);
  return {s[0], std::stoi(s.substr(1))};
}

struct GermReduction {
  int rank = 0;
  AdeType type;
  Poly3 original;
  Poly3 reduced;                      // original composed with every step
  std::vector<Substitution> steps;    // in application order
  std::vector<std::string> trace;     // steps and consumed nonvanishing conditions
  bool beyondJet = false;             // A_k read from the critical curve, k + 1 > kJet
};

namespace detail {

inline void applyStep(GermReduction& r, Substitution s) {
  r.reduced = r.reduced.compose(s.images);
  r.trace.push_back(s.label);
  r.steps.push_back(std::move(s));
}

inline Rational quadCoeff(const Poly3& g, int i, int j) {
  Exponent3 e{0, 0, 0};
  e[i]++;
  e[j]++;
  return i == j ? g.coeff(e) : g.coeff(e) / 2;
}

inline std::string varName(int v) { return std::string(1, "xyz"[v]); }

inline Substitution swapVariables(int i, int j) {
  auto s = Substitution::identity("swap " + varName(i) + " " + varName(j));
  std::swap(s.images[i], s.images[j]);
  return s;
}

}  // namespace detail

/// Rank of the quadratic part of a germ of order >= 2.
inline int hessianRank2Jet(const Poly3& g) {
  std::array<std::array<Rational, 3>, 3> Q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Q[i][j] = detail::quadCoeff(g, i, j);
  int rank = 0;
  for (int col = 0, row = 0; col < 3 && row < 3; ++col) {
    int piv = -1;
    for (int r = row; r < 3; ++r)
      if (Q[r][col] != 0) piv = r;
    if (piv < 0) continue;
    std::swap(Q[row], Q[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == row || Q[r][col] == 0) continue;
      Rational f = Q[r][col] / Q[row][col];
      for (int c = 0; c < 3; ++c) Q[r][c] -= f * Q[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

/// Congruence-diagonalizes the quadratic part in place: afterwards it reads
/// d_0 x^2 + ... + d_{k-1} x_{k-1}^2 with nonzero units d_i. Returns k.
inline int diagonalizeQuadraticPart(GermReduction& r) {
  using detail::quadCoeff;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    int piv = -1;
    for (int j = i; j < 3 && piv < 0; ++j)
      if (quadCoeff(r.reduced, j, j) != 0) piv = j;
    if (piv < 0) {
      // Only mixed terms remain: x_a -> x_a + x_b turns c x_a x_b into a
      // c x_b^2 term.
      for (int a = i; a < 3 && piv < 0; ++a)
        for (int b = a + 1; b < 3 && piv < 0; ++b)
          if (quadCoeff(r.reduced, a, b) != 0) {
            auto s = Substitution::identity("shear " + detail::varName(a) + " += " + detail::varName(b));
            s.images[a] += Poly3::variable(b);
            detail::applyStep(r, std::move(s));
            piv = b;
          }
    }
    if (piv < 0) break;
    if (piv != i) detail::applyStep(r, detail::swapVariables(i, piv));
    Rational d = quadCoeff(r.reduced, i, i);
    r.trace.push_back("pivot " + detail::varName(i) + "^2 coefficient " + toString(d) + " != 0");
    auto s = Substitution::identity("complete square in " + detail::varName(i));
    bool any = false;
    for (int j = i + 1; j < 3; ++j) {
      Rational q = quadCoeff(r.reduced, i, j);
      if (q == 0) continue;
      s.images[i] -= Poly3::variable(j) * (q / d);
      any = true;
    }
    if (any) detail::applyStep(r, std::move(s));
    ++k;
  }
  return k;
}

/// Splitting-lemma iteration for the first k (square) variables: substitutes
/// x_i -> x_i - g_i / (2 d_i) until no term mixes a square variable with
/// anything else, up to `jetOrder`.
inline void splitReduce(GermReduction& r, int k, int jetOrder = kJet) {
  for (int pass = 0;; ++pass) {
    std::array<Poly3, 3> g;
    bool mixed = false;
    for (int i = 0; i < Poly3::size(); ++i) {
      const Rational& c = r.reduced[i];
      if (c == 0 || Poly3::degree(i) > jetOrder) continue;
      const auto& e = Poly3::exponent(i);
      int owner = -1;
      for (int v = 0; v < k && owner < 0; ++v)
        if (e[v] > 0) owner = v;
      if (owner < 0) continue;
      if (e[owner] == 2 && Poly3::degree(i) == 2) continue;  // the square itself
      Exponent3 rest = e;
      rest[owner]--;
      g[owner] += Poly3::monomial(rest, c);
      mixed = true;
    }
    if (!mixed) return;
    if (pass >= jetOrder) throw NonTermination("splitReduce: mixed terms persist");
    auto s = Substitution::identity("split pass " + std::to_string(pass + 1));
    for (int v = 0; v < k; ++v) {
      Exponent3 sq{0, 0, 0};
      sq[v] = 2;
      Rational d = r.reduced.coeff(sq);
      s.images[v] -= g[v] * (Rational(1) / (2 * d));
    }
    detail::applyStep(r, std::move(s));
  }
}

/// Convenience form used on bare germs: diagonalized input assumed.
inline Poly3 splitReduce(const Poly3& g, int jetOrder = kJet) {
  GermReduction r;
  r.original = r.reduced = g;
  int k = 0;
  for (int v = 0; v < 3; ++v) {
    Exponent3 sq{0, 0, 0};
    sq[v] = 2;
    if (g.coeff(sq) != 0 && k == v) ++k;
  }
  splitReduce(r, k, jetOrder);
  return r.reduced.jet(jetOrder);
}

namespace detail {

inline Rational cubicDiscriminant(const Rational& a, const Rational& b, const Rational& c,
                                  const Rational& d) {
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d +
         18 * a * b * c * d;
}

inline Rational yz(const Poly3& g, int a, int b) { return g.coeff({0, a, b}); }

/// Residual of order j in z alone (rank two).
inline AdeType classifyCorank1(GermReduction& r) {
  for (int j = 3; j <= kJet; ++j) {
    Rational c = r.reduced.coeff({0, 0, j});
    if (c != 0) {
      r.trace.push_back("residual z^" + std::to_string(j) + " coefficient " + toString(c) + " != 0");
      return {'A', j - 1};
    }
  }
  r.trace.push_back("residual vanishes through the jet bound");
  return AdeType::unclassified();
}

// Univariate power series in z, truncated after z^N.
using Series = std::vector<Rational>;

inline Series seriesMul(const Series& a, const Series& b) {
  Series c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < a.size(); ++j)
      if (b[j] != 0) c[i + j] += a[i] * b[j];
  }
  return c;
}

inline Poly3 partial(const Poly3& f, int v) {
  Poly3 d;
  for (int i = 0; i < Poly3::size(); ++i) {
    if (f[i] == 0) continue;
    Exponent3 e = Poly3::exponent(i);
    if (e[v] == 0) continue;
    Rational c = f[i] * e[v];
    --e[v];
    d += Poly3::monomial(e, c);
  }
  return d;
}

/// f(x(z), y(z), z) as a series.
inline Series evaluateOnCurve(const Poly3& f, const Series& x, const Series& y) {
  const std::size_t n = x.size();
  auto powers = [&](const Series& s) {
    std::vector<Series> p{Series(n)};
    p[0][0] = 1;
    for (int k = 1; k <= kJet; ++k) p.push_back(seriesMul(p.back(), s));
    return p;
  };
  auto px = powers(x), py = powers(y);
  Series out(n);
  for (int i = 0; i < Poly3::size(); ++i) {
    if (f[i] == 0) continue;
    const auto& e = Poly3::exponent(i);
    Series term = seriesMul(px[e[0]], py[e[1]]);
    for (std::size_t k = 0; k + e[2] < n; ++k) out[k + e[2]] += f[i] * term[k];
  }
  return out;
}

}  // namespace detail

/// Order bound for the rank-two residual computed along the critical curve.
inline constexpr int kCurveOrder = 24;

/// Rank-two residual h(z) = f(x(z), y(z), z), where (x(z), y(z)) solves
/// f_x = f_y = 0. `f` must be an exact polynomial whose quadratic part is
/// d_0 x^2 + d_1 y^2; the splitting lemma gives f ~ d_0 x^2 + d_1 y^2 + h(z).
/// Returned with coefficients of z^0 .. z^kCurveOrder.
inline std::vector<Rational> criticalCurveResidual(const Poly3& f) {
  const std::size_t n = kCurveOrder + 1;
  Rational d0 = f.coeff({2, 0, 0}), d1 = f.coeff({0, 2, 0});
  if (d0 == 0 || d1 == 0) throw Error("criticalCurveResidual: quadratic part is not diagonal of rank two");
  Poly3 fx = detail::partial(f, 0), fy = detail::partial(f, 1);
  detail::Series x(n), y(n);
  // Each pass fixes at least one more order of x and y.
  for (std::size_t pass = 0; pass < n; ++pass) {
    auto gx = detail::evaluateOnCurve(fx, x, y), gy = detail::evaluateOnCurve(fy, x, y);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] -= gx[k] / (2 * d0);
      y[k] -= gy[k] / (2 * d1);
    }
  }
  return detail::evaluateOnCurve(f, x, y);
}

namespace detail {

/// Rank two with the residual vanishing through the jet: read the order off
/// the critical-curve series instead.
inline AdeType classifyCorank1BeyondJet(GermReduction& r, const Poly3& diagonal) {
  auto h = criticalCurveResidual(diagonal);
  for (int j = 3; j <= kCurveOrder; ++j)
    if (h[j] != 0) {
      r.trace.push_back("critical-curve residual z^" + std::to_string(j) + " coefficient " +
                        toString(h[j]) + " != 0");
      r.beyondJet = true;
      return {'A', j - 1};
    }
  r.trace.push_back("critical-curve residual vanishes through z^" + std::to_string(kCurveOrder));
  return AdeType::unclassified();
}

/// Removes every degree-d term divisible by y^2 via z -> z - h / c, where the
/// leading cubic is c y^2 z.
inline void absorbIntoZ(GermReduction& r, int d, const Rational& c) {
  Poly3 h;
  for (int a = 2; a <= d; ++a) {
    Rational q = yz(r.reduced, a, d - a);
    if (q != 0) h += Poly3::monomial({0, a - 2, d - a}, q);
  }
  if (h.isZero()) return;
  auto s = Substitution::identity("absorb degree-" + std::to_string(d) + " y^2 terms into z");
  s.images[2] -= h * (Rational(1) / c);
  applyStep(r, std::move(s));
}

/// Removes every degree-d term divisible by y^2 via y -> y - h / (3c), where
/// the leading cubic is c y^3.
inline void absorbIntoY(GermReduction& r, int d, const Rational& c) {
  Poly3 h;
  for (int a = 2; a <= d; ++a) {
    Rational q = yz(r.reduced, a, d - a);
    if (q != 0) h += Poly3::monomial({0, a - 2, d - a}, q);
  }
  if (h.isZero()) return;
  auto s = Substitution::identity("absorb degree-" + std::to_string(d) + " y^2 terms into y");
  s.images[1] -= h * (Rational(1) / (3 * c));
  applyStep(r, std::move(s));
}

/// Double-root cubic: normalized to c y^2 z, then D_k is read off the first
/// surviving pure z power after Tschirnhaus steps y -> y - e z^{d-2}.
inline AdeType classifyDoubleRoot(GermReduction& r) {
  const Rational c = yz(r.reduced, 2, 1);
  for (int d = 4; d <= kJet; ++d) {
    absorbIntoZ(r, d, c);
    Rational e = yz(r.reduced, 1, d - 1);
    if (e != 0) {
      auto s = Substitution::identity("Tschirnhaus y -> y - e z^" + std::to_string(d - 2));
      s.images[1] -= Poly3::monomial({0, 0, d - 2}, e / (2 * c));
      applyStep(r, std::move(s));
    }
    Rational alpha = yz(r.reduced, 0, d);
    if (alpha != 0) {
      r.trace.push_back("z^" + std::to_string(d) + " coefficient " + toString(alpha) + " != 0");
      return {'D', d + 1};
    }
  }
  r.trace.push_back("no pure z power through the jet bound");
  return AdeType::unclassified();
}

/// Triple-root cubic normalized to c y^3: E6 if z^4 survives, E7 if y z^3
/// does, E8 if z^5 does.
inline AdeType classifyTripleRoot(GermReduction& r) {
  const Rational c = yz(r.reduced, 3, 0);
  absorbIntoY(r, 4, c);
  Rational alpha = yz(r.reduced, 0, 4), beta = yz(r.reduced, 1, 3);
  if (alpha != 0) {
    r.trace.push_back("z^4 coefficient " + toString(alpha) + " != 0");
    return {'E', 6};
  }
  if (beta != 0) {
    r.trace.push_back("z^4 absent; y z^3 coefficient " + toString(beta) + " != 0");
    return {'E', 7};
  }
  absorbIntoY(r, 5, c);
  Rational gamma = yz(r.reduced, 0, 5);
  if (gamma != 0) {
    r.trace.push_back("z^4, y z^3 absent; z^5 coefficient " + toString(gamma) + " != 0");
    return {'E', 8};
  }
  r.trace.push_back("cubic y^3 with no z^4, y z^3, z^5");
  return AdeType::unclassified();
}

/// Rank one: the binary cubic in (y, z) decides between D4, the double-root
/// D series and the triple-root E series.
inline AdeType classifyCorank2(GermReduction& r) {
  Rational a = yz(r.reduced, 3, 0), b = yz(r.reduced, 2, 1), c = yz(r.reduced, 1, 2),
           d = yz(r.reduced, 0, 3);
  if (a == 0 && b == 0 && c == 0 && d == 0) {
    r.trace.push_back("cubic part vanishes");
    return AdeType::unclassified();
  }
  Rational disc = cubicDiscriminant(a, b, c, d);
  if (disc != 0) {
    r.trace.push_back("cubic discriminant " + toString(disc) + " != 0");
    return {'D', 4};
  }
  // Hessian covariant, proportional to the square of the repeated factor.
  Rational A = 3 * a * c - b * b, B = 9 * a * d - b * c, C = 3 * b * d - c * c;
  if (A != 0 || B != 0 || C != 0) {
    // cubic = l1^2 l2 with l1 = p y + q z, l2 = u y + v z.
    Rational p, q, u, v;
    if (A != 0) {
      p = 2 * A;
      q = B;
    } else {
      p = 0;
      q = 1;
    }
    if (p != 0) {
      u = a / (p * p);
      v = (b - 2 * p * q * u) / (p * p);
    } else {
      u = c / (q * q);
      v = d / (q * q);
    }
    Rational det = p * v - q * u;
    if (det == 0) throw Error("classifyCorank2: repeated factor is not simple");
    auto s = Substitution::identity("normalize cubic to y^2 z");
    s.images[1] = Poly3::variable(1) * (v / det) - Poly3::variable(2) * (q / det);
    s.images[2] = Poly3::variable(2) * (p / det) - Poly3::variable(1) * (u / det);
    applyStep(r, std::move(s));
    r.trace.push_back("cubic discriminant 0, Hessian covariant nonzero: double root");
    return classifyDoubleRoot(r);
  }
  if (a != 0) {
    Rational t = b / (3 * a);
    auto s = Substitution::identity("normalize cubic to y^3");
    s.images[1] = Poly3::variable(1) - Poly3::variable(2) * t;
    applyStep(r, std::move(s));
  } else {
    applyStep(r, swapVariables(1, 2));
  }
  r.trace.push_back("cubic is a cube of a linear form");
  return classifyTripleRoot(r);
}

/// Quasi-homogeneous weights of the normal form and its principal monomials.
struct NormalForm {
  std::array<Rational, 3> weights;
  std::vector<Exponent3> monomials;
};

inline std::optional<NormalForm> normalFormOf(const AdeType& t) {
  Rational h(1, 2);
  switch (t.family) {
    case 'A':
      return NormalForm{{h, h, Rational(1, t.index + 1)}, {{2, 0, 0}, {0, 2, 0}, {0, 0, t.index + 1}}};
    case 'D':
      return NormalForm{{h, Rational(t.index - 2, 2 * (t.index - 1)), Rational(1, t.index - 1)},
                        {{2, 0, 0}, {0, 2, 1}, {0, 0, t.index - 1}}};
    case 'E':
      if (t.index == 6) return NormalForm{{h, Rational(1, 3), Rational(1, 4)}, {{2, 0, 0}, {0, 3, 0}, {0, 0, 4}}};
      if (t.index == 7) return NormalForm{{h, Rational(1, 3), Rational(2, 9)}, {{2, 0, 0}, {0, 3, 0}, {0, 1, 3}}};
      if (t.index == 8) return NormalForm{{h, Rational(1, 3), Rational(1, 5)}, {{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}};
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace detail

/// Whether the reduced jet is semi-quasihomogeneous with the principal part of
/// the type's normal form (unit coefficients allowed). Every omitted term of
/// degree > kJet has weighted degree > 1 for the types reachable here.
inline bool matchesNormalForm(const Poly3& g, const AdeType& t) {
  auto nf = detail::normalFormOf(t);
  if (!nf) return false;
  const bool d4 = t.family == 'D' && t.index == 4;
  Rational minWeight = std::min({nf->weights[0], nf->weights[1], nf->weights[2]});
  if (minWeight * (kJet + 1) <= 1) return false;  // truncation would hide principal terms
  for (int i = 0; i < Poly3::size(); ++i) {
    const auto& e = Poly3::exponent(i);
    Rational w = nf->weights[0] * e[0] + nf->weights[1] * e[1] + nf->weights[2] * e[2];
    bool principal =
        std::find(nf->monomials.begin(), nf->monomials.end(), e) != nf->monomials.end();
    if (d4 && e[0] == 0 && e[1] + e[2] == 3) continue;  // any binary cubic, checked below
    if (principal && g[i] == 0) return false;
    if (!principal && w <= 1 && g[i] != 0) return false;
  }
  if (d4) {
    using detail::yz;
    return detail::cubicDiscriminant(yz(g, 3, 0), yz(g, 2, 1), yz(g, 1, 2), yz(g, 0, 3)) != 0;
  }
  return true;
}

/// Full reduction of one germ of order two.
inline GermReduction reduceGerm(const Poly3& g) {
  GermReduction r;
  r.original = r.reduced = g;
  if (g.order() < 2) throw Error("reduceGerm: germ is not singular at the origin");
  if (g.order() > 2) {
    r.trace.push_back("quadratic part vanishes");
    throw RankZero("reduceGerm: Hessian has rank zero");
  }
  r.rank = diagonalizeQuadraticPart(r);
  const Poly3 diagonal = r.reduced;  // linear steps only, so still exact
  splitReduce(r, r.rank);
  switch (r.rank) {
    case 3:
      r.trace.push_back("Hessian rank 3");
      r.type = {'A', 1};
      break;
    case 2:
      r.trace.push_back("Hessian rank 2");
      r.type = detail::classifyCorank1(r);
      if (!r.type.classified()) r.type = detail::classifyCorank1BeyondJet(r, diagonal);
      break;
    default:
      r.trace.push_back("Hessian rank 1");
      r.type = detail::classifyCorank2(r);
      break;
  }
  // Beyond the jet the reduced form is d_0 x^2 + d_1 y^2 + c z^(k+1) by
  // construction of the residual; the jet check applies otherwise.
  if (r.type.classified() && !r.beyondJet && !matchesNormalForm(r.reduced, r.type)) {
    r.trace.push_back("reduced jet does not match the " + r.type.str() + " normal form");
    r.type = AdeType::unclassified();
  }
  return r;
}

/// Applies the recorded inverses in reverse order and compares with the
/// original germ; every step must be an invertible coordinate change.
inline bool inverseRoundTrip(const GermReduction& r) {
  Poly3 g = r.reduced;
  for (auto it = r.steps.rbegin(); it != r.steps.rend(); ++it) {
    auto inv = it->inverse();
    if (!(it->after(inv).images == Substitution::identity().images)) return false;
    g = g.compose(inv.images);
  }
  return g == r.original;
}

// ---------------------------------------------------------------------------
// Reports per coordinate point

struct SingularityReport {
  int point = 0;             // coordinate point index, or -1 on a coordinate line
  std::array<bool, 4> line{};  // for point == -1: the two vanishing coordinates
  int count = 1;             // singular points this report stands for
  int multiplicity = 0;
  AdeType type;
  std::vector<std::string> trace;
  bool roundTrip = false;  // every seed's reduction inverted exactly
};

inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL;
  h ^= a + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
  h ^= b + 0x85EBCA77C2B2AE63ULL + (h << 6) + (h >> 2);
  return h;
}

inline constexpr int kDefaultSeeds = 3;
inline constexpr int kSeedRetries = 4;

/// Classifies the germ at one coordinate point with several independent
/// coefficient samples; disagreement is retried and finally reported as
/// Unclassified.
inline SingularityReport classifyPoint(const QuarticSupport& S, const CoordinatePoint& cp,
                                       std::uint64_t seed, int seeds = kDefaultSeeds) {
  SingularityReport rep;
  rep.point = cp.point;
  rep.multiplicity = cp.multiplicity;
  for (int attempt = 0; attempt <= kSeedRetries; ++attempt) {
    std::vector<GermReduction> runs;
    bool orderOk = true;
    for (int s = 0; s < seeds; ++s) {
      auto coeffs = sampleGenericCoefficients(S, mixSeed(seed, cp.point, attempt * seeds + s));
      Poly3 g = dehomogenize(S, coeffs, cp.point);
      if (g.order() != cp.multiplicity) {
        orderOk = false;
        break;
      }
      if (cp.multiplicity != 2) break;
      runs.push_back(reduceGerm(g));
    }
    if (!orderOk) continue;
    if (cp.multiplicity != 2) {
      rep.trace = {"multiplicity " + std::to_string(cp.multiplicity) + " is not a double point"};
      return rep;
    }
    bool agree = std::all_of(runs.begin(), runs.end(),
                             [&](const GermReduction& r) { return r.type == runs[0].type; });
    rep.trace = runs[0].trace;
    rep.roundTrip = std::all_of(runs.begin(), runs.end(), inverseRoundTrip);
    if (agree) {
      rep.type = runs[0].type;
      return rep;
    }
    rep.trace.push_back("seeds disagree on attempt " + std::to_string(attempt));
  }
  if (rep.trace.empty()) throw GenericityFailure("sampled order never matched the support order");
  rep.type = AdeType::unclassified();
  return rep;
}

inline std::vector<SingularityReport> classifySingularities(const QuarticSupport& S,
                                                            std::uint64_t seed,
                                                            int seeds = kDefaultSeeds) {
  std::vector<SingularityReport> out;
  for (const auto& cp : singularCoordinatePoints(S)) out.push_back(classifyPoint(S, cp, seed, seeds));
  return out;
}

// ---------------------------------------------------------------------------
// Base locus away from coordinate points

/// For each torus orbit of a coordinate subspace other than the dense torus
/// and the coordinate points, whether the generic surface is smooth along
/// it. The orbit with zero set Z lies in the base locus iff no monomial
/// avoids Z; then the first-order partials along Z are generic Laurent
/// polynomials whose supports decide whether a common zero is forced.
struct OrbitCheck {
  std::array<bool, 4> zero{};
  bool inBaseLocus = false;
  bool smooth = true;
  std::array<int, 4> partialTerms{};  // per vanishing coordinate, terms of its partial
};

namespace detail {

inline int exponentOn(const HomogeneousExponent& m, const std::array<bool, 4>& zero) {
  int total = 0;
  for (int v = 0; v < 4; ++v)
    if (zero[v]) total += m[v];
  return total;
}

/// Monomials contributing to the partial in coordinate v along the orbit.
inline bool partialTerm(const HomogeneousExponent& m, const std::array<bool, 4>& zero, int v) {
  return m[v] == 1 && exponentOn(m, zero) == 1;
}

}  // namespace detail

inline std::vector<OrbitCheck> baseLocusOrbits(const QuarticSupport& S) {
  std::vector<OrbitCheck> out;
  for (int mask = 1; mask < 15; ++mask) {
    int size = std::popcount(static_cast<unsigned>(mask));
    if (size == 3) continue;  // coordinate points are classified separately
    OrbitCheck o;
    for (int v = 0; v < 4; ++v) o.zero[v] = mask >> v & 1;
    o.inBaseLocus = std::none_of(S.monomials.begin(), S.monomials.end(), [&](const auto& m) {
      return detail::exponentOn(m, o.zero) == 0;
    });
    if (o.inBaseLocus) {
      std::vector<int> termCounts;
      for (int v = 0; v < 4; ++v) {
        if (!o.zero[v]) continue;
        for (const auto& m : S.monomials)
          if (detail::partialTerm(m, o.zero, v)) ++o.partialTerms[v];
        termCounts.push_back(o.partialTerms[v]);
      }
      int nonempty = static_cast<int>(std::count_if(termCounts.begin(), termCounts.end(),
                                                     [](int t) { return t > 0; }));
      bool monomialPartial = std::any_of(termCounts.begin(), termCounts.end(),
                                         [](int t) { return t == 1; });
      // Orbit dimension 3 - |Z|; |Z| generic partials have no common zero on
      // it once |Z| > dimension and two are nonempty, or when one partial is a
      // single monomial (never zero on the torus).
      int dimension = 3 - size;
      o.smooth = monomialPartial || (nonempty >= 2 && nonempty > dimension);
    }
    out.push_back(o);
  }
  return out;
}

inline bool baseLocusSmoothAwayFromCoordinatePoints(const QuarticSupport& S) {
  auto orbits = baseLocusOrbits(S);
  return std::all_of(orbits.begin(), orbits.end(), [](const OrbitCheck& o) { return o.smooth; });
}

inline std::string locationOf(const SingularityReport& r) {
  static const char* names = "xyzw";
  if (r.point >= 0) {
    std::string s = "[";
    for (int v = 0; v < 4; ++v) s += std::string(v ? "," : "") + (v == r.point ? "1" : "0");
    return s + "]";
  }
  std::string s;
  for (int v = 0; v < 4; ++v)
    if (r.line[v]) s += std::string(s.empty() ? "" : "=") + names[v];
  return s + "=0";
}

/// Germ at a torus point of the line {x_a = x_b = 0}: coordinates c < d stay
/// nonzero, x_d = 1 and x_c = 1 + t, local variables (x_a, x_b, t). The
/// coefficients are first adjusted so the partial along `v` vanishes at
/// x_c = 1; every torus point of the line is moved there by rescaling.
inline Poly3 lineGerm(const QuarticSupport& S, std::vector<Rational> coeffs,
                      const std::array<bool, 4>& zero, int v) {
  std::array<int, 2> z{}, keep{};
  for (int u = 0, i = 0, j = 0; u < 4; ++u) (zero[u] ? z[i++] : keep[j++]) = u;
  int first = -1;
  Rational rest = 0;
  for (std::size_t i = 0; i < S.monomials.size(); ++i)
    if (detail::partialTerm(S.monomials[i], zero, v)) {
      if (first < 0) first = static_cast<int>(i);
      else rest += coeffs[i];
    }
  if (first < 0) throw Error("lineGerm: partial has no terms");
  coeffs[first] = -rest;
  if (coeffs[first] == 0) throw GenericityFailure("lineGerm: adjusted coefficient vanished");

  // (1 + t)^k by the binomial theorem; k <= 4.
  std::array<Poly3, kDegree + 1> shifted;
  for (int k = 0; k <= kDegree; ++k) {
    BigInt binom = 1;
    for (int i = 0; i <= k; ++i) {
      shifted[k] += Poly3::monomial({0, 0, i}, Rational(binom));
      binom = binom * (k - i) / (i + 1);
    }
  }
  Poly3 g;
  for (std::size_t i = 0; i < S.monomials.size(); ++i) {
    const auto& m = S.monomials[i];
    g += Poly3::monomial({m[z[0]], m[z[1]], 0}, coeffs[i]) * shifted[m[keep[0]]];
  }
  return g;
}

/// Singular points of the generic surface on coordinate lines in the base
/// locus. On a line where one partial is empty and the other has several
/// terms, that partial's roots in the torus are singular points of a single
/// type (the incidence variety of (coefficients, root) is irreducible). A line
/// or plane along which every partial is empty is reported as Unclassified.
inline std::vector<SingularityReport> classifyLinePoints(const QuarticSupport& S, std::uint64_t seed,
                                                         int seeds = kDefaultSeeds) {
  std::vector<SingularityReport> out;
  std::uint64_t orbitIndex = 4;
  for (const auto& o : baseLocusOrbits(S)) {
    ++orbitIndex;
    if (o.smooth) continue;
    SingularityReport rep;
    rep.point = -1;
    rep.line = o.zero;
    int size = static_cast<int>(std::count(o.zero.begin(), o.zero.end(), true));
    int v = -1;
    for (int u = 0; u < 4; ++u)
      if (o.zero[u] && o.partialTerms[u] > 0) v = u;
    bool otherEmpty = true;
    for (int u = 0; u < 4; ++u)
      if (o.zero[u] && u != v && o.partialTerms[u] > 0) otherEmpty = false;
    if (size != 2 || v < 0 || !otherEmpty) {
      rep.count = 0;
      rep.trace = {size == 1 ? "surface contains a coordinate plane"
                             : "singular along a whole coordinate line"};
      out.push_back(rep);
      continue;
    }
    int c = -1, lo = kDegree, hi = 0;
    for (int u = 0; u < 4 && c < 0; ++u)
      if (!o.zero[u]) c = u;
    for (const auto& m : S.monomials)
      if (detail::partialTerm(m, o.zero, v)) {
        lo = std::min(lo, m[c]);
        hi = std::max(hi, m[c]);
      }
    rep.count = hi - lo;

    std::vector<GermReduction> runs;
    for (int s = 0; s < seeds; ++s) {
      auto coeffs = sampleGenericCoefficients(S, mixSeed(seed, orbitIndex, s));
      Poly3 g = lineGerm(S, coeffs, o.zero, v);
      rep.multiplicity = g.order();
      if (rep.multiplicity != 2) break;
      runs.push_back(reduceGerm(g));
    }
    if (runs.size() != static_cast<std::size_t>(seeds)) {
      rep.trace = {"multiplicity " + std::to_string(rep.multiplicity) + " is not a double point"};
      out.push_back(rep);
      continue;
    }
    rep.trace = runs[0].trace;
    rep.roundTrip = std::all_of(runs.begin(), runs.end(), inverseRoundTrip);
    bool agree = std::all_of(runs.begin(), runs.end(),
                             [&](const GermReduction& r) { return r.type == runs[0].type; });
    if (agree) rep.type = runs[0].type;
    else rep.trace.push_back("seeds disagree");
    out.push_back(rep);
  }
  return out;
}

/// Coordinate points followed by coordinate-line points: the whole singular
/// locus of the generic surface (Bertini places it inside the base locus).
inline std::vector<SingularityReport> singularLocusReports(const QuarticSupport& S, std::uint64_t seed,
                                                           int seeds = kDefaultSeeds) {
  auto out = classifySingularities(S, seed, seeds);
  auto lines = classifyLinePoints(S, seed, seeds);
  out.insert(out.end(), lines.begin(), lines.end());
  return out;
}

// ---------------------------------------------------------------------------
// Interior point versus open halfspaces (fixed coordinates)

/// Every plane through (1,1,1) has monomials strictly on both sides. Only
/// planes spanned with two further lattice points of 4*Delta_3 need checking:
/// a weakly separating plane can always be rotated onto such a plane.
inline bool halfspacesAllOccupied(std::span<const LatticePoint> support) {
  const auto& all = fourSimplex().latticePoints;
  const LatticePoint p = kInteriorPoint;
  std::vector<IVec3> normals;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      IVec3 n = primitive(cross(all[a] - p, all[b] - p));
      if (!isZero(n)) normals.push_back(n);
    }
  std::sort(normals.begin(), normals.end());
  normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
  for (const auto& n : normals) {
    bool above = false, below = false;
    for (const auto& q : support) {
      auto s = dot(n, q - p);
      above |= s > 0;
      below |= s < 0;
    }
    if (!above || !below) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Stability

enum class Verdict { Stable, Unknown };
enum class VerdictBasis { Direct, Propagated, None };

struct StabilityVerdict {
  int polytopeId = -1;
  Verdict verdict = Verdict::Unknown;
  VerdictBasis basis = VerdictBasis::None;
  std::optional<int> witnessId;
};

inline bool allRationalDoublePoints(const std::vector<SingularityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const SingularityReport& r) {
    return r.multiplicity == 2 && r.type.classified();
  });
}

/// Direct verdicts on minimal entries from their reports (coordinate points
/// and coordinate lines together), then propagation to every reflexive entry
/// through its witness. `reports` is keyed by polytope id and must cover every
/// minimal entry.
inline std::vector<StabilityVerdict> stabilityVerdicts(
    std::span<const CatalogEntry> entries,
    const std::map<int, std::vector<SingularityReport>>& reports) {
  std::map<int, bool> stable;
  for (const auto& e : entries)
    if (e.minimal.value_or(false)) stable[e.id] = allRationalDoublePoints(reports.at(e.id));
  std::vector<StabilityVerdict> out;
  for (const auto& e : entries) {
    if (!e.reflexive) continue;
    StabilityVerdict v;
    v.polytopeId = e.id;
    if (e.minimal.value_or(false)) {
      v.basis = VerdictBasis::Direct;
      v.verdict = stable.at(e.id) ? Verdict::Stable : Verdict::Unknown;
    } else if (e.minimalWitnessId && stable.count(*e.minimalWitnessId) && stable[*e.minimalWitnessId]) {
      v.basis = VerdictBasis::Propagated;
      v.witnessId = e.minimalWitnessId;
      v.verdict = Verdict::Stable;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace k3forge
