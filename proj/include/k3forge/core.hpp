#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace k3forge {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Error hierarchy. Every failure surfaced by the library derives from Error so
// callers can catch the whole family at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define K3FORGE_ERROR(Name)                  \
  struct Name : Error {                      \
    using Error::Error;                      \
  }

K3FORGE_ERROR(DegenerateInput);
K3FORGE_ERROR(NotCanonical);
K3FORGE_ERROR(OutOfSimplex);
K3FORGE_ERROR(NoWitness);
K3FORGE_ERROR(OddVolume);
K3FORGE_ERROR(TooLarge);
K3FORGE_ERROR(Unbounded);
K3FORGE_ERROR(EmptyInterior);
K3FORGE_ERROR(NonTermination);
K3FORGE_ERROR(GenericityFailure);
K3FORGE_ERROR(RankZero);
K3FORGE_ERROR(MissingArtifact);
K3FORGE_ERROR(ParseError);

#undef K3FORGE_ERROR

using IVec3 = std::array<std::int64_t, 3>;

inline constexpr IVec3 operator+(const IVec3& a, const IVec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline constexpr IVec3 operator-(const IVec3& a, const IVec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline constexpr IVec3 operator-(const IVec3& a) { return {-a[0], -a[1], -a[2]}; }

inline constexpr std::int64_t dot(const IVec3& a, const IVec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline constexpr IVec3 cross(const IVec3& a, const IVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline constexpr std::int64_t det3(const IVec3& a, const IVec3& b, const IVec3& c) {
  return dot(a, cross(b, c));
}

inline constexpr bool isZero(const IVec3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
inline IVec3 primitive(IVec3 v) {
  std::int64_t g = std::gcd(std::gcd(v[0], v[1]), v[2]);
  if (g == 0) return v;
  return {v[0] / g, v[1] / g, v[2] / g};
}

inline std::string toString(const Rational& q) {
  // Always "num/den" so that integers and fractions parse the same way.
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

inline Rational parseRational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: " + s);  // GMP would trap
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed rational: " + s);
  }
}

}  // namespace k3forge
