#pragma once

// Bitmask view of lattice subpolytopes of 4*Delta_3. A lattice-convex subset
// of the 35 lattice points is stored as a 35-bit mask; bit i is the i-th point
// in lexicographic order of homogeneous exponents. All oriented planes spanned
// by the 35 points are precomputed once, so hulls reduce to mask tests.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "lattice.hpp"

namespace k3forge {

using PointMask = std::uint64_t;

class SimplexMasks {
 public:
  static constexpr int kPoints = 35;

  static const SimplexMasks& instance() {
    static const SimplexMasks tables;
    return tables;
  }

  const LatticePoint& point(int i) const { return points_[i]; }
  int indexOf(const LatticePoint& q) const {
    auto it = std::lower_bound(sortedByCoords_.begin(), sortedByCoords_.end(),
                               std::pair{q, 0});
    if (it == sortedByCoords_.end() || it->first != q)
      throw OutOfSimplex("point outside 4*Delta_3");
    return it->second;
  }
  PointMask fullMask() const { return (PointMask{1} << kPoints) - 1; }
  int interiorIndex() const { return interior_; }

  PointMask maskOf(std::span<const LatticePoint> pts) const {
    PointMask m = 0;
    for (const auto& q : pts) m |= PointMask{1} << indexOf(q);
    return m;
  }

  std::vector<LatticePoint> pointsOf(PointMask m) const {
    std::vector<LatticePoint> out;
    for (; m; m &= m - 1) out.push_back(points_[std::countr_zero(m)]);
    std::sort(out.begin(), out.end());
    return out;
  }

  struct Plane {
    Facet facet;
    PointMask on = 0;
    PointMask below = 0;  // points violating the inequality
  };

  std::size_t planeCount() const { return planes_.size(); }
  const Plane& plane(std::size_t h) const { return planes_[h]; }

  /// Points on the line through points a and b.
  PointMask lineMask(int a, int b) const { return lines_[a * kPoints + b]; }

  bool spansPlane(PointMask onSet) const {
    if (std::popcount(onSet) < 3) return false;
    int a = std::countr_zero(onSet);
    PointMask rest = onSet & (onSet - 1);
    int b = std::countr_zero(rest);
    return (onSet & ~lineMask(a, b)) != 0;
  }

  /// Indices of the facet planes of conv(mask). Requires a full-dimensional mask.
  void facetPlanes(PointMask m, std::vector<std::uint32_t>& out) const {
    out.clear();
    for (std::uint32_t h = 0; h < planes_.size(); ++h) {
      const Plane& pl = planes_[h];
      if ((m & pl.below) == 0 && spansPlane(m & pl.on)) out.push_back(h);
    }
  }

  bool isFullDimensional(PointMask m) const {
    std::vector<LatticePoint> pts = pointsOf(m);
    return detail::affineRank(pts) == 3;
  }

  /// Whether (1,1,1) lies in the interior of conv(mask).
  bool interiorContainsCenter(PointMask m) const {
    if (!(m >> interior_ & 1)) return false;
    // Some facet plane would pass through or cut off the center.
    for (const Plane& pl : planes_) {
      if (pl.on >> interior_ & 1 || pl.below >> interior_ & 1) {
        if ((m & pl.below) == 0 && spansPlane(m & pl.on)) return false;
      }
    }
    // A coplanar mask through the center is caught above as a "facet"; only
    // collinear masks remain to be excluded.
    if (std::popcount(m) < 4) return false;
    int a = std::countr_zero(m);
    int b = std::countr_zero(m & (m - 1));
    return (m & ~lineMask(a, b)) != 0;
  }

  /// Extreme points of conv(mask) given its facet planes.
  PointMask vertexMask(PointMask m, const std::vector<std::uint32_t>& facets) const {
    PointMask vertices = 0;
    for (PointMask rest = m; rest; rest &= rest - 1) {
      int i = std::countr_zero(rest);
      PointMask meet = m;
      for (auto h : facets)
        if (planes_[h].on >> i & 1) meet &= planes_[h].on;
      if (meet == PointMask{1} << i) vertices |= PointMask{1} << i;
    }
    return vertices;
  }

  /// Canonical representative under S4: among the 24 images, the one whose
  /// sorted homogeneous point list is lexicographically smallest.
  PointMask canonicalMask(PointMask m) const {
    std::uint64_t best = 0;
    for (const auto& table : reversedImage_) {
      std::uint64_t r = 0;
      for (int byte = 0; byte < 5; ++byte) r |= table[byte][(m >> (8 * byte)) & 0xff];
      best = std::max(best, r);
    }
    return reverse(best);
  }

  PointMask image(PointMask m, std::size_t perm) const {
    return reverse(applyReversed(m, perm));
  }

  /// Lattice polytope of a full-dimensional mask, via the plane tables.
  LatticePolytope polytope(PointMask m) const {
    std::vector<std::uint32_t> hs;
    facetPlanes(m, hs);
    LatticePolytope P;
    for (auto h : hs) P.facets.push_back(planes_[h].facet);
    std::sort(P.facets.begin(), P.facets.end());
    P.vertices = pointsOf(vertexMask(m, hs));
    P.latticePoints = pointsOf(m);
    P.normalizedVolume = normalizedVolumeOf(P.facets, P.vertices);
    return P;
  }

 private:
  SimplexMasks() {
    std::vector<std::pair<HomogeneousExponent, LatticePoint>> order;
    for (int i = 0; i <= kDegree; ++i)
      for (int j = 0; i + j <= kDegree; ++j)
        for (int k = 0; i + j + k <= kDegree; ++k) {
          LatticePoint q{i, j, k};
          order.emplace_back(homogenize(q), q);
        }
    std::sort(order.begin(), order.end());
    for (int i = 0; i < kPoints; ++i) {
      points_[i] = order[i].second;
      sortedByCoords_.emplace_back(points_[i], i);
      if (points_[i] == kInteriorPoint) interior_ = i;
    }
    std::sort(sortedByCoords_.begin(), sortedByCoords_.end());

    for (int a = 0; a < kPoints; ++a)
      for (int b = 0; b < kPoints; ++b) {
        PointMask line = (PointMask{1} << a) | (PointMask{1} << b);
        if (a != b) {
          IVec3 d = points_[b] - points_[a];
          for (int c = 0; c < kPoints; ++c)
            if (isZero(cross(d, points_[c] - points_[a]))) line |= PointMask{1} << c;
        }
        lines_[a * kPoints + b] = line;
      }

    std::map<Facet, int> seen;
    auto addPlane = [&](const Facet& f) {
      if (seen.count(f)) return;
      Plane pl{f, 0, 0};
      for (int c = 0; c < kPoints; ++c) {
        auto s = f.slack(points_[c]);
        if (s == 0) pl.on |= PointMask{1} << c;
        if (s < 0) pl.below |= PointMask{1} << c;
      }
      seen.emplace(f, static_cast<int>(planes_.size()));
      planes_.push_back(pl);
    };
    for (int a = 0; a < kPoints; ++a)
      for (int b = a + 1; b < kPoints; ++b)
        for (int c = b + 1; c < kPoints; ++c) {
          IVec3 n = primitive(cross(points_[b] - points_[a], points_[c] - points_[a]));
          if (isZero(n)) continue;
          std::int64_t off = dot(n, points_[a]);
          addPlane({n, off});
          addPlane({-n, -off});
        }

    const auto& perms = s4Permutations();
    reversedImage_.resize(perms.size());
    for (std::size_t p = 0; p < perms.size(); ++p) {
      std::array<int, kPoints> target{};
      for (int i = 0; i < kPoints; ++i) {
        auto img = dehomogenize(permute(homogenize(points_[i]), perms[p]));
        target[i] = indexOf(img);
      }
      for (int byte = 0; byte < 5; ++byte)
        for (int v = 0; v < 256; ++v) {
          std::uint64_t r = 0;
          for (int bit = 0; bit < 8; ++bit) {
            int i = 8 * byte + bit;
            if (i < kPoints && (v >> bit & 1)) r |= std::uint64_t{1} << (kPoints - 1 - target[i]);
          }
          reversedImage_[p][byte][v] = r;
        }
    }
  }

  static PointMask reverse(std::uint64_t r) {
    PointMask m = 0;
    for (int i = 0; i < kPoints; ++i)
      if (r >> i & 1) m |= PointMask{1} << (kPoints - 1 - i);
    return m;
  }

  std::uint64_t applyReversed(PointMask m, std::size_t perm) const {
    std::uint64_t r = 0;
    for (int byte = 0; byte < 5; ++byte)
      r |= reversedImage_[perm][byte][(m >> (8 * byte)) & 0xff];
    return r;
  }

  std::array<LatticePoint, kPoints> points_{};
  std::vector<std::pair<LatticePoint, int>> sortedByCoords_;
  int interior_ = -1;
  std::array<PointMask, kPoints * kPoints> lines_{};
  std::vector<Plane> planes_;
  std::vector<std::array<std::array<std::uint64_t, 256>, 5>> reversedImage_;
};

}  // namespace k3forge
