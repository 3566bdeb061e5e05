#pragma once

// Canonical Newton polytopes inside 4*Delta_3 up to S4: enumeration by
// repeated vertex trimming, reflexive filtering, minimality and witnesses.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lattice.hpp"
#include "parallel.hpp"
#include "simplex_masks.hpp"

namespace k3forge {

struct CatalogEntry {
  int id = -1;
  PointMask mask = 0;  // canonical S4 representative
  std::int64_t volume = 0;
  bool reflexive = false;
  std::optional<bool> minimal;  // unknown until computed
  std::optional<int> minimalWitnessId;

  int latticePointCount() const { return std::popcount(mask); }
  std::vector<LatticePoint> points() const { return SimplexMasks::instance().pointsOf(mask); }
  LatticePolytope polytope() const { return SimplexMasks::instance().polytope(mask); }

  CanonicalKey key() const {
    CanonicalKey k;
    const auto& t = SimplexMasks::instance();
    for (PointMask m = mask; m; m &= m - 1) k.key.push_back(homogenize(t.point(std::countr_zero(m))));
    return k;
  }
};

/// Lexicographic comparison of the sorted homogeneous point lists of two masks.
inline bool keyLess(PointMask a, PointMask b) {
  while (a && b) {
    int ia = std::countr_zero(a), ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

/// Lattice point mask of conv(P minus v) for each vertex v of P, restricted
/// to trims that keep (1,1,1) interior. Results are canonicalized.
inline void canonicalTrims(PointMask m, std::vector<std::uint32_t>& scratch,
                           std::vector<PointMask>& out) {
  const auto& t = SimplexMasks::instance();
  out.clear();
  t.facetPlanes(m, scratch);
  PointMask vertices = t.vertexMask(m, scratch);
  for (PointMask rest = vertices; rest; rest &= rest - 1) {
    PointMask child = m & ~(PointMask{1} << std::countr_zero(rest));
    if (t.interiorContainsCenter(child)) out.push_back(t.canonicalMask(child));
  }
}

inline bool maskIsReflexive(PointMask m) {
  const auto& t = SimplexMasks::instance();
  std::vector<std::uint32_t> hs;
  t.facetPlanes(m, hs);
  const auto& p = t.point(t.interiorIndex());
  return std::all_of(hs.begin(), hs.end(),
                     [&](auto h) { return t.plane(h).facet.slack(p) == 1; });
}

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) { reindex(); }

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::vector<CatalogEntry>& mutableEntries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const CatalogEntry& operator[](std::size_t i) const { return entries_[i]; }

  /// Entry holding the S4 orbit of `mask`, if any.
  const CatalogEntry* find(PointMask mask) const {
    auto it = index_.find(SimplexMasks::instance().canonicalMask(mask));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      entries_[i].id = static_cast<int>(i);
      index_.emplace(entries_[i].mask, static_cast<int>(i));
    }
  }

 private:
  std::vector<CatalogEntry> entries_;
  std::unordered_map<PointMask, int> index_;
};

/// Vertex-trimming enumeration starting at 4*Delta_3. Levels are indexed by
/// lattice point count; each level is deduplicated and sorted before the
/// next one is expanded, so the output does not depend on `jobs`.
inline Catalog enumerateCanonical(int jobs = 1,
                                  const std::function<void(int, std::size_t)>& progress = {}) {
  const auto& t = SimplexMasks::instance();
  std::vector<PointMask> all;
  std::vector<PointMask> level{t.canonicalMask(t.fullMask())};
  while (!level.empty()) {
    if (progress) progress(std::popcount(level.front()), level.size());
    all.insert(all.end(), level.begin(), level.end());
    std::vector<std::vector<PointMask>> found(std::max(1, jobs));
    parallelFor(level.size(), jobs, [&](std::size_t i, int w) {
      thread_local std::vector<std::uint32_t> scratch;
      thread_local std::vector<PointMask> trims;
      canonicalTrims(level[i], scratch, trims);
      found[w].insert(found[w].end(), trims.begin(), trims.end());
    });
    std::vector<PointMask> next;
    for (auto& f : found) next.insert(next.end(), f.begin(), f.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }

  std::vector<CatalogEntry> entries(all.size());
  parallelFor(all.size(), jobs, [&](std::size_t i, int) {
    CatalogEntry& e = entries[i];
    e.mask = all[i];
    e.volume = t.polytope(e.mask).normalizedVolume;
    e.reflexive = maskIsReflexive(e.mask);
  });
  std::sort(entries.begin(), entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
    if (a.volume != b.volume) return a.volume < b.volume;
    return keyLess(a.mask, b.mask);
  });
  return Catalog(std::move(entries));
}

inline std::vector<CatalogEntry> filterReflexive(const Catalog& catalog) {
  std::vector<CatalogEntry> out;
  for (const auto& e : catalog.entries())
    if (e.reflexive) out.push_back(e);
  return out;
}

/// Whether some proper trim-descendant of `mask` (keeping (1,1,1) interior)
/// is reflexive. Self-contained search memoized on canonical keys.
inline bool hasReflexiveProperDescendant(PointMask mask) {
  std::unordered_set<PointMask> visited;
  std::vector<PointMask> stack;
  std::vector<std::uint32_t> scratch;
  std::vector<PointMask> trims;
  canonicalTrims(mask, scratch, trims);
  for (auto c : trims)
    if (visited.insert(c).second) stack.push_back(c);
  while (!stack.empty()) {
    PointMask m = stack.back();
    stack.pop_back();
    if (maskIsReflexive(m)) return true;
    canonicalTrims(m, scratch, trims);
    for (auto c : trims)
      if (visited.insert(c).second) stack.push_back(c);
  }
  return false;
}

inline bool isMinimalReflexive(PointMask mask) {
  return maskIsReflexive(mask) && !hasReflexiveProperDescendant(mask);
}

/// Marks `minimal` on every entry using a bottom-up pass over the trim DAG:
/// an entry "reaches" a reflexive polytope if it is reflexive itself or one
/// of its canonical trims does.
inline void markMinimal(Catalog& catalog, int jobs = 1) {
  auto& entries = catalog.mutableEntries();
  std::vector<int> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return entries[a].latticePointCount() < entries[b].latticePointCount();
  });
  std::vector<char> reaches(entries.size(), 0);
  std::vector<char> childReaches(entries.size(), 0);
  // Process one lattice-point level at a time; children live on lower levels.
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin;
    int level = entries[order[begin]].latticePointCount();
    while (end < order.size() && entries[order[end]].latticePointCount() == level) ++end;
    parallelFor(end - begin, jobs, [&](std::size_t k, int) {
      thread_local std::vector<std::uint32_t> scratch;
      thread_local std::vector<PointMask> trims;
      int i = order[begin + k];
      canonicalTrims(entries[i].mask, scratch, trims);
      bool any = false;
      for (auto c : trims) {
        const CatalogEntry* child = catalog.find(c);
        if (!child) throw Error("catalog is not closed under trimming");
        if (reaches[child->id]) {
          any = true;
          break;
        }
      }
      childReaches[i] = any;
      reaches[i] = any || entries[i].reflexive;
    });
    begin = end;
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i].minimal = entries[i].reflexive && !childReaches[i];
}

/// Smallest (volume, key) minimal entry some S4 image of which is contained
/// in `mask`, taken in fixed coordinates.
inline const CatalogEntry* findMinimalWitness(const Catalog& catalog, PointMask mask) {
  const auto& t = SimplexMasks::instance();
  for (const auto& e : catalog.entries()) {
    if (!e.minimal.value_or(false)) continue;
    if (e.latticePointCount() > std::popcount(mask)) continue;
    for (std::size_t p = 0; p < s4Permutations().size(); ++p)
      if ((t.image(e.mask, p) & ~mask) == 0) return &e;
  }
  return nullptr;
}

inline const CatalogEntry& minimalWitness(const Catalog& catalog, PointMask mask) {
  if (!maskIsReflexive(mask)) throw NotCanonical("minimalWitness: polytope is not reflexive");
  const CatalogEntry* w = findMinimalWitness(catalog, mask);
  if (!w) throw NoWitness("no minimal reflexive polytope inside the given polytope");
  return *w;
}

/// Fills minimalWitnessId for every reflexive entry. Requires markMinimal.
inline void assignWitnesses(Catalog& catalog, int jobs = 1) {
  auto& entries = catalog.mutableEntries();
  const auto& t = SimplexMasks::instance();
  std::vector<std::pair<int, std::vector<PointMask>>> minimalImages;
  for (const auto& e : entries) {
    if (!e.minimal.value_or(false)) continue;
    std::vector<PointMask> images;
    for (std::size_t p = 0; p < s4Permutations().size(); ++p) images.push_back(t.image(e.mask, p));
    minimalImages.emplace_back(e.id, std::move(images));
  }
  parallelFor(entries.size(), jobs, [&](std::size_t i, int) {
    auto& e = entries[i];
    if (!e.reflexive) return;
    for (const auto& [id, images] : minimalImages) {
      bool inside = std::any_of(images.begin(), images.end(),
                                [&](PointMask img) { return (img & ~e.mask) == 0; });
      if (inside) {
        e.minimalWitnessId = id;
        return;
      }
    }
    throw NoWitness("reflexive entry " + std::to_string(e.id) + " has no minimal witness");
  });
}

/// Minimality by direct containment: a reflexive entry is minimal iff no
/// other reflexive entry has an S4 image properly inside it. Quadratic in the
/// number of reflexive entries; used to cross-check markMinimal.
inline std::vector<int> minimalIdsByContainment(const Catalog& catalog) {
  const auto& t = SimplexMasks::instance();
  std::vector<const CatalogEntry*> reflexive;
  for (const auto& e : catalog.entries())
    if (e.reflexive) reflexive.push_back(&e);
  std::vector<std::vector<PointMask>> images(reflexive.size());
  for (std::size_t i = 0; i < reflexive.size(); ++i)
    for (std::size_t p = 0; p < s4Permutations().size(); ++p)
      images[i].push_back(t.image(reflexive[i]->mask, p));
  std::vector<int> out;
  for (std::size_t i = 0; i < reflexive.size(); ++i) {
    PointMask outer = reflexive[i]->mask;
    int size = std::popcount(outer);
    bool minimal = true;
    for (std::size_t j = 0; j < reflexive.size() && minimal; ++j) {
      if (std::popcount(reflexive[j]->mask) >= size) continue;
      for (PointMask img : images[j])
        if ((img & ~outer) == 0) {
          minimal = false;
          break;
        }
    }
    if (minimal) out.push_back(reflexive[i]->id);
  }
  return out;
}

}  // namespace k3forge
