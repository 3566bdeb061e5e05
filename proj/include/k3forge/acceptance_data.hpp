#pragma once

// Reference values the acceptance checks compare against.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "k3dual.hpp"

namespace k3forge::acceptance::data {

inline constexpr std::int64_t kCanonicalCount = 356461;
inline constexpr std::int64_t kReflexiveCount = 15139;
inline constexpr std::int64_t kMinimalCount = 115;

/// (f-vector, number of reflexive polytopes realizing it); sums to 15139.
inline const std::vector<std::pair<FVector, std::int64_t>> kFVectorTable{
    {{4, 6, 4}, 9},         {{6, 9, 5}, 102},      {{8, 12, 6}, 412},    {{10, 15, 7}, 959},
    {{12, 18, 8}, 1642},    {{14, 21, 9}, 2083},   {{16, 24, 10}, 2194}, {{18, 27, 11}, 1997},
    {{20, 30, 12}, 1646},   {{22, 33, 13}, 1248},  {{24, 36, 14}, 922},  {{26, 39, 15}, 628},
    {{28, 42, 16}, 465},    {{30, 45, 17}, 295},   {{32, 48, 18}, 203},  {{34, 51, 19}, 128},
    {{36, 54, 20}, 85},     {{38, 57, 21}, 53},    {{40, 60, 22}, 27},   {{42, 63, 23}, 18},
    {{44, 66, 24}, 7},      {{46, 69, 25}, 9},     {{48, 72, 26}, 2},    {{50, 75, 27}, 2},
    {{54, 81, 29}, 1},      {{56, 84, 30}, 1},     {{64, 96, 34}, 1}};

/// Regular central triangulations by K3 vertex count.
inline const std::vector<std::pair<std::int64_t, std::int64_t>> kRegularByVertices{
    {4, 9}, {6, 117}, {8, 561}, {10, 2065}, {12, 6261}, {14, 16523}, {16, 42780}, {18, 106049}};

/// Incidence-graph types by K3 vertex count.
inline const std::vector<std::pair<std::int64_t, std::int64_t>> kTypesByVertices{
    {4, 1}, {6, 1}, {8, 2}, {10, 5}, {12, 14}, {14, 44}, {16, 158}, {18, 539}};

/// Reference incidence lists of the minimal duals: vertex count and facets.
inline const std::vector<std::pair<int, std::vector<std::vector<int>>>> kReferenceDuals{
    {4, {{0, 1, 2}, {1, 2, 3}, {0, 1, 3}, {0, 2, 3}}},
    {6, {{2, 3, 4, 5}, {0, 1, 4, 5}, {0, 1, 2, 3}, {1, 3, 5}, {0, 2, 4}}},
    {8, {{4, 5, 6, 7}, {2, 3, 6, 7}, {1, 3, 5, 7}, {0, 2, 4, 6}, {0, 1, 4, 5}, {0, 1, 2, 3}}},
    {10,
     {{0, 1, 2, 3, 4}, {0, 4, 5, 9}, {3, 4, 8, 9}, {2, 3, 7, 8}, {5, 6, 7, 8, 9}, {0, 1, 5, 6},
      {1, 2, 6, 7}}},
    {12,
     {{1, 2, 4, 7, 8, 10}, {0, 1, 6, 7}, {0, 1, 2, 3}, {4, 5, 10, 11}, {0, 3, 5, 6, 9, 11},
      {8, 9, 10, 11}, {2, 3, 4, 5}, {6, 7, 8, 9}}},
    {12,
     {{4, 5, 6, 7, 8, 9, 11}, {2, 3, 4, 8}, {0, 1, 3, 4}, {8, 9, 10, 11}, {1, 2, 3, 5, 7, 8, 11},
      {2, 10, 11}, {0, 1, 5}, {6, 7, 8, 9}}}};

/// ADE counts at coordinate points over the minimal polytopes.
inline const std::vector<std::pair<std::string, int>> kSingularityTable{
    {"A1", 22}, {"A2", 32}, {"A3", 127}, {"A5", 58}, {"D4", 14},
    {"D5", 26}, {"D6", 12}, {"D7", 10},  {"E6", 22}, {"E7", 9}};

}  // namespace k3forge::acceptance::data
