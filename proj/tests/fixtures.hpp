#pragma once

// Small reflexive supports shared by the unit tests.

#include <vector>

#include "k3forge/lattice.hpp"

namespace fixtures {

using k3forge::LatticePoint;

// w^4, xyzw, xyz^2, xy^2z, x^2yz: the simplex with five lattice points.
inline std::vector<LatticePoint> fivePoint() { return {{0, 0, 0}, {1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}}; }

inline std::vector<LatticePoint> octahedron() {
  return {{1, 1, 1}, {0, 1, 1}, {2, 1, 1}, {1, 0, 1}, {1, 2, 1}, {1, 1, 0}, {1, 1, 2}};
}

// Volume 6, six lattice points.
inline std::vector<LatticePoint> sixPoint() { return {{0, 0, 0}, {0, 0, 1}, {1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}}; }

// Volume 10: eight central triangulations, two of them not regular.
inline std::vector<LatticePoint> withNonRegular() {
  return {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}};
}

// Volume 12: five central triangulations of four combinatorial types.
inline std::vector<LatticePoint> manyTypes() {
  return {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {0, 1, 0}, {0, 1, 1}, {0, 2, 0}, {1, 1, 1}, {2, 1, 1}};
}

}  // namespace fixtures
