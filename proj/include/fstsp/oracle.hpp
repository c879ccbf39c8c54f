#pragma once

#include "fstsp/solution.hpp"

namespace fstsp {

inline constexpr int kOracleMaxN = 8;

// Exhaustive optimum over every truck/drone customer split, truck permutation,
// and non-conflicting sortie placement. Ground truth for everything else.
// n > kOracleMaxN throws SizeError. Ties resolve to the lexicographically
// smallest truck sequence, then sortie set.
Solution brute_force_optimum(const Instance& inst);

}  // namespace fstsp
