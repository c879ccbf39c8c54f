#pragma once

#include <vector>

#include "fstsp/instance.hpp"

namespace fstsp {

// Tours are node sequences [0, c1, ..., cn, 0] over the truck matrix tau.
// All routines are deterministic; ties break toward the lowest node index.

std::vector<NodeId> nearest_neighbor(const Instance& inst);

std::vector<NodeId> cheapest_insertion(const Instance& inst);

// Best-improvement 2-opt descent in place; handles asymmetric tau.
void two_opt(std::vector<NodeId>& tour, const Instance& inst);

// Exact tour via subset dynamic programming. Throws SizeError for n > 16.
std::vector<NodeId> held_karp(const Instance& inst);

// Pipeline used to start the search: exact for small n, cheapest insertion
// plus 2-opt beyond that.
inline constexpr int kExactSeedMaxN = 13;
inline constexpr int kHeldKarpMaxN = 16;
std::vector<NodeId> seed_tour(const Instance& inst);

}  // namespace fstsp
