#pragma once

#include <vector>

#include "fstsp/solution.hpp"

namespace fstsp {

// Greedy assignment pass over a pure truck tour. Each round looks at every
// drone-eligible customer still riding the truck and prices two actions: fly
// it out on a fresh sortie, or relocate it within the truck route (the latter
// only once at least one sortie exists). The single cheapest action is applied
// per round; stops when no action improves. Deterministic.
Solution construct(const std::vector<NodeId>& tour, const Instance& inst);

}  // namespace fstsp
