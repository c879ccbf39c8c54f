#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "fstsp/neighborhoods.hpp"
#include "fstsp/rng.hpp"
#include "fstsp/solution.hpp"

namespace fstsp {

// Canonical fingerprint of a solution: truck order plus the sortie set
// (order-insensitive). Two solutions differing only in sortie listing order
// hash identically.
uint64_t signature(const Solution& sol);

// Short-term memory over solution signatures. An entry lives until `capacity`
// drone-affecting moves have been performed after its insertion (tick()), and
// the list never holds more than `capacity` entries (oldest evicted first).
class TabuList {
 public:
  explicit TabuList(int capacity) : capacity_(capacity) {}
  bool contains(uint64_t sig) const;
  void insert(uint64_t sig);
  void tick();  // a drone-affecting move was performed
  int size() const { return int(entries_.size()); }

 private:
  int capacity_;
  uint64_t clock_ = 0;
  std::deque<std::pair<uint64_t, uint64_t>> entries_;  // (signature, expiry)
};

struct SearchParams {
  uint64_t seed = 1;
  int k_max = 0;        // 0 -> 9 * ceil(n/25)
  int rho_max = 0;      // 0 -> ceil(n/10)
  int tl_capacity = 0;  // 0 -> 2 if n <= 20 else 7
  std::vector<MoveKind> tabu_structures = {MoveKind::Shift10,
                                           MoveKind::InterSwap11};
  std::optional<double> time_limit_s;  // wall-clock cap; unset = none

  void resolve(const Instance& inst);  // fill the zeroed defaults
};

struct SearchStats {
  uint64_t seed = 0;
  double best_objective = 0.0;
  long iterations = 0;  // outer-loop passes
  long shakes = 0;      // random moves actually applied
  double time_ms = 0.0;
  double tsp_seed_time_ms = 0.0;
};

struct GvnsResult {
  Solution best;
  SearchStats stats;
};

// Local descent: shuffled structure order over the eight non-shake
// neighborhoods; while the current solution is tabu, structures are drawn from
// the non-drone subset instead of the ordered list. Strict improvements reset
// and reshuffle. `rng` drives both shuffles and tabu-guard draws.
Solution rvnd(Solution sol, TabuList& tl, const SearchParams& params,
              const Instance& inst, Rng& rng);

// Full run: seed tour, greedy sortie construction, then the shake/descend
// loop with Swap01 perturbation rounds of growing strength.
GvnsResult gvns(const Instance& inst, SearchParams params);

}  // namespace fstsp
