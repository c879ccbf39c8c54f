#include "fstsp/construction.hpp"

#include <optional>

#include "fstsp/neighborhoods.hpp"

namespace fstsp {

Solution construct(const std::vector<NodeId>& tour, const Instance& inst) {
  Solution sol = truck_only_solution(tour, inst);
  const int guard = 50 * (inst.n + 2);  // each round strictly improves; belt + braces
  for (int round = 0; round < guard; ++round) {
    std::optional<ScoredMove> best;
    const int m = int(sol.truck_seq.size()) - 1;
    for (int pj = 1; pj <= m - 1; ++pj) {
      if (!inst.is_eligible(sol.truck_seq[pj])) continue;
      const auto fly = best_shift10_for_position(sol, inst, pj);
      std::optional<ScoredMove> rel;
      if (!sol.sorties.empty())
        rel = best_reinsertion_for_position(sol, inst, pj);
      // Equal prices go to the truck relocation.
      std::optional<ScoredMove> cand;
      if (rel && (!fly || rel->delta <= fly->delta))
        cand = rel;
      else
        cand = fly;
      if (cand && (!best || cand->delta < best->delta)) best = cand;
    }
    if (!best || best->delta >= -kImproveTol) break;
    sol = apply(sol, best->move, inst);
  }
  return sol;
}

}  // namespace fstsp
