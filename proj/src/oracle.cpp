#include "fstsp/oracle.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <vector>

#include "fstsp/errors.hpp"

namespace fstsp {

namespace {

struct Enumerator {
  const Instance& inst;
  std::vector<NodeId> drone_set;   // customers served by air, ascending
  std::vector<NodeId> seq;         // current truck sequence, depot-wrapped
  std::vector<double> pre;         // truck-time prefix over seq
  int m = 0;

  std::vector<Sortie> picked;
  std::vector<std::pair<int, int>> spans;  // chosen spans, unordered
  std::vector<char> launch_used;

  bool have_best = false;
  Solution best;

  explicit Enumerator(const Instance& ins) : inst(ins) {
    launch_used.assign(inst.n + 1, 0);
  }

  bool window_ok(double path, double legs) const {
    if (inst.endurance == kInfiniteEndurance) return true;
    if (inst.variant.endurance_mode == EnduranceMode::FlightOnly)
      return legs <= inst.endurance + kFeasTol;
    const double sif =
        inst.variant.setup_in_flight_time ? inst.setup_launch : 0.0;
    const double w = std::max(path, legs) + inst.setup_return + sif;
    return w <= inst.endurance + kFeasTol;
  }

  bool conflicts(int lo, int hi) const {
    for (const auto& [a, b] : spans)
      if (std::max(a, lo) < std::min(b, hi) || (lo == hi && a < lo && hi < b) ||
          (a == b && lo < a && b < hi))
        return true;
    return false;
  }

  void offer() {
    Solution cand;
    cand.truck_seq = seq;
    cand.sorties = picked;
    std::sort(cand.sorties.begin(), cand.sorties.end());
    cand.objective = evaluate_timeline(cand, inst).objective;
    if (!have_best || cand.objective < best.objective ||
        (cand.objective == best.objective &&
         (cand.truck_seq < best.truck_seq ||
          (cand.truck_seq == best.truck_seq && cand.sorties < best.sorties)))) {
      best = std::move(cand);
      have_best = true;
    }
  }

  void place(size_t di) {
    if (di == drone_set.size()) {
      offer();
      return;
    }
    const NodeId d = drone_set[di];
    for (int pi = 0; pi <= m - 1; ++pi) {
      const NodeId L = seq[pi];
      if (launch_used[L]) continue;
      for (int pk = pi; pk <= m; ++pk) {
        if (pi == 0 && pk == 0) continue;  // depot round trip is the [0,m] form
        if (pi == pk && L == kDepot) continue;
        const NodeId R = seq[pk];
        if (!sortie_allowed(inst, L, d, R)) continue;
        const double legs = inst.tau_d(L, d) + inst.tau_d(d, R);
        if (!window_ok(pre[pk] - pre[pi], legs)) continue;
        if (conflicts(pi, pk)) continue;
        launch_used[L] = 1;
        spans.emplace_back(pi, pk);
        picked.push_back(Sortie{L, d, R});
        place(di + 1);
        picked.pop_back();
        spans.pop_back();
        launch_used[L] = 0;
      }
    }
  }

  void run_truck_orders(std::vector<NodeId>& truck, size_t lo) {
    if (lo == truck.size()) {
      seq.assign(1, kDepot);
      seq.insert(seq.end(), truck.begin(), truck.end());
      seq.push_back(kDepot);
      m = int(seq.size()) - 1;
      pre.assign(m + 1, 0.0);
      for (int p = 0; p < m; ++p)
        pre[p + 1] = pre[p] + inst.tau(seq[p], seq[p + 1]);
      place(0);
      return;
    }
    // Permutations in lexicographic-ish recursive order; determinism only.
    for (size_t i = lo; i < truck.size(); ++i) {
      std::swap(truck[lo], truck[i]);
      run_truck_orders(truck, lo + 1);
      std::swap(truck[lo], truck[i]);
    }
  }
};

}  // namespace

Solution brute_force_optimum(const Instance& inst) {
  if (inst.n > kOracleMaxN)
    throw SizeError(fmt::format(
        "exhaustive search handles at most {} customers, got {}", kOracleMaxN,
        inst.n));

  Enumerator en(inst);
  const auto& elig = inst.eligible;
  const int ne = int(elig.size());
  for (int mask = 0; mask < (1 << ne); ++mask) {
    en.drone_set.clear();
    for (int i = 0; i < ne; ++i)
      if (mask & (1 << i)) en.drone_set.push_back(elig[size_t(i)]);
    std::vector<NodeId> truck;
    for (NodeId v = 1; v <= inst.n; ++v)
      if (!std::binary_search(en.drone_set.begin(), en.drone_set.end(), v))
        truck.push_back(v);
    en.run_truck_orders(truck, 0);
  }
  if (!en.have_best) throw DataError("no feasible solution found");  // unreachable
  return en.best;
}

}  // namespace fstsp
