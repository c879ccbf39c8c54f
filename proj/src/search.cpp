#include "fstsp/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "fstsp/construction.hpp"
#include "fstsp/tsp_seed.hpp"

namespace fstsp {

namespace {

constexpr std::array<MoveKind, kNumMoveKinds> kAllKinds = {
    MoveKind::IntraSwap11, MoveKind::IntraSwap21, MoveKind::IntraSwap22,
    MoveKind::TwoOpt,      MoveKind::Reinsertion, MoveKind::OrOpt2,
    MoveKind::Shift10,     MoveKind::InterSwap11, MoveKind::Swap01};

bool kind_in(const std::vector<MoveKind>& set, MoveKind k) {
  return std::find(set.begin(), set.end(), k) != set.end();
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

uint64_t signature(const Solution& sol) {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  for (NodeId v : sol.truck_seq) h = mix64(h ^ (uint64_t(v) + 0x100));
  auto sorted = sol.sorties;
  std::sort(sorted.begin(), sorted.end());
  for (const Sortie& s : sorted) {
    h = mix64(h ^ (uint64_t(s.launch) + 0x200));
    h = mix64(h ^ (uint64_t(s.customer) + 0x300));
    h = mix64(h ^ (uint64_t(s.ret) + 0x400));
  }
  return h;
}

bool TabuList::contains(uint64_t sig) const {
  for (const auto& [s, exp] : entries_)
    if (s == sig) return true;
  return false;
}

void TabuList::insert(uint64_t sig) {
  if (capacity_ <= 0) return;
  entries_.emplace_back(sig, clock_ + uint64_t(capacity_));
  while (int(entries_.size()) > capacity_) entries_.pop_front();
}

void TabuList::tick() {
  ++clock_;
  while (!entries_.empty() && entries_.front().second <= clock_)
    entries_.pop_front();
}

void SearchParams::resolve(const Instance& inst) {
  const int n = inst.n;
  if (k_max <= 0) k_max = 9 * ((n + 24) / 25);
  if (rho_max <= 0) rho_max = std::max(1, (n + 9) / 10);
  if (tl_capacity <= 0) tl_capacity = n <= 20 ? 2 : 7;
}

Solution rvnd(Solution sol, TabuList& tl, const SearchParams& params,
              const Instance& inst, Rng& rng) {
  std::array<MoveKind, 8> order = {
      MoveKind::IntraSwap11, MoveKind::IntraSwap21, MoveKind::IntraSwap22,
      MoveKind::TwoOpt,      MoveKind::Reinsertion, MoveKind::OrOpt2,
      MoveKind::Shift10,     MoveKind::InterSwap11};
  rng.shuffle(order.begin(), order.end());

  std::vector<MoveKind> non_tabu;
  for (MoveKind k : order)
    if (!kind_in(params.tabu_structures, k)) non_tabu.push_back(k);
  std::sort(non_tabu.begin(), non_tabu.end(),
            [](MoveKind a, MoveKind b) { return int(a) < int(b); });

  int k = 1;
  while (k <= int(order.size())) {
    MoveKind kind;
    if (!non_tabu.empty() && tl.contains(signature(sol)))
      kind = non_tabu[size_t(rng.next_below(non_tabu.size()))];
    else
      kind = order[size_t(k - 1)];
    const auto mv = best_move(sol, inst, kind);
    if (mv && mv->delta < -kImproveTol) {
      sol = apply(sol, mv->move, inst);
      if (is_drone_move(kind)) tl.tick();
      k = 1;
      rng.shuffle(order.begin(), order.end());
    } else {
      ++k;
    }
  }
  return sol;
}

GvnsResult gvns(const Instance& inst, SearchParams params) {
  params.resolve(inst);
  const auto t0 = Clock::now();
  const auto deadline_hit = [&] {
    return params.time_limit_s &&
           ms_since(t0) >= *params.time_limit_s * 1000.0;
  };

  SearchStats stats;
  stats.seed = params.seed;

  const auto ts0 = Clock::now();
  const std::vector<NodeId> tour = seed_tour(inst);
  stats.tsp_seed_time_ms = ms_since(ts0);

  Solution cur = construct(tour, inst);
  Solution best = cur;

  Rng shake_rng(derive_stream(params.seed, rng_stream::kShake));
  Rng shuffle_rng(derive_stream(params.seed, rng_stream::kShuffle));
  TabuList tl(params.tl_capacity);

  int k = 1;
  int rho = 0;
  while (k <= params.k_max && !deadline_hit()) {
    ++stats.iterations;

    // Draw a random feasible neighbor in the k-th structure; an empty
    // structure skips ahead to the next k.
    const MoveKind kind = kAllKinds[size_t((k - 1) % kNumMoveKinds)];
    const auto drawn = random_move(cur, inst, kind, shake_rng);
    if (!drawn) {
      ++k;
      continue;
    }
    cur = apply(cur, drawn->move, inst);
    ++stats.shakes;
    if (is_drone_move(kind)) {
      tl.tick();
      if (kind_in(params.tabu_structures, kind)) tl.insert(signature(cur));
    }

    cur = rvnd(std::move(cur), tl, params, inst, shuffle_rng);

    if (cur.objective < best.objective - kImproveTol) {
      best = cur;
      k = 1;
      rho = 0;
    } else {
      ++k;
    }

    for (int i = 0; i < rho && !deadline_hit(); ++i) {
      const auto sm = random_move(cur, inst, MoveKind::Swap01, shake_rng);
      if (!sm) break;
      cur = apply(cur, sm->move, inst);
      tl.tick();
      ++stats.shakes;
    }
    rho = (rho % params.rho_max) + 1;
  }

  stats.best_objective = best.objective;
  stats.time_ms = ms_since(t0);
  return GvnsResult{std::move(best), stats};
}

}  // namespace fstsp
