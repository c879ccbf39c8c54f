#include "fstsp/tsp_seed.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>

#include "fstsp/solution.hpp"

namespace fstsp {

std::vector<NodeId> nearest_neighbor(const Instance& inst) {
  std::vector<char> used(inst.n + 1, 0);
  std::vector<NodeId> tour{kDepot};
  NodeId cur = kDepot;
  for (int step = 0; step < inst.n; ++step) {
    NodeId best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId k = 1; k <= inst.n; ++k)
      if (!used[k] && inst.tau(cur, k) < best_cost) {
        best = k;
        best_cost = inst.tau(cur, k);
      }
    used[best] = 1;
    tour.push_back(best);
    cur = best;
  }
  tour.push_back(kDepot);
  return tour;
}

std::vector<NodeId> cheapest_insertion(const Instance& inst) {
  std::vector<char> used(inst.n + 1, 0);
  // Start from the cheapest out-and-back cycle.
  NodeId first = 1;
  double first_cost = std::numeric_limits<double>::infinity();
  for (NodeId k = 1; k <= inst.n; ++k) {
    double c = inst.tau(kDepot, k) + inst.tau(k, kDepot);
    if (c < first_cost) {
      first = k;
      first_cost = c;
    }
  }
  std::vector<NodeId> tour{kDepot, first, kDepot};
  used[first] = 1;
  for (int step = 1; step < inst.n; ++step) {
    NodeId best_node = -1;
    std::size_t best_pos = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId k = 1; k <= inst.n; ++k) {
      if (used[k]) continue;
      for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
        double c = inst.tau(tour[p], k) + inst.tau(k, tour[p + 1]) -
                   inst.tau(tour[p], tour[p + 1]);
        if (c < best_cost) {
          best_node = k;
          best_pos = p;
          best_cost = c;
        }
      }
    }
    used[best_node] = 1;
    tour.insert(tour.begin() + best_pos + 1, best_node);
  }
  return tour;
}

void two_opt(std::vector<NodeId>& tour, const Instance& inst) {
  int m = static_cast<int>(tour.size()) - 1;
  if (m < 3) return;
  // Directed prefix sums make reversed-segment costs O(1) even when tau is
  // asymmetric.
  std::vector<double> fwd(m + 1, 0.0), rev(m + 1, 0.0);
  auto rebuild = [&] {
    for (int p = 1; p <= m; ++p) {
      fwd[p] = fwd[p - 1] + inst.tau(tour[p - 1], tour[p]);
      rev[p] = rev[p - 1] + inst.tau(tour[p], tour[p - 1]);
    }
  };
  rebuild();
  bool improved = true;
  while (improved) {
    improved = false;
    double best_delta = -1e-9;
    int best_i = -1, best_j = -1;
    for (int i = 1; i + 1 <= m - 1; ++i)
      for (int j = i + 1; j <= m - 1; ++j) {
        double removed = inst.tau(tour[i - 1], tour[i]) +
                         inst.tau(tour[j], tour[j + 1]) +
                         (fwd[j] - fwd[i]);
        double added = inst.tau(tour[i - 1], tour[j]) +
                       inst.tau(tour[i], tour[j + 1]) + (rev[j] - rev[i]);
        double delta = added - removed;
        if (delta < best_delta) {
          best_delta = delta;
          best_i = i;
          best_j = j;
        }
      }
    if (best_i >= 0) {
      std::reverse(tour.begin() + best_i, tour.begin() + best_j + 1);
      rebuild();
      improved = true;
    }
  }
}

std::vector<NodeId> held_karp(const Instance& inst) {
  int n = inst.n;
  if (n > kHeldKarpMaxN)
    throw SizeError(fmt::format(
        "exact tour limited to {} customers, got {}", kHeldKarpMaxN, n));
  std::size_t full = std::size_t{1} << n;
  constexpr double inf = std::numeric_limits<double>::infinity();
  // dp[mask][last]: cheapest depot->...->last path visiting exactly `mask`.
  std::vector<double> dp(full * n, inf);
  std::vector<std::int8_t> parent(full * n, -1);
  for (int k = 0; k < n; ++k) dp[(std::size_t{1} << k) * n + k] = inst.tau(kDepot, k + 1);
  for (std::size_t mask = 1; mask < full; ++mask)
    for (int last = 0; last < n; ++last) {
      if (!(mask >> last & 1)) continue;
      double cur = dp[mask * n + last];
      if (cur == inf) continue;
      for (int nxt = 0; nxt < n; ++nxt) {
        if (mask >> nxt & 1) continue;
        std::size_t nmask = mask | (std::size_t{1} << nxt);
        double cand = cur + inst.tau(last + 1, nxt + 1);
        if (cand < dp[nmask * n + nxt]) {
          dp[nmask * n + nxt] = cand;
          parent[nmask * n + nxt] = static_cast<std::int8_t>(last);
        }
      }
    }
  int best_last = 0;
  double best = inf;
  for (int last = 0; last < n; ++last) {
    double cand = dp[(full - 1) * n + last] + inst.tau(last + 1, kDepot);
    if (cand < best) {
      best = cand;
      best_last = last;
    }
  }
  std::vector<NodeId> tour(n + 2);
  tour[0] = tour[n + 1] = kDepot;
  std::size_t mask = full - 1;
  int last = best_last;
  for (int p = n; p >= 1; --p) {
    tour[p] = last + 1;
    int prev = parent[mask * n + last];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  return tour;
}

std::vector<NodeId> seed_tour(const Instance& inst) {
  if (inst.n <= kExactSeedMaxN) return held_karp(inst);
  std::vector<NodeId> tour = cheapest_insertion(inst);
  two_opt(tour, inst);
  return tour;
}

}  // namespace fstsp
