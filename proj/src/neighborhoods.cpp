#include "fstsp/neighborhoods.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <vector>

#include "fstsp/errors.hpp"

namespace fstsp {

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::IntraSwap11: return "intra_swap11";
    case MoveKind::IntraSwap21: return "intra_swap21";
    case MoveKind::IntraSwap22: return "intra_swap22";
    case MoveKind::TwoOpt: return "two_opt";
    case MoveKind::Reinsertion: return "reinsertion";
    case MoveKind::OrOpt2: return "or_opt2";
    case MoveKind::Shift10: return "shift10";
    case MoveKind::InterSwap11: return "inter_swap11";
    case MoveKind::Swap01: return "swap01";
  }
  return "?";
}

bool is_drone_move(MoveKind k) {
  return k == MoveKind::Shift10 || k == MoveKind::InterSwap11 ||
         k == MoveKind::Swap01;
}

namespace {

// Scan workspace: prefix sums over the truck route, sortie spans resolved to
// positions, and the per-sortie cost surplus that the decomposed objective
//   objective = truck_total + sum(extra_s)
//   extra_s   = launch_setup_eff + sR + max(0, flight_legs - truck_path_in_span)
// hangs off. Every move below edits truck_total and a handful of span paths,
// so deltas come out in O(1) per candidate.
struct Ctx {
  const Solution& sol;
  const Instance& inst;
  const std::vector<NodeId>& seq;
  int m;  // final depot position

  std::vector<double> pre_f;  // pre_f[p] = truck time over seq[0..p]
  std::vector<double> pre_r;  // same but traversed backwards
  std::vector<char> endpoint;       // position is a launch/return endpoint
  std::vector<int> edge_span;       // sortie owning edge (p,p+1), -1 free
  std::vector<int> gap_of;          // gap id per position, -1 inside a span
  std::vector<std::pair<int, int>> gaps;  // inclusive position ranges
  std::vector<char> launch_used;    // node already launches a sortie
  std::vector<int> next_ep;         // first endpoint position >= p

  std::vector<int> lp, rp;          // per-sortie span
  std::vector<double> legs, path, sl_eff, extra;

  double total_T = 0.0;
  double objective = 0.0;
  bool elapsed;
  double sif_sL;  // launch setup inside the endurance window, if counted

  explicit Ctx(const Solution& s, const Instance& ins)
      : sol(s), inst(ins), seq(s.truck_seq), m(int(s.truck_seq.size()) - 1) {
    const StructureInfo info = scan_structure(sol, inst);
    if (!info.ok())
      throw ContractViolation("move scan requires a structurally valid solution");

    elapsed = inst.variant.endurance_mode == EnduranceMode::Elapsed;
    sif_sL = inst.variant.setup_in_flight_time ? inst.setup_launch : 0.0;

    pre_f.assign(m + 1, 0.0);
    pre_r.assign(m + 1, 0.0);
    for (int p = 0; p < m; ++p) {
      pre_f[p + 1] = pre_f[p] + inst.tau(seq[p], seq[p + 1]);
      pre_r[p + 1] = pre_r[p] + inst.tau(seq[p + 1], seq[p]);
    }
    total_T = pre_f[m];

    const int ns = int(sol.sorties.size());
    lp.resize(ns);
    rp.resize(ns);
    legs.resize(ns);
    path.resize(ns);
    sl_eff.resize(ns);
    extra.resize(ns);
    endpoint.assign(m + 1, 0);
    edge_span.assign(std::max(m, 0), -1);
    launch_used.assign(inst.n + 1, 0);
    objective = total_T;
    for (int si = 0; si < ns; ++si) {
      lp[si] = info.span[si].first;
      rp[si] = info.span[si].second;
      const Sortie& s = sol.sorties[si];
      legs[si] = inst.tau_d(s.launch, s.customer) + inst.tau_d(s.customer, s.ret);
      path[si] = pre_f[rp[si]] - pre_f[lp[si]];
      sl_eff[si] = effective_launch_setup(inst, lp[si]);
      extra[si] = sl_eff[si] + inst.setup_return +
                  std::max(0.0, legs[si] - path[si]);
      objective += extra[si];
      endpoint[lp[si]] = 1;
      endpoint[rp[si]] = 1;
      launch_used[s.launch] = 1;
      for (int p = lp[si]; p < rp[si]; ++p) edge_span[p] = si;
    }

    // Gap decomposition: maximal endpoint-to-endpoint position runs outside
    // span interiors. Touching spans leave a zero-length gap between them.
    gap_of.assign(m + 1, -1);
    std::vector<int> order(ns);
    for (int i = 0; i < ns; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lp[a] < lp[b]; });
    int cursor = 0;
    for (int oi : order) {
      for (int p = cursor; p <= lp[oi]; ++p) gap_of[p] = int(gaps.size());
      gaps.emplace_back(cursor, lp[oi]);
      cursor = rp[oi];
    }
    for (int p = cursor; p <= m; ++p) gap_of[p] = int(gaps.size());
    gaps.emplace_back(cursor, m);

    next_ep.assign(m + 2, m + 1);
    for (int p = m; p >= 0; --p)
      next_ep[p] = endpoint[p] ? p : next_ep[p + 1];
  }

  double tau(NodeId i, NodeId j) const { return inst.tau(i, j); }

  // Region holding a non-endpoint position: the sortie whose span interior
  // contains it, or -1 when it sits in a gap.
  int region(int p) const {
    assert(p >= 1 && p <= m - 1 && !endpoint[p]);
    assert(edge_span[p - 1] == edge_span[p]);
    return edge_span[p];
  }

  double extra_of(int si, double new_path) const {
    return sl_eff[si] + inst.setup_return + std::max(0.0, legs[si] - new_path);
  }

  bool window_ok(double span_path, double span_legs) const {
    if (inst.endurance == kInfiniteEndurance) return true;
    if (!elapsed) return span_legs <= inst.endurance + kFeasTol;
    const double w = std::max(span_path, span_legs) + inst.setup_return + sif_sL;
    return w <= inst.endurance + kFeasTol;
  }
};

// Accumulates path changes for up to a handful of affected sorties and turns
// them into an exact objective delta (with endurance windows rechecked).
struct DeltaAcc {
  const Ctx& ctx;
  double dT = 0.0;
  int n_spans = 0;
  int span_id[4];
  double span_dpath[4];

  explicit DeltaAcc(const Ctx& c) : ctx(c) {}

  void add(int span, double dpath) {
    dT += dpath;
    if (span < 0) return;
    for (int i = 0; i < n_spans; ++i)
      if (span_id[i] == span) {
        span_dpath[i] += dpath;
        return;
      }
    assert(n_spans < 4);
    span_id[n_spans] = span;
    span_dpath[n_spans] = dpath;
    ++n_spans;
  }

  // Objective delta, or nothing if an affected sortie window breaks. A span
  // whose internal truck path grows can stretch the elapsed window past the
  // endurance cap, so every touched span gets rechecked.
  std::optional<double> settle() const {
    double delta = dT;
    for (int i = 0; i < n_spans; ++i) {
      const int si = span_id[i];
      const double np = ctx.path[si] + span_dpath[i];
      if (!ctx.window_ok(np, ctx.legs[si])) return std::nullopt;
      delta += ctx.extra_of(si, np) - ctx.extra[si];
    }
    return delta;
  }
};

// --- per-kind candidate enumeration ---------------------------------------
// Each enumerator calls sink(Move, delta) for every feasibility-preserving
// candidate, in ascending operand order (ties in scans then resolve to the
// lowest tuple).

template <typename Sink>
void enum_intra_swap11(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int p = 1; p + 1 <= c.m; ++p) {
    if (c.endpoint[p]) continue;
    for (int q = p + 1; q <= c.m - 1; ++q) {
      if (c.endpoint[q]) continue;
      DeltaAcc acc(c);
      const NodeId u = s[p], v = s[q];
      if (q == p + 1) {
        const NodeId a = s[p - 1], b = s[q + 1];
        acc.add(c.region(p), c.tau(a, v) + c.tau(v, u) + c.tau(u, b) -
                                 c.tau(a, u) - c.tau(u, v) - c.tau(v, b));
      } else {
        const NodeId a = s[p - 1], b = s[p + 1];
        const NodeId x = s[q - 1], y = s[q + 1];
        acc.add(c.region(p),
                c.tau(a, v) + c.tau(v, b) - c.tau(a, u) - c.tau(u, b));
        acc.add(c.region(q),
                c.tau(x, u) + c.tau(u, y) - c.tau(x, v) - c.tau(v, y));
      }
      if (auto d = acc.settle())
        sink(Move{MoveKind::IntraSwap11, p, q, -1}, *d);
    }
  }
}

template <typename Sink>
void enum_intra_swap21(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int p = 1; p + 2 <= c.m; ++p) {
    if (c.endpoint[p] || c.endpoint[p + 1]) continue;
    const NodeId x1 = s[p], x2 = s[p + 1];
    for (int q = 1; q <= c.m - 1; ++q) {
      if (q == p || q == p + 1 || c.endpoint[q]) continue;
      DeltaAcc acc(c);
      const NodeId v = s[q];
      if (q == p - 1) {
        // ... u v x1 x2 b ...  ->  ... u x1 x2 v b ...
        const NodeId u = s[q - 1], b = s[p + 2];
        acc.add(c.region(p), c.tau(u, x1) + c.tau(x2, v) + c.tau(v, b) -
                                 c.tau(u, v) - c.tau(v, x1) - c.tau(x2, b));
      } else if (q == p + 2) {
        // ... a x1 x2 v w ...  ->  ... a v x1 x2 w ...
        const NodeId a = s[p - 1], w = s[q + 1];
        acc.add(c.region(p), c.tau(a, v) + c.tau(v, x1) + c.tau(x2, w) -
                                 c.tau(a, x1) - c.tau(x2, v) - c.tau(v, w));
      } else {
        const NodeId a = s[p - 1], b = s[p + 2];
        const NodeId u = s[q - 1], w = s[q + 1];
        acc.add(c.region(p), c.tau(a, v) + c.tau(v, b) - c.tau(a, x1) -
                                 c.tau(x1, x2) - c.tau(x2, b));
        acc.add(c.region(q), c.tau(u, x1) + c.tau(x1, x2) + c.tau(x2, w) -
                                 c.tau(u, v) - c.tau(v, w));
      }
      if (auto d = acc.settle())
        sink(Move{MoveKind::IntraSwap21, p, q, -1}, *d);
    }
  }
}

template <typename Sink>
void enum_intra_swap22(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int p = 1; p + 2 <= c.m; ++p) {
    if (c.endpoint[p] || c.endpoint[p + 1]) continue;
    const NodeId x1 = s[p], x2 = s[p + 1];
    for (int q = p + 2; q + 1 <= c.m - 1; ++q) {
      if (c.endpoint[q] || c.endpoint[q + 1]) continue;
      DeltaAcc acc(c);
      const NodeId y1 = s[q], y2 = s[q + 1];
      if (q == p + 2) {
        // ... a x1 x2 y1 y2 w ...  ->  ... a y1 y2 x1 x2 w ...
        const NodeId a = s[p - 1], w = s[q + 2];
        acc.add(c.region(p), c.tau(a, y1) + c.tau(y2, x1) + c.tau(x2, w) -
                                 c.tau(a, x1) - c.tau(x2, y1) - c.tau(y2, w));
      } else {
        const NodeId a = s[p - 1], b = s[p + 2];
        const NodeId u = s[q - 1], w = s[q + 2];
        // The internal pair arcs swap owners with the pairs: they cancel in
        // the total but must move between regions for the window recheck.
        acc.add(c.region(p), c.tau(a, y1) + c.tau(y1, y2) + c.tau(y2, b) -
                                 c.tau(a, x1) - c.tau(x1, x2) - c.tau(x2, b));
        acc.add(c.region(q), c.tau(u, x1) + c.tau(x1, x2) + c.tau(x2, w) -
                                 c.tau(u, y1) - c.tau(y1, y2) - c.tau(y2, w));
      }
      if (auto d = acc.settle())
        sink(Move{MoveKind::IntraSwap22, p, q, -1}, *d);
    }
  }
}

template <typename Sink>
void enum_two_opt(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int i = 1; i <= c.m - 2; ++i) {
    if (c.endpoint[i]) continue;
    const int jmax = std::min(c.next_ep[i] - 1, c.m - 1);
    for (int j = i + 1; j <= jmax; ++j) {
      DeltaAcc acc(c);
      const double removed = c.tau(s[i - 1], s[i]) + (c.pre_f[j] - c.pre_f[i]) +
                             c.tau(s[j], s[j + 1]);
      const double added = c.tau(s[i - 1], s[j]) + (c.pre_r[j] - c.pre_r[i]) +
                           c.tau(s[i], s[j + 1]);
      acc.add(c.region(i), added - removed);
      if (auto d = acc.settle()) sink(Move{MoveKind::TwoOpt, i, j, -1}, *d);
    }
  }
}

template <typename Sink>
void enum_reinsertion(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int p = 1; p <= c.m - 1; ++p) {
    if (c.endpoint[p]) continue;
    const NodeId x = s[p];
    const NodeId a = s[p - 1], b = s[p + 1];
    const double rm = c.tau(a, b) - c.tau(a, x) - c.tau(x, b);
    const int src = c.region(p);
    for (int q = 0; q <= c.m - 1; ++q) {
      if (q == p - 1 || q == p) continue;
      DeltaAcc acc(c);
      acc.add(src, rm);
      const NodeId u = s[q], v = s[q + 1];
      acc.add(c.edge_span[q], c.tau(u, x) + c.tau(x, v) - c.tau(u, v));
      if (auto d = acc.settle())
        sink(Move{MoveKind::Reinsertion, p, q, -1}, *d);
    }
  }
}

template <typename Sink>
void enum_or_opt2(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int p = 1; p + 2 <= c.m; ++p) {
    if (c.endpoint[p] || c.endpoint[p + 1]) continue;
    const NodeId x1 = s[p], x2 = s[p + 1];
    const NodeId a = s[p - 1], b = s[p + 2];
    const double rm =
        c.tau(a, b) - c.tau(a, x1) - c.tau(x1, x2) - c.tau(x2, b);
    const int src = c.region(p);
    for (int q = 0; q <= c.m - 1; ++q) {
      if (q >= p - 1 && q <= p + 1) continue;
      DeltaAcc acc(c);
      acc.add(src, rm);
      const NodeId u = s[q], v = s[q + 1];
      acc.add(c.edge_span[q],
              c.tau(u, x1) + c.tau(x1, x2) + c.tau(x2, v) - c.tau(u, v));
      if (auto d = acc.settle()) sink(Move{MoveKind::OrOpt2, p, q, -1}, *d);
    }
  }
}

// Shared by the full Shift10 scan and the construction helper: all ways to fly
// the customer at position pj out on a fresh sortie.
template <typename Sink>
void enum_shift10_at(const Ctx& c, int pj, Sink&& sink) {
  const auto& s = c.seq;
  const NodeId xj = s[pj];
  if (c.endpoint[pj] || !c.inst.is_eligible(xj)) return;
  const NodeId a = s[pj - 1], b = s[pj + 1];
  const double rm = c.tau(a, b) - c.tau(a, xj) - c.tau(xj, b);
  const int src = c.region(pj);
  for (const auto& [gs, ge] : c.gaps) {
    for (int pi = gs; pi <= ge; ++pi) {
      if (pi == pj) continue;
      const NodeId L = s[pi];
      if (c.launch_used[L]) continue;
      const double out = c.inst.tau_d(L, xj);
      for (int pk = pi; pk <= ge; ++pk) {
        if (pk == pj) continue;
        const NodeId R = s[pk];
        // A depot round trip resolves to the whole-route span; only the
        // (0, m) operand form matches that resolution.
        if (pi == pk && L == kDepot) continue;
        if (!sortie_allowed(c.inst, L, xj, R)) continue;
        const double lg = out + c.inst.tau_d(xj, R);
        double path = c.pre_f[pk] - c.pre_f[pi];
        const bool inside = pi < pj && pj < pk;
        if (inside) path += rm;
        if (!c.window_ok(path, lg)) continue;
        DeltaAcc acc(c);
        acc.add(src, rm);
        auto d = acc.settle();
        if (!d) continue;
        const double extra_new = effective_launch_setup(c.inst, pi) +
                                 c.inst.setup_return +
                                 std::max(0.0, lg - path);
        sink(Move{MoveKind::Shift10, pj, pi, pk}, *d + extra_new);
      }
    }
  }
}

template <typename Sink>
void enum_shift10(const Ctx& c, Sink&& sink) {
  for (int pj = 1; pj <= c.m - 1; ++pj)
    enum_shift10_at(c, pj, std::forward<Sink>(sink));
}

template <typename Sink>
void enum_inter_swap11(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int si = 0; si < int(c.sol.sorties.size()); ++si) {
    const Sortie& so = c.sol.sorties[si];
    for (int pu = 1; pu <= c.m - 1; ++pu) {
      if (c.endpoint[pu]) continue;
      const NodeId u = s[pu];
      if (!c.inst.is_eligible(u)) continue;
      if (!sortie_allowed(c.inst, so.launch, u, so.ret)) continue;
      const double lg =
          c.inst.tau_d(so.launch, u) + c.inst.tau_d(u, so.ret);
      const NodeId a = s[pu - 1], b = s[pu + 1];
      const double dpath = c.tau(a, so.customer) + c.tau(so.customer, b) -
                           c.tau(a, u) - c.tau(u, b);
      const int reg = c.region(pu);
      double delta = dpath;
      const double np = c.path[si] + (reg == si ? dpath : 0.0);
      if (!c.window_ok(np, lg)) continue;
      delta += c.sl_eff[si] + c.inst.setup_return +
               std::max(0.0, lg - np) - c.extra[si];
      if (reg >= 0 && reg != si) {
        const double other = c.path[reg] + dpath;
        if (!c.window_ok(other, c.legs[reg])) continue;
        delta += c.extra_of(reg, other) - c.extra[reg];
      }
      sink(Move{MoveKind::InterSwap11, si, pu, -1}, delta);
    }
  }
}

template <typename Sink>
void enum_swap01(const Ctx& c, Sink&& sink) {
  const auto& s = c.seq;
  for (int si = 0; si < int(c.sol.sorties.size()); ++si) {
    const NodeId cu = c.sol.sorties[si].customer;
    for (int q = 0; q <= c.m - 1; ++q) {
      const NodeId u = s[q], v = s[q + 1];
      const double ins = c.tau(u, cu) + c.tau(cu, v) - c.tau(u, v);
      double delta = ins - c.extra[si];
      const int reg = c.edge_span[q];
      if (reg >= 0 && reg != si) {
        const double np = c.path[reg] + ins;
        if (!c.window_ok(np, c.legs[reg])) continue;
        delta += c.extra_of(reg, np) - c.extra[reg];
      }
      sink(Move{MoveKind::Swap01, si, q, -1}, delta);
    }
  }
}

template <typename Sink>
void enumerate(const Ctx& c, MoveKind kind, Sink&& sink) {
  switch (kind) {
    case MoveKind::IntraSwap11: enum_intra_swap11(c, sink); break;
    case MoveKind::IntraSwap21: enum_intra_swap21(c, sink); break;
    case MoveKind::IntraSwap22: enum_intra_swap22(c, sink); break;
    case MoveKind::TwoOpt: enum_two_opt(c, sink); break;
    case MoveKind::Reinsertion: enum_reinsertion(c, sink); break;
    case MoveKind::OrOpt2: enum_or_opt2(c, sink); break;
    case MoveKind::Shift10: enum_shift10(c, sink); break;
    case MoveKind::InterSwap11: enum_inter_swap11(c, sink); break;
    case MoveKind::Swap01: enum_swap01(c, sink); break;
  }
}

struct BestSink {
  std::optional<ScoredMove> best;
  void operator()(const Move& mv, double d) {
    if (!best || d < best->delta) best = ScoredMove{mv, d};
  }
};

}  // namespace

std::optional<ScoredMove> best_move(const Solution& sol, const Instance& inst,
                                    MoveKind kind) {
  Ctx c(sol, inst);
  BestSink sink;
  enumerate(c, kind, sink);
  if (kind == MoveKind::Swap01) return sink.best;
  if (sink.best && sink.best->delta < -kImproveTol) return sink.best;
  return std::nullopt;
}

std::optional<ScoredMove> best_intra(const Solution& sol, const Instance& inst,
                                     MoveKind kind) {
  if (is_drone_move(kind))
    throw ContractViolation("best_intra expects a truck-only move kind");
  return best_move(sol, inst, kind);
}

std::optional<ScoredMove> best_shift10(const Solution& sol,
                                       const Instance& inst) {
  return best_move(sol, inst, MoveKind::Shift10);
}

std::optional<ScoredMove> best_inter_swap11(const Solution& sol,
                                            const Instance& inst) {
  return best_move(sol, inst, MoveKind::InterSwap11);
}

std::optional<ScoredMove> best_swap01(const Solution& sol,
                                      const Instance& inst) {
  return best_move(sol, inst, MoveKind::Swap01);
}

std::optional<ScoredMove> random_move(const Solution& sol, const Instance& inst,
                                      MoveKind kind, Rng& rng) {
  Ctx c(sol, inst);
  if (kind == MoveKind::Swap01) {
    // Shake semantics: pick the sortie uniformly, then land its customer at
    // the cheapest edge.
    if (sol.sorties.empty()) return std::nullopt;
    const int si = int(rng.next_below(sol.sorties.size()));
    std::optional<ScoredMove> best;
    enum_swap01(c, [&](const Move& mv, double d) {
      if (mv.a != si) return;
      if (!best || d < best->delta) best = ScoredMove{mv, d};
    });
    return best;
  }
  std::optional<ScoredMove> kept;
  uint64_t seen = 0;
  enumerate(c, kind, [&](const Move& mv, double d) {
    ++seen;
    if (rng.next_below(seen) == 0) kept = ScoredMove{mv, d};
  });
  return kept;
}

double delta_evaluate(const Solution& sol, const Move& mv,
                      const Instance& inst) {
  Ctx c(sol, inst);
  std::optional<double> found;
  enumerate(c, mv.kind, [&](const Move& cand, double d) {
    if (cand.a == mv.a && cand.b == mv.b && cand.c == mv.c) found = d;
  });
  if (!found)
    throw ContractViolation(
        fmt::format("move {}({},{},{}) is not applicable here",
                    move_kind_name(mv.kind), mv.a, mv.b, mv.c));
  return *found;
}

Solution apply(const Solution& sol, const Move& mv, const Instance& inst) {
  Solution out = sol;
  auto& s = out.truck_seq;
  const int m = int(s.size()) - 1;
  auto need = [&](bool ok, const char* what) {
    if (!ok)
      throw ContractViolation(
          fmt::format("cannot apply {}({},{},{}): {}",
                      move_kind_name(mv.kind), mv.a, mv.b, mv.c, what));
  };
  auto pos_ok = [&](int p) { return p >= 1 && p <= m - 1; };

  switch (mv.kind) {
    case MoveKind::IntraSwap11:
      need(pos_ok(mv.a) && pos_ok(mv.b), "position out of range");
      std::swap(s[mv.a], s[mv.b]);
      break;
    case MoveKind::IntraSwap21: {
      need(pos_ok(mv.a) && pos_ok(mv.a + 1) && pos_ok(mv.b),
           "position out of range");
      need(mv.b != mv.a && mv.b != mv.a + 1, "overlapping operands");
      std::vector<NodeId> ns;
      ns.reserve(s.size());
      const int a = mv.a, b = mv.b;
      if (b < a) {
        ns.insert(ns.end(), s.begin(), s.begin() + b);
        ns.push_back(s[a]);
        ns.push_back(s[a + 1]);
        ns.insert(ns.end(), s.begin() + b + 1, s.begin() + a);
        ns.push_back(s[b]);
        ns.insert(ns.end(), s.begin() + a + 2, s.end());
      } else {
        ns.insert(ns.end(), s.begin(), s.begin() + a);
        ns.push_back(s[b]);
        ns.insert(ns.end(), s.begin() + a + 2, s.begin() + b);
        ns.push_back(s[a]);
        ns.push_back(s[a + 1]);
        ns.insert(ns.end(), s.begin() + b + 1, s.end());
      }
      s = std::move(ns);
      break;
    }
    case MoveKind::IntraSwap22: {
      need(pos_ok(mv.a) && pos_ok(mv.a + 1) && pos_ok(mv.b) && pos_ok(mv.b + 1),
           "position out of range");
      need(mv.b >= mv.a + 2, "pairs must not overlap");
      std::vector<NodeId> ns;
      ns.reserve(s.size());
      ns.insert(ns.end(), s.begin(), s.begin() + mv.a);
      ns.push_back(s[mv.b]);
      ns.push_back(s[mv.b + 1]);
      ns.insert(ns.end(), s.begin() + mv.a + 2, s.begin() + mv.b);
      ns.push_back(s[mv.a]);
      ns.push_back(s[mv.a + 1]);
      ns.insert(ns.end(), s.begin() + mv.b + 2, s.end());
      s = std::move(ns);
      break;
    }
    case MoveKind::TwoOpt:
      need(pos_ok(mv.a) && pos_ok(mv.b) && mv.a < mv.b, "bad segment");
      std::reverse(s.begin() + mv.a, s.begin() + mv.b + 1);
      break;
    case MoveKind::Reinsertion: {
      need(pos_ok(mv.a), "position out of range");
      need(mv.b >= 0 && mv.b <= m - 1 && mv.b != mv.a && mv.b != mv.a - 1,
           "bad landing edge");
      const NodeId x = s[mv.a];
      s.erase(s.begin() + mv.a);
      const int at = mv.b < mv.a ? mv.b + 1 : mv.b;
      s.insert(s.begin() + at, x);
      break;
    }
    case MoveKind::OrOpt2: {
      need(pos_ok(mv.a) && pos_ok(mv.a + 1), "position out of range");
      need(mv.b >= 0 && mv.b <= m - 1 && (mv.b < mv.a - 1 || mv.b > mv.a + 1),
           "bad landing edge");
      const NodeId x1 = s[mv.a], x2 = s[mv.a + 1];
      s.erase(s.begin() + mv.a, s.begin() + mv.a + 2);
      const int at = mv.b < mv.a ? mv.b + 1 : mv.b - 1;
      s.insert(s.begin() + at, {x1, x2});
      break;
    }
    case MoveKind::Shift10: {
      need(pos_ok(mv.a), "position out of range");
      need(mv.b >= 0 && mv.b <= m && mv.c >= mv.b && mv.c <= m &&
               mv.b != mv.a && mv.c != mv.a,
           "bad launch/return positions");
      const NodeId xj = s[mv.a];
      out.sorties.push_back(Sortie{s[mv.b], xj, s[mv.c]});
      s.erase(s.begin() + mv.a);
      break;
    }
    case MoveKind::InterSwap11: {
      need(mv.a >= 0 && mv.a < int(out.sorties.size()), "no such sortie");
      need(pos_ok(mv.b), "position out of range");
      std::swap(out.sorties[mv.a].customer, s[mv.b]);
      break;
    }
    case MoveKind::Swap01: {
      need(mv.a >= 0 && mv.a < int(out.sorties.size()), "no such sortie");
      need(mv.b >= 0 && mv.b <= m - 1, "bad landing edge");
      const NodeId cu = out.sorties[mv.a].customer;
      out.sorties.erase(out.sorties.begin() + mv.a);
      s.insert(s.begin() + mv.b + 1, cu);
      break;
    }
  }
  out.objective = evaluate_timeline(out, inst).objective;
  return out;
}

std::optional<ScoredMove> best_shift10_for_position(const Solution& sol,
                                                    const Instance& inst,
                                                    int pj) {
  Ctx c(sol, inst);
  if (pj < 1 || pj > c.m - 1) return std::nullopt;
  BestSink sink;
  enum_shift10_at(c, pj, sink);
  return sink.best;
}

std::optional<ScoredMove> best_reinsertion_for_position(const Solution& sol,
                                                        const Instance& inst,
                                                        int p) {
  Ctx c(sol, inst);
  if (p < 1 || p > c.m - 1 || c.endpoint[p]) return std::nullopt;
  BestSink sink;
  const auto& s = c.seq;
  const NodeId x = s[p];
  const NodeId a = s[p - 1], b = s[p + 1];
  const double rm = c.tau(a, b) - c.tau(a, x) - c.tau(x, b);
  const int src = c.region(p);
  for (int q = 0; q <= c.m - 1; ++q) {
    if (q == p - 1 || q == p) continue;
    DeltaAcc acc(c);
    acc.add(src, rm);
    acc.add(c.edge_span[q], c.tau(s[q], x) + c.tau(x, s[q + 1]) - c.tau(s[q], s[q + 1]));
    if (auto d = acc.settle()) sink(Move{MoveKind::Reinsertion, p, q, -1}, *d);
  }
  return sink.best;
}

}  // namespace fstsp
