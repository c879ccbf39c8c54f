#pragma once

#include <optional>

#include "fstsp/rng.hpp"
#include "fstsp/solution.hpp"

namespace fstsp {

// A move only counts as improving when it beats this margin; keeps float dust
// from driving endless loops.
inline constexpr double kImproveTol = 1e-9;

enum class MoveKind {
  IntraSwap11,  // swap two truck customers
  IntraSwap21,  // swap a consecutive pair with a single customer
  IntraSwap22,  // swap two consecutive pairs
  TwoOpt,       // reverse a truck segment
  Reinsertion,  // move one truck customer elsewhere
  OrOpt2,       // move a consecutive pair elsewhere
  Shift10,      // truck customer becomes a new sortie
  InterSwap11,  // exchange a truck customer with a sortie customer
  Swap01,       // dissolve a sortie back into the truck route
};
inline constexpr int kNumMoveKinds = 9;
const char* move_kind_name(MoveKind k);
bool is_drone_move(MoveKind k);

// Operands index the solution the move was scanned on:
//   IntraSwap11   a,b: positions to swap (a < b)
//   IntraSwap21   a: pair start, b: single position (b outside {a, a+1})
//   IntraSwap22   a,b: pair starts (b >= a+2)
//   TwoOpt        a..b: positions reversed (a < b)
//   Reinsertion   a: position removed, b: node lands between b and b+1
//   OrOpt2        a: pair start, b: pair lands between b and b+1
//   Shift10       a: truck position flown out, b: launch pos, c: return pos
//   InterSwap11   a: sortie index, b: truck position joining the sortie
//   Swap01        a: sortie index, b: customer lands between b and b+1
struct Move {
  MoveKind kind = MoveKind::IntraSwap11;
  int a = -1;
  int b = -1;
  int c = -1;
};

struct ScoredMove {
  Move move;
  double delta = 0.0;  // objective change if applied
};

// Best-improvement scans. All return the feasibility-preserving move with the
// most negative delta, or nothing when no move improves. Ties break on the
// lowest operand tuple. best_swap01 is the exception: it reports the least
// damaging candidate even when every delta is positive (shake duty).
std::optional<ScoredMove> best_intra(const Solution& sol, const Instance& inst,
                                     MoveKind kind);
std::optional<ScoredMove> best_shift10(const Solution& sol, const Instance& inst);
std::optional<ScoredMove> best_inter_swap11(const Solution& sol,
                                            const Instance& inst);
std::optional<ScoredMove> best_swap01(const Solution& sol, const Instance& inst);
std::optional<ScoredMove> best_move(const Solution& sol, const Instance& inst,
                                    MoveKind kind);

// Uniform draw from a structure's feasible move set (any delta). Swap01
// follows its shake rule instead: uniform sortie, then its cheapest landing.
std::optional<ScoredMove> random_move(const Solution& sol, const Instance& inst,
                                      MoveKind kind, Rng& rng);

// Exact objective change of applying mv; matches a full re-evaluation.
double delta_evaluate(const Solution& sol, const Move& mv, const Instance& inst);

// Returns the mutated solution with a freshly evaluated objective. Throws
// ContractViolation when mv does not fit sol.
Solution apply(const Solution& sol, const Move& mv, const Instance& inst);

// Construction-time restricted scans: cheapest way to fly customer `pj` out
// (new sortie), and cheapest relocation of the node at `p`.
std::optional<ScoredMove> best_shift10_for_position(const Solution& sol,
                                                    const Instance& inst, int pj);
std::optional<ScoredMove> best_reinsertion_for_position(const Solution& sol,
                                                        const Instance& inst,
                                                        int p);

}  // namespace fstsp
