#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fstsp/instance.hpp"

namespace fstsp {

// One drone trip: launch from `launch`, serve `customer`, rejoin the truck at
// `ret`. Stored by node id; truck positions are derived (the depot resolves
// to position 0 when launching and to the final position when returning).
struct Sortie {
  NodeId launch = 0;
  NodeId customer = 0;
  NodeId ret = 0;
  auto operator<=>(const Sortie&) const = default;
};

struct Solution {
  std::vector<NodeId> truck_seq;  // starts and ends at the depot
  std::vector<Sortie> sorties;    // non-overlapping spans, storage order free
  double objective = 0.0;         // cached completion time, minutes
};

// Per-sortie schedule facts derived by evaluate_timeline.
struct SortieSchedule {
  int launch_pos = -1;
  int ret_pos = -1;
  double takeoff = 0.0;        // clock when the drone lifts off (post-setup)
  double drone_arrival = 0.0;  // clock when the drone reaches the return node
  double rendezvous = 0.0;     // clock when both vehicles may leave (post sR)
  double flight_legs = 0.0;    // tauD(launch,customer) + tauD(customer,ret)
  double window = 0.0;         // elapsed-mode battery window (see README)
};

struct Timeline {
  // Per truck position: physical arrival, clock after any rendezvous at this
  // stop (pre launch setup), and clock when the truck rolls again.
  std::vector<double> arrival;
  std::vector<double> ready;
  std::vector<double> depart;
  // Waiting at return positions; zero elsewhere.
  std::vector<double> truck_wait;
  std::vector<double> drone_wait;
  std::vector<SortieSchedule> sortie;  // parallel to Solution::sorties
  double objective = 0.0;
};

// Contiguous slice of the truck sequence. Adjacent sub-routes share their
// boundary position (a return node is also the first node of what follows).
// Paired sub-routes run launch..return of their sortie.
struct SubRoute {
  int start = 0;  // inclusive truck positions
  int end = 0;
  int sortie_index = -1;  // -1 for unpaired
  bool paired() const { return sortie_index >= 0; }
};

struct FeasViolation {
  enum class Kind { Coverage, Endurance, Overlap, Relaunch, Catalog };
  Kind kind;
  std::string detail;
};

struct FeasReport {
  bool ok = true;
  std::vector<FeasViolation> violations;
};

// Structural scan used by both the evaluator (throwing) and the checker
// (reporting): depot endpoints, exactly-once coverage, resolvable sortie
// positions, span overlap, launch uniqueness, depot-return-is-final rule.
// Returns resolved (launch_pos, ret_pos) pairs for each sortie when clean.
struct StructureInfo {
  std::vector<std::pair<int, int>> span;  // per sortie
  std::vector<FeasViolation> violations;
  bool ok() const { return violations.empty(); }
};
StructureInfo scan_structure(const Solution& sol, const Instance& inst);

// Simulates the mission clock along the truck sequence. Throws
// ContractViolation if the solution is structurally invalid. Endurance is not
// judged here; check_feasibility does that.
Timeline evaluate_timeline(const Solution& sol, const Instance& inst);

// Full verdict: structural findings plus endurance/catalog checks. The
// two-argument form runs its own structural scan and only consults the clock
// when the structure is sound.
FeasReport check_feasibility(const Solution& sol, const Instance& inst);
FeasReport check_feasibility(const Solution& sol, const Instance& inst,
                             const Timeline& tl);

// Splits the truck sequence into sub-routes (throws on structural breakage).
std::vector<SubRoute> subroute_partition(const Solution& sol,
                                         const Instance& inst);

// Effective launch setup charged at a launch position: zero for a depot
// launch when setup time is outside the flight clock (flight-only variants).
inline double effective_launch_setup(const Instance& inst, int launch_pos) {
  if (launch_pos == 0 && !inst.variant.setup_in_flight_time) return 0.0;
  return inst.setup_launch;
}

// Builds a truck-only solution over the given tour and caches its objective.
Solution truck_only_solution(std::vector<NodeId> tour, const Instance& inst);

// Sum of truck legs along a tour; equals the objective of a sortie-free
// solution.
double tour_length(const std::vector<NodeId>& tour, const Instance& inst);

// --- Solution JSON ----------------------------------------------------------

std::string to_solution_json(const Solution& sol);
// Recomputes the objective and rejects stored values off by more than 1e-6.
Solution load_solution(const std::string& path, const Instance& inst);
Solution parse_solution(const std::string& text, const std::string& origin,
                        const Instance& inst);
void save_solution(const Solution& sol, const std::string& path);

}  // namespace fstsp
