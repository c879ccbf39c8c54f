#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fstsp/errors.hpp"

namespace fstsp {

// Node 0 is the depot; customers are 1..n.
using NodeId = int;
inline constexpr NodeId kDepot = 0;

inline constexpr double kInfiniteEndurance =
    std::numeric_limits<double>::infinity();

// Feasibility slack for time comparisons (endurance windows, flight caps).
inline constexpr double kFeasTol = 1e-9;

enum class EnduranceMode {
  Elapsed,     // battery drains from launch event to rendezvous, waits included
  FlightOnly,  // only the two flight legs count; waiting is free
};

// Knobs that tell the engine which problem flavor it is solving. Presets
// below cover the three supported families.
struct VariantConfig {
  EnduranceMode endurance_mode = EnduranceMode::Elapsed;
  bool allow_launch_equals_return = false;
  bool setup_in_flight_time = true;  // launch setup drains the battery
  double alpha = 1.0;                // drone:truck speed ratio, informational

  static VariantConfig ponza() { return {EnduranceMode::Elapsed, false, true, 1.0}; }
  static VariantConfig murray() {
    return {EnduranceMode::FlightOnly, false, false, 1.0};
  }
  static VariantConfig tspd(double alpha) {
    return {EnduranceMode::Elapsed, true, true, alpha};
  }
};

// Dense square matrix of travel times in minutes, indexed by NodeId.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim, double fill = 0.0)
      : dim_(dim), cells_(static_cast<std::size_t>(dim) * dim, fill) {}

  int dim() const { return dim_; }
  double operator()(NodeId i, NodeId j) const {
    return cells_[static_cast<std::size_t>(i) * dim_ + j];
  }
  double& operator()(NodeId i, NodeId j) {
    return cells_[static_cast<std::size_t>(i) * dim_ + j];
  }
  bool operator==(const Matrix&) const = default;

 private:
  int dim_ = 0;
  std::vector<double> cells_;
};

struct Instance {
  int n = 0;        // customer count; nodes are 0..n
  Matrix tau;       // truck travel minutes, (n+1) x (n+1)
  Matrix tau_d;     // drone travel minutes
  double endurance = kInfiniteEndurance;  // e, minutes
  double setup_launch = 0.0;              // sL, minutes
  double setup_return = 0.0;              // sR, minutes
  std::vector<NodeId> eligible;           // sorted unique subset of 1..n
  VariantConfig variant;
  std::string name;  // display only

  bool is_eligible(NodeId k) const {
    return k >= 1 && k <= n && eligible_bits_.size() == std::size_t(n + 1)
               ? eligible_bits_[k] != 0
               : slow_is_eligible(k);
  }

  // Throws DataError naming the offending field. Also rebuilds the
  // eligibility bitmap, so call it after mutating fields.
  void validate();

 private:
  bool slow_is_eligible(NodeId k) const;
  std::vector<char> eligible_bits_;
};

struct SortieTriple {
  NodeId launch = 0;
  NodeId customer = 0;
  NodeId ret = 0;
  auto operator<=>(const SortieTriple&) const = default;
};

// Single source of truth for "may the drone fly (launch, customer, ret)".
// Checks eligibility, node distinctness rules, and the flight-leg endurance
// cap (legs only; elapsed-mode windows are judged at evaluation time).
bool sortie_allowed(const Instance& inst, NodeId launch, NodeId customer,
                    NodeId ret);

// All allowed triples in (launch, customer, ret) ascending order.
struct SortieCatalog {
  std::vector<SortieTriple> triples;
  bool contains(const Instance& inst, const SortieTriple& t) const {
    return sortie_allowed(inst, t.launch, t.customer, t.ret);
  }
};

SortieCatalog enumerate_sorties(const Instance& inst);

// --- Matrices from geometry ------------------------------------------------

struct Coord {
  double x = 0.0;
  double y = 0.0;
};

enum class TruckMetric { Euclidean, Manhattan };
enum class DroneMetric { Euclidean };

// Distances in km, speeds in km/h, resulting times in minutes.
// coords[0] is the depot; at least two nodes required.
void build_matrices(const std::vector<Coord>& coords, TruckMetric truck_metric,
                    DroneMetric drone_metric, double truck_speed_kmh,
                    double drone_speed_kmh, Matrix& tau, Matrix& tau_d);

// --- File formats -----------------------------------------------------------

// Canonical JSON format (see README for the schema).
Instance load_canonical(const std::string& path);
Instance parse_canonical(const std::string& text, const std::string& origin);
std::string to_canonical_json(const Instance& inst);
void save_canonical(const Instance& inst, const std::string& path);

// TSPLIB-style EUC_2D node list; times derived with a Manhattan truck metric
// and Euclidean drone metric at 40 km/h each, e = 40, sL = sR = 1, and an
// optional ELIGIBLE_SECTION (defaults to every customer). README has the
// field table.
Instance import_tsplib_fstsp(const std::string& path);

// Plain-text header (truck speed, drone speed, node count) followed by one
// "x y" line per node, depot first: times are distance/speed in raw units,
// sL = sR = 0, unlimited endurance, launch==return allowed.
Instance import_agatz(const std::string& path);

// Detects canonical JSON / TSPLIB / plain-header layouts by content.
Instance load_auto(const std::string& path);

}  // namespace fstsp
