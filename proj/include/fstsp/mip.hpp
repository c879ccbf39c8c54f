#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fstsp/solution.hpp"

namespace fstsp {

// Moment-indexed completion-time model. The truck's visit order is expressed
// by arc variables indexed with a "moment" 0..n (position in the visit
// order); drone trips get launch/return moment pairs. Built symbolically and
// emitted as LP/MPS text; no solver is embedded.

enum class VarKind { Binary, Continuous };

struct Var {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInfiniteEndurance;  // +inf sentinel reused as "no upper bound"
  double obj = 0.0;
};

enum class Sense { LE, GE, EQ };

// Row families let variant adaptation edit the model surgically.
enum class RowFamily {
  DepotOut,      // truck leaves the depot at moment 0
  DepotBack,     // and returns once
  VisitBalance,  // per node: departures == arrivals
  VisitCap,      // per node: at most one visit
  Flow,          // arrive at moment l-1  <=>  depart at moment l
  OneArc,        // at most one arc per moment
  OneDrone,      // no overlapping airborne windows
  Cover,         // every customer served exactly once
  LaunchSync,    // a launch needs the truck departing that node then
  ReturnSync,    // a return needs the truck arriving at that node then
  Endurance,     // airborne window bounded (big-M deactivated)
  TruckTime,     // clock recursion along the truck route
  DroneTravel,   // clock gap covers the drone's flight + setups
  TimeOrigin,    // clock starts at zero
};

struct Constraint {
  std::string name;
  RowFamily family = RowFamily::TimeOrigin;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

struct Model {
  std::string name;
  int n = 0;       // customers
  double big_m = 0.0;
  std::vector<Var> vars;
  std::vector<Constraint> constraints;

  // Lookup tables for encoding solutions; keys are positional encodings.
  std::vector<int> t_index;                    // moment -> var (size n+2)
  std::unordered_map<std::uint64_t, int> x_index;
  std::unordered_map<std::uint64_t, int> y_index;

  std::uint64_t xkey(int l, int i, int j) const;
  std::uint64_t ykey(int l, int lp, int i, int k, int j) const;
  int find_x(int l, int i, int j) const;              // -1 if absent
  int find_y(int l, int lp, int i, int k, int j) const;
};

struct ModelStats {
  int n_vars = 0;
  int n_constrs = 0;
  int n_binaries = 0;
};

// Base build follows elapsed-endurance semantics; infinite endurance drops the
// airborne-window rows. Arc and trip variables are generated only where a
// feasible schedule could use them (see README for the exact filter).
Model build_model(const Instance& inst);

// Variant twist: endurance rows removed; launch setup no longer counts as
// drone flight time in the clock-gap rows.
Model adapt_murray(Model model, const Instance& inst);

ModelStats model_stats(const Model& model);

void emit_lp(const Model& model, const std::string& path);
void emit_mps(const Model& model, const std::string& path);

// Direct assignment checking — the solver-free correctness loop: a heuristic
// solution must encode into the model as a feasible point of equal objective.
struct Assignment {
  std::vector<double> values;  // indexed like Model::vars
};

struct AssignmentReport {
  bool feasible = false;
  double objective = 0.0;
  double max_violation = 0.0;
  std::vector<std::string> violations;  // first few offender descriptions
};

Assignment encode_solution(const Model& model, const Solution& sol,
                           const Instance& inst);
AssignmentReport evaluate_assignment(const Model& model, const Assignment& a);

}  // namespace fstsp
