#include "fstsp/mip.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>

#include "fstsp/errors.hpp"
#include "fstsp/tsp_seed.hpp"

namespace fstsp {

namespace {

// Shortest round-trip decimal text; deterministic across runs.
std::string num(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15)
    return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{}", v);
}

constexpr std::uint64_t kDim = 512;  // per-index stride for lookup keys

}  // namespace

std::uint64_t Model::xkey(int l, int i, int j) const {
  return (std::uint64_t(l) * kDim + std::uint64_t(i)) * kDim + std::uint64_t(j);
}

std::uint64_t Model::ykey(int l, int lp, int i, int k, int j) const {
  std::uint64_t key = std::uint64_t(l);
  key = key * kDim + std::uint64_t(lp);
  key = key * kDim + std::uint64_t(i);
  key = key * kDim + std::uint64_t(k);
  key = key * kDim + std::uint64_t(j);
  return key;
}

int Model::find_x(int l, int i, int j) const {
  const auto it = x_index.find(xkey(l, i, j));
  return it == x_index.end() ? -1 : it->second;
}

int Model::find_y(int l, int lp, int i, int k, int j) const {
  const auto it = y_index.find(ykey(l, lp, i, k, j));
  return it == y_index.end() ? -1 : it->second;
}

namespace {

struct Builder {
  const Instance& inst;
  Model m;
  int n;
  bool with_endurance;

  explicit Builder(const Instance& ins) : inst(ins), n(ins.n) {
    m.n = n;
    m.name = ins.name.empty() ? "fstsp" : ins.name;
    with_endurance = inst.endurance != kInfiniteEndurance;
  }

  // Truck arc (i,j) usable at moment l: the truck leaves the depot exactly at
  // moment 0 and can only close the tour from a customer; customer-to-customer
  // legs need a later moment left to return.
  bool x_allowed(int l, int i, int j) const {
    if (i == j) return false;
    if (l == 0) return i == kDepot && j != kDepot;
    if (i == kDepot) return false;
    if (j == kDepot) return true;  // l in 1..n
    return l <= n - 1;
  }

  bool y_allowed(int l, int lp, int i, int k, int j) const {
    if (lp <= l || lp > n) return false;
    if (l == 0 ? i != kDepot : i == kDepot) return false;
    if (i == j) return false;  // one truck visit per node: not realizable
    return sortie_allowed(inst, i, k, j);
  }

  int add_var(std::string name, VarKind kind, double obj = 0.0) {
    m.vars.push_back(Var{std::move(name), kind, 0.0,
                         kind == VarKind::Binary ? 1.0 : kInfiniteEndurance,
                         obj});
    return int(m.vars.size()) - 1;
  }

  void make_vars() {
    m.t_index.resize(size_t(n) + 2);
    for (int l = 0; l <= n + 1; ++l)
      m.t_index[size_t(l)] =
          add_var(fmt::format("t_{}", l), VarKind::Continuous,
                  l == n + 1 ? 1.0 : 0.0);
    for (int l = 0; l <= n; ++l)
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
          if (x_allowed(l, i, j))
            m.x_index[m.xkey(l, i, j)] =
                add_var(fmt::format("x_{}_{}_{}", l, i, j), VarKind::Binary);
    for (int l = 0; l <= n - 1; ++l)
      for (int lp = l + 1; lp <= n; ++lp)
        for (int i = 0; i <= n; ++i)
          for (NodeId k : inst.eligible)
            for (int j = 0; j <= n; ++j)
              if (y_allowed(l, lp, i, k, j))
                m.y_index[m.ykey(l, lp, i, k, j)] = add_var(
                    fmt::format("y_{}_{}_{}_{}_{}", l, lp, i, k, j),
                    VarKind::Binary);
  }

  void row(std::string name, RowFamily fam,
           std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
    m.constraints.push_back(
        Constraint{std::move(name), fam, std::move(terms), sense, rhs});
  }

  // Accumulators over the generated variable set.
  template <typename F>
  void each_x(F&& f) const {
    for (const auto& [key, idx] : m.x_index) {
      const int j = int(key % kDim), i = int(key / kDim % kDim),
                l = int(key / (kDim * kDim));
      f(l, i, j, idx);
    }
  }
  template <typename F>
  void each_y(F&& f) const {
    for (const auto& [key, idx] : m.y_index) {
      std::uint64_t k2 = key;
      const int j = int(k2 % kDim);
      k2 /= kDim;
      const int k = int(k2 % kDim);
      k2 /= kDim;
      const int i = int(k2 % kDim);
      k2 /= kDim;
      const int lp = int(k2 % kDim);
      const int l = int(k2 / kDim);
      f(l, lp, i, k, j, idx);
    }
  }

  void make_rows() {
    // Truck leaves the depot at moment 0 and comes back once.
    {
      std::vector<std::pair<int, double>> out, back;
      for (int j = 1; j <= n; ++j)
        if (int v = m.find_x(0, kDepot, j); v >= 0) out.emplace_back(v, 1.0);
      for (int l = 1; l <= n; ++l)
        for (int j = 1; j <= n; ++j)
          if (int v = m.find_x(l, j, kDepot); v >= 0) back.emplace_back(v, 1.0);
      row("depot_out", RowFamily::DepotOut, std::move(out), Sense::EQ, 1.0);
      row("depot_back", RowFamily::DepotBack, std::move(back), Sense::EQ, 1.0);
    }

    // Per node: departures equal arrivals, and at most one of each.
    for (int i = 0; i <= n; ++i) {
      std::vector<std::pair<int, double>> bal, cap;
      for (int l = 0; l <= n; ++l)
        for (int j = 0; j <= n; ++j) {
          if (int v = m.find_x(l, i, j); v >= 0) {
            bal.emplace_back(v, 1.0);
            cap.emplace_back(v, 1.0);
          }
          if (int v = m.find_x(l, j, i); v >= 0) bal.emplace_back(v, -1.0);
        }
      row(fmt::format("visit_bal_{}", i), RowFamily::VisitBalance,
          std::move(bal), Sense::EQ, 0.0);
      row(fmt::format("visit_cap_{}", i), RowFamily::VisitCap, std::move(cap),
          Sense::LE, 1.0);
    }

    // Arriving at k on the moment-(l-1) arc forces departing k at moment l.
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j <= n; ++j)
          if (int v = m.find_x(l - 1, j, k); v >= 0) terms.emplace_back(v, 1.0);
        for (int j = 0; j <= n; ++j)
          if (int v = m.find_x(l, k, j); v >= 0) terms.emplace_back(v, -1.0);
        row(fmt::format("flow_{}_{}", k, l), RowFamily::Flow, std::move(terms),
            Sense::EQ, 0.0);
      }

    // One truck arc per moment.
    for (int l = 0; l <= n; ++l) {
      std::vector<std::pair<int, double>> terms;
      each_x([&](int xl, int, int, int idx) {
        if (xl == l) terms.emplace_back(idx, 1.0);
      });
      if (terms.empty()) continue;
      sort_terms(terms);
      row(fmt::format("one_arc_{}", l), RowFamily::OneArc, std::move(terms),
          Sense::LE, 1.0);
    }

    // The drone is airborne over at most one window covering any moment.
    for (int l = 0; l <= n; ++l) {
      std::vector<std::pair<int, double>> terms;
      each_y([&](int yl, int ylp, int, int, int, int idx) {
        if (yl <= l && ylp >= l + 1) terms.emplace_back(idx, 1.0);
      });
      if (terms.empty()) continue;
      sort_terms(terms);
      row(fmt::format("one_drone_{}", l), RowFamily::OneDrone,
          std::move(terms), Sense::LE, 1.0);
    }

    // Every customer is served exactly once, by road or by air.
    for (int k = 1; k <= n; ++k) {
      std::vector<std::pair<int, double>> terms;
      for (int l = 0; l <= n; ++l)
        for (int j = 0; j <= n; ++j)
          if (int v = m.find_x(l, k, j); v >= 0) terms.emplace_back(v, 1.0);
      each_y([&](int, int, int, int yk, int, int idx) {
        if (yk == k) terms.emplace_back(idx, 1.0);
      });
      sort_terms(terms);
      row(fmt::format("cover_{}", k), RowFamily::Cover, std::move(terms),
          Sense::EQ, 1.0);
    }

    // Launch at (i, l) only when the truck departs i at moment l.
    for (int i = 0; i <= n; ++i)
      for (int l = 0; l <= n; ++l) {
        std::vector<std::pair<int, double>> terms;
        each_y([&](int yl, int, int yi, int, int, int idx) {
          if (yl == l && yi == i) terms.emplace_back(idx, 1.0);
        });
        if (terms.empty()) continue;
        sort_terms(terms);
        for (int j = 0; j <= n; ++j)
          if (int v = m.find_x(l, i, j); v >= 0) terms.emplace_back(v, -1.0);
        row(fmt::format("launch_{}_{}", i, l), RowFamily::LaunchSync,
            std::move(terms), Sense::LE, 0.0);
      }

    // Return at (j, l') only when the truck arrives at j on the previous arc.
    for (int j = 0; j <= n; ++j)
      for (int lp = 1; lp <= n; ++lp) {
        std::vector<std::pair<int, double>> terms;
        each_y([&](int, int ylp, int, int, int yj, int idx) {
          if (ylp == lp && yj == j) terms.emplace_back(idx, 1.0);
        });
        if (terms.empty()) continue;
        sort_terms(terms);
        for (int i = 0; i <= n; ++i)
          if (int v = m.find_x(lp - 1, i, j); v >= 0)
            terms.emplace_back(v, -1.0);
        row(fmt::format("return_{}_{}", j, lp), RowFamily::ReturnSync,
            std::move(terms), Sense::LE, 0.0);
      }

    // Airborne window bounded by endurance unless no trip spans (l, l').
    if (with_endurance) {
      for (int l = 1; l <= n - 1; ++l)
        for (int lp = l + 1; lp <= n; ++lp) {
          std::vector<std::pair<int, double>> terms;
          each_y([&](int yl, int ylp, int, int, int, int idx) {
            if (yl == l && ylp == lp) terms.emplace_back(idx, m.big_m);
          });
          if (terms.empty()) continue;
          sort_terms(terms);
          terms.emplace_back(m.t_index[size_t(lp)], 1.0);
          terms.emplace_back(m.t_index[size_t(l)], -1.0);
          row(fmt::format("endur_{}_{}", l, lp), RowFamily::Endurance,
              std::move(terms), Sense::LE, inst.endurance + m.big_m);
        }
    }

    // Clock recursion along the truck's route, with launch setup charged when
    // departing a launch node (interior launches only) and return setup upon
    // arrival at a return node.
    for (int l = 1; l <= n + 1; ++l) {
      std::vector<std::pair<int, double>> terms;
      terms.emplace_back(m.t_index[size_t(l)], 1.0);
      terms.emplace_back(m.t_index[size_t(l) - 1], -1.0);
      std::vector<std::pair<int, double>> tail;
      each_x([&](int xl, int i, int j, int idx) {
        if (xl == l - 1) tail.emplace_back(idx, -inst.tau(i, j));
      });
      each_y([&](int yl, int ylp, int, int, int, int idx) {
        double c = 0.0;
        if (l >= 2 && yl == l - 1) c -= inst.setup_launch;
        if (yl >= 1 && ylp == l) c -= inst.setup_return;
        if (c != 0.0) tail.emplace_back(idx, c);
      });
      sort_terms(tail);
      terms.insert(terms.end(), tail.begin(), tail.end());
      row(fmt::format("ttime_{}", l), RowFamily::TruckTime, std::move(terms),
          Sense::GE, 0.0);
    }

    // Clock gap between launch and return covers the drone's trip.
    for (int lp = 1; lp <= n; ++lp)
      for (int l = 0; l <= lp - 1; ++l) {
        std::vector<std::pair<int, double>> tail;
        each_y([&](int yl, int ylp, int i, int k, int j, int idx) {
          if (yl == l && ylp == lp)
            tail.emplace_back(idx, -(inst.setup_launch +
                                     inst.tau_d(i, k) + inst.tau_d(k, j) +
                                     inst.setup_return));
        });
        if (tail.empty()) continue;
        sort_terms(tail);
        std::vector<std::pair<int, double>> terms;
        terms.emplace_back(m.t_index[size_t(lp)], 1.0);
        terms.emplace_back(m.t_index[size_t(l)], -1.0);
        terms.insert(terms.end(), tail.begin(), tail.end());
        row(fmt::format("dtime_{}_{}", l, lp), RowFamily::DroneTravel,
            std::move(terms), Sense::GE, 0.0);
      }

    row("t0", RowFamily::TimeOrigin, {{m.t_index[0], 1.0}}, Sense::EQ, 0.0);
  }

  static void sort_terms(std::vector<std::pair<int, double>>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
};

}  // namespace

Model build_model(const Instance& inst) {
  Builder b(inst);
  // Deactivation constant: any completion time reachable by a reasonable
  // schedule sits below the greedy tour plus a full setup budget.
  const std::vector<NodeId> nn = nearest_neighbor(inst);
  b.m.big_m = tour_length(nn, inst) +
              double(inst.n) * (inst.setup_launch + inst.setup_return);
  b.make_vars();
  b.make_rows();
  return std::move(b.m);
}

Model adapt_murray(Model model, const Instance& inst) {
  std::vector<Constraint> kept;
  kept.reserve(model.constraints.size());
  for (Constraint& c : model.constraints) {
    if (c.family == RowFamily::Endurance) continue;
    if (c.family == RowFamily::DroneTravel) {
      for (auto& [idx, coeff] : c.terms)
        if (model.vars[size_t(idx)].name[0] == 'y')
          coeff += inst.setup_launch;  // flight time no longer carries s^L
    }
    kept.push_back(std::move(c));
  }
  model.constraints = std::move(kept);
  return model;
}

ModelStats model_stats(const Model& model) {
  ModelStats s;
  s.n_vars = int(model.vars.size());
  s.n_constrs = int(model.constraints.size());
  for (const Var& v : model.vars)
    if (v.kind == VarKind::Binary) ++s.n_binaries;
  return s;
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

const char* sense_lp(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    case Sense::EQ: return "=";
  }
  return "?";
}

}  // namespace

void emit_lp(const Model& model, const std::string& path) {
  std::string out;
  out += fmt::format("\\ model {}\n", model.name);
  out += "Minimize\n obj:";
  bool any = false;
  for (const Var& v : model.vars)
    if (v.obj != 0.0) {
      out += fmt::format(" {} {} {}", v.obj < 0 ? "-" : "+",
                         num(std::abs(v.obj)), v.name);
      any = true;
    }
  if (!any) out += " + 0 t_0";
  out += "\nSubject To\n";
  for (const Constraint& c : model.constraints) {
    out += fmt::format(" {}:", c.name);
    for (const auto& [idx, coeff] : c.terms)
      out += fmt::format(" {} {} {}", coeff < 0 ? "-" : "+",
                         num(std::abs(coeff)), model.vars[size_t(idx)].name);
    if (c.terms.empty()) out += " + 0 t_0";
    out += fmt::format(" {} {}\n", sense_lp(c.sense), num(c.rhs));
  }
  out += "Bounds\n";
  for (const Var& v : model.vars) {
    if (v.kind == VarKind::Binary) continue;
    // Continuous vars here are all [0, inf) — the LP default; stated anyway
    // for explicitness on the clock chain.
    out += fmt::format(" 0 <= {}\n", v.name);
  }
  out += "Binaries\n";
  for (const Var& v : model.vars)
    if (v.kind == VarKind::Binary) out += fmt::format(" {}\n", v.name);
  out += "End\n";
  write_file(path, out);
}

void emit_mps(const Model& model, const std::string& path) {
  std::string out;
  out += fmt::format("NAME          {}\n", model.name);
  out += "ROWS\n N  obj\n";
  for (const Constraint& c : model.constraints) {
    const char tag = c.sense == Sense::LE ? 'L' : c.sense == Sense::GE ? 'G' : 'E';
    out += fmt::format(" {}  {}\n", tag, c.name);
  }

  // Column-major terms: var index -> (row name, coeff) in row order.
  std::vector<std::vector<std::pair<const std::string*, double>>> cols(
      model.vars.size());
  for (const Constraint& c : model.constraints)
    for (const auto& [idx, coeff] : c.terms)
      cols[size_t(idx)].emplace_back(&c.name, coeff);

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (size_t vi = 0; vi < model.vars.size(); ++vi) {
    const Var& v = model.vars[vi];
    const bool want_int = v.kind == VarKind::Binary;
    if (want_int != in_int) {
      out += fmt::format("    MARKER{:<8}  'MARKER'                 '{}'\n",
                         marker++, want_int ? "INTORG" : "INTEND");
      in_int = want_int;
    }
    if (v.obj != 0.0)
      out += fmt::format("    {:<14}  {:<14}  {}\n", v.name, "obj", num(v.obj));
    for (const auto& [row_name, coeff] : cols[vi])
      out += fmt::format("    {:<14}  {:<14}  {}\n", v.name, *row_name,
                         num(coeff));
    if (v.obj == 0.0 && cols[vi].empty())
      out += fmt::format("    {:<14}  {:<14}  0\n", v.name, "obj");
  }
  if (in_int)
    out += fmt::format("    MARKER{:<8}  'MARKER'                 'INTEND'\n",
                       marker++);

  out += "RHS\n";
  for (const Constraint& c : model.constraints)
    if (c.rhs != 0.0)
      out += fmt::format("    {:<14}  {:<14}  {}\n", "RHS", c.name, num(c.rhs));

  out += "BOUNDS\n";
  for (const Var& v : model.vars) {
    if (v.kind == VarKind::Binary)
      out += fmt::format(" BV {:<11}  {}\n", "BND", v.name);
    // Continuous vars keep the default [0, inf).
  }
  out += "ENDATA\n";
  write_file(path, out);
}

Assignment encode_solution(const Model& model, const Solution& sol,
                           const Instance& inst) {
  const Timeline tl = evaluate_timeline(sol, inst);
  const StructureInfo info = scan_structure(sol, inst);
  if (!info.ok()) throw DataError("cannot encode a structurally invalid solution");

  Assignment a;
  a.values.assign(model.vars.size(), 0.0);
  const int m = int(sol.truck_seq.size()) - 1;
  if (m > model.n + 1) throw DataError("solution is longer than the model horizon");

  for (int p = 0; p < m; ++p) {
    const int idx = model.find_x(p, sol.truck_seq[size_t(p)],
                                 sol.truck_seq[size_t(p) + 1]);
    if (idx < 0)
      throw DataError(fmt::format(
          "truck arc at position {} has no model variable", p));
    a.values[size_t(idx)] = 1.0;
  }
  for (size_t si = 0; si < sol.sorties.size(); ++si) {
    const Sortie& s = sol.sorties[si];
    const auto [lp, rp] = info.span[si];
    if (lp == rp)
      throw DataError("same-stop drone trips have no model counterpart");
    const int idx = model.find_y(lp, rp, s.launch, s.customer, s.ret);
    if (idx < 0)
      throw DataError(fmt::format(
          "drone trip ({},{},{}) over moments {}..{} has no model variable",
          s.launch, s.customer, s.ret, lp, rp));
    a.values[size_t(idx)] = 1.0;
  }
  for (int l = 0; l <= model.n + 1; ++l) {
    const double v = l <= m ? tl.ready[size_t(l)] : tl.objective;
    a.values[size_t(model.t_index[size_t(l)])] = v;
  }
  return a;
}

AssignmentReport evaluate_assignment(const Model& model, const Assignment& a) {
  AssignmentReport rep;
  if (a.values.size() != model.vars.size())
    throw DataError("assignment length does not match the variable count");
  constexpr double kTol = 1e-6;

  auto offend = [&](std::string what, double viol) {
    rep.max_violation = std::max(rep.max_violation, viol);
    if (rep.violations.size() < 8) rep.violations.push_back(std::move(what));
  };

  for (size_t vi = 0; vi < model.vars.size(); ++vi) {
    const Var& v = model.vars[vi];
    const double x = a.values[vi];
    rep.objective += v.obj * x;
    if (x < v.lb - kTol || (v.ub != kInfiniteEndurance && x > v.ub + kTol))
      offend(fmt::format("{} = {} outside bounds", v.name, x),
             std::max(v.lb - x, x - v.ub));
    if (v.kind == VarKind::Binary && std::abs(x - std::round(x)) > 1e-9)
      offend(fmt::format("{} = {} not integral", v.name, x),
             std::abs(x - std::round(x)));
  }
  for (const Constraint& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& [idx, coeff] : c.terms) lhs += coeff * a.values[size_t(idx)];
    double viol = 0.0;
    switch (c.sense) {
      case Sense::LE: viol = lhs - c.rhs; break;
      case Sense::GE: viol = c.rhs - lhs; break;
      case Sense::EQ: viol = std::abs(lhs - c.rhs); break;
    }
    if (viol > kTol)
      offend(fmt::format("row {} violated by {}", c.name, viol), viol);
  }
  rep.feasible = rep.violations.empty();
  return rep;
}

}  // namespace fstsp
