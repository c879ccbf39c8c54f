#include "fstsp/solution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"

namespace fstsp {

using json = nlohmann::ordered_json;

namespace {

std::string triple_str(const Sortie& s) {
  return fmt::format("({},{},{})", s.launch, s.customer, s.ret);
}

}  // namespace

StructureInfo scan_structure(const Solution& sol, const Instance& inst) {
  StructureInfo info;
  auto flag = [&](FeasViolation::Kind k, std::string msg) {
    info.violations.push_back({k, std::move(msg)});
  };
  const auto& seq = sol.truck_seq;
  int m = static_cast<int>(seq.size()) - 1;

  if (seq.size() < 2 || seq.front() != kDepot || seq.back() != kDepot) {
    flag(FeasViolation::Kind::Coverage,
         "truck sequence must start and end at the depot");
    return info;
  }

  // Visit counts across truck and drone; customer -> truck position.
  std::vector<int> truck_pos(inst.n + 1, -1);
  std::vector<int> visits(inst.n + 1, 0);
  bool positions_ok = true;
  for (int p = 0; p <= m; ++p) {
    NodeId v = seq[p];
    if (v < 0 || v > inst.n) {
      flag(FeasViolation::Kind::Coverage,
           fmt::format("truck node {} out of range", v));
      return info;
    }
    if (v == kDepot) {
      if (p != 0 && p != m) {
        flag(FeasViolation::Kind::Coverage,
             fmt::format("depot revisited at position {}", p));
        positions_ok = false;
      }
      continue;
    }
    ++visits[v];
    if (truck_pos[v] != -1) {
      flag(FeasViolation::Kind::Coverage,
           fmt::format("customer {} appears twice in the truck sequence", v));
      positions_ok = false;
    }
    truck_pos[v] = p;
  }

  info.span.assign(sol.sorties.size(), {-1, -1});
  std::vector<char> launch_used(inst.n + 1, 0);
  for (std::size_t si = 0; si < sol.sorties.size(); ++si) {
    const Sortie& s = sol.sorties[si];
    if (s.customer < 1 || s.customer > inst.n) {
      flag(FeasViolation::Kind::Coverage,
           fmt::format("sortie customer {} out of range", s.customer));
      continue;
    }
    ++visits[s.customer];
    if (!inst.is_eligible(s.customer))
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} customer not eligible", triple_str(s)));
    if (s.launch == s.customer || s.customer == s.ret)
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} reuses its customer node", triple_str(s)));
    if (s.launch == s.ret && !inst.variant.allow_launch_equals_return)
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} launch equals return, not allowed here",
                       triple_str(s)));
    if (s.launch < 0 || s.launch > inst.n || s.ret < 0 || s.ret > inst.n) {
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} node out of range", triple_str(s)));
      continue;
    }
    if (s.launch == kDepot) {
      if (launch_used[kDepot])
        flag(FeasViolation::Kind::Relaunch,
             "two sorties launch from the depot");
      launch_used[kDepot] = 1;
    } else {
      if (launch_used[s.launch])
        flag(FeasViolation::Kind::Relaunch,
             fmt::format("node {} launches two sorties", s.launch));
      launch_used[s.launch] = 1;
    }
    if (!positions_ok) continue;
    int lp = s.launch == kDepot ? 0 : truck_pos[s.launch];
    int rp = s.ret == kDepot ? m : truck_pos[s.ret];
    if (lp < 0 || rp < 0) {
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} endpoint not on the truck route",
                       triple_str(s)));
      continue;
    }
    if (lp > rp) {
      flag(FeasViolation::Kind::Catalog,
           fmt::format("sortie {} launch after return", triple_str(s)));
      continue;
    }
    info.span[si] = {lp, rp};
  }

  for (NodeId k = 1; k <= inst.n; ++k) {
    if (visits[k] == 0)
      flag(FeasViolation::Kind::Coverage,
           fmt::format("customer {} is never served", k));
    else if (visits[k] > 1)
      flag(FeasViolation::Kind::Coverage,
           fmt::format("customer {} is served twice", k));
  }

  // Pairwise span rules: interiors must not intersect; returning at the
  // depot retires the drone.
  std::vector<std::size_t> order;
  for (std::size_t si = 0; si < sol.sorties.size(); ++si)
    if (info.span[si].first >= 0) order.push_back(si);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return info.span[a] < info.span[b];
  });
  for (std::size_t idx = 1; idx < order.size(); ++idx) {
    auto [a_lo, a_hi] = info.span[order[idx - 1]];
    auto [b_lo, b_hi] = info.span[order[idx]];
    (void)a_lo;
    if (b_lo < a_hi)
      flag(FeasViolation::Kind::Overlap,
           fmt::format("sorties {} and {} overlap on the truck route",
                       triple_str(sol.sorties[order[idx - 1]]),
                       triple_str(sol.sorties[order[idx]])));
  }
  for (std::size_t si : order) {
    const Sortie& s = sol.sorties[si];
    if (s.ret != kDepot) continue;
    for (std::size_t sj : order)
      if (sj != si && info.span[sj].first >= info.span[si].second)
        flag(FeasViolation::Kind::Relaunch,
             fmt::format("sortie {} launches after {} returned at the depot",
                         triple_str(sol.sorties[sj]), triple_str(s)));
  }
  return info;
}

Timeline evaluate_timeline(const Solution& sol, const Instance& inst) {
  StructureInfo info = scan_structure(sol, inst);
  if (!info.ok())
    throw ContractViolation(
        fmt::format("invalid solution: {}", info.violations.front().detail));

  const auto& seq = sol.truck_seq;
  int m = static_cast<int>(seq.size()) - 1;
  Timeline tl;
  tl.arrival.assign(m + 1, 0.0);
  tl.ready.assign(m + 1, 0.0);
  tl.depart.assign(m + 1, 0.0);
  tl.truck_wait.assign(m + 1, 0.0);
  tl.drone_wait.assign(m + 1, 0.0);
  tl.sortie.assign(sol.sorties.size(), {});

  std::vector<int> launch_at(m + 1, -1);
  std::vector<int> ret_at(m + 1, -1);  // non-degenerate returns only
  for (std::size_t si = 0; si < sol.sorties.size(); ++si) {
    auto [lp, rp] = info.span[si];
    tl.sortie[si].launch_pos = lp;
    tl.sortie[si].ret_pos = rp;
    tl.sortie[si].flight_legs =
        inst.tau_d(sol.sorties[si].launch, sol.sorties[si].customer) +
        inst.tau_d(sol.sorties[si].customer, sol.sorties[si].ret);
    launch_at[lp] = static_cast<int>(si);
    if (rp > lp) ret_at[rp] = static_cast<int>(si);
  }

  double clock = 0.0;
  for (int p = 0; p <= m; ++p) {
    if (p > 0) clock += inst.tau(seq[p - 1], seq[p]);
    tl.arrival[p] = clock;
    if (int si = ret_at[p]; si >= 0) {
      double da = tl.sortie[si].drone_arrival;
      tl.truck_wait[p] = std::max(0.0, da - clock);
      tl.drone_wait[p] = std::max(0.0, clock - da);
      clock = std::max(clock, da) + inst.setup_return;
      tl.sortie[si].rendezvous = clock;
    }
    tl.ready[p] = clock;
    if (int si = launch_at[p]; si >= 0) {
      clock += effective_launch_setup(inst, p);
      tl.sortie[si].takeoff = clock;
      tl.sortie[si].drone_arrival = clock + tl.sortie[si].flight_legs;
      if (tl.sortie[si].ret_pos == p) {  // degenerate: truck holds position
        double da = tl.sortie[si].drone_arrival;
        tl.truck_wait[p] += std::max(0.0, da - clock);
        clock = std::max(clock, da) + inst.setup_return;
        tl.sortie[si].rendezvous = clock;
      }
    }
    tl.depart[p] = clock;
  }
  for (auto& sc : tl.sortie)
    sc.window = sc.rendezvous - sc.takeoff +
                (inst.variant.setup_in_flight_time ? inst.setup_launch : 0.0);
  tl.objective = clock;
  return tl;
}

FeasReport check_feasibility(const Solution& sol, const Instance& inst) {
  StructureInfo info = scan_structure(sol, inst);
  if (!info.ok()) {
    FeasReport rep;
    rep.ok = false;
    rep.violations = info.violations;
    return rep;
  }
  return check_feasibility(sol, inst, evaluate_timeline(sol, inst));
}

FeasReport check_feasibility(const Solution& sol, const Instance& inst,
                             const Timeline& tl) {
  FeasReport rep;
  for (std::size_t si = 0; si < sol.sorties.size(); ++si) {
    const SortieSchedule& sc = tl.sortie[si];
    if (inst.variant.endurance_mode == EnduranceMode::FlightOnly) {
      if (sc.flight_legs > inst.endurance + kFeasTol)
        rep.violations.push_back(
            {FeasViolation::Kind::Endurance,
             fmt::format("sortie {} flight {} exceeds endurance {}",
                         triple_str(sol.sorties[si]), sc.flight_legs,
                         inst.endurance)});
    } else {
      if (sc.window > inst.endurance + kFeasTol)
        rep.violations.push_back(
            {FeasViolation::Kind::Endurance,
             fmt::format("sortie {} airborne window {} exceeds endurance {}",
                         triple_str(sol.sorties[si]), sc.window,
                         inst.endurance)});
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

std::vector<SubRoute> subroute_partition(const Solution& sol,
                                         const Instance& inst) {
  StructureInfo info = scan_structure(sol, inst);
  if (!info.ok())
    throw ContractViolation(
        fmt::format("invalid solution: {}", info.violations.front().detail));
  int m = static_cast<int>(sol.truck_seq.size()) - 1;

  std::vector<std::size_t> order;
  for (std::size_t si = 0; si < sol.sorties.size(); ++si) order.push_back(si);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return info.span[a] < info.span[b];
  });

  std::vector<SubRoute> out;
  int cursor = 0;
  for (std::size_t si : order) {
    auto [lo, hi] = info.span[si];
    if (lo > cursor) out.push_back({cursor, lo, -1});
    out.push_back({lo, hi, static_cast<int>(si)});
    cursor = hi;
  }
  if (cursor < m || out.empty()) out.push_back({cursor, m, -1});
  return out;
}

double tour_length(const std::vector<NodeId>& tour, const Instance& inst) {
  double len = 0.0;
  for (std::size_t p = 1; p < tour.size(); ++p)
    len += inst.tau(tour[p - 1], tour[p]);
  return len;
}

Solution truck_only_solution(std::vector<NodeId> tour, const Instance& inst) {
  Solution sol;
  sol.truck_seq = std::move(tour);
  sol.objective = tour_length(sol.truck_seq, inst);
  return sol;
}

// --- Solution JSON ----------------------------------------------------------

std::string to_solution_json(const Solution& sol) {
  json j;
  j["truck_seq"] = sol.truck_seq;
  json arr = json::array();
  for (const Sortie& s : sol.sorties)
    arr.push_back({{"launch", s.launch},
                   {"customer", s.customer},
                   {"return", s.ret}});
  j["sorties"] = std::move(arr);
  j["objective"] = sol.objective;
  return j.dump(2) + "\n";
}

Solution parse_solution(const std::string& text, const std::string& origin,
                        const Instance& inst) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  Solution sol;
  if (!j.is_object() || !j.contains("truck_seq") || !j.contains("sorties") ||
      !j.contains("objective"))
    throw DataError(fmt::format(
        "{}: solution needs truck_seq, sorties and objective", origin));
  for (const json& v : j["truck_seq"]) sol.truck_seq.push_back(v.get<int>());
  for (const json& s : j["sorties"]) {
    if (!s.contains("launch") || !s.contains("customer") || !s.contains("return"))
      throw DataError(fmt::format(
          "{}: each sortie needs launch, customer and return", origin));
    sol.sorties.push_back({s["launch"].get<int>(), s["customer"].get<int>(),
                           s["return"].get<int>()});
  }
  double stored = j["objective"].get<double>();
  double actual;
  try {
    actual = evaluate_timeline(sol, inst).objective;
  } catch (const ContractViolation& e) {
    throw DataError(fmt::format("{}: {}", origin, e.what()));
  }
  if (std::abs(actual - stored) > 1e-6)
    throw DataError(
        fmt::format("{}: stored objective {} does not match recomputed {}",
                    origin, stored, actual));
  sol.objective = actual;
  return sol;
}

Solution load_solution(const std::string& path, const Instance& inst) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_solution(ss.str(), path, inst);
}

void save_solution(const Solution& sol, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path));
  out << to_solution_json(sol);
  if (!out) throw IoError(fmt::format("write failed for {}", path));
}

}  // namespace fstsp
