#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fstsp/construction.hpp"
#include "fstsp/errors.hpp"
#include "fstsp/mip.hpp"
#include "fstsp/search.hpp"
#include "fstsp/tsp_seed.hpp"
#include "support/synth.hpp"

using namespace fstsp;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& stem) {
  return fs::temp_directory_path() / ("fstsp_mip_" + stem);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> tokens(const std::string& line) {
  std::stringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// Minimal reader for the emitted LP dialect: one row per line, explicit signs.
struct ParsedLp {
  std::map<std::string, double> objective;
  struct Row {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    char sense = '?';  // L / G / E
    double rhs = 0.0;
  };
  std::vector<Row> rows;
  std::set<std::string> binaries;
  std::set<std::string> bounded;
};

ParsedLp parse_lp(const std::string& text) {
  ParsedLp lp;
  std::stringstream ss(text);
  std::string line;
  enum { Preamble, Rows, Bounds, Bins } state = Preamble;
  auto read_terms = [](const std::vector<std::string>& tk, size_t from,
                       size_t to, std::vector<std::pair<std::string, double>>& out) {
    REQUIRE((to - from) % 3 == 0);
    for (size_t i = from; i < to; i += 3) {
      REQUIRE((tk[i] == "+" || tk[i] == "-"));
      const double mag = std::stod(tk[i + 1]);
      out.emplace_back(tk[i + 2], tk[i] == "+" ? mag : -mag);
    }
  };
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '\\') continue;
    const auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk[0] == "Minimize" || tk[0] == "Maximize") continue;
    if (tk[0] == "Subject") { state = Rows; continue; }
    if (tk[0] == "Bounds") { state = Bounds; continue; }
    if (tk[0] == "Binaries") { state = Bins; continue; }
    if (tk[0] == "End") break;
    switch (state) {
      case Preamble: {
        REQUIRE(tk[0] == "obj:");
        std::vector<std::pair<std::string, double>> terms;
        read_terms(tk, 1, tk.size(), terms);
        for (auto& [name, c] : terms) lp.objective[name] += c;
        break;
      }
      case Rows: {
        ParsedLp::Row row;
        REQUIRE(tk[0].back() == ':');
        row.name = tk[0].substr(0, tk[0].size() - 1);
        const std::string& s = tk[tk.size() - 2];
        row.sense = s == "<=" ? 'L' : s == ">=" ? 'G' : 'E';
        REQUIRE((s == "<=" || s == ">=" || s == "="));
        row.rhs = std::stod(tk.back());
        read_terms(tk, 1, tk.size() - 2, row.terms);
        lp.rows.push_back(std::move(row));
        break;
      }
      case Bounds:
        REQUIRE(tk.size() == 3);
        REQUIRE(tk[1] == "<=");
        lp.bounded.insert(tk[2]);
        break;
      case Bins:
        REQUIRE(tk.size() == 1);
        lp.binaries.insert(tk[0]);
        break;
    }
  }
  return lp;
}

int count_family(const Model& m, RowFamily f) {
  int c = 0;
  for (const auto& row : m.constraints)
    if (row.family == f) ++c;
  return c;
}

}  // namespace

TEST_CASE("model dimensions match the hand count on the worked geometry") {
  // n=3, full eligibility, finite battery. By direct enumeration of the
  // moment-indexed variables:
  //   t: moments 0..4                                         ->  5
  //   x: 3 depot-out + 9 (l=1) + 9 (l=2) + 3 closing          -> 24
  //   y: 18 depot-launch + 12 * three (l,l') interior pairs   -> 54
  // and of the rows:
  //   depot 2, balance+cap 8, flow 9, one-arc 4, one-drone 3,
  //   cover 3, launch-sync 7, return-sync 11, endurance 3,
  //   clock 4, drone-gap 6, origin 1                          -> 61
  const Instance inst = synth::make_worked(VariantConfig::ponza());
  const Model model = build_model(inst);
  const ModelStats st = model_stats(model);
  CHECK(st.n_vars == 83);
  CHECK(st.n_binaries == 78);
  CHECK(st.n_constrs == 61);
  CHECK(st.n_vars == int(model.vars.size()));
  CHECK(st.n_constrs == int(model.constraints.size()));

  CHECK(count_family(model, RowFamily::DepotOut) == 1);
  CHECK(count_family(model, RowFamily::DepotBack) == 1);
  CHECK(count_family(model, RowFamily::VisitBalance) == 4);
  CHECK(count_family(model, RowFamily::VisitCap) == 4);
  CHECK(count_family(model, RowFamily::Flow) == 9);
  CHECK(count_family(model, RowFamily::OneArc) == 4);
  CHECK(count_family(model, RowFamily::OneDrone) == 3);
  CHECK(count_family(model, RowFamily::Cover) == 3);
  CHECK(count_family(model, RowFamily::LaunchSync) == 7);
  CHECK(count_family(model, RowFamily::ReturnSync) == 11);
  CHECK(count_family(model, RowFamily::Endurance) == 3);
  CHECK(count_family(model, RowFamily::TruckTime) == 4);
  CHECK(count_family(model, RowFamily::DroneTravel) == 6);
  CHECK(count_family(model, RowFamily::TimeOrigin) == 1);

  // Only the final clock variable carries objective weight.
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    CHECK(model.vars[i].obj == (int(i) == model.t_index[4] ? 1.0 : 0.0));

  // The generation filter prunes impossible arcs and trips.
  CHECK(model.find_x(0, 0, 1) >= 0);
  CHECK(model.find_x(0, 1, 2) == -1);  // moment 0 must leave the depot
  CHECK(model.find_x(1, 0, 2) == -1);  // the depot is never departed later
  CHECK(model.find_x(3, 1, 2) == -1);  // last moment must close the tour
  CHECK(model.find_x(3, 1, 0) >= 0);
  CHECK(model.find_y(0, 2, 0, 1, 3) >= 0);
  CHECK(model.find_y(2, 1, 1, 2, 3) == -1);  // return before launch
  CHECK(model.find_y(1, 2, 1, 3, 1) == -1);  // launch node equals return

  // Constraint names must be unique; both text formats key on them.
  std::set<std::string> names;
  for (const auto& c : model.constraints) CHECK(names.insert(c.name).second);

  // Infinite battery drops the airborne-window rows and nothing else.
  const Instance open = synth::make_worked(VariantConfig::tspd(2.0),
                                           kInfiniteEndurance, 0.0);
  const Model open_model = build_model(open);
  CHECK(count_family(open_model, RowFamily::Endurance) == 0);
  CHECK(open_model.vars.size() == model.vars.size());
  CHECK(open_model.constraints.size() == model.constraints.size() - 3);
}

TEST_CASE("restricted drone service prunes trip variables") {
  Instance inst = synth::make_worked(VariantConfig::ponza());
  inst.eligible = {2};
  inst.validate();
  const Model model = build_model(inst);
  for (const auto& [key, idx] : model.y_index) {
    (void)key;
    CHECK(model.vars[size_t(idx)].name.substr(0, 1) == "y");
  }
  // Only customer 2 may fly: y vars exist solely with k = 2.
  CHECK(model.find_y(0, 2, 0, 1, 3) == -1);
  CHECK(model.find_y(0, 2, 0, 2, 3) >= 0);
  const Model full = build_model(synth::make_worked(VariantConfig::ponza()));
  CHECK(model.y_index.size() < full.y_index.size());
  CHECK(model.x_index.size() == full.x_index.size());
}

TEST_CASE("emitted text reproduces the model and accepts the encoded point") {
  const Instance inst = synth::make(synth::Preset::Ponza, 6, 42);
  const Model model = build_model(inst);
  const auto path = temp_path("roundtrip.lp");
  emit_lp(model, path.string());
  const ParsedLp lp = parse_lp(slurp(path));

  // Objective: exactly the final clock variable.
  CHECK(lp.objective.size() == 1);
  CHECK(lp.objective.count("t_7") == 1);
  CHECK(lp.objective.at("t_7") == 1.0);

  // Every row survives the text round trip: name, sense, rhs, terms.
  REQUIRE(lp.rows.size() == model.constraints.size());
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& got = lp.rows[r];
    const auto& want = model.constraints[r];
    CAPTURE(want.name);
    CHECK(got.name == want.name);
    const char sense =
        want.sense == Sense::LE ? 'L' : want.sense == Sense::GE ? 'G' : 'E';
    CHECK(got.sense == sense);
    CHECK(got.rhs == want.rhs);
    REQUIRE(got.terms.size() == want.terms.size());
    for (std::size_t t = 0; t < got.terms.size(); ++t) {
      CHECK(got.terms[t].first == model.vars[size_t(want.terms[t].first)].name);
      CHECK(got.terms[t].second == want.terms[t].second);
    }
  }

  // Variable partition: binaries listed, continuous vars bounded below.
  std::size_t bins = 0, conts = 0;
  for (const Var& v : model.vars) {
    if (v.kind == VarKind::Binary) {
      ++bins;
      CHECK(lp.binaries.count(v.name) == 1);
    } else {
      ++conts;
      CHECK(lp.bounded.count(v.name) == 1);
    }
  }
  CHECK(lp.binaries.size() == bins);
  CHECK(lp.bounded.size() == conts);

  // The heuristic solution, encoded, satisfies every row as re-read from
  // disk — the full loop instance -> model -> text -> numbers.
  const Solution sol = construct(seed_tour(inst), inst);
  const Assignment a = encode_solution(model, sol, inst);
  std::map<std::string, double> value;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    value[model.vars[i].name] = a.values[i];
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [name, coeff] : row.terms) lhs += coeff * value.at(name);
    CAPTURE(row.name);
    if (row.sense == 'L') CHECK(lhs <= row.rhs + 1e-6);
    if (row.sense == 'G') CHECK(lhs >= row.rhs - 1e-6);
    if (row.sense == 'E') CHECK(lhs == doctest::Approx(row.rhs).epsilon(1e-9));
  }
  double obj = 0.0;
  for (const auto& [name, coeff] : lp.objective) obj += coeff * value.at(name);
  CHECK(obj == doctest::Approx(sol.objective));

  // Emission is deterministic: a second pass writes identical bytes.
  const auto again = temp_path("roundtrip2.lp");
  emit_lp(model, again.string());
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("fixed-column format carries the same model") {
  const Instance inst = synth::make(synth::Preset::Murray, 5, 9);
  const Model model = build_model(inst);
  const auto path = temp_path("model.mps");
  emit_mps(model, path.string());
  const std::string text = slurp(path);

  std::stringstream ss(text);
  std::string line;
  std::set<std::string> row_names, col_names, rhs_rows, bv_names;
  int markers = 0;
  std::string section;
  bool saw_endata = false;
  while (std::getline(ss, line)) {
    const auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk[0] == "NAME") { section = "NAME"; continue; }
    if (tk.size() == 1 &&
        (tk[0] == "ROWS" || tk[0] == "COLUMNS" || tk[0] == "RHS" ||
         tk[0] == "BOUNDS")) {
      section = tk[0];
      continue;
    }
    if (tk[0] == "ENDATA") { saw_endata = true; continue; }
    CHECK_FALSE(saw_endata);  // nothing may follow the terminator
    if (section == "ROWS") {
      REQUIRE(tk.size() == 2);
      CHECK((tk[0] == "N" || tk[0] == "L" || tk[0] == "G" || tk[0] == "E"));
      if (tk[0] != "N") row_names.insert(tk[1]);
    } else if (section == "COLUMNS") {
      if (tk.size() >= 3 && tk[1] == "'MARKER'") {
        ++markers;
        CHECK((tk[2] == "'INTORG'" || tk[2] == "'INTEND'"));
        continue;
      }
      REQUIRE(tk.size() == 3);
      col_names.insert(tk[0]);
      CHECK((tk[1] == "obj" || row_names.count(tk[1]) == 1));
    } else if (section == "RHS") {
      REQUIRE(tk.size() == 3);
      CHECK(std::stod(tk[2]) != 0.0);
      rhs_rows.insert(tk[1]);
    } else if (section == "BOUNDS") {
      REQUIRE(tk.size() == 3);
      CHECK(tk[0] == "BV");
      bv_names.insert(tk[2]);
    }
  }
  CHECK(saw_endata);
  CHECK(markers == 2);  // one INTORG/INTEND bracket around the binary block

  CHECK(row_names.size() == model.constraints.size());
  std::size_t bins = 0;
  for (const Var& v : model.vars) {
    CHECK(col_names.count(v.name) == 1);  // every variable appears
    if (v.kind == VarKind::Binary) {
      ++bins;
      CHECK(bv_names.count(v.name) == 1);
    }
  }
  CHECK(bv_names.size() == bins);
  for (const auto& c : model.constraints) {
    CHECK(row_names.count(c.name) == 1);
    CHECK(rhs_rows.count(c.name) == (c.rhs != 0.0 ? 1 : 0));
  }
}

TEST_CASE("flight-only adaptation rewrites rows without touching variables") {
  const Instance inst = synth::make_worked(VariantConfig::murray(), 20.0, 1.0);
  const Model base = build_model(inst);
  const Model adapted = adapt_murray(base, inst);

  CHECK(adapted.vars.size() == base.vars.size());
  CHECK(count_family(adapted, RowFamily::Endurance) == 0);
  CHECK(adapted.constraints.size() ==
        base.constraints.size() -
            std::size_t(count_family(base, RowFamily::Endurance)));

  // Drone-gap rows: launch setup no longer counts as airborne time, so every
  // trip coefficient grows by exactly s^L; clock terms stay put.
  std::size_t compared = 0;
  for (const auto& brow : base.constraints) {
    if (brow.family != RowFamily::DroneTravel) continue;
    const Constraint* arow = nullptr;
    for (const auto& c : adapted.constraints)
      if (c.name == brow.name) arow = &c;
    REQUIRE(arow != nullptr);
    REQUIRE(arow->terms.size() == brow.terms.size());
    for (std::size_t t = 0; t < brow.terms.size(); ++t) {
      CHECK(arow->terms[t].first == brow.terms[t].first);
      const bool is_trip =
          base.vars[size_t(brow.terms[t].first)].name[0] == 'y';
      const double want =
          brow.terms[t].second + (is_trip ? inst.setup_launch : 0.0);
      CHECK(arow->terms[t].second == doctest::Approx(want));
      ++compared;
    }
  }
  CHECK(compared > 0);

  // Families unrelated to the variant twist are untouched.
  for (auto fam : {RowFamily::Flow, RowFamily::Cover, RowFamily::TruckTime})
    CHECK(count_family(adapted, fam) == count_family(base, fam));
}

TEST_CASE("heuristic solutions encode as feasible points of equal objective") {
  for (auto preset : {synth::Preset::Ponza, synth::Preset::Murray}) {
    for (int n : {5, 8}) {
      const Instance inst = synth::make(preset, n, 1000 + n);
      CAPTURE(inst.name);
      Model model = build_model(inst);
      if (preset == synth::Preset::Murray)
        model = adapt_murray(std::move(model), inst);

      SearchParams params;
      params.seed = 3;
      const std::vector<Solution> sols = {construct(seed_tour(inst), inst),
                                          gvns(inst, params).best};
      for (const Solution& sol : sols) {
        const Assignment a = encode_solution(model, sol, inst);
        const AssignmentReport rep = evaluate_assignment(model, a);
        CAPTURE(rep.violations.empty() ? "" : rep.violations.front());
        CHECK(rep.feasible);
        CHECK(rep.max_violation <= 1e-6);
        CHECK(rep.objective == doctest::Approx(sol.objective).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("corrupted assignments are rejected with named offenders") {
  const Instance inst = synth::make(synth::Preset::Ponza, 5, 77);
  const Model model = build_model(inst);
  const Solution sol = construct(seed_tour(inst), inst);
  Assignment a = encode_solution(model, sol, inst);

  // Turning on one extra truck arc breaks the one-arc-per-moment family.
  int extra = -1;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].kind == VarKind::Binary && a.values[i] == 0.0 &&
        model.vars[i].name[0] == 'x') {
      extra = int(i);
      break;
    }
  REQUIRE(extra >= 0);
  a.values[size_t(extra)] = 1.0;
  const AssignmentReport rep = evaluate_assignment(model, a);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.max_violation > 0.5);
  CHECK(!rep.violations.empty());

  // Fractional binaries are flagged even when every row still holds.
  Assignment b = encode_solution(model, sol, inst);
  b.values[size_t(extra)] = 0.25;
  const AssignmentReport rep2 = evaluate_assignment(model, b);
  CHECK_FALSE(rep2.feasible);

  // Length mismatches are contract errors, not reports.
  Assignment c;
  c.values.assign(model.vars.size() - 1, 0.0);
  CHECK_THROWS_AS(evaluate_assignment(model, c), DataError);

  // Same-stop drone trips have no counterpart in the moment-indexed model.
  const Instance loop_inst = synth::make_worked(VariantConfig::tspd(2.0),
                                                kInfiniteEndurance, 0.0);
  Solution loop;
  loop.truck_seq = {0, 1, 3, 0};
  loop.sorties = {Sortie{1, 2, 1}};
  loop.objective = evaluate_timeline(loop, loop_inst).objective;
  const Model loop_model = build_model(loop_inst);
  CHECK_THROWS_AS(encode_solution(loop_model, loop, loop_inst), DataError);
}
