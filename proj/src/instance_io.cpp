#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "fstsp/instance.hpp"
#include "nlohmann/json.hpp"

namespace fstsp {

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

Matrix matrix_from_json(const json& j, int dim, const char* field,
                        const std::string& origin) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw DataError(
        fmt::format("{}: {} must be a {}-row array", origin, field, dim));
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw DataError(fmt::format("{}: {} row {} must have {} entries", origin,
                                  field, i, dim));
    for (int k = 0; k < dim; ++k) {
      if (!row[k].is_number())
        throw DataError(fmt::format("{}: {}[{}][{}] must be a number", origin,
                                    field, i, k));
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const char* where, const std::string& origin) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      throw DataError(
          fmt::format("{}: unknown {} field \"{}\"", origin, where, it.key()));
  }
}

const json& require(const json& obj, const char* key, const std::string& origin) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DataError(fmt::format("{}: missing field \"{}\"", origin, key));
  return *it;
}

}  // namespace

Instance parse_canonical(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  if (!j.is_object())
    throw ParseError(fmt::format("{}: top level must be an object", origin));
  reject_unknown_keys(j, {"n", "tau", "tauD", "e", "sL", "sR", "eligible",
                          "variant"},
                      "instance", origin);

  Instance inst;
  const json& jn = require(j, "n", origin);
  if (!jn.is_number_integer())
    throw DataError(fmt::format("{}: n must be an integer", origin));
  inst.n = jn.get<int>();
  if (inst.n < 1) throw DataError(fmt::format("{}: n must be >= 1", origin));

  inst.tau = matrix_from_json(require(j, "tau", origin), inst.n + 1, "tau", origin);
  inst.tau_d =
      matrix_from_json(require(j, "tauD", origin), inst.n + 1, "tauD", origin);

  const json& je = require(j, "e", origin);
  if (je.is_string()) {
    if (je.get<std::string>() != "inf")
      throw DataError(fmt::format("{}: e must be a number or \"inf\"", origin));
    inst.endurance = kInfiniteEndurance;
  } else if (je.is_number()) {
    inst.endurance = je.get<double>();
  } else {
    throw DataError(fmt::format("{}: e must be a number or \"inf\"", origin));
  }

  const json& jsl = require(j, "sL", origin);
  const json& jsr = require(j, "sR", origin);
  if (!jsl.is_number() || !jsr.is_number())
    throw DataError(fmt::format("{}: sL and sR must be numbers", origin));
  inst.setup_launch = jsl.get<double>();
  inst.setup_return = jsr.get<double>();

  const json& jel = require(j, "eligible", origin);
  if (!jel.is_array())
    throw DataError(fmt::format("{}: eligible must be an array", origin));
  for (const json& v : jel) {
    if (!v.is_number_integer())
      throw DataError(fmt::format("{}: eligible entries must be integers", origin));
    inst.eligible.push_back(v.get<int>());
  }

  const json& jv = require(j, "variant", origin);
  if (!jv.is_object())
    throw DataError(fmt::format("{}: variant must be an object", origin));
  reject_unknown_keys(jv,
                      {"endurance_mode", "allow_launch_equals_return",
                       "setup_in_flight_time", "alpha"},
                      "variant", origin);
  std::string mode = require(jv, "endurance_mode", origin).get<std::string>();
  if (mode == "elapsed")
    inst.variant.endurance_mode = EnduranceMode::Elapsed;
  else if (mode == "flight_only")
    inst.variant.endurance_mode = EnduranceMode::FlightOnly;
  else
    throw DataError(fmt::format(
        "{}: endurance_mode must be \"elapsed\" or \"flight_only\", got \"{}\"",
        origin, mode));
  inst.variant.allow_launch_equals_return =
      require(jv, "allow_launch_equals_return", origin).get<bool>();
  inst.variant.setup_in_flight_time =
      require(jv, "setup_in_flight_time", origin).get<bool>();
  inst.variant.alpha = require(jv, "alpha", origin).get<double>();

  inst.name = origin;
  try {
    inst.validate();
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", origin, e.what()));
  }
  return inst;
}

Instance load_canonical(const std::string& path) {
  Instance inst = parse_canonical(read_file(path), path);
  inst.name = stem_of(path);
  return inst;
}

std::string to_canonical_json(const Instance& inst) {
  json j;
  j["n"] = inst.n;
  auto matrix_to_json = [&](const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i <= inst.n; ++i) {
      json row = json::array();
      for (int k = 0; k <= inst.n; ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["tau"] = matrix_to_json(inst.tau);
  j["tauD"] = matrix_to_json(inst.tau_d);
  if (std::isinf(inst.endurance))
    j["e"] = "inf";
  else
    j["e"] = inst.endurance;
  j["sL"] = inst.setup_launch;
  j["sR"] = inst.setup_return;
  j["eligible"] = inst.eligible;
  j["variant"] = {
      {"endurance_mode", inst.variant.endurance_mode == EnduranceMode::Elapsed
                             ? "elapsed"
                             : "flight_only"},
      {"allow_launch_equals_return", inst.variant.allow_launch_equals_return},
      {"setup_in_flight_time", inst.variant.setup_in_flight_time},
      {"alpha", inst.variant.alpha},
  };
  return j.dump(2) + "\n";
}

void save_canonical(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path));
  out << to_canonical_json(inst);
  if (!out) throw IoError(fmt::format("write failed for {}", path));
}

// --- TSPLIB-style -----------------------------------------------------------

namespace {

// "KEY : value" or "KEY: value"; returns false for section markers / data.
bool split_spec_line(const std::string& line, std::string& key,
                     std::string& value) {
  auto colon = line.find(':');
  if (colon == std::string::npos) return false;
  key = line.substr(0, colon);
  value = line.substr(colon + 1);
  auto trim = [](std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  };
  trim(key);
  trim(value);
  return true;
}

std::string trimmed(const std::string& line) {
  auto b = line.find_first_not_of(" \t\r");
  auto e = line.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : line.substr(b, e - b + 1);
}

}  // namespace

Instance import_tsplib_fstsp(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  int dimension = -1;
  std::string edge_weight_type;
  double truck_speed = 40.0, drone_speed = 40.0;
  double endurance = 40.0, setup_launch = 1.0, setup_return = 1.0;
  std::vector<Coord> coords;
  std::vector<char> coord_seen;
  std::vector<NodeId> eligible_list;
  bool have_coords = false, have_eligible = false;

  enum class Section { Header, Coords, Eligible };
  Section section = Section::Header;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trimmed(line);
    if (t.empty()) continue;
    if (t == "EOF") break;
    if (t == "NODE_COORD_SECTION") {
      if (dimension <= 0)
        throw ParseError(fmt::format(
            "{}:{}: NODE_COORD_SECTION before DIMENSION", path, lineno));
      coords.assign(dimension, {});
      coord_seen.assign(dimension, 0);
      section = Section::Coords;
      have_coords = true;
      continue;
    }
    if (t == "ELIGIBLE_SECTION") {
      section = Section::Eligible;
      have_eligible = true;
      continue;
    }
    std::string key, value;
    if (section == Section::Header || split_spec_line(t, key, value)) {
      if (!split_spec_line(t, key, value))
        throw ParseError(
            fmt::format("{}:{}: expected \"KEY : value\", got \"{}\"", path,
                        lineno, t));
      try {
        if (key == "DIMENSION") dimension = std::stoi(value);
        else if (key == "EDGE_WEIGHT_TYPE") edge_weight_type = value;
        else if (key == "TRUCK_SPEED") truck_speed = std::stod(value);
        else if (key == "DRONE_SPEED") drone_speed = std::stod(value);
        else if (key == "ENDURANCE") endurance = std::stod(value);
        else if (key == "SETUP_LAUNCH") setup_launch = std::stod(value);
        else if (key == "SETUP_RETURN") setup_return = std::stod(value);
        // NAME, TYPE, COMMENT and friends are accepted and ignored.
      } catch (const std::exception&) {
        throw ParseError(fmt::format("{}:{}: bad numeric value \"{}\" for {}",
                                     path, lineno, value, key));
      }
      continue;
    }
    if (section == Section::Coords) {
      std::istringstream ls(t);
      int id;
      double x, y;
      if (!(ls >> id >> x >> y))
        throw ParseError(fmt::format(
            "{}:{}: expected \"id x y\" coordinate line, got \"{}\"", path,
            lineno, t));
      if (id < 1 || id > dimension)
        throw ParseError(fmt::format("{}:{}: node id {} out of range 1..{}",
                                     path, lineno, id, dimension));
      coords[id - 1] = {x, y};
      coord_seen[id - 1] = 1;
      continue;
    }
    if (section == Section::Eligible) {
      std::istringstream ls(t);
      int id;
      if (!(ls >> id))
        throw ParseError(fmt::format("{}:{}: expected a node id, got \"{}\"",
                                     path, lineno, t));
      if (id < 2 || id > dimension)
        throw ParseError(fmt::format(
            "{}:{}: eligible id {} out of customer range 2..{}", path, lineno,
            id, dimension));
      eligible_list.push_back(id - 1);  // file ids are 1-based, 1 = depot
      continue;
    }
  }

  if (dimension <= 1)
    throw ParseError(fmt::format("{}: DIMENSION must be >= 2", path));
  if (edge_weight_type != "EUC_2D")
    throw ParseError(fmt::format("{}: EDGE_WEIGHT_TYPE must be EUC_2D, got {}",
                                 path,
                                 edge_weight_type.empty() ? "(missing)"
                                                          : edge_weight_type));
  if (!have_coords)
    throw ParseError(fmt::format("{}: missing NODE_COORD_SECTION", path));
  for (int i = 0; i < dimension; ++i)
    if (!coord_seen[i])
      throw ParseError(
          fmt::format("{}: no coordinates for node {}", path, i + 1));

  Instance inst;
  inst.n = dimension - 1;
  build_matrices(coords, TruckMetric::Manhattan, DroneMetric::Euclidean,
                 truck_speed, drone_speed, inst.tau, inst.tau_d);
  inst.endurance = endurance;
  inst.setup_launch = setup_launch;
  inst.setup_return = setup_return;
  if (have_eligible) {
    std::sort(eligible_list.begin(), eligible_list.end());
    eligible_list.erase(
        std::unique(eligible_list.begin(), eligible_list.end()),
        eligible_list.end());
    inst.eligible = eligible_list;
  } else {
    for (NodeId k = 1; k <= inst.n; ++k) inst.eligible.push_back(k);
  }
  inst.variant = VariantConfig::murray();
  inst.variant.alpha = drone_speed / truck_speed;
  inst.name = stem_of(path);
  inst.validate();
  return inst;
}

// --- Plain-header layout ----------------------------------------------------

Instance import_agatz(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  std::vector<double> numbers;  // flattened tokens, in order
  std::vector<int> number_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trimmed(line);
    if (t.empty() || t[0] == '#' || t.starts_with("//")) continue;
    std::istringstream ls(t);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        numbers.push_back(v);
        number_lines.push_back(lineno);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("{}:{}: expected a number, got \"{}\"",
                                     path, lineno, tok));
      }
    }
  }
  if (numbers.size() < 3)
    throw ParseError(fmt::format(
        "{}: expected truck speed, drone speed and node count header", path));
  double truck_speed = numbers[0];
  double drone_speed = numbers[1];
  double count_raw = numbers[2];
  int count = static_cast<int>(count_raw);
  if (count != count_raw || count < 2)
    throw ParseError(fmt::format("{}:{}: node count must be an integer >= 2",
                                 path, number_lines[2]));
  if (!(truck_speed > 0.0) || !(drone_speed > 0.0))
    throw ParseError(fmt::format("{}: speeds must be > 0", path));
  if (numbers.size() != static_cast<std::size_t>(3 + 2 * count))
    throw ParseError(fmt::format(
        "{}: expected {} coordinate values for {} nodes, found {}", path,
        2 * count, count, numbers.size() - 3));
  std::vector<Coord> coords(count);
  for (int i = 0; i < count; ++i)
    coords[i] = {numbers[3 + 2 * i], numbers[4 + 2 * i]};

  Instance inst;
  inst.n = count - 1;
  inst.tau = Matrix(count);
  inst.tau_d = Matrix(count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
      inst.tau(i, j) = d / truck_speed;   // raw units, no minute conversion
      inst.tau_d(i, j) = d / drone_speed;
    }
  inst.endurance = kInfiniteEndurance;
  inst.setup_launch = 0.0;
  inst.setup_return = 0.0;
  for (NodeId k = 1; k <= inst.n; ++k) inst.eligible.push_back(k);
  inst.variant = VariantConfig::tspd(drone_speed / truck_speed);
  inst.name = stem_of(path);
  inst.validate();
  return inst;
}

Instance load_auto(const std::string& path) {
  std::string text = read_file(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Instance inst = parse_canonical(text, path);
    inst.name = stem_of(path);
    return inst;
  }
  if (text.find("NODE_COORD_SECTION") != std::string::npos)
    return import_tsplib_fstsp(path);
  return import_agatz(path);
}

}  // namespace fstsp
