#include "assd/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "assd/csv_io.hpp"

namespace assd::harness {

namespace {

using KeyValues = std::map<std::string, std::string>;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "matrix", "n", "p", "pi", "rank", "csv_path", "standardize",
      "s0", "coeff_law", "coeff_lo", "coeff_hi", "tail_value", "sigma",
      "solvers", "eta", "lmax", "lmax_fraction", "R", "tau_step", "rank_tol", "l1_tol",
      "sigma_hat_on_abs", "repeats", "seed", "sweep", "sweep_values", "fix_matrix", "plots",
      "output_dir"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long i = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return i;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  std::uint64_t u = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), u);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an unsigned integer");
  return u;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

SweepVar parse_sweep(const std::string& v) {
  if (v == "none" || v.empty()) return SweepVar::none;
  if (v == "n") return SweepVar::n;
  if (v == "p") return SweepVar::p;
  if (v == "s0") return SweepVar::s0;
  if (v == "pi") return SweepVar::pi;
  if (v == "r") return SweepVar::r;
  throw ConfigError("sweep: expected one of n, p, s0, pi, r");
}

ExperimentConfig build(const KeyValues& kv) {
  for (const auto& [k, v] : kv) {
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig c;
  c.echo = kv;
  if (auto v = get("n")) c.matrix.n = to_integer("n", *v);
  if (auto v = get("p")) c.matrix.p = to_integer("p", *v);

  const std::string family = get("matrix").value_or("iid_gaussian");
  if (family == "iid_gaussian" || family == "iid") {
    c.matrix.family = datagen::IidGaussian{};
  } else if (family == "ar1_gaussian" || family == "ar1") {
    c.matrix.family = datagen::Ar1Gaussian{get("pi") ? to_double("pi", *get("pi")) : 0.0};
  } else if (family == "structured") {
    if (!get("rank")) throw ConfigError("structured matrix needs 'rank'");
    c.matrix.family = datagen::Structured{to_integer("rank", *get("rank"))};
  } else if (family == "csv_file" || family == "csv") {
    if (!get("csv_path")) throw ConfigError("csv matrix needs 'csv_path'");
    c.matrix.family = datagen::CsvFile{*get("csv_path"),
                                       get("standardize") ? to_bool("standardize", *get("standardize")) : false,
                                       nullptr};
  } else {
    throw ConfigError("matrix: unknown family '" + family + "'");
  }

  if (auto v = get("s0")) c.coeffs.s0 = to_integer("s0", *v);
  if (auto v = get("coeff_law")) c.coeffs.law = datagen::parse_law(*v);
  if (auto v = get("coeff_lo")) c.coeffs.lo = to_double("coeff_lo", *v);
  if (auto v = get("coeff_hi")) c.coeffs.hi = to_double("coeff_hi", *v);
  if (auto v = get("tail_value")) c.coeffs.tail_value = to_double("tail_value", *v);
  if (auto v = get("sigma")) c.sigma = to_double("sigma", *v);

  SolverConfig base;
  if (auto v = get("eta")) base.eta = to_double("eta", *v);
  base.sigma_known = c.sigma;
  if (auto v = get("lmax")) base.l_max_override = to_integer("lmax", *v);
  if (auto v = get("lmax_fraction")) c.lmax_fraction = to_double("lmax_fraction", *v);
  if (auto v = get("R")) base.R = to_double("R", *v);
  if (auto v = get("tau_step")) base.tau_step = to_double("tau_step", *v);
  if (auto v = get("rank_tol")) base.rank_tol = to_double("rank_tol", *v);
  if (auto v = get("l1_tol")) base.l1_tol = to_double("l1_tol", *v);
  if (auto v = get("sigma_hat_on_abs")) base.sigma_hat_on_abs = to_bool("sigma_hat_on_abs", *v);

  for (const std::string& name : split_list(get("solvers").value_or("assd"))) {
    SolverConfig sc = base;
    sc.algorithm = parse_algorithm(name);
    c.solvers.push_back({std::string(to_string(sc.algorithm)), sc});
  }

  if (auto v = get("repeats")) c.repeats = to_integer("repeats", *v);
  if (auto v = get("seed")) c.seed = to_seed("seed", *v);
  if (auto v = get("sweep")) c.sweep = parse_sweep(*v);
  if (auto v = get("sweep_values")) {
    for (const std::string& s : split_list(*v)) c.sweep_values.push_back(to_double("sweep_values", s));
  }
  if (auto v = get("fix_matrix")) c.fix_matrix = to_bool("fix_matrix", *v);
  if (auto v = get("plots")) c.plots = to_bool("plots", *v);
  if (auto v = get("output_dir")) c.output_dir = *v;

  c.validate();
  return c;
}

}  // namespace

std::string to_string(SweepVar v) {
  switch (v) {
    case SweepVar::none: return "none";
    case SweepVar::n: return "n";
    case SweepVar::p: return "p";
    case SweepVar::s0: return "s0";
    case SweepVar::pi: return "pi";
    case SweepVar::r: return "r";
  }
  return "none";
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (solvers.empty()) throw ConfigError("at least one solver is required");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");
  if (lmax_fraction && !(*lmax_fraction > 0.0)) throw ConfigError("lmax_fraction must be positive");
  if (sweep == SweepVar::none && !sweep_values.empty()) throw ConfigError("sweep_values given without 'sweep'");
  if (sweep != SweepVar::none && sweep_values.empty()) throw ConfigError("sweep needs sweep_values");
  for (std::size_t i = 1; i < sweep_values.size(); ++i) {
    if (!(sweep_values[i] > sweep_values[i - 1])) throw ConfigError("sweep_values must be strictly increasing");
  }
  if (sweep == SweepVar::pi && !std::holds_alternative<datagen::Ar1Gaussian>(matrix.family)) {
    throw ConfigError("sweep over pi needs matrix = ar1_gaussian");
  }
  if (sweep == SweepVar::r && !std::holds_alternative<datagen::Structured>(matrix.family)) {
    throw ConfigError("sweep over r needs matrix = structured");
  }
  if (const auto* csv = std::get_if<datagen::CsvFile>(&matrix.family)) {
    if (!std::filesystem::exists(csv->path)) throw ConfigError("csv_path '" + csv->path + "' does not exist");
  }
  for (const auto& s : solvers) {
    if (s.config.algorithm != Algorithm::ssd && !s.config.eta && !s.config.sigma_known) {
      throw ConfigError("solver " + s.name + " needs eta or sigma");
    }
  }
  try {
    if (sweep == SweepVar::none) {
      matrix.validate();
      coeffs.validate(matrix.p);
    }
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  KeyValues kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return build(kv);
}

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  KeyValues kv;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      kv[key] = value.get<std::string>();
    } else if (value.is_boolean()) {
      kv[key] = value.get<bool>() ? "true" : "false";
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      kv[key] = value.dump();
    } else if (value.is_number()) {
      kv[key] = csv::format_double(value.get<double>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += item.is_string() ? item.get<std::string>()
                                   : (item.is_number_float() ? csv::format_double(item.get<double>()) : item.dump());
      }
      kv[key] = joined;
    } else {
      throw ConfigError("config key '" + key + "' has an unsupported JSON type");
    }
  }
  return build(kv);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_config_json(text);
  return parse_config_text(text);
}

}  // namespace assd::harness
