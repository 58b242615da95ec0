#include "mgmc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace mgmc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config key '" + key + "': not a number: '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(std::llround(v));
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config key '" + key + "': not an integer: '" + value + "'");
  }
  return i;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(trim(part));
  return parts;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& p : split_commas(value)) out.push_back(parse_double(key, p));
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& p : split_commas(value)) out.push_back(parse_int(key, p));
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

Point3 parse_point(const std::string& key, const std::string& value) {
  const auto v = parse_double_list(key, value);
  if (v.size() != 3) {
    throw std::invalid_argument("config key '" + key + "': expected x,y,z");
  }
  return {v[0], v[1], v[2]};
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

template <typename T>
std::string format_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_number(static_cast<double>(values[i]));
  }
  return out;
}

std::string format_point(const Point3& p) {
  return format_number(p[0]) + "," + format_number(p[1]) + "," + format_number(p[2]);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (num_tx_antennas < 1) throw std::invalid_argument("n must be >= 1");
  if (num_tiles < 0) throw std::invalid_argument("m must be >= 0");
  if (group_sizes.empty()) throw std::invalid_argument("group_sizes must be nonempty");
  for (int kg : group_sizes) {
    if (kg < 1) throw std::invalid_argument("group sizes must be >= 1");
  }
  geometry.validate();
  budget.validate();
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> values;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(std::map<std::string, std::string>& values, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must be key=value: '" + assignment + "'");
  }
  values[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ExperimentConfig build_experiment_config(const std::map<std::string, std::string>& values) {
  ExperimentConfig cfg;
  auto& sc = cfg.scenario;
  auto& so = cfg.solver;

  const std::map<std::string, std::function<void(const std::string&, const std::string&)>>
      setters = {
          {"n", [&](const std::string& k, const std::string& v) { sc.num_tx_antennas = parse_int(k, v); }},
          {"m", [&](const std::string& k, const std::string& v) { sc.num_tiles = parse_int(k, v); }},
          {"group_sizes", [&](const std::string& k, const std::string& v) { sc.group_sizes = parse_int_list(k, v); }},
          {"pt_dbm", [&](const std::string& k, const std::string& v) { sc.pt_dbm = parse_double(k, v); }},
          {"tau", [&](const std::string& k, const std::string& v) { so.tau = parse_double(k, v); }},
          {"tol", [&](const std::string& k, const std::string& v) { so.tol = parse_double(k, v); }},
          {"max_iters", [&](const std::string& k, const std::string& v) { so.max_iters = parse_int(k, v); }},
          {"armijo_c", [&](const std::string& k, const std::string& v) { so.armijo_c = parse_double(k, v); }},
          {"shrink", [&](const std::string& k, const std::string& v) { so.shrink = parse_double(k, v); }},
          {"alpha_init_f", [&](const std::string& k, const std::string& v) { so.alpha_init_f = parse_double(k, v); }},
          {"alpha_init_theta", [&](const std::string& k, const std::string& v) { so.alpha_init_theta = parse_double(k, v); }},
          {"carrier_hz",
           [&](const std::string& k, const std::string& v) {
             sc.geometry.carrier_hz = parse_double(k, v);
             sc.geometry.element_spacing = 0.5 * sc.geometry.wavelength();
           }},
          {"element_spacing", [&](const std::string& k, const std::string& v) { sc.geometry.element_spacing = parse_double(k, v); }},
          {"min_user_separation", [&](const std::string& k, const std::string& v) { sc.geometry.min_user_separation = parse_double(k, v); }},
          {"user_radius", [&](const std::string& k, const std::string& v) { sc.geometry.user_area_radius = parse_double(k, v); }},
          {"tx_pos", [&](const std::string& k, const std::string& v) { sc.geometry.tx_center = parse_point(k, v); }},
          {"irs_pos", [&](const std::string& k, const std::string& v) { sc.geometry.irs_center = parse_point(k, v); }},
          {"user_center", [&](const std::string& k, const std::string& v) { sc.geometry.user_area_center = parse_point(k, v); }},
          {"bandwidth_hz", [&](const std::string& k, const std::string& v) { sc.budget.bandwidth_hz = parse_double(k, v); }},
          {"noise_psd_dbm_hz", [&](const std::string& k, const std::string& v) { sc.budget.noise_psd_dbm_hz = parse_double(k, v); }},
          {"pl_tx_irs",
           [&](const std::string& k, const std::string& v) {
             const auto p = parse_double_list(k, v);
             if (p.size() != 2) throw std::invalid_argument(k + ": expected intercept_db,exponent");
             sc.budget.tx_irs = {p[0], p[1]};
           }},
          {"pl_irs_user",
           [&](const std::string& k, const std::string& v) {
             const auto p = parse_double_list(k, v);
             if (p.size() != 2) throw std::invalid_argument(k + ": expected intercept_db,exponent");
             sc.budget.irs_user = {p[0], p[1]};
           }},
          {"pl_tx_user",
           [&](const std::string& k, const std::string& v) {
             const auto p = parse_double_list(k, v);
             if (p.size() != 2) throw std::invalid_argument(k + ": expected intercept_db,exponent");
             sc.budget.tx_user = {p[0], p[1]};
           }},
          {"rician_k_tx_irs_db", [&](const std::string& k, const std::string& v) { sc.budget.rician_k_tx_irs_db = parse_double(k, v); }},
          {"rician_k_irs_user_db", [&](const std::string& k, const std::string& v) { sc.budget.rician_k_irs_user_db = parse_double(k, v); }},
          {"rician_k_tx_user_db", [&](const std::string& k, const std::string& v) { sc.budget.rician_k_tx_user_db = parse_double(k, v); }},
          {"sweep_pt_dbm", [&](const std::string& k, const std::string& v) { cfg.sweep_pt_dbm = parse_double_list(k, v); }},
          {"sweep_m", [&](const std::string& k, const std::string& v) { cfg.sweep_m = parse_int_list(k, v); }},
      };

  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("unknown config key: '" + key + "'");
    }
    it->second(key, value);
  }

  cfg.scenario.validate();
  cfg.solver.validate();
  for (int m : cfg.sweep_m) {
    if (m < 0) throw std::invalid_argument("sweep_m entries must be >= 0");
  }
  return cfg;
}

std::string ExperimentConfig::echo() const {
  const auto& sc = scenario;
  const auto& so = solver;
  std::string out;
  const auto kv = [&out](const std::string& k, const std::string& v) {
    if (!out.empty()) out += " ";
    out += k + "=" + v;
  };
  kv("n", format_number(sc.num_tx_antennas));
  kv("m", format_number(sc.num_tiles));
  kv("group_sizes", format_list(sc.group_sizes));
  kv("pt_dbm", format_number(sc.pt_dbm));
  kv("tau", format_number(so.tau));
  kv("tol", format_number(so.tol));
  kv("max_iters", format_number(so.max_iters));
  kv("armijo_c", format_number(so.armijo_c));
  kv("shrink", format_number(so.shrink));
  kv("alpha_init_f", format_number(so.alpha_init_f));
  kv("alpha_init_theta", format_number(so.alpha_init_theta));
  kv("carrier_hz", format_number(sc.geometry.carrier_hz));
  kv("element_spacing", format_number(sc.geometry.element_spacing));
  kv("min_user_separation", format_number(sc.geometry.min_user_separation));
  kv("tx_pos", format_point(sc.geometry.tx_center));
  kv("irs_pos", format_point(sc.geometry.irs_center));
  kv("user_center", format_point(sc.geometry.user_area_center));
  kv("user_radius", format_number(sc.geometry.user_area_radius));
  kv("bandwidth_hz", format_number(sc.budget.bandwidth_hz));
  kv("noise_psd_dbm_hz", format_number(sc.budget.noise_psd_dbm_hz));
  kv("pl_tx_irs", format_number(sc.budget.tx_irs.intercept_db) + "," + format_number(sc.budget.tx_irs.exponent));
  kv("pl_irs_user", format_number(sc.budget.irs_user.intercept_db) + "," + format_number(sc.budget.irs_user.exponent));
  kv("pl_tx_user", format_number(sc.budget.tx_user.intercept_db) + "," + format_number(sc.budget.tx_user.exponent));
  kv("rician_k_tx_irs_db", format_number(sc.budget.rician_k_tx_irs_db));
  kv("rician_k_irs_user_db", format_number(sc.budget.rician_k_irs_user_db));
  kv("rician_k_tx_user_db", format_number(sc.budget.rician_k_tx_user_db));
  kv("sweep_pt_dbm", format_list(sweep_pt_dbm));
  kv("sweep_m", format_list(sweep_m));
  return out;
}

}  // namespace mgmc
