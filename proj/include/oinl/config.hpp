#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oinl/constants.hpp"
#include "oinl/errors.hpp"
#include "oinl/protocol.hpp"

namespace oinl {

// Ratios and modes to sweep, plus where to write results.
struct ScanSpec {
  std::vector<double> ratios;
  std::vector<Mode> modes;
  std::string output_dir = ".";
  bool plot_files = true;
  std::string step_log;  // empty: no per-step log

  void validate() const {
    for (double r : ratios)
      if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("ScanSpec: intensity ratios must be nonnegative");
    if (modes.empty()) throw DomainError("ScanSpec: at least one mode is required");
  }
};

struct SimulationConfig {
  ExperimentConfig experiment;
  ScanSpec scan;
};

namespace config_detail {

enum class Dimension { mass, length, rate, time, inverse_length, angle, dimensionless };

struct UnitEntry {
  std::string_view name;
  Dimension dim;
  double to_si;
};

inline constexpr UnitEntry unit_table[] = {
    {"kg", Dimension::mass, 1.0},
    {"g", Dimension::mass, 1e-3},
    {"amu", Dimension::mass, 1.66053906660e-27},
    {"m", Dimension::length, 1.0},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},
    {"rad/s", Dimension::rate, 1.0},
    {"1/s", Dimension::rate, 1.0},
    {"s^-1", Dimension::rate, 1.0},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"ns", Dimension::time, 1e-9},
    {"1/m", Dimension::inverse_length, 1.0},
    {"1/um", Dimension::inverse_length, 1e6},
    {"1/nm", Dimension::inverse_length, 1e9},
    {"rad", Dimension::angle, 1.0},
};

inline std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::mass: return "mass (kg, g, amu)";
    case Dimension::length: return "length (m, cm, mm, um, nm)";
    case Dimension::rate: return "angular rate (rad/s, 1/s, s^-1)";
    case Dimension::time: return "time (s, ms, us, ns)";
    case Dimension::inverse_length: return "inverse length (1/m, 1/um, 1/nm)";
    case Dimension::angle: return "angle (rad)";
    case Dimension::dimensionless: return "dimensionless (no unit)";
  }
  return "?";
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Document {
public:
  static Document parse(std::string_view text) {
    Document doc;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) throw ConfigError(line_no, "missing key before '='");
      if (value.empty()) throw ConfigError(line_no, "missing value for key '" + key + "'");
      if (doc.entries_.count(key))
        throw ConfigError(line_no, "duplicate key '" + key + "' (first defined on line " +
                                       std::to_string(doc.entries_.at(key).line) + ")");
      doc.entries_[key] = {value, line_no, false};
    }
    return doc;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  bool empty() const { return entries_.empty(); }

  Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!e.used) throw ConfigError(e.line, "unknown key '" + key + "'");
  }

private:
  std::map<std::string, Entry> entries_;
};

// Splits "<number> <unit>" and converts to SI, checking the dimension.
inline double parse_quantity(const Entry& e, const std::string& key, Dimension expected) {
  const auto space = e.value.find_first_of(" \t");
  const std::string number = space == std::string::npos ? e.value : e.value.substr(0, space);
  const std::string unit = space == std::string::npos ? std::string{} : trim(std::string_view(e.value).substr(space));
  const auto v = parse_number(number);
  if (!v) throw ConfigError(e.line, "'" + key + "': '" + number + "' is not a number");
  if (!std::isfinite(*v)) throw ConfigError(e.line, "'" + key + "': value must be finite");
  if (expected == Dimension::dimensionless) {
    if (!unit.empty()) throw ConfigError(e.line, "'" + key + "' is dimensionless; unexpected unit '" + unit + "'");
    return *v;
  }
  if (unit.empty())
    throw ConfigError(e.line, "'" + key + "' needs a unit suffix: " + std::string(dimension_name(expected)));
  if (unit == "Hz" || unit == "kHz" || unit == "MHz" || unit == "GHz")
    throw ConfigError(e.line, "'" + key + "': '" + unit +
                                  "' is ambiguous between cyclic and angular frequency; write rad/s or 1/s");
  for (const auto& u : unit_table) {
    if (u.name != unit) continue;
    if (u.dim != expected)
      throw ConfigError(e.line, "'" + key + "': unit '" + unit + "' has the wrong dimension, expected " +
                                    std::string(dimension_name(expected)));
    return *v * u.to_si;
  }
  throw ConfigError(e.line, "'" + key + "': unknown unit '" + unit + "'");
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace config_detail

inline constexpr const char* required_config_keys[] = {"mass", "a_s", "a_a", "lambda0", "gamma", "Omega_do",
                                                       "Delta_do", "w", "N", "L_z", "T"};

// Parses the plain-text `key = value unit` format.  Lines starting with '#'
// (or trailing '# ...') are comments.  Every physical quantity must carry a
// unit suffix of the right dimension; unknown and duplicate keys are errors.
// Oscillator-unit quantities (box, dt_real, dt_imag) take the suffixes a_ho
// and t_ho respectively.
inline SimulationConfig parse_config(std::string_view text) {
  using namespace config_detail;
  Document doc = Document::parse(text);

  std::vector<std::string> missing;
  for (const char* k : required_config_keys)
    if (!doc.has(k)) missing.emplace_back(k);
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(0, msg);
  }

  const auto quantity = [&](const std::string& key, Dimension dim) { return parse_quantity(*doc.find(key), key, dim); };
  const auto optional_quantity = [&](const std::string& key, Dimension dim) -> std::optional<double> {
    if (Entry* e = doc.find(key)) return parse_quantity(*e, key, dim);
    return std::nullopt;
  };
  const auto word = [&](const std::string& key) -> std::optional<std::pair<std::string, int>> {
    if (Entry* e = doc.find(key)) return std::pair{e->value, e->line};
    return std::nullopt;
  };
  const auto check = [&](bool ok, const std::string& key, const std::string& invariant) {
    if (!ok) throw ConfigError(doc.line_of(key), "'" + key + "' violates " + invariant);
  };
  // Quantity in oscillator units (suffix `osc`) or SI (any unit of `dim`).
  struct ScaledQuantity {
    double value;
    bool oscillator;
  };
  const auto scaled_quantity = [&](const std::string& key, const char* osc, Dimension dim) -> std::optional<ScaledQuantity> {
    Entry* e = doc.find(key);
    if (!e) return std::nullopt;
    const auto space = e->value.find_first_of(" \t");
    if (space != std::string::npos && trim(std::string_view(e->value).substr(space)) == osc) {
      const auto v = parse_number(e->value.substr(0, space));
      if (!v) throw ConfigError(e->line, "'" + key + "': not a number");
      return ScaledQuantity{*v, true};
    }
    return ScaledQuantity{parse_quantity(*e, key, dim), false};
  };

  SimulationConfig cfg;
  auto& ex = cfg.experiment;
  ex.species.mass = quantity("mass", Dimension::mass);
  ex.species.a_symmetric = quantity("a_s", Dimension::length);
  ex.species.a_antisymmetric = quantity("a_a", Dimension::length);
  ex.species.wavelength = quantity("lambda0", Dimension::length);
  ex.species.gamma = quantity("gamma", Dimension::rate);
  check(ex.species.mass > 0.0, "mass", "M > 0");
  check(ex.species.wavelength > 0.0, "lambda0", "lambda_0 > 0");
  check(ex.species.gamma > 0.0, "gamma", "gamma > 0");
  check(ex.species.a_symmetric + ex.species.a_antisymmetric > 0.0, "a_s", "a_s + a_a > 0");

  ex.doughnut.profile = BeamProfile::doughnut;
  ex.doughnut.peak_rabi = complex(quantity("Omega_do", Dimension::rate), 0.0);
  ex.doughnut.detuning = quantity("Delta_do", Dimension::rate);
  ex.doughnut.waist = quantity("w", Dimension::length);
  ex.doughnut.wavenumber = optional_quantity("k_L", Dimension::inverse_length).value_or(two_pi / ex.species.wavelength);
  check(ex.doughnut.detuning > 0.0, "Delta_do", "Delta_do > 0 (doughnut must be blue detuned to trap)");
  check(ex.doughnut.waist > 0.0, "w", "w > 0");
  check(std::norm(ex.doughnut.peak_rabi) > 0.0, "Omega_do", "Omega_do != 0");

  ex.protocol.atom_number = quantity("N", Dimension::dimensionless);
  ex.protocol.axial_length = quantity("L_z", Dimension::length);
  ex.protocol.imprint_time = quantity("T", Dimension::time);
  ex.protocol.pulse_time = optional_quantity("T_pi2", Dimension::time).value_or(0.0);
  check(ex.protocol.atom_number > 0.0, "N", "N > 0");
  check(ex.protocol.axial_length > 0.0, "L_z", "L_z > 0");
  check(ex.protocol.imprint_time >= 0.0, "T", "T >= 0");
  check(ex.protocol.pulse_time >= 0.0, "T_pi2", "T_pi/2 >= 0");
  if (auto w = word("phi_s"); w && w->first != "auto")
    ex.protocol.stokes_phase = parse_quantity(*doc.find("phi_s"), "phi_s", Dimension::angle);

  // Scan: explicit list, start:stop:count range, or a single point implied by Delta_G.
  const auto delta_g = optional_quantity("Delta_G", Dimension::rate);
  if (auto w = word("ratios")) {
    if (delta_g) throw ConfigError(w->second, "'ratios' and 'Delta_G' are mutually exclusive");
    const auto& text_value = w->first;
    if (text_value.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::istringstream in(text_value);
      for (std::string p; std::getline(in, p, ':');) parts.push_back(trim(p));
      const auto a = parts.size() == 3 ? parse_number(parts[0]) : std::nullopt;
      const auto b = parts.size() == 3 ? parse_number(parts[1]) : std::nullopt;
      const auto n = parts.size() == 3 ? parse_number(parts[2]) : std::nullopt;
      if (!a || !b || !n || *n < 1 || std::floor(*n) != *n)
        throw ConfigError(w->second, "'ratios' range must be start:stop:count");
      const auto count = static_cast<std::size_t>(*n);
      for (std::size_t i = 0; i < count; ++i)
        cfg.scan.ratios.push_back(count == 1 ? *a : *a + (*b - *a) * static_cast<double>(i) / (count - 1.0));
    } else {
      for (const auto& item : split_list(text_value)) {
        const auto v = parse_number(item);
        if (!v) throw ConfigError(w->second, "'ratios': '" + item + "' is not a number");
        cfg.scan.ratios.push_back(*v);
      }
    }
    for (double r : cfg.scan.ratios) check(r >= 0.0, "ratios", "intensity ratio >= 0");
  } else if (delta_g) {
    check(*delta_g < 0.0, "Delta_G", "Delta_G < 0 (gaussian must be red detuned to trap)");
    const double omega = trap_frequency_from_doughnut(ex.doughnut, ex.species.mass);
    const double delta_v = -ex.species.mass * omega * omega * ex.doughnut.waist * ex.doughnut.waist / 4.0;
    cfg.scan.ratios.push_back(delta_v / (hbar * *delta_g));
  } else {
    cfg.scan.ratios = {0.0, 0.0005, 0.001, 0.0015, 0.002, 0.0025};
  }

  if (auto w = word("modes")) {
    for (const auto& item : split_list(w->first)) {
      if (item == "all") {
        cfg.scan.modes = {Mode::tf_analytic, Mode::integral_exact_ground, Mode::full_numeric};
        continue;
      }
      const auto m = parse_mode(item);
      if (!m) throw ConfigError(w->second, "'modes': unknown mode '" + item + "' (tf, integral, numeric, all)");
      if (std::find(cfg.scan.modes.begin(), cfg.scan.modes.end(), *m) == cfg.scan.modes.end())
        cfg.scan.modes.push_back(*m);
    }
  } else {
    cfg.scan.modes = {Mode::tf_analytic};
  }

  auto& num = ex.numerics;
  if (auto v = optional_quantity("grid", Dimension::dimensionless)) {
    check(*v >= 2 && std::floor(*v) == *v && is_power_of_two(static_cast<std::size_t>(*v)), "grid",
          "grid must be a power of two");
    num.grid_points = static_cast<std::size_t>(*v);
  }
  const double omega = trap_frequency_from_doughnut(ex.doughnut, ex.species.mass);
  const double a_ho = std::sqrt(hbar / (ex.species.mass * omega));
  if (auto q = scaled_quantity("box", "a_ho", Dimension::length)) {
    num.box = q->oscillator ? q->value : q->value / a_ho;
    check(num.box > 0.0, "box", "box > 0");
  }
  if (auto q = scaled_quantity("dt_real", "t_ho", Dimension::time)) {
    num.solver.dt_real = q->oscillator ? q->value : q->value * omega;
    check(num.solver.dt_real > 0.0, "dt_real", "dt_real > 0");
  }
  if (auto q = scaled_quantity("dt_imag", "t_ho", Dimension::time)) {
    num.solver.dt_imag = q->oscillator ? q->value : q->value * omega;
    check(num.solver.dt_imag > 0.0, "dt_imag", "dt_imag > 0");
  }
  if (auto v = optional_quantity("tol_mu", Dimension::dimensionless)) {
    num.solver.tol_mu = *v;
    check(*v > 0.0, "tol_mu", "tol_mu > 0");
  }
  if (auto v = optional_quantity("max_iterations", Dimension::dimensionless)) {
    check(*v >= 1 && std::floor(*v) == *v, "max_iterations", "max_iterations >= 1");
    num.solver.max_iterations = static_cast<std::size_t>(*v);
  }
  if (auto v = optional_quantity("seed", Dimension::dimensionless)) {
    check(*v >= 0 && std::floor(*v) == *v, "seed", "seed is a nonnegative integer");
    num.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto w = word("initial_guess")) {
    if (w->first == "thomas_fermi") num.initial_guess = InitialGuess::thomas_fermi;
    else if (w->first == "gaussian") num.initial_guess = InitialGuess::gaussian;
    else if (w->first == "noise") num.initial_guess = InitialGuess::noise;
    else throw ConfigError(w->second, "'initial_guess' must be thomas_fermi, gaussian or noise");
  }
  if (auto w = word("integral_profile")) {
    if (w->first == "full") num.integral_full_profile = true;
    else if (w->first == "uniform") num.integral_full_profile = false;
    else throw ConfigError(w->second, "'integral_profile' must be full or uniform");
  }
  if (auto w = word("integral_ground")) {
    if (w->first == "numeric") num.integral_ground = GroundSource::numeric;
    else if (w->first == "thomas_fermi") num.integral_ground = GroundSource::thomas_fermi;
    else throw ConfigError(w->second, "'integral_ground' must be numeric or thomas_fermi");
  }
  if (auto w = word("oinl")) {
    if (w->first == "on") num.oinl_enabled = true;
    else if (w->first == "off") num.oinl_enabled = false;
    else throw ConfigError(w->second, "'oinl' must be on or off");
  }
  if (auto v = optional_quantity("low_intensity_threshold", Dimension::dimensionless)) {
    check(*v > 0.0, "low_intensity_threshold", "threshold > 0");
    num.low_intensity_threshold = *v;
  }
  if (auto v = optional_quantity("budget_threshold", Dimension::dimensionless)) {
    check(*v > 0.0, "budget_threshold", "threshold > 0");
    num.budget_threshold = *v;
  }
  if (auto w = word("output_dir")) cfg.scan.output_dir = w->first;
  if (auto w = word("plot_files")) {
    if (w->first != "yes" && w->first != "no") throw ConfigError(w->second, "'plot_files' must be yes or no");
    cfg.scan.plot_files = w->first == "yes";
  }

  doc.reject_unused();
  try {
    ex.validate();
    cfg.scan.validate();
  } catch (const DomainError& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

inline SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace oinl
