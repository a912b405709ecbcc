#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oinl/config.hpp"
#include "oinl/errors.hpp"
#include "oinl/protocol.hpp"

namespace oinl {

struct ScanRow {
  double ratio = 0.0;
  Mode mode = Mode::tf_analytic;
  double fraction = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double phi_v = std::numeric_limits<double>::quiet_NaN();
  double budget = std::numeric_limits<double>::quiet_NaN();
  double norm_drift = 0.0;
  std::vector<std::string> warnings;
  std::string error;  // non-empty when this point failed

  bool ok() const { return error.empty(); }
};

struct ScanTable {
  std::vector<ScanRow> rows;
  // Ground-state failures are reported here as well as on the affected rows.
  std::vector<std::string> errors;
};

inline ScanRow make_row(const InterferometerResult& r) {
  ScanRow row;
  row.ratio = r.intensity_ratio;
  row.mode = r.mode;
  row.fraction = r.fraction;
  row.epsilon = r.epsilon;
  row.phi_v = r.phi_v;
  row.budget = r.budget.value;
  row.norm_drift = r.norm_drift;
  row.warnings = r.warnings;
  return row;
}

// Runs every (ratio, mode) pair.  The ground state is computed once per mode
// and shared by its points; points of a mode run concurrently.  Rows come back
// sorted by (mode, ratio).  A failing point is recorded in its row.
inline ScanTable run_scan(const SimulationConfig& config) {
  config.scan.validate();
  ScanTable table;
  std::vector<Mode> modes = config.scan.modes;
  std::sort(modes.begin(), modes.end());
  std::vector<double> ratios = config.scan.ratios;
  std::sort(ratios.begin(), ratios.end());

  for (Mode mode : modes) {
    std::optional<GroundState> ground;
    std::string ground_error;
    const bool needs_ground = mode == Mode::full_numeric ||
                              (mode == Mode::integral_exact_ground &&
                               config.experiment.numerics.integral_ground == GroundSource::numeric);
    if (needs_ground && !ratios.empty()) {
      try {
        ground = prepare_ground_state(config.experiment, mode);
      } catch (const std::exception& e) {
        ground_error = std::string("ground state: ") + e.what();
        table.errors.push_back(to_string(mode) + ": " + ground_error);
      }
    }

    std::vector<std::future<ScanRow>> pending;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      const double ratio = ratios[i];
      auto task = [&, ratio, i]() -> ScanRow {
        try {
          if (!ground_error.empty()) throw NumericalError(ground_error);
          std::ofstream log;
          StepObserver observer;
          if (mode == Mode::full_numeric && !config.scan.step_log.empty()) {
            const auto path = config.scan.step_log + "_" + std::to_string(i) + ".csv";
            log.open(path);
            if (!log) throw IoError(path, "cannot open step log");
            log << "time,norm_minus,norm_plus\n";
            observer = [&log](const TwoComponentState& s) {
              char buf[128];
              std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", s.time, atom_number(s.minus), atom_number(s.plus));
              log << buf;
            };
          }
          return make_row(run_interferometer(config.experiment, ratio, mode, ground ? &*ground : nullptr, observer));
        } catch (const std::exception& e) {
          ScanRow row;
          row.ratio = ratio;
          row.mode = mode;
          row.error = e.what();
          return row;
        }
      };
      pending.push_back(std::async(mode == Mode::full_numeric ? std::launch::async : std::launch::deferred, task));
    }
    for (auto& f : pending) table.rows.push_back(f.get());
  }
  return table;
}

namespace scan_detail {
inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace scan_detail

inline constexpr const char* results_csv_header = "ratio,mode,fraction,epsilon,phi_V,budget,norm_drift";

// CSV text of a table: header plus one line per row, 12 significant digits.
inline std::string format_results_csv(const ScanTable& table) {
  using scan_detail::format_g12;
  std::string out = std::string(results_csv_header) + "\n";
  for (const auto& r : table.rows) {
    out += format_g12(r.ratio) + "," + to_string(r.mode) + "," + format_g12(r.fraction) + "," + format_g12(r.epsilon) +
           "," + format_g12(r.phi_v) + "," + format_g12(r.budget) + "," + format_g12(r.norm_drift) + "\n";
  }
  return out;
}

inline std::vector<ScanRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != results_csv_header) throw DomainError("results CSV: unexpected header");
  std::vector<ScanRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (cells.size() != 7) throw DomainError("results CSV: expected 7 columns in '" + line + "'");
    const auto mode = parse_mode(cells[1]);
    if (!mode) throw DomainError("results CSV: unknown mode '" + cells[1] + "'");
    ScanRow r;
    r.ratio = std::stod(cells[0]);
    r.mode = *mode;
    r.fraction = std::stod(cells[2]);
    r.epsilon = std::stod(cells[3]);
    r.phi_v = std::stod(cells[4]);
    r.budget = std::stod(cells[5]);
    r.norm_drift = std::stod(cells[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace scan_detail {
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << content;
  if (!out) throw IoError(path.string(), "write failed");
}
}  // namespace scan_detail

// Writes results.csv and, if requested, fig2_<mode>.dat (ratio, fraction)
// columns for plotting.  Returns the files written.
inline std::vector<std::filesystem::path> write_outputs(const ScanTable& table, const std::filesystem::path& dir,
                                                        bool plot_files = true) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create output directory: " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto csv = dir / "results.csv";
  scan_detail::write_file(csv, format_results_csv(table));
  written.push_back(csv);
  if (!plot_files) return written;

  std::map<Mode, std::string> series;
  for (const auto& r : table.rows) {
    if (!r.ok()) continue;
    series[r.mode] += scan_detail::format_g12(r.ratio) + " " + scan_detail::format_g12(r.fraction) + "\n";
  }
  for (const auto& [mode, body] : series) {
    const auto path = dir / ("fig2_" + to_string(mode) + ".dat");
    scan_detail::write_file(path, "# ratio N_minus/N (" + to_string(mode) + ")\n" + body);
    written.push_back(path);
  }
  return written;
}

}  // namespace oinl
