#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpsim/dynamics_deterministic.hpp"
#include "rpsim/scenario.hpp"

namespace rpsim {

// Context for the peak summary printed after a run: field for the thermal
// baseline (Gauss; <= 0 derives B from the scenario's omega) and temperature.
struct SummaryOptions {
  double field_gauss = -1.0;
  double temperature_k = 300.0;
};

struct RunResult {
  TimeSeries series;
  Peak peak;
  double enhancement = 0.0; // peak |iz| over thermal polarization
};

// Deterministic run: writes the scenario's CSV
// (t,trace,qs,iz,iz_norm,izS,izT,jz,iz_proj) and prints the peak summary.
RunResult run_scenario(const Scenario& scenario, const SummaryOptions& opts,
                       std::ostream& out);

// Monte-Carlo run: deterministic CSV plus `<stem>_mc.csv` with
// t,mean_iz,se_iz,mean_qs,se_qs,weight.
RunResult run_scenario_mc(const Scenario& scenario, const SummaryOptions& opts,
                          std::ostream& out);

struct ScanRow {
  double value = 0.0;
  double peak_iz = 0.0;
  double t_peak = 0.0;
  double enhancement = 0.0;
};

// One deterministic run per value of the dotted key; rows in input order.
// Runs execute concurrently up to the worker count (RPSIM_WORKERS).
std::vector<ScanRow> scan(const Scenario& scenario, const std::string& param,
                          const std::vector<double>& values, const SummaryOptions& opts);

void write_series_csv(const std::string& path, const TimeSeries& series);
void write_mc_csv(const std::string& path, const TrajectoryEnsembleStats& stats);
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);
void write_pendulum_csv(const std::string& path, const PendulumSeries& series);

// Minimal SVG polyline chart of selected CSV columns vs the first column.
void render_csv_chart(const std::string& csv_path, const std::string& svg_path);

}  // namespace rpsim
