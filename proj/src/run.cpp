#include "rpsim/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rpsim/estimates.hpp"

namespace rpsim {

namespace {

struct CsvFile {
  std::ofstream out;
  explicit CsvFile(const std::string& path) : out(path) {
    if (!out) throw UsageError("cannot write '" + path + "'");
  }
  void row_start() { first = true; }
  void cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    if (!first) out << ',';
    out << buf;
    first = false;
  }
  void end_row() { out << '\n'; }
  bool first = true;
};

double enhancement_vs_thermal(double peak_iz, const Scenario& scenario,
                              const SummaryOptions& opts) {
  double b = opts.field_gauss;
  if (b <= 0.0) b = PhysicalConstants::gauss_from_omega(scenario.system.larmor_omega);
  if (b <= 0.0) return 0.0;
  return std::abs(peak_iz) / thermal_polarization(b, opts.temperature_k);
}

void print_summary(std::ostream& out, const Scenario& scenario, const SummaryOptions& opts,
                   const Peak& peak, double enhancement) {
  out << "peak: t = " << peak.t_peak << " ns, iz = " << peak.value << "\n";
  double b = opts.field_gauss;
  if (b <= 0.0) b = PhysicalConstants::gauss_from_omega(scenario.system.larmor_omega);
  out << "enhancement over thermal polarization at B = " << b << " G, T = "
      << opts.temperature_k << " K: " << enhancement << "\n";
}

}  // namespace

void write_series_csv(const std::string& path, const TimeSeries& s) {
  CsvFile csv(path);
  csv.out << "t,trace,qs,iz,iz_norm,izS,izT,jz,iz_proj\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv.row_start();
    csv.cell(s.times[i]);
    csv.cell(s.trace[i]);
    csv.cell(s.qs[i]);
    csv.cell(s.iz[i]);
    csv.cell(s.iz_norm[i]);
    csv.cell(s.iz_s[i]);
    csv.cell(s.iz_t[i]);
    csv.cell(s.jz[i]);
    csv.cell(s.iz_proj[i]);
    csv.end_row();
  }
}

void write_mc_csv(const std::string& path, const TrajectoryEnsembleStats& s) {
  CsvFile csv(path);
  csv.out << "t,mean_iz,se_iz,mean_qs,se_qs,weight\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv.row_start();
    csv.cell(s.times[i]);
    csv.cell(s.mean_iz[i]);
    csv.cell(s.se_iz[i]);
    csv.cell(s.mean_qs[i]);
    csv.cell(s.se_qs[i]);
    csv.cell(s.surviving_weight[i]);
    csv.end_row();
  }
}

void write_pendulum_csv(const std::string& path, const PendulumSeries& s) {
  CsvFile csv(path);
  csv.out << "t,mean_sum,surviving_fraction\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv.row_start();
    csv.cell(s.times[i]);
    csv.cell(s.mean_sum[i]);
    csv.cell(s.surviving_fraction[i]);
    csv.end_row();
  }
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "value,peak_iz,t_peak,enhancement\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.value, r.peak_iz,
                  r.t_peak, r.enhancement);
    out << buf;
  }
}

RunResult run_scenario(const Scenario& scenario, const SummaryOptions& opts,
                       std::ostream& out) {
  if (!scenario.has_system) throw ConfigError("run_scenario: scenario has no system section");
  RunResult r;
  r.series = integrate(scenario.system, scenario.run.t_end, scenario.run.dt,
                       scenario.run.sample_every);
  r.peak = peak_polarization(r.series);
  r.enhancement = enhancement_vs_thermal(r.peak.value, scenario, opts);
  write_series_csv(scenario.outputs.csv_path, r.series);
  print_summary(out, scenario, opts, r.peak, r.enhancement);
  return r;
}

RunResult run_scenario_mc(const Scenario& scenario, const SummaryOptions& opts,
                          std::ostream& out) {
  if (!scenario.mc) throw ConfigError("run_scenario_mc: scenario has no mc section");
  RunResult r = run_scenario(scenario, opts, out);
  const TrajectoryEnsembleStats stats = run_ensemble(scenario.system, *scenario.mc);
  std::string mc_path = scenario.outputs.csv_path;
  const std::size_t dot = mc_path.rfind('.');
  mc_path = (dot == std::string::npos ? mc_path : mc_path.substr(0, dot)) + "_mc.csv";
  write_mc_csv(mc_path, stats);
  out << "mc: " << scenario.mc->n_trajectories << " trajectories written to " << mc_path
      << "\n";
  return r;
}

std::vector<ScanRow> scan(const Scenario& scenario, const std::string& param,
                          const std::vector<double>& values, const SummaryOptions& opts) {
  if (!scenario.has_system) throw ConfigError("scan: scenario has no system section");
  get_numeric_key(scenario, param); // validates the key up front
  std::vector<ScanRow> rows(values.size());

  int workers = 1;
  if (const char* env = std::getenv("RPSIM_WORKERS")) workers = std::max(1, std::atoi(env));
  workers = std::min<int>(workers, static_cast<int>(values.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      try {
        Scenario local = scenario;
        set_numeric_key(local, param, values[i]);
        local.system.validate();
        const TimeSeries series = integrate(local.system, local.run.t_end, local.run.dt,
                                            local.run.sample_every);
        const Peak p = peak_polarization(series);
        rows[i] = ScanRow{values[i], p.value, p.t_peak,
                          enhancement_vs_thermal(p.value, local, opts)};
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < workers; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

void render_csv_chart(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path);
  if (!in) throw UsageError("cannot open '" + csv_path + "'");
  std::string header;
  if (!std::getline(in, header)) throw UsageError("empty CSV '" + csv_path + "'");
  std::vector<std::string> names;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) names.push_back(c);
  }
  std::vector<std::vector<double>> cols(names.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::size_t i = 0;
    while (std::getline(ss, c, ',') && i < cols.size()) cols[i++].push_back(std::stod(c));
  }
  if (cols.empty() || cols[0].empty()) throw UsageError("no data rows in '" + csv_path + "'");

  const double w = 900, h = 500, ml = 60, mr = 20, mt = 20, mb = 40;
  const auto& x = cols[0];
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  double ymin = 0.0, ymax = 0.0;
  for (std::size_t c = 1; c < cols.size(); ++c)
    for (double v : cols[c]) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (ymax == ymin) ymax = ymin + 1.0;
  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto sy = [&](double v) { return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb); };

  static const char* palette[] = {"#1b6fb3", "#c23b22", "#2e8b57", "#8a2be2",
                                  "#d4820a", "#3b3b3b", "#b3268a", "#127d7d"};
  std::ofstream out(svg_path);
  if (!out) throw UsageError("cannot write '" + svg_path + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  for (std::size_t c = 1; c < cols.size(); ++c) {
    out << "<polyline fill='none' stroke='" << palette[(c - 1) % 8] << "' points='";
    for (std::size_t i = 0; i < cols[c].size(); ++i)
      out << sx(x[i]) << ',' << sy(cols[c][i]) << ' ';
    out << "'/>\n";
    out << "<text x='" << w - mr - 100 << "' y='" << mt + 16 * c << "' fill='"
        << palette[(c - 1) % 8] << "'>" << names[c] << "</text>\n";
  }
  out << "<text x='" << (w / 2) << "' y='" << h - 8 << "'>" << names[0] << "</text>\n</svg>\n";
}

}  // namespace rpsim
