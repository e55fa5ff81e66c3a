#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "rpsim/estimates.hpp"
#include "rpsim/run.hpp"

namespace {

using namespace rpsim;

// Strips a known unit suffix from a flag value. Bare numbers assume the
// documented default unit and emit a one-time notice.
double parse_with_unit(const std::string& raw, const std::vector<std::string>& suffixes,
                       const std::string& default_unit, const std::string& flag) {
  std::string v = raw;
  bool had_suffix = false;
  for (const auto& suf : suffixes) {
    if (v.size() > suf.size() && v.compare(v.size() - suf.size(), suf.size(), suf) == 0) {
      v = v.substr(0, v.size() - suf.size());
      had_suffix = true;
      break;
    }
  }
  static bool noticed = false;
  if (!had_suffix && !noticed) {
    std::cerr << "note: bare value for --" << flag << " interpreted as " << default_unit
              << " (applies to all bare values)\n";
    noticed = true;
  }
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw UsageError("--" + flag + ": cannot parse '" + raw + "' (expected number with optional " +
                     default_unit + " suffix)");
  }
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw UsageError("--values: empty list");
  return out;
}

int run_estimates(const std::string& a, const std::string& k, const std::string& omega_cap,
                  const std::string& omega, const std::string& b, const std::string& t,
                  const std::string& pol, const std::string& conc) {
  const std::vector<std::string> freq_units{"ns^-1", "rad/ns", "/ns"};
  const double temperature =
      t.empty() ? 300.0 : parse_with_unit(t, {"K"}, "K", "T");
  bool printed = false;
  double a_v = 0, k_v = 0, omega_cap_v = 0;
  const bool have_a = !a.empty(), have_k = !k.empty(), have_omega_cap = !omega_cap.empty();
  if (have_a) a_v = parse_with_unit(a, freq_units, "ns^-1", "A");
  if (have_k) k_v = parse_with_unit(k, freq_units, "ns^-1", "k");
  if (have_omega_cap) omega_cap_v = parse_with_unit(omega_cap, freq_units, "ns^-1", "Omega");

  if (have_omega_cap && have_a && have_k) {
    std::printf("enhancement factor        inputs Omega=%g A=%g k=%g ns^-1      %.6g\n",
                omega_cap_v, a_v, k_v, enhancement_factor(omega_cap_v, a_v, k_v));
    printed = true;
  }
  if (!omega.empty() && have_a && have_k) {
    const double om = parse_with_unit(omega, freq_units, "rad/ns", "omega");
    std::printf("izS estimate              inputs omega=%g A=%g k=%g            %.6g\n", om,
                a_v, k_v, estimate_izS(om, a_v, k_v));
    if (have_omega_cap)
      std::printf("iz_qc estimate            inputs omega=%g Omega=%g A=%g k=%g  %.6g\n", om,
                  omega_cap_v, a_v, k_v, estimate_izqc(om, omega_cap_v, a_v, k_v));
    printed = true;
  }
  if (!b.empty()) {
    const double b_v = parse_with_unit(b, {"G"}, "G", "B");
    std::printf("thermal polarization      inputs B=%g G T=%g K                %.6g\n", b_v,
                temperature, thermal_polarization(b_v, temperature));
    printed = true;
  }
  if (have_k) {
    std::printf("field window              inputs k=%g ns^-1                   %.6g G\n", k_v,
                field_window(k_v));
    printed = true;
  }
  if (!pol.empty() && !conc.empty()) {
    const double p_v = parse_with_unit(pol, {}, "dimensionless", "P");
    double c_v;
    if (conc.size() > 2 && conc.compare(conc.size() - 2, 2, "mM") == 0)
      c_v = std::stod(conc.substr(0, conc.size() - 2)) * 1e-3;
    else
      c_v = parse_with_unit(conc, {"M", "mol/L"}, "mol/L", "conc");
    std::printf("sample field              inputs P=%g conc=%g mol/L           %.6g T\n", p_v,
                c_v, sample_field_tesla(p_v, c_v));
    printed = true;
  }
  if (!printed) {
    std::cerr << "estimate: nothing to compute; supply e.g. --Omega --A --k, or --B, or --P "
                 "--conc\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radical-pair CIDNP spin dynamics simulator"};
  app.require_subcommand(1);

  std::string scenario_path, csv_path, svg_path, param, values_list;
  double field_gauss = -1.0, temperature = 300.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario_path, "scenario file")->required();
    sub->add_option("--field-G", field_gauss,
                    "field for the thermal baseline, Gauss (default: from system.omega)");
    sub->add_option("--T", temperature, "temperature, K");
  };

  auto* sim = app.add_subcommand("simulate", "deterministic master-equation run");
  add_common(sim);
  auto* mc = app.add_subcommand("mc", "Monte-Carlo trajectory run (plus deterministic CSV)");
  add_common(mc);
  auto* sc = app.add_subcommand("scan", "parameter scan over a numeric scenario key");
  add_common(sc);
  sc->add_option("--param", param, "dotted scenario key, e.g. system.k")->required();
  sc->add_option("--values", values_list, "comma-separated values")->required();
  auto* pend = app.add_subcommand("pendulum", "classical coupled-pendulum ensemble");
  pend->add_option("scenario", scenario_path, "scenario file")->required();
  auto* rend = app.add_subcommand("render", "render a CSV to an SVG chart");
  rend->add_option("csv", csv_path, "input CSV")->required();
  rend->add_option("--out", svg_path, "output SVG (default: input with .svg)");

  auto* est = app.add_subcommand("estimate", "closed-form estimates");
  std::string e_a, e_k, e_omega_cap, e_omega, e_b, e_t, e_p, e_conc;
  est->add_option("--A", e_a, "hyperfine coupling (ns^-1)");
  est->add_option("--k", e_k, "recombination rate (ns^-1)");
  est->add_option("--Omega", e_omega_cap, "S-T mixing frequency (ns^-1)");
  est->add_option("--omega", e_omega, "electron Larmor frequency (rad/ns)");
  est->add_option("--B", e_b, "magnetic field (G)");
  est->add_option("--T", e_t, "temperature (K)");
  est->add_option("--P", e_p, "polarization (dimensionless)");
  est->add_option("--conc", e_conc, "concentration (mol/L; mM suffix accepted)");

  CLI11_PARSE(app, argc, argv);

  try {
    const rpsim::SummaryOptions opts{field_gauss, temperature};
    if (sim->parsed()) {
      rpsim::run_scenario(rpsim::load_scenario(scenario_path), opts, std::cout);
    } else if (mc->parsed()) {
      rpsim::run_scenario_mc(rpsim::load_scenario(scenario_path), opts, std::cout);
    } else if (sc->parsed()) {
      const auto rows = rpsim::scan(rpsim::load_scenario(scenario_path), param,
                                    parse_values(values_list), opts);
      rpsim::write_scan_csv(std::cout, rows);
    } else if (pend->parsed()) {
      const rpsim::Scenario s = rpsim::load_scenario(scenario_path);
      if (!s.pendulum) throw rpsim::ConfigError("scenario has no pendulum section");
      const rpsim::PendulumSeries series = rpsim::simulate_pendulums(*s.pendulum);
      rpsim::write_pendulum_csv(s.outputs.csv_path, series);
      std::cout << "pendulum series written to " << s.outputs.csv_path << "\n";
    } else if (rend->parsed()) {
      std::string out = svg_path;
      if (out.empty()) {
        const std::size_t dot = csv_path.rfind('.');
        out = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".svg";
      }
      rpsim::render_csv_chart(csv_path, out);
      std::cout << "chart written to " << out << "\n";
    } else if (est->parsed()) {
      return run_estimates(e_a, e_k, e_omega_cap, e_omega, e_b, e_t, e_p, e_conc);
    }
  } catch (const rpsim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const rpsim::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const rpsim::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
