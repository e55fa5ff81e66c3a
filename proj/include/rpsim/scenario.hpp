#pragma once

#include <optional>
#include <string>

#include "rpsim/dynamics_stochastic.hpp"
#include "rpsim/pendulum.hpp"
#include "rpsim/system_model.hpp"

namespace rpsim {

// Human-editable run description, parsed from a line-oriented
// `section.key = value` file. Unknown keys are hard errors.
struct Scenario {
  SpinSystemSpec system;
  struct Run {
    double t_end = 0.0;
    double dt = 0.0;
    int sample_every = 1;
  } run;
  std::optional<TrajectoryConfig> mc; // dt/t_end/sample_every mirror `run`
  std::optional<PendulumConfig> pendulum;
  struct Outputs {
    std::string csv_path = "out.csv";
    bool emit_normalized = true;
  } outputs;

  bool has_system = false; // at least one system.* key was given
};

// Throws ConfigError with the offending line number on any parse or
// validation failure.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical writer; parse_scenario(render_scenario(s)) round-trips.
std::string render_scenario(const Scenario& s);

// Looks up / replaces a numeric scenario value by dotted key (scan support).
double get_numeric_key(const Scenario& s, const std::string& key);
void set_numeric_key(Scenario& s, const std::string& key, double value);

}  // namespace rpsim
