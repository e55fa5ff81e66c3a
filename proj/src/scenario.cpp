#include "rpsim/scenario.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rpsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("scenario line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_integer(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, "expected true/false, got '" + v + "'");
}

ReactionModel parse_model(const std::string& v, int line) {
  static const std::map<std::string, ReactionModel> models = {
      {"hamiltonian_only", ReactionModel::hamiltonian_only},
      {"haberkorn", ReactionModel::haberkorn},
      {"kominis", ReactionModel::kominis},
      {"jones_hore", ReactionModel::jones_hore},
      {"custom_dephasing", ReactionModel::custom_dephasing},
  };
  const auto it = models.find(v);
  if (it == models.end()) {
    std::string valid;
    for (const auto& [name, _] : models) valid += (valid.empty() ? "" : ", ") + name;
    fail(line, "unknown model '" + v + "'; valid models: " + valid);
  }
  return it->second;
}

// "1.0@1, 0.5@2" -> nuclei with coupling and attached electron.
std::vector<NucleusSpec> parse_nuclei(const std::string& v, int line) {
  std::vector<NucleusSpec> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty nucleus entry");
    const std::size_t at = item.find('@');
    if (at == std::string::npos)
      fail(line, "nucleus entry '" + item + "' must be coupling@electron");
    NucleusSpec n;
    n.coupling_A = parse_number(trim(item.substr(0, at)), line);
    n.attached_electron = static_cast<int>(parse_integer(trim(item.substr(at + 1)), line));
    out.push_back(n);
  }
  if (out.empty()) fail(line, "empty nuclei list");
  return out;
}

RemovalMode parse_removal(const std::string& v, int line) {
  if (v == "analytic_weight") return RemovalMode::analytic_weight;
  if (v == "stochastic_kill") return RemovalMode::stochastic_kill;
  fail(line, "unknown removal_mode '" + v + "'; valid: analytic_weight, stochastic_kill");
}

KickMode parse_kick(const std::string& v, int line) {
  if (v == "position") return KickMode::position;
  if (v == "energy") return KickMode::energy;
  fail(line, "unknown kick_mode '" + v + "'; valid: position, energy");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  bool saw_model = false, saw_t_end = false, saw_dt = false;
  bool saw_a = false, saw_nuclei = false;
  bool has_run = false, has_pendulum = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(lineno, "missing value for '" + key + "'");

    if (key == "system.A") {
      s.system.nuclei = {NucleusSpec{parse_number(value, lineno), 1}};
      saw_a = true;
      s.has_system = true;
    } else if (key == "system.nuclei") {
      s.system.nuclei = parse_nuclei(value, lineno);
      saw_nuclei = true;
      s.has_system = true;
    } else if (key == "system.omega") {
      s.system.larmor_omega = parse_number(value, lineno);
      s.has_system = true;
    } else if (key == "system.model") {
      s.system.model = parse_model(value, lineno);
      saw_model = true;
      s.has_system = true;
    } else if (key == "system.k_S") {
      s.system.k_singlet = parse_number(value, lineno);
      s.has_system = true;
    } else if (key == "system.k_T") {
      s.system.k_triplet = parse_number(value, lineno);
      s.has_system = true;
    } else if (key == "system.eta") {
      s.system.custom_eta = parse_number(value, lineno);
      s.has_system = true;
    } else if (key == "run.t_end") {
      s.run.t_end = parse_number(value, lineno);
      saw_t_end = true;
      has_run = true;
    } else if (key == "run.dt") {
      s.run.dt = parse_number(value, lineno);
      saw_dt = true;
      has_run = true;
    } else if (key == "run.sample_every") {
      s.run.sample_every = static_cast<int>(parse_integer(value, lineno));
      has_run = true;
    } else if (key == "mc.n_trajectories") {
      if (!s.mc) s.mc.emplace();
      s.mc->n_trajectories = static_cast<int>(parse_integer(value, lineno));
    } else if (key == "mc.seed") {
      if (!s.mc) s.mc.emplace();
      s.mc->master_seed = static_cast<std::uint64_t>(parse_integer(value, lineno));
    } else if (key == "mc.removal_mode") {
      if (!s.mc) s.mc.emplace();
      s.mc->removal_mode = parse_removal(value, lineno);
    } else if (key == "outputs.csv_path") {
      s.outputs.csv_path = value;
    } else if (key == "outputs.emit_normalized") {
      s.outputs.emit_normalized = parse_bool(value, lineno);
    } else if (key == "pendulum.omega0") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->omega0 = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.coupling") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->coupling = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.kick_rate") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->kick_rate = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.decay_rate") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->decay_rate = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.n_systems") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->n_systems = static_cast<int>(parse_integer(value, lineno));
      has_pendulum = true;
    } else if (key == "pendulum.dt") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->dt = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.t_end") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->t_end = parse_number(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.seed") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->seed = static_cast<std::uint64_t>(parse_integer(value, lineno));
      has_pendulum = true;
    } else if (key == "pendulum.kick_mode") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->kick_mode = parse_kick(value, lineno);
      has_pendulum = true;
    } else if (key == "pendulum.sample_every") {
      if (!s.pendulum) s.pendulum.emplace();
      s.pendulum->sample_every = static_cast<int>(parse_integer(value, lineno));
      has_pendulum = true;
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }

  if (saw_a && saw_nuclei)
    throw ConfigError("scenario: give either system.A or system.nuclei, not both");
  if (s.has_system) {
    if (!saw_model) throw ConfigError("scenario: missing required key system.model");
    if (!saw_t_end) throw ConfigError("scenario: missing required key run.t_end");
    if (!saw_dt) throw ConfigError("scenario: missing required key run.dt");
    s.system.validate();
    if (s.run.t_end <= 0.0 || s.run.dt <= 0.0)
      throw ConfigError("scenario: run.t_end and run.dt must be positive");
    if (s.run.sample_every < 1)
      throw ConfigError("scenario: run.sample_every must be >= 1");
  } else if (!has_pendulum) {
    throw ConfigError("scenario: no system.* or pendulum.* keys given");
  }
  if (has_pendulum && (s.pendulum->dt <= 0.0 || s.pendulum->t_end <= 0.0))
    throw ConfigError("scenario: pendulum.dt and pendulum.t_end must be positive");
  if (s.mc) {
    if (!s.has_system) throw ConfigError("scenario: mc.* keys need a system section");
    if (s.mc->n_trajectories < 1)
      throw ConfigError("scenario: mc.n_trajectories must be >= 1");
    s.mc->dt = s.run.dt;
    s.mc->t_end = s.run.t_end;
    s.mc->sample_every = s.run.sample_every;
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string render_scenario(const Scenario& s) {
  std::ostringstream out;
  if (s.has_system) {
    if (!s.system.nuclei.empty()) {
      out << "system.nuclei = ";
      for (std::size_t i = 0; i < s.system.nuclei.size(); ++i) {
        if (i) out << ", ";
        out << fmt(s.system.nuclei[i].coupling_A) << "@" << s.system.nuclei[i].attached_electron;
      }
      out << "\n";
    }
    out << "system.omega = " << fmt(s.system.larmor_omega) << "\n";
    out << "system.model = " << to_string(s.system.model) << "\n";
    out << "system.k_S = " << fmt(s.system.k_singlet) << "\n";
    out << "system.k_T = " << fmt(s.system.k_triplet) << "\n";
    if (s.system.model == ReactionModel::custom_dephasing)
      out << "system.eta = " << fmt(s.system.custom_eta) << "\n";
    out << "run.t_end = " << fmt(s.run.t_end) << "\n";
    out << "run.dt = " << fmt(s.run.dt) << "\n";
    out << "run.sample_every = " << s.run.sample_every << "\n";
  }
  if (s.mc) {
    out << "mc.n_trajectories = " << s.mc->n_trajectories << "\n";
    out << "mc.seed = " << s.mc->master_seed << "\n";
    out << "mc.removal_mode = "
        << (s.mc->removal_mode == RemovalMode::analytic_weight ? "analytic_weight"
                                                               : "stochastic_kill")
        << "\n";
  }
  if (s.pendulum) {
    const auto& p = *s.pendulum;
    out << "pendulum.omega0 = " << fmt(p.omega0) << "\n";
    out << "pendulum.coupling = " << fmt(p.coupling) << "\n";
    out << "pendulum.kick_rate = " << fmt(p.kick_rate) << "\n";
    out << "pendulum.decay_rate = " << fmt(p.decay_rate) << "\n";
    out << "pendulum.n_systems = " << p.n_systems << "\n";
    out << "pendulum.dt = " << fmt(p.dt) << "\n";
    out << "pendulum.t_end = " << fmt(p.t_end) << "\n";
    out << "pendulum.seed = " << p.seed << "\n";
    out << "pendulum.kick_mode = " << (p.kick_mode == KickMode::position ? "position" : "energy")
        << "\n";
    out << "pendulum.sample_every = " << p.sample_every << "\n";
  }
  out << "outputs.csv_path = " << s.outputs.csv_path << "\n";
  out << "outputs.emit_normalized = " << (s.outputs.emit_normalized ? "true" : "false") << "\n";
  return out.str();
}

double get_numeric_key(const Scenario& s, const std::string& key) {
  if (key == "system.omega") return s.system.larmor_omega;
  if (key == "system.k_S") return s.system.k_singlet;
  if (key == "system.k_T") return s.system.k_triplet;
  if (key == "system.k") return s.system.k_singlet;
  if (key == "system.eta") return s.system.custom_eta;
  if (key == "system.A") {
    if (s.system.nuclei.size() != 1)
      throw UsageError("system.A scan needs exactly one nucleus");
    return s.system.nuclei[0].coupling_A;
  }
  if (key == "run.t_end") return s.run.t_end;
  if (key == "run.dt") return s.run.dt;
  throw UsageError("'" + key + "' is not a numeric scenario key");
}

void set_numeric_key(Scenario& s, const std::string& key, double value) {
  if (key == "system.omega") {
    s.system.larmor_omega = value;
  } else if (key == "system.k_S") {
    s.system.k_singlet = value;
  } else if (key == "system.k_T") {
    s.system.k_triplet = value;
  } else if (key == "system.k") {
    s.system.k_singlet = value;
    s.system.k_triplet = value;
  } else if (key == "system.eta") {
    s.system.custom_eta = value;
  } else if (key == "system.A") {
    if (s.system.nuclei.size() != 1)
      throw UsageError("system.A scan needs exactly one nucleus");
    s.system.nuclei[0].coupling_A = value;
  } else if (key == "run.t_end") {
    s.run.t_end = value;
  } else if (key == "run.dt") {
    s.run.dt = value;
  } else {
    throw UsageError("'" + key + "' is not a numeric scenario key");
  }
}

}  // namespace rpsim
