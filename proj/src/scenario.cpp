#include "bilayer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "bilayer/diagnostics.hpp"
#include "bilayer/model.hpp"
#include "bilayer/stability.hpp"

namespace bilayer {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_at(const std::string& path, int line,
                          const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& path, int line,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || std::isnan(v))
      fail_at(path, line, "not a number: '" + value + "'");
    return v;
  } catch (const std::logic_error&) {
    fail_at(path, line, "not a number: '" + value + "'");
  }
}

long parse_int(const std::string& path, int line, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) fail_at(path, line, "not an integer: '" + value + "'");
    return v;
  } catch (const std::logic_error&) {
    fail_at(path, line, "not an integer: '" + value + "'");
  }
}

const std::set<std::string>& sweepable_parameters() {
  static const std::set<std::string> names = {
      "m", "s_plus", "s_minus", "mu0_plus", "tau_half", "p", "tau"};
  return names;
}

void set_parameter(FluidParams& params, const std::string& name, double value) {
  if (name == "m") params.m = value;
  else if (name == "s_plus") params.s_plus = value;
  else if (name == "s_minus") params.s_minus = value;
  else if (name == "mu0_plus") params.mu0_plus = value;
  else if (name == "tau_half") params.tau_half = value;
  else if (name == "p") params.p = value;
  else if (name == "tau") params.tau = value;
  else throw std::runtime_error("unknown parameter '" + name + "'");
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* status_name(StepStatus status) {
  switch (status) {
    case StepStatus::ok: return "ok";
    case StepStatus::rupture: return "rupture";
    case StepStatus::blowup: return "blowup";
    case StepStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

int status_code(StepStatus status) {
  switch (status) {
    case StepStatus::ok: return 0;
    case StepStatus::rupture: return 2;
    case StepStatus::blowup: return 3;
    case StepStatus::step_failure: return 4;
  }
  return 4;
}

void write_diagnostics_row(std::ofstream& out, const DiagnosticsRecord& rec,
                           double dt_used) {
  out << format_value(rec.t) << ',' << format_value(rec.mass_f) << ','
      << format_value(rec.mass_g) << ',' << format_value(rec.energy) << ','
      << format_value(rec.dissipation) << ',' << format_value(rec.min_f) << ','
      << format_value(rec.min_g) << ',' << format_value(rec.perturbation_norm)
      << ',' << format_value(dt_used) << '\n';
  out.flush();
}

void write_profile(const std::string& dir, long index, const State& state,
                   const FluidParams& params, const Grid& grid) {
  char name[32];
  std::snprintf(name, sizeof name, "profiles_%06ld.csv", index);
  std::ofstream out(dir + "/" + name);
  out << "x,f,g,p_minus,p_plus\n";
  std::vector<double> h(grid.n);
  for (int i = 0; i < grid.n; ++i) h[i] = state.f[i] + state.g[i];
  const std::vector<double> f_xx = d2(state.f, grid);
  const std::vector<double> h_xx = d2(h, grid);
  for (int i = 0; i < grid.n; ++i) {
    const PressurePair pp = pressures(f_xx[i], h_xx[i], params);
    out << format_value(grid.x(i)) << ',' << format_value(state.f[i]) << ','
        << format_value(state.g[i]) << ',' << format_value(pp.p_minus) << ','
        << format_value(pp.p_plus) << '\n';
  }
}

int run_simulate(const Scenario& sc) {
  const Grid grid = scenario_grid(sc);
  const State u0 = initial_state(sc);
  std::filesystem::create_directories(sc.output_dir);
  std::ofstream diag(sc.output_dir + "/diagnostics.csv");
  diag << "t,mass_f,mass_g,energy,dissipation,min_f,min_g,perturbation_norm,"
          "dt\n";

  long step_index = -1;  // first observer call is the initial state
  long last_diag = -1, last_profile = -1;
  const Observer observer = [&](const State& s, const DiagnosticsRecord& rec,
                                double dt_used) {
    ++step_index;
    if (step_index == 0) {
      write_diagnostics_row(diag, rec, dt_used);
      write_profile(sc.output_dir, 0, s, sc.params, grid);
      last_diag = last_profile = 0;
      return;
    }
    if (step_index % sc.diagnostics_stride == 0) {
      write_diagnostics_row(diag, rec, dt_used);
      last_diag = step_index;
    }
    if (sc.profile_stride > 0 && step_index % sc.profile_stride == 0) {
      write_profile(sc.output_dir, step_index, s, sc.params, grid);
      last_profile = step_index;
    }
  };

  const AdvanceResult result =
      advance(u0, sc.t_end, sc.step, sc.params, grid, observer, 1);

  const long final_index = result.accepted_steps;
  if (last_diag != final_index)
    write_diagnostics_row(diag, result.series.back(),
                          result.outcome.dt_used);
  if (last_profile != final_index)
    write_profile(sc.output_dir, final_index, result.outcome.state, sc.params,
                  grid);
  return status_code(result.outcome.status);
}

int run_stability(const Scenario& sc) {
  std::filesystem::create_directories(sc.output_dir);
  const StabilityReport report = stability_report(
      sc.f_const, sc.g_const, sc.params, sc.length, sc.stability_modes);
  const Eigenpair eig = det_and_eigenvalues(report.a_star);
  std::ofstream out(sc.output_dir + "/stability.csv");
  out << "quantity,mode,value\n";
  auto scalar = [&](const char* name, double v) {
    out << name << ",0," << format_value(v) << '\n';
  };
  scalar("f_star", report.f_star);
  scalar("g_star", report.g_star);
  scalar("a11", report.a_star.a11);
  scalar("a12", report.a_star.a12);
  scalar("a21", report.a_star.a21);
  scalar("a22", report.a_star.a22);
  scalar("det", eig.det);
  scalar("lambda_minus", report.lambda_minus);
  scalar("lambda_plus", report.lambda_plus);
  scalar("kappa_pred", report.kappa_pred);
  scalar("epsilon_ellipticity", report.epsilon_ellipticity);
  for (const ModeRate& mr : report.mode_rates) {
    out << "rate_minus," << mr.n << ',' << format_value(mr.rate_minus) << '\n';
    out << "rate_plus," << mr.n << ',' << format_value(mr.rate_plus) << '\n';
  }
  return 0;
}

int run_sweep(const Scenario& sc) {
  const Grid grid = scenario_grid(sc);
  std::filesystem::create_directories(sc.output_dir);
  std::ofstream out(sc.output_dir + "/sweep.csv");
  out << "index,value,status,final_t,accepted_steps,mass_f,mass_g,energy,"
         "dissipation,min_f,min_g,perturbation_norm,decay_rate,r_squared\n";
  int worst = 0;
  for (std::size_t i = 0; i < sc.sweep_values.size(); ++i) {
    FluidParams params = sc.params;
    set_parameter(params, sc.sweep_parameter, sc.sweep_values[i]);
    const State u0 = initial_state(sc);
    const AdvanceResult result = advance(u0, sc.t_end, sc.step, params, grid,
                                         nullptr, sc.diagnostics_stride);
    double rate = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> series;
    series.reserve(result.series.size());
    for (const DiagnosticsRecord& rec : result.series)
      series.emplace_back(rec.t, rec.perturbation_norm);
    try {
      const DecayFit fit = fit_decay_rate(series);
      rate = fit.rate;
      r_squared = fit.r_squared;
    } catch (const std::invalid_argument&) {
      // not enough usable samples; NaN columns mark the run
    }
    const DiagnosticsRecord& last = result.series.back();
    out << i << ',' << format_value(sc.sweep_values[i]) << ','
        << status_name(result.outcome.status) << ','
        << format_value(result.outcome.state.t) << ','
        << result.accepted_steps << ',' << format_value(last.mass_f) << ','
        << format_value(last.mass_g) << ',' << format_value(last.energy) << ','
        << format_value(last.dissipation) << ',' << format_value(last.min_f)
        << ',' << format_value(last.min_g) << ','
        << format_value(last.perturbation_norm) << ',' << format_value(rate)
        << ',' << format_value(r_squared) << '\n';
    out.flush();
    worst = std::max(worst, status_code(result.outcome.status));
  }
  return worst;
}

}  // namespace

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open scenario file");

  Scenario sc;
  std::set<std::string> seen;
  std::string section;
  bool have_dt_min = false, have_dt_max = false;
  bool have_dt0 = false, have_t_end = false;
  bool have_length = false, have_nodes = false;
  bool have_f_const = false, have_g_const = false, have_directory = false;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    const std::size_t hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail_at(path, line, "malformed section header");
      section = text.substr(1, text.size() - 2);
      if (section != "grid" && section != "params" && section != "initial" &&
          section != "stepping" && section != "output")
        fail_at(path, line, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) fail_at(path, line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      fail_at(path, line, "expected key = value");
    if (section.empty())
      fail_at(path, line, "key outside of any [section]");
    if (!seen.insert(section + "." + key).second)
      fail_at(path, line, "duplicate key '" + key + "'");

    if (section == "grid") {
      if (key == "length") {
        sc.length = parse_double(path, line, value);
        if (!(sc.length > 0.0)) fail_at(path, line, "length must be positive");
        have_length = true;
      } else if (key == "nodes") {
        const long n = parse_int(path, line, value);
        if (n < 8) fail_at(path, line, "nodes must be at least 8");
        sc.nodes = static_cast<int>(n);
        have_nodes = true;
      } else {
        fail_at(path, line, "unknown key '" + key + "' in [grid]");
      }
    } else if (section == "params") {
      if (sweepable_parameters().count(key) == 0)
        fail_at(path, line, "unknown key '" + key + "' in [params]");
      set_parameter(sc.params, key, parse_double(path, line, value));
    } else if (section == "initial") {
      if (key == "f_const") {
        sc.f_const = parse_double(path, line, value);
        have_f_const = true;
      } else if (key == "g_const") {
        sc.g_const = parse_double(path, line, value);
        have_g_const = true;
      } else if (key.rfind("f_mode_", 0) == 0 || key.rfind("g_mode_", 0) == 0) {
        const long n = parse_int(path, line, key.substr(7));
        if (n < 1) fail_at(path, line, "mode number must be at least 1");
        const double amp = parse_double(path, line, value);
        auto& modes = key[0] == 'f' ? sc.f_modes : sc.g_modes;
        modes.emplace_back(static_cast<int>(n), amp);
      } else {
        fail_at(path, line, "unknown key '" + key + "' in [initial]");
      }
    } else if (section == "stepping") {
      if (key == "scheme") {
        if (value == "implicit_newton") sc.step.scheme = Scheme::implicit_newton;
        else if (value == "semi_implicit") sc.step.scheme = Scheme::semi_implicit;
        else fail_at(path, line, "scheme must be implicit_newton or semi_implicit");
      } else if (key == "dt0") {
        sc.step.dt0 = parse_double(path, line, value);
        if (!(sc.step.dt0 > 0.0)) fail_at(path, line, "dt0 must be positive");
        have_dt0 = true;
      } else if (key == "dt_min") {
        sc.step.dt_min = parse_double(path, line, value);
        if (!(sc.step.dt_min > 0.0)) fail_at(path, line, "dt_min must be positive");
        have_dt_min = true;
      } else if (key == "dt_max") {
        sc.step.dt_max = parse_double(path, line, value);
        if (!(sc.step.dt_max > 0.0)) fail_at(path, line, "dt_max must be positive");
        have_dt_max = true;
      } else if (key == "t_end") {
        sc.t_end = parse_double(path, line, value);
        if (!(sc.t_end > 0.0)) fail_at(path, line, "t_end must be positive");
        have_t_end = true;
      } else if (key == "newton_tol") {
        sc.step.newton_tol = parse_double(path, line, value);
        if (!(sc.step.newton_tol > 0.0))
          fail_at(path, line, "newton_tol must be positive");
      } else if (key == "newton_max_iter") {
        const long it = parse_int(path, line, value);
        if (it < 1) fail_at(path, line, "newton_max_iter must be at least 1");
        sc.step.newton_max_iter = static_cast<int>(it);
      } else if (key == "rupture_floor") {
        sc.step.rupture_floor = parse_double(path, line, value);
      } else if (key == "blowup_norm_cap") {
        sc.step.blowup_norm_cap = parse_double(path, line, value);
        if (!(sc.step.blowup_norm_cap > 0.0))
          fail_at(path, line, "blowup_norm_cap must be positive");
      } else {
        fail_at(path, line, "unknown key '" + key + "' in [stepping]");
      }
    } else {  // output
      if (key == "mode") {
        if (value == "simulate") sc.mode = RunMode::simulate;
        else if (value == "stability") sc.mode = RunMode::stability;
        else if (value == "sweep") sc.mode = RunMode::sweep;
        else fail_at(path, line, "mode must be simulate, stability, or sweep");
      } else if (key == "directory") {
        sc.output_dir = value;
        have_directory = true;
      } else if (key == "diagnostics_stride") {
        const long s = parse_int(path, line, value);
        if (s < 1) fail_at(path, line, "diagnostics_stride must be at least 1");
        sc.diagnostics_stride = static_cast<int>(s);
      } else if (key == "profile_stride") {
        const long s = parse_int(path, line, value);
        if (s < 0) fail_at(path, line, "profile_stride must be nonnegative");
        sc.profile_stride = static_cast<int>(s);
      } else if (key == "stability_modes") {
        const long s = parse_int(path, line, value);
        if (s < 1) fail_at(path, line, "stability_modes must be at least 1");
        sc.stability_modes = static_cast<int>(s);
      } else if (key == "sweep_parameter") {
        if (sweepable_parameters().count(value) == 0)
          fail_at(path, line, "sweep_parameter must name a [params] key");
        sc.sweep_parameter = value;
      } else if (key == "sweep_values") {
        std::string rest = value;
        while (!rest.empty()) {
          const std::size_t comma = rest.find(',');
          const std::string item = trim(rest.substr(0, comma));
          if (item.empty()) fail_at(path, line, "empty entry in sweep_values");
          sc.sweep_values.push_back(parse_double(path, line, item));
          rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        }
        if (sc.sweep_values.empty())
          fail_at(path, line, "sweep_values must not be empty");
      } else {
        fail_at(path, line, "unknown key '" + key + "' in [output]");
      }
    }
  }

  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(path + ": " + msg);
  };
  require(have_length, "[grid] length is required");
  require(have_nodes, "[grid] nodes is required");
  require(have_f_const, "[initial] f_const is required");
  require(have_g_const, "[initial] g_const is required");
  require(have_directory, "[output] directory is required");
  if (sc.mode != RunMode::stability) {
    require(have_dt0, "[stepping] dt0 is required");
    require(have_t_end, "[stepping] t_end is required");
    if (!have_dt_min) sc.step.dt_min = sc.step.dt0 * 1e-6;
    if (!have_dt_max) sc.step.dt_max = sc.step.dt0;
    require(sc.step.dt_min <= sc.step.dt0 && sc.step.dt0 <= sc.step.dt_max,
            "[stepping] needs dt_min <= dt0 <= dt_max");
  }
  if (sc.mode == RunMode::sweep) {
    require(!sc.sweep_parameter.empty(),
            "[output] sweep_parameter is required for sweep mode");
    require(!sc.sweep_values.empty(),
            "[output] sweep_values is required for sweep mode");
  }

  try {
    sc.params.validate();
    if (sc.mode == RunMode::sweep) {
      for (double v : sc.sweep_values) {
        FluidParams probe = sc.params;
        set_parameter(probe, sc.sweep_parameter, v);
        probe.validate();
      }
    }
    initial_state(sc);  // also enforces strict positivity at every node
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return sc;
}

Grid scenario_grid(const Scenario& sc) { return make_grid(sc.length, sc.nodes); }

State initial_state(const Scenario& sc) {
  const Grid grid = scenario_grid(sc);
  State state;
  state.t = 0.0;
  state.f.resize(grid.n);
  state.g.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    double f = sc.f_const, g = sc.g_const;
    for (const auto& [n, amp] : sc.f_modes)
      f += amp * std::cos(n * kPi * x / sc.length);
    for (const auto& [n, amp] : sc.g_modes)
      g += amp * std::cos(n * kPi * x / sc.length);
    state.f[i] = f;
    state.g[i] = g;
  }
  for (int i = 0; i < grid.n; ++i) {
    if (!(state.f[i] > 0.0))
      throw std::runtime_error("initial f must be strictly positive at all nodes");
    if (!(state.g[i] > 0.0))
      throw std::runtime_error("initial g must be strictly positive at all nodes");
  }
  return state;
}

int run(const Scenario& sc) {
  switch (sc.mode) {
    case RunMode::simulate: return run_simulate(sc);
    case RunMode::stability: return run_stability(sc);
    case RunMode::sweep: return run_sweep(sc);
  }
  return 1;
}

}  // namespace bilayer
