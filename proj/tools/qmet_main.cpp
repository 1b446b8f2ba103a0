#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmet/allocator.hpp"
#include "qmet/bounds.hpp"
#include "qmet/montecarlo.hpp"
#include "qmet/selfcheck.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerifyFailed = 4;

/// Precedence: command-line flags > JSON config file > built-in defaults.
/// Every option key in the config file matches the long flag name.
class ConfigBinder {
 public:
  void bind_double(CLI::App* cmd, const std::string& key, double* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<double>(); }});
  }
  void bind_int(CLI::App* cmd, const std::string& key, int* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<int>(); }});
  }
  void bind_ll(CLI::App* cmd, const std::string& key, long long* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<long long>(); }});
  }
  void bind_u64(CLI::App* cmd, const std::string& key, std::uint64_t* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<std::uint64_t>(); }});
  }
  void bind_string(CLI::App* cmd, const std::string& key, std::string* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<std::string>(); }});
  }
  void bind_flag(CLI::App* cmd, const std::string& key, bool* target) {
    setters_.push_back({cmd, key, [target](const json& v) { *target = v.get<bool>(); }});
  }

  bool was_set(CLI::App* cmd, const std::string& key) const {
    const auto* opt = cmd->get_option_no_throw("--" + key);
    return opt != nullptr && opt->count() > 0;
  }

  /// Applies config values to every bound option of the active subcommand
  /// that the user did not pass. Keys that match nothing are rejected.
  void apply(const json& config, CLI::App* active) const {
    for (const auto& [key, value] : config.items()) {
      bool known = false;
      for (const auto& s : setters_) {
        if (s.cmd != active || s.key != key) continue;
        known = true;
        if (!was_set(s.cmd, key)) s.set(value);
        break;
      }
      if (!known) {
        throw qmet::ValidationError("unknown config key '" + key + "' for '" +
                                    active->get_name() + "'");
      }
    }
  }

  bool seen_anywhere(const std::string& key, const json& config) const {
    if (config.contains(key)) return true;
    for (const auto& s : setters_) {
      if (s.key == key && was_set(s.cmd, key)) return true;
    }
    return false;
  }

 private:
  struct Setter {
    CLI::App* cmd;
    std::string key;
    std::function<void(const json&)> set;
  };
  std::vector<Setter> setters_;
};

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw qmet::ValidationError("cannot open output path '" + output_path + "'");
  }
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct BoundArgs {
  std::string family = "product";
  std::string form = "nodec";
  int n = 1;
  long long nu = 1;
  double T = 1.0;
  double gamma1 = 0, gamma2 = 0, mu = 0;
  double rate = -1;  // R; negative means unset
};

json run_bound(const BoundArgs& a) {
  qmet::BoundQuery q;
  q.family = qmet::probe_family_from_string(a.family);
  q.form = qmet::bound_form_from_string(a.form);
  q.n = a.n;
  q.nu = a.nu;
  q.T = a.T;
  q.params = qmet::ChannelParams(a.gamma1, a.gamma2, a.mu);
  if (a.rate > 0) q.rate = a.rate;
  const auto result = qmet::bound(q);
  json out{{"delta_g", result.delta_g}, {"log_delta_g", result.log_delta_g}};
  if (result.dimensionless) out["dimensionless"] = *result.dimensionless;
  out["inputs_echo"] = {{"family", a.family}, {"form", a.form}, {"n", a.n},
                        {"nu", a.nu},         {"T", a.T},       {"gamma1", a.gamma1},
                        {"gamma2", a.gamma2}, {"mu", a.mu}};
  if (a.rate > 0) out["inputs_echo"]["R"] = a.rate;
  return out;
}

struct OptimizeArgs {
  std::string family = "cat";
  double rate = 0, tau = 0;
  double gamma1 = 0, gamma2 = 0, mu = 0;
  long long nu_min = 50;
};

json run_optimize(const OptimizeArgs& a) {
  qmet::Resources res{a.rate, a.tau, a.nu_min, a.gamma2, a.gamma1, a.mu};
  const auto family = qmet::probe_family_from_string(a.family);
  const auto alloc = family == qmet::ProbeFamily::cat
                         ? qmet::optimize_cat(res)
                         : qmet::optimize_product(res);
  json out{{"T", alloc.T},
           {"n_star", alloc.n_star},
           {"n", alloc.n},
           {"nu", alloc.nu},
           {"N", alloc.total_qubits},
           {"T_realized", alloc.T_realized},
           {"regime", qmet::to_string(alloc.regime)},
           {"delta_g", alloc.delta_g},
           {"delta_g_realized", alloc.delta_g_realized}};
  if (alloc.dimensionless) out["dimensionless"] = *alloc.dimensionless;
  out["inputs_echo"] = {{"family", a.family},   {"R", a.rate},
                        {"tau", a.tau},         {"gamma1", a.gamma1},
                        {"gamma2", a.gamma2},   {"mu", a.mu},
                        {"nu-min", a.nu_min}};
  return out;
}

struct FigureArgs {
  int which = 3;
  double tau_min = -1, tau_max = -1;
  int points = 200;
  long long nu_min = 50;
  std::vector<double> sqrt_r_gamma2;
  std::string format = "csv";
};

std::string run_figure(const FigureArgs& a, json* json_out) {
  if (a.which != 2 && a.which != 3) {
    throw qmet::ValidationError("figure: --which must be 2 or 3");
  }
  const double lo = a.tau_min > 0 ? a.tau_min : (a.which == 2 ? 0.01 : 1e-6);
  const double hi = a.tau_max > 0 ? a.tau_max : (a.which == 2 ? 100.0 : 10.0);
  const auto grid = qmet::log_spaced_grid(lo, hi, a.points);
  std::ostringstream csv;
  json rows = json::array();
  if (a.which == 2) {
    csv << "gamma2_tau,gamma2_Tp,dimensionless_bound\n";
    for (const auto& p : qmet::fig2_curve(grid)) {
      csv << format_number(p.gamma2_tau) << ',' << format_number(p.gamma2_Tp)
          << ',' << format_number(p.product_bound) << '\n';
      rows.push_back({{"gamma2_tau", p.gamma2_tau},
                      {"gamma2_Tp", p.gamma2_Tp},
                      {"dimensionless_bound", p.product_bound}});
    }
  } else {
    const std::vector<double> curves =
        a.sqrt_r_gamma2.empty() ? std::vector<double>{10, 100, 1000, 10000}
                                : a.sqrt_r_gamma2;
    csv << "gamma2_tau,sqrt_R_over_gamma2,dimensionless_bound_cat,"
           "dimensionless_bound_product,regime\n";
    for (const auto& p : qmet::fig3_curves(grid, curves, a.nu_min)) {
      csv << format_number(p.gamma2_tau) << ','
          << format_number(p.sqrt_R_over_gamma2) << ',';
      if (p.cat_bound) csv << format_number(*p.cat_bound);
      csv << ',';
      if (p.product_bound) csv << format_number(*p.product_bound);
      csv << ',' << p.regime << '\n';
      json row{{"gamma2_tau", p.gamma2_tau},
               {"sqrt_R_over_gamma2", p.sqrt_R_over_gamma2},
               {"regime", p.regime}};
      if (p.cat_bound) row["dimensionless_bound_cat"] = *p.cat_bound;
      if (p.product_bound) row["dimensionless_bound_product"] = *p.product_bound;
      rows.push_back(std::move(row));
    }
  }
  *json_out = std::move(rows);
  return csv.str();
}

struct SimulateArgs {
  std::string family = "product";
  int n = 1;
  long long trials = 10000;
  double T = 1.0;
  double g = 0.0;
  bool sweet = false;
  double gamma1 = 0, gamma2 = 0, mu = 0;
  std::uint64_t seed = 0;
  int reps = 30;
  double fringe_frac = 0.005;
};

json run_simulate(const SimulateArgs& a) {
  qmet::TrialConfig cfg;
  cfg.spec = qmet::ProbeSpec(qmet::probe_family_from_string(a.family), a.n,
                             a.T, a.g);
  cfg.params = qmet::ChannelParams(a.gamma1, a.gamma2, a.mu);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.repetitions = a.reps;
  cfg.fringe_fraction = a.fringe_frac;
  if (a.sweet) {
    cfg.spec.g = qmet::sweet_spot_offset(cfg.spec);
    cfg.g_true = cfg.spec.g;
  } else {
    cfg.g_true = a.g;
  }
  const auto report = qmet::run_trials(cfg);
  if (!report.linearization_ok) {
    std::cerr << "warning: trial count too small for the linear arccos "
                 "regime (e^{n gamma2 T} Delta(mean) not << 1)\n";
  }
  if (report.degenerate) {
    std::cerr << "warning: degenerate estimate, some repetition produced "
                 "all-identical outcomes\n";
  }
  json out{{"g_true", cfg.g_true},
           {"g_est_mean", report.g_est_mean},
           {"empirical_delta_g", report.empirical_delta_g},
           {"empirical_delta_g_stderr", report.empirical_delta_g_stderr},
           {"delta_g_rms", report.delta_g_rms},
           {"predicted_delta_g", report.predicted_delta_g},
           {"slope", report.slope},
           {"clipped_fraction", report.clipped_fraction},
           {"degenerate", report.degenerate},
           {"linearization_ok", report.linearization_ok}};
  out["inputs_echo"] = {{"family", a.family}, {"n", a.n},
                        {"nu", a.trials},     {"T", a.T},
                        {"g", cfg.g_true},    {"gamma1", a.gamma1},
                        {"gamma2", a.gamma2}, {"mu", a.mu},
                        {"seed", a.seed},     {"reps", a.reps}};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantum-limited bounds, resource allocation and Monte-Carlo "
      "verification for rotation-rate estimation with qubit probes. Rates in "
      "s^-1, times in s."};
  app.require_subcommand(1);
  // --config / --output live on the parent and may follow the subcommand.
  app.fallthrough();

  std::string config_path;
  std::string output_path;
  app.add_option("--config", config_path,
                 "JSON config file; flags override its values");
  app.add_option("--output", output_path, "write the result to this path");

  ConfigBinder binder;

  auto* bound_cmd = app.add_subcommand("bound", "evaluate a closed-form bound");
  BoundArgs bound_args;
  bound_cmd->add_option("--family", bound_args.family, "product | cat");
  bound_cmd->add_option("--form", bound_args.form, "nodec | weak | strong");
  bound_cmd->add_option("--n", bound_args.n, "qubits per probe");
  bound_cmd->add_option("--nu", bound_args.nu, "probe count");
  bound_cmd->add_option("--T", bound_args.T, "interaction time [s]");
  bound_cmd->add_option("--gamma1", bound_args.gamma1, "1/T1 [s^-1]");
  bound_cmd->add_option("--gamma2", bound_args.gamma2, "1/T2 [s^-1]");
  bound_cmd->add_option("--mu", bound_args.mu, "fixed-point bias");
  bound_cmd->add_option("--R", bound_args.rate,
                        "qubit rate [s^-1], enables the dimensionless form");
  binder.bind_string(bound_cmd, "family", &bound_args.family);
  binder.bind_string(bound_cmd, "form", &bound_args.form);
  binder.bind_int(bound_cmd, "n", &bound_args.n);
  binder.bind_ll(bound_cmd, "nu", &bound_args.nu);
  binder.bind_double(bound_cmd, "T", &bound_args.T);
  binder.bind_double(bound_cmd, "gamma1", &bound_args.gamma1);
  binder.bind_double(bound_cmd, "gamma2", &bound_args.gamma2);
  binder.bind_double(bound_cmd, "mu", &bound_args.mu);
  binder.bind_double(bound_cmd, "R", &bound_args.rate);

  auto* opt_cmd = app.add_subcommand("optimize", "optimal (T, n, nu) deployment");
  OptimizeArgs opt_args;
  opt_cmd->add_option("--family", opt_args.family, "product | cat");
  opt_cmd->add_option("--R", opt_args.rate, "qubit rate [s^-1]");
  opt_cmd->add_option("--tau", opt_args.tau, "total duration [s]");
  opt_cmd->add_option("--gamma1", opt_args.gamma1, "1/T1 [s^-1]");
  opt_cmd->add_option("--gamma2", opt_args.gamma2, "1/T2 [s^-1]");
  opt_cmd->add_option("--mu", opt_args.mu, "fixed-point bias");
  opt_cmd->add_option("--nu-min", opt_args.nu_min, "minimum probe count");
  binder.bind_string(opt_cmd, "family", &opt_args.family);
  binder.bind_double(opt_cmd, "R", &opt_args.rate);
  binder.bind_double(opt_cmd, "tau", &opt_args.tau);
  binder.bind_double(opt_cmd, "gamma1", &opt_args.gamma1);
  binder.bind_double(opt_cmd, "gamma2", &opt_args.gamma2);
  binder.bind_double(opt_cmd, "mu", &opt_args.mu);
  binder.bind_ll(opt_cmd, "nu-min", &opt_args.nu_min);

  auto* fig_cmd = app.add_subcommand("figure", "bound-vs-gamma2*tau curve data");
  FigureArgs fig_args;
  fig_cmd->add_option("--which", fig_args.which, "2 | 3");
  fig_cmd->add_option("--tau-min", fig_args.tau_min, "grid start (gamma2 tau)");
  fig_cmd->add_option("--tau-max", fig_args.tau_max, "grid end (gamma2 tau)");
  fig_cmd->add_option("--points", fig_args.points, "grid size");
  fig_cmd->add_option("--nu-min", fig_args.nu_min, "minimum probe count");
  fig_cmd->add_option("--sqrt-r-gamma2", fig_args.sqrt_r_gamma2,
                      "sqrt(R/gamma2) curve values (figure 3)");
  fig_cmd->add_option("--format", fig_args.format, "csv | json");
  binder.bind_int(fig_cmd, "which", &fig_args.which);
  binder.bind_double(fig_cmd, "tau-min", &fig_args.tau_min);
  binder.bind_double(fig_cmd, "tau-max", &fig_args.tau_max);
  binder.bind_int(fig_cmd, "points", &fig_args.points);
  binder.bind_ll(fig_cmd, "nu-min", &fig_args.nu_min);
  binder.bind_string(fig_cmd, "format", &fig_args.format);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimator run");
  SimulateArgs sim_args;
  sim_cmd->add_option("--family", sim_args.family, "product | cat");
  sim_cmd->add_option("--n", sim_args.n, "qubits per probe");
  sim_cmd->add_option("--nu", sim_args.trials, "probes per estimate");
  sim_cmd->add_option("--T", sim_args.T, "interaction time [s]");
  sim_cmd->add_option("--g", sim_args.g, "true coupling [s^-1]");
  sim_cmd->add_flag("--gT-sweet", sim_args.sweet,
                    "move g to the nearest sweet spot |sin(n g T)| = 1");
  sim_cmd->add_option("--gamma1", sim_args.gamma1, "1/T1 [s^-1]");
  sim_cmd->add_option("--gamma2", sim_args.gamma2, "1/T2 [s^-1]");
  sim_cmd->add_option("--mu", sim_args.mu, "fixed-point bias");
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");
  sim_cmd->add_option("--reps", sim_args.reps, "estimator repetitions");
  sim_cmd->add_option("--fringe-frac", sim_args.fringe_frac,
                      "slope bracket half-width, fraction of a fringe");
  binder.bind_string(sim_cmd, "family", &sim_args.family);
  binder.bind_int(sim_cmd, "n", &sim_args.n);
  binder.bind_ll(sim_cmd, "nu", &sim_args.trials);
  binder.bind_double(sim_cmd, "T", &sim_args.T);
  binder.bind_double(sim_cmd, "g", &sim_args.g);
  binder.bind_flag(sim_cmd, "gT-sweet", &sim_args.sweet);
  binder.bind_double(sim_cmd, "gamma1", &sim_args.gamma1);
  binder.bind_double(sim_cmd, "gamma2", &sim_args.gamma2);
  binder.bind_double(sim_cmd, "mu", &sim_args.mu);
  binder.bind_u64(sim_cmd, "seed", &sim_args.seed);
  binder.bind_int(sim_cmd, "reps", &sim_args.reps);
  binder.bind_double(sim_cmd, "fringe-frac", &sim_args.fringe_frac);

  auto* verify_cmd = app.add_subcommand("verify", "run the oracle self-checks");
  qmet::SelfCheckOptions verify_opts;
  verify_cmd->add_option("--n-max", verify_opts.n_max,
                         "brute-force qubit cap (<= 6)");
  verify_cmd->add_option("--tol", verify_opts.rel_tol, "relative tolerance");
  verify_cmd->add_option("--seed", verify_opts.seed, "RNG seed");
  binder.bind_int(verify_cmd, "n-max", &verify_opts.n_max);
  binder.bind_double(verify_cmd, "tol", &verify_opts.rel_tol);
  binder.bind_u64(verify_cmd, "seed", &verify_opts.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    CLI::App* active = nullptr;
    for (auto* cmd : {bound_cmd, opt_cmd, fig_cmd, sim_cmd, verify_cmd}) {
      if (app.got_subcommand(cmd)) active = cmd;
    }
    json config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        throw qmet::ValidationError("cannot read config file '" + config_path + "'");
      }
      config = json::parse(in);
      binder.apply(config, active);
    }

    if (app.got_subcommand(bound_cmd)) {
      emit(run_bound(bound_args).dump(2), output_path);
    } else if (app.got_subcommand(opt_cmd)) {
      emit(run_optimize(opt_args).dump(2), output_path);
    } else if (app.got_subcommand(fig_cmd)) {
      json rows;
      const std::string csv = run_figure(fig_args, &rows);
      if (fig_args.format == "json") {
        emit(rows.dump(2), output_path);
      } else if (fig_args.format == "csv") {
        emit(csv, output_path);
      } else {
        throw qmet::ValidationError("figure: --format must be csv or json");
      }
    } else if (app.got_subcommand(sim_cmd)) {
      if (!binder.seen_anywhere("seed", config)) {
        std::cerr << "warning: no --seed given, defaulting to 0\n";
      }
      emit(run_simulate(sim_args).dump(2), output_path);
    } else if (app.got_subcommand(verify_cmd)) {
      const auto results = qmet::run_selfcheck(verify_opts);
      std::ostringstream report;
      int failures = 0;
      for (const auto& r : results) {
        failures += !r.pass;
        report << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail
               << ")\n";
      }
      report << (failures == 0 ? "all checks passed"
                               : std::to_string(failures) + " check(s) failed")
             << '\n';
      emit(report.str(), output_path);
      return failures == 0 ? kExitOk : kExitVerifyFailed;
    }
    return kExitOk;
  } catch (const qmet::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const qmet::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const qmet::DivergentBound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
