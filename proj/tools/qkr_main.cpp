// qkr: resonant kicked-rotor simulator with a time-dependent kick strength.
//
// Subcommands: evolve, profile, fit, sweep, compare, validate.
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 back-end
// divergence, 5 validation failure.

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qkr/bessel.hpp"
#include "qkr/io.hpp"
#include "qkr/propagator.hpp"
#include "qkr/svg.hpp"
#include "qkr/sweep.hpp"
#include "qkr/validate.hpp"
#include "qkr/version.hpp"

namespace {

using namespace qkr;

struct Settings {
  std::int64_t p = 1;
  std::int64_t q = 1;
  double alpha = 0.0;
  double kappa0 = 1.0;
  bool constant_schedule = false;
  std::string schedule_file;
  std::int64_t delta_at = 0;
  std::int64_t steps = 1000;
  std::string backend = "auto";  // auto | analytic | banded | spectral
  double tail_tol = 1e-28;
  std::int64_t grid_size = 0;
  double edge_threshold = 1e-14;
  std::int64_t growth_chunk = 64;
  std::int64_t max_halfwidth = 1 << 20;
  std::int64_t window = 100;
  std::int64_t smooth = 0;
  double classify_tol = 0.05;
  std::vector<std::int64_t> snapshots;
  std::string out_dir = "qkr_out";
  // profile
  std::int64_t at_step = 300;
  bool emit_svg = false;
  // fit
  std::string series_path;
  // sweep
  std::vector<double> alphas;
  std::vector<std::string> resonances;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
};

template <typename T>
void parse_into(const std::string& value, T& out, const std::string& key) {
  std::istringstream ss(value);
  if constexpr (std::is_same_v<T, bool>) {
    std::string word;
    ss >> word;
    if (word == "true" || word == "1" || word == "yes") out = true;
    else if (word == "false" || word == "0" || word == "no") out = false;
    else throw validation_error("config key " + key + ": expected boolean, got '" + value + "'");
  } else if constexpr (std::is_same_v<T, std::string>) {
    out = value;
  } else {
    if (!(ss >> out) || !(ss >> std::ws).eof()) {
      throw validation_error("config key " + key + ": cannot parse '" + value + "'");
    }
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& value, const std::string& key) {
  std::vector<T> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    T v;
    parse_into(item.substr(a, b - a + 1), v, key);
    out.push_back(v);
  }
  return out;
}

void apply_ini(Settings& s, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "run.p") parse_into(value, s.p, key);
    else if (key == "run.q") parse_into(value, s.q, key);
    else if (key == "run.alpha") parse_into(value, s.alpha, key);
    else if (key == "run.kappa0") parse_into(value, s.kappa0, key);
    else if (key == "run.constant") parse_into(value, s.constant_schedule, key);
    else if (key == "run.schedule_file") parse_into(value, s.schedule_file, key);
    else if (key == "run.delta_at") parse_into(value, s.delta_at, key);
    else if (key == "run.steps") parse_into(value, s.steps, key);
    else if (key == "run.backend") parse_into(value, s.backend, key);
    else if (key == "run.tail_tol") parse_into(value, s.tail_tol, key);
    else if (key == "run.grid_size") parse_into(value, s.grid_size, key);
    else if (key == "run.window") parse_into(value, s.window, key);
    else if (key == "run.smooth") parse_into(value, s.smooth, key);
    else if (key == "run.classify_tol") parse_into(value, s.classify_tol, key);
    else if (key == "run.snapshots") s.snapshots = parse_list<std::int64_t>(value, key);
    else if (key == "run.at_step") parse_into(value, s.at_step, key);
    else if (key == "truncation.edge_threshold") parse_into(value, s.edge_threshold, key);
    else if (key == "truncation.growth_chunk") parse_into(value, s.growth_chunk, key);
    else if (key == "truncation.max_halfwidth") parse_into(value, s.max_halfwidth, key);
    else if (key == "sweep.alphas") s.alphas = parse_list<double>(value, key);
    else if (key == "sweep.resonances") s.resonances = parse_list<std::string>(value, key);
    else if (key == "sweep.workers") parse_into(value, s.workers, key);
    else if (key == "sweep.output_dir") parse_into(value, s.out_dir, key);
    else throw validation_error("unknown config key: " + key);
  }
}

std::string settings_to_ini(const Settings& s) {
  std::ostringstream out;
  out << "[run]\n"
      << "p = " << s.p << "\n"
      << "q = " << s.q << "\n"
      << "alpha = " << format_double(s.alpha) << "\n"
      << "kappa0 = " << format_double(s.kappa0) << "\n"
      << "constant = " << (s.constant_schedule ? "true" : "false") << "\n";
  if (!s.schedule_file.empty()) out << "schedule_file = " << s.schedule_file << "\n";
  out << "delta_at = " << s.delta_at << "\n"
      << "steps = " << s.steps << "\n"
      << "backend = " << s.backend << "\n"
      << "tail_tol = " << format_double(s.tail_tol) << "\n"
      << "grid_size = " << s.grid_size << "\n"
      << "window = " << s.window << "\n"
      << "smooth = " << s.smooth << "\n"
      << "classify_tol = " << format_double(s.classify_tol) << "\n"
      << "at_step = " << s.at_step << "\n";
  if (!s.snapshots.empty()) {
    out << "snapshots = ";
    for (size_t i = 0; i < s.snapshots.size(); ++i) {
      out << (i ? "," : "") << s.snapshots[i];
    }
    out << "\n";
  }
  out << "\n[truncation]\n"
      << "edge_threshold = " << format_double(s.edge_threshold) << "\n"
      << "growth_chunk = " << s.growth_chunk << "\n"
      << "max_halfwidth = " << s.max_halfwidth << "\n";
  if (!s.alphas.empty() || !s.resonances.empty()) {
    out << "\n[sweep]\n";
    if (!s.alphas.empty()) {
      out << "alphas = ";
      for (size_t i = 0; i < s.alphas.size(); ++i) {
        out << (i ? "," : "") << format_double(s.alphas[i]);
      }
      out << "\n";
    }
    if (!s.resonances.empty()) {
      out << "resonances = ";
      for (size_t i = 0; i < s.resonances.size(); ++i) {
        out << (i ? "," : "") << s.resonances[i];
      }
      out << "\n";
    }
    out << "workers = " << s.workers << "\n"
        << "output_dir = " << s.out_dir << "\n";
  }
  return out.str();
}

ResonanceParams parse_resonance(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    throw validation_error("resonance must look like p/q, got '" + text + "'");
  }
  std::int64_t p = 0, q = 0;
  parse_into(text.substr(0, slash), p, "resonance");
  parse_into(text.substr(slash + 1), q, "resonance");
  return make_resonance(p, q);
}

RunConfig build_config(const Settings& s) {
  RunConfig cfg;
  cfg.resonance = make_resonance(s.p, s.q);
  if (!s.schedule_file.empty()) {
    cfg.schedule = load_schedule_file(s.schedule_file);
  } else if (s.constant_schedule) {
    cfg.schedule = ConstantSchedule{s.kappa0};
  } else {
    cfg.schedule = PowerLawSchedule{s.kappa0, s.alpha};
  }
  cfg.initial = DeltaInitial{s.delta_at};
  cfg.steps = s.steps;
  std::string backend = s.backend;
  if (backend == "auto") backend = cfg.resonance.is_primary() ? "analytic" : "banded";
  if (backend == "analytic") cfg.backend = AnalyticBackend{};
  else if (backend == "banded") cfg.backend = BandedBackend{s.tail_tol};
  else if (backend == "spectral") cfg.backend = SpectralBackend{s.grid_size, s.tail_tol};
  else throw validation_error("unknown backend '" + s.backend + "'");
  cfg.truncation = TruncationPolicy{s.edge_threshold, s.growth_chunk, s.max_halfwidth};
  cfg.snapshot_steps.insert(s.snapshots.begin(), s.snapshots.end());
  validate_config(cfg);
  return cfg;
}

void write_meta(const Settings& s, const RunConfig& cfg, const std::string& command) {
  const std::filesystem::path dir = s.out_dir;
  nlohmann::json meta = run_config_json(cfg);
  meta["command"] = command;
  meta["fit_window"] = s.window;
  meta["smooth_width"] = s.smooth;
  meta["classify_tol"] = s.classify_tol;
  meta["tool_version"] = kToolVersion;
  std::ofstream mf(dir / "meta.json");
  mf << meta.dump(2) << '\n';
  std::ofstream cf(dir / "config.ini");
  cf << settings_to_ini(s);
}

void print_fit(const TimeSeries& series, const Settings& s) {
  FitOptions fo;
  fo.window_len = s.window;
  fo.smooth_width = s.smooth;
  try {
    const GammaFit fit = fit_gamma(series, fo);
    const Regime regime = classify(fit, s.classify_tol);
    std::printf("gamma   = %.6f  (window n in [%lld, %lld], model %s, rms %.3e)\n", fit.gamma,
                static_cast<long long>(fit.n_lo), static_cast<long long>(fit.n_hi),
                fit.model == FitModel::Logarithmic ? "logarithmic" : "power-law",
                fit.rms_residual);
    std::printf("regime  = %s\n", regime_name(regime));
  } catch (const fit_error& e) {
    std::printf("gamma   = n/a (%s)\n", e.what());
  }
}

int cmd_evolve(const Settings& s) {
  const RunConfig cfg = build_config(s);
  std::filesystem::create_directories(s.out_dir);
  const EvolveResult result = evolve(cfg);
  const std::filesystem::path dir = s.out_dir;
  write_series_csv(dir / "series.csv", result.series);
  write_state_csv(dir / "final.csv", result.final_state);
  for (const auto& snap : result.snapshots) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%06lld.csv", static_cast<long long>(snap.step));
    write_state_csv(dir / name, snap.state);
  }
  write_meta(s, cfg, "evolve");
  const auto& last = result.series.records.back();
  std::printf("steps   = %lld\n", static_cast<long long>(last.n));
  std::printf("n_star  = %s\n", format_double(last.n_star).c_str());
  std::printf("sigma   = %s\n", format_double(last.sigma).c_str());
  print_fit(result.series, s);
  std::printf("leak    = %.3e\n", result.final_state.leaked_norm);
  std::printf("wrote %s\n", (dir / "series.csv").string().c_str());
  return 0;
}

int cmd_profile(Settings s, bool steps_given) {
  if (!steps_given) s.steps = s.at_step;
  if (s.at_step > s.steps) {
    throw validation_error("at_step " + std::to_string(s.at_step) + " exceeds steps " +
                           std::to_string(s.steps));
  }
  s.snapshots.push_back(s.at_step);
  const RunConfig cfg = build_config(s);
  std::filesystem::create_directories(s.out_dir);
  const EvolveResult result = evolve(cfg);
  const WaveState* at = nullptr;
  for (const auto& snap : result.snapshots) {
    if (snap.step == s.at_step) at = &snap.state;
  }
  const std::filesystem::path dir = s.out_dir;
  write_profile_csv(dir / "profile.csv", *at);
  write_meta(s, cfg, "profile");
  if (s.emit_svg) {
    SvgCurve curve;
    for (std::int64_t i = 0; i < at->size(); ++i) {
      curve.x.push_back(static_cast<double>(at->l_min + i));
      curve.y.push_back(std::norm(at->amplitudes(i)));
    }
    char label[64];
    std::snprintf(label, sizeof(label), "n = %lld", static_cast<long long>(s.at_step));
    curve.label = label;
    SvgOptions opt;
    opt.log_y = true;
    opt.title = "P_l";
    opt.x_label = "l";
    opt.y_label = "P_l (log)";
    std::ofstream svg(dir / "profile.svg");
    svg << svg_line_plot({curve}, opt);
    std::printf("wrote %s\n", (dir / "profile.svg").string().c_str());
  }
  const auto [m1, m2] = moments(*at);
  std::printf("profile at n = %lld: sites %lld, sigma = %s\n",
              static_cast<long long>(s.at_step), static_cast<long long>(at->size()),
              format_double(sigma_from_moments(m1, m2)).c_str());
  std::printf("wrote %s\n", (dir / "profile.csv").string().c_str());
  return 0;
}

int cmd_fit(const Settings& s) {
  if (s.series_path.empty()) throw validation_error("fit requires --series");
  const TimeSeries series = read_series_csv(s.series_path);
  FitOptions fo;
  fo.window_len = s.window;
  fo.smooth_width = s.smooth;
  const GammaFit fit = fit_gamma(series, fo);
  const Regime regime = classify(fit, s.classify_tol);
  std::printf("gamma         = %s\n", format_double(fit.gamma).c_str());
  std::printf("log_amplitude = %s\n", format_double(fit.log_amplitude).c_str());
  std::printf("window        = [%lld, %lld]\n", static_cast<long long>(fit.n_lo),
              static_cast<long long>(fit.n_hi));
  std::printf("model         = %s\n",
              fit.model == FitModel::Logarithmic ? "logarithmic" : "power-law");
  std::printf("rms_residual  = %.6e (power %.6e, log %.6e)\n", fit.rms_residual, fit.power_rms,
              fit.log_rms);
  std::printf("regime        = %s\n", regime_name(regime));
  return 0;
}

int cmd_sweep(const Settings& s) {
  SweepSpec spec;
  Settings base = s;
  base.backend = s.backend;  // auto resolves per resonance inside run_sweep
  // The base config carries kappa0 et al.; alpha is substituted per run.
  if (s.backend == "auto") {
    base.backend = "analytic";  // run_sweep demotes to banded off q = 1
  }
  spec.base = build_config(base);
  spec.alpha_values = s.alphas;
  if (spec.alpha_values.empty()) {
    throw validation_error("sweep requires a non-empty alpha list (--alphas)");
  }
  if (s.resonances.empty()) {
    spec.resonances.push_back(make_resonance(s.p, s.q));
  } else {
    for (const auto& text : s.resonances) spec.resonances.push_back(parse_resonance(text));
  }
  spec.window = s.window;
  spec.smooth_width = s.smooth;
  spec.classify_tol = s.classify_tol;
  spec.output_dir = s.out_dir;

  const SweepManifest manifest = run_sweep(spec, s.workers);
  {
    std::ofstream sf(spec.output_dir / "summary.csv");
    sf << summarize(manifest);
  }
  int failures = 0;
  for (const auto& run : manifest.runs) {
    if (run.ok) {
      std::printf("alpha %+8.4f  p/q %lld/%lld  gamma %+8.4f  %-15s (%.2fs)\n", run.alpha,
                  static_cast<long long>(run.p), static_cast<long long>(run.q), run.gamma,
                  run.regime.c_str(), run.wall_time_s);
    } else {
      ++failures;
      std::printf("alpha %+8.4f  p/q %lld/%lld  FAILED: %s\n", run.alpha,
                  static_cast<long long>(run.p), static_cast<long long>(run.q),
                  run.error.c_str());
    }
  }
  std::printf("manifest: %s\n", (spec.output_dir / "manifest.json").string().c_str());
  return failures == 0 ? 0 : 1;
}

int cmd_compare(const Settings& s) {
  Settings base = s;
  base.backend = "banded";
  const RunConfig cfg = build_config(base);
  std::filesystem::create_directories(s.out_dir);
  write_meta(s, cfg, "compare");
  const PhaseTable table = make_phase_table(cfg.resonance);
  const bool with_analytic = cfg.resonance.is_primary();

  WaveState banded = initial_state(cfg.initial, support_radius(cfg.initial) + 1);
  WaveState spectral = banded;
  double n_star = 0.0;
  double worst = 0.0;
  double banded_ms = 0.0, spectral_ms = 0.0, analytic_ms = 0.0;
  std::printf("%6s %12s %12s %10s %10s %10s\n", "n", "max|b-s|", "max|b-a|", "t_band", "t_spec",
              "t_ana");
  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };
  const auto diff = [](const WaveState& a, const WaveState& b) {
    const std::int64_t lo = std::min(a.l_min, b.l_min);
    const std::int64_t hi = std::max(a.l_max(), b.l_max());
    double worst = 0.0;
    for (std::int64_t l = lo; l <= hi; ++l) {
      worst = std::max(worst, std::abs(a.at(l) - b.at(l)));
    }
    return worst;
  };

  for (std::int64_t n = 1; n <= cfg.steps; ++n) {
    const double kappa = kick_strength(cfg.schedule, n);
    n_star += kappa;
    auto t0 = clock::now();
    banded = step_banded(banded, table, kappa, cfg.truncation, s.tail_tol);
    auto t1 = clock::now();
    spectral = step_spectral(spectral, table, kappa, cfg.truncation, s.grid_size, s.tail_tol);
    auto t2 = clock::now();
    banded_ms += ms(t1 - t0);
    spectral_ms += ms(t2 - t1);

    const double d_bs = diff(banded, spectral);
    double d_ba = 0.0;
    if (with_analytic) {
      const auto t3 = clock::now();
      const WaveState exact = analytic_amplitudes(
          cfg.initial, n_star, analytic_halfwidth(cfg.initial, n_star, s.tail_tol), s.tail_tol);
      analytic_ms += ms(clock::now() - t3);
      d_ba = diff(banded, exact);
    }
    worst = std::max(worst, std::max(d_bs, d_ba));
    std::printf("%6lld %12.3e %12.3e %9.3fms %9.3fms %9.3fms\n", static_cast<long long>(n), d_bs,
                d_ba, ms(t1 - t0), ms(t2 - t1), 0.0);
  }
  std::printf("totals: banded %.1fms spectral %.1fms analytic %.1fms\n", banded_ms, spectral_ms,
              analytic_ms);
  std::printf("max discrepancy = %.3e (threshold 1e-9)\n", worst);
  if (worst > 1e-9) {
    std::fprintf(stderr, "back-ends diverged beyond 1e-9\n");
    return 4;
  }
  return 0;
}

int cmd_validate() {
  const auto results = run_validation_suite();
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-30s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonant quantum kicked rotor with time-dependent kick strength"};
  app.set_version_flag("--version", qkr::kToolVersion);
  app.require_subcommand(1);

  Settings flags;
  std::string config_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI config file; flags override file values");
    sub->add_option("--p", flags.p, "resonance numerator p");
    sub->add_option("--q", flags.q, "resonance denominator q");
    sub->add_option("--alpha", flags.alpha, "power-law exponent of kappa(n) = kappa0 n^-alpha");
    sub->add_option("--kappa0", flags.kappa0, "kick strength scale");
    sub->add_flag("--constant", flags.constant_schedule, "use a constant schedule");
    sub->add_option("--schedule-file", flags.schedule_file,
                    "explicit schedule, one value per line");
    sub->add_option("--delta-at", flags.delta_at, "initial condition delta at momentum m");
    sub->add_option("--steps", flags.steps, "number of kicks N");
    sub->add_option("--backend", flags.backend, "auto|analytic|banded|spectral");
    sub->add_option("--tail-tol", flags.tail_tol, "Bessel band truncation tolerance");
    sub->add_option("--grid-size", flags.grid_size, "spectral grid size (0 = auto)");
    sub->add_option("--edge-threshold", flags.edge_threshold, "truncation clip budget");
    sub->add_option("--growth-chunk", flags.growth_chunk, "lattice growth granularity");
    sub->add_option("--max-halfwidth", flags.max_halfwidth, "hard lattice cap");
    sub->add_option("--window", flags.window, "trailing fit window length");
    sub->add_option("--smooth", flags.smooth, "moving-average width before fitting (0 = off)");
    sub->add_option("--classify-tol", flags.classify_tol, "regime boundary tolerance");
    sub->add_option("--snapshots", flags.snapshots, "steps at which to dump the state");
    sub->add_option("--out", flags.out_dir, "output directory");
  };

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "run one evolution and fit gamma");
  add_common(evolve_cmd);

  CLI::App* profile_cmd = app.add_subcommand("profile", "dump P_l at a fixed step");
  add_common(profile_cmd);
  profile_cmd->add_option("--at-step", flags.at_step, "step at which to record the profile");
  profile_cmd->add_flag("--svg", flags.emit_svg, "also write a log-scale SVG plot");

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit gamma on an existing series.csv");
  fit_cmd->add_option("--series", flags.series_path, "series.csv path")->required();
  fit_cmd->add_option("--window", flags.window, "trailing fit window length");
  fit_cmd->add_option("--smooth", flags.smooth, "moving-average width (0 = off)");
  fit_cmd->add_option("--classify-tol", flags.classify_tol, "regime boundary tolerance");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an (alpha, p/q) grid in parallel");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--alphas", flags.alphas, "alpha values");
  sweep_cmd->add_option("--resonances", flags.resonances, "resonances as p/q entries");
  sweep_cmd->add_option("--workers", flags.workers, "parallel runs");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run banded and spectral (and analytic) side by side");
  add_common(compare_cmd);

  app.add_subcommand("validate", "run the built-in identity suite");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    Settings merged;  // defaults
    if (!config_path.empty()) apply_ini(merged, read_ini(config_path));

    // Flags override config-file values.
    const auto overridden = [&](const std::string& name) {
      return sub->count(name) > 0;
    };
    if (overridden("--p")) merged.p = flags.p;
    if (overridden("--q")) merged.q = flags.q;
    if (overridden("--alpha")) merged.alpha = flags.alpha;
    if (overridden("--kappa0")) merged.kappa0 = flags.kappa0;
    if (overridden("--constant")) merged.constant_schedule = flags.constant_schedule;
    if (overridden("--schedule-file")) merged.schedule_file = flags.schedule_file;
    if (overridden("--delta-at")) merged.delta_at = flags.delta_at;
    if (overridden("--steps")) merged.steps = flags.steps;
    if (overridden("--backend")) merged.backend = flags.backend;
    if (overridden("--tail-tol")) merged.tail_tol = flags.tail_tol;
    if (overridden("--grid-size")) merged.grid_size = flags.grid_size;
    if (overridden("--edge-threshold")) merged.edge_threshold = flags.edge_threshold;
    if (overridden("--growth-chunk")) merged.growth_chunk = flags.growth_chunk;
    if (overridden("--max-halfwidth")) merged.max_halfwidth = flags.max_halfwidth;
    if (overridden("--window")) merged.window = flags.window;
    if (overridden("--smooth")) merged.smooth = flags.smooth;
    if (overridden("--classify-tol")) merged.classify_tol = flags.classify_tol;
    if (overridden("--snapshots")) merged.snapshots = flags.snapshots;
    if (overridden("--out")) merged.out_dir = flags.out_dir;
    if (sub == profile_cmd && overridden("--at-step")) merged.at_step = flags.at_step;
    if (sub == profile_cmd && overridden("--svg")) merged.emit_svg = flags.emit_svg;
    if (sub == fit_cmd) {
      merged.series_path = flags.series_path;
      if (overridden("--window")) merged.window = flags.window;
      if (overridden("--smooth")) merged.smooth = flags.smooth;
      if (overridden("--classify-tol")) merged.classify_tol = flags.classify_tol;
    }
    if (sub == sweep_cmd) {
      if (overridden("--alphas")) merged.alphas = flags.alphas;
      if (overridden("--resonances")) merged.resonances = flags.resonances;
      if (overridden("--workers")) merged.workers = flags.workers;
    }

    if (sub == evolve_cmd) return cmd_evolve(merged);
    if (sub == profile_cmd) {
      const bool steps_given = overridden("--steps") || merged.steps != Settings{}.steps;
      return cmd_profile(merged, steps_given);
    }
    if (sub == fit_cmd) return cmd_fit(merged);
    if (sub == sweep_cmd) return cmd_sweep(merged);
    if (sub == compare_cmd) return cmd_compare(merged);
    return cmd_validate();
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
