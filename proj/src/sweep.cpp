#include "qkr/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "qkr/io.hpp"
#include "qkr/propagator.hpp"
#include "qkr/version.hpp"

namespace qkr {

namespace {

std::string iso_utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string run_dir_name(double alpha, const ResonanceParams& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "run_%+.4f_%lld_%lld", alpha + 0.0,
                static_cast<long long>(r.p), static_cast<long long>(r.q));
  return buf;
}

nlohmann::json run_config_json(const RunConfig& config) {
  nlohmann::json j;
  j["resonance"] = {{"p", config.resonance.p}, {"q", config.resonance.q},
                    {"tau", config.resonance.tau}};
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSchedule>) {
          j["schedule"] = {{"type", "power_law"}, {"kappa0", s.kappa0}, {"alpha", s.alpha}};
        } else if constexpr (std::is_same_v<T, ConstantSchedule>) {
          j["schedule"] = {{"type", "constant"}, {"kappa0", s.kappa0}};
        } else {
          std::vector<double> v(s.values.data(), s.values.data() + s.values.size());
          j["schedule"] = {{"type", "explicit"}, {"values", v}};
        }
      },
      config.schedule);
  std::visit(
      [&j](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, DeltaInitial>) {
          j["initial"] = {{"type", "delta"}, {"m", ic.m}};
        } else {
          std::vector<double> re, im;
          for (Eigen::Index i = 0; i < ic.amplitudes.size(); ++i) {
            re.push_back(ic.amplitudes(i).real());
            im.push_back(ic.amplitudes(i).imag());
          }
          j["initial"] = {{"type", "custom"}, {"offset", ic.offset}, {"re", re}, {"im", im}};
        }
      },
      config.initial);
  std::visit(
      [&j](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, AnalyticBackend>) {
          j["backend"] = {{"type", "analytic"}};
        } else if constexpr (std::is_same_v<T, BandedBackend>) {
          j["backend"] = {{"type", "banded"}, {"tail_tol", b.tail_tol}};
        } else {
          j["backend"] = {{"type", "spectral"}, {"grid_size", b.grid_size},
                          {"tail_tol", b.tail_tol}};
        }
      },
      config.backend);
  j["steps"] = config.steps;
  j["truncation"] = {{"edge_threshold", config.truncation.edge_threshold},
                     {"growth_chunk", config.truncation.growth_chunk},
                     {"max_halfwidth", config.truncation.max_halfwidth}};
  j["snapshot_steps"] = std::vector<std::int64_t>(config.snapshot_steps.begin(),
                                                  config.snapshot_steps.end());
  return j;
}

SweepManifest run_sweep(const SweepSpec& spec, int workers) {
  if (spec.alpha_values.empty()) throw validation_error("sweep needs at least one alpha value");
  if (spec.resonances.empty()) throw validation_error("sweep needs at least one resonance");
  if (spec.output_dir.empty()) throw validation_error("sweep needs an output directory");
  double kappa0 = 1.0;
  if (const auto* pl = std::get_if<PowerLawSchedule>(&spec.base.schedule)) {
    kappa0 = pl->kappa0;
  } else if (const auto* cs = std::get_if<ConstantSchedule>(&spec.base.schedule)) {
    kappa0 = cs->kappa0;
  } else {
    throw validation_error("alpha sweeps require a power-law or constant base schedule");
  }
  std::filesystem::create_directories(spec.output_dir);

  struct Job {
    double alpha;
    ResonanceParams res;
  };
  std::vector<Job> jobs;
  for (const auto& res : spec.resonances) {
    for (const double alpha : spec.alpha_values) jobs.push_back({alpha, res});
  }

  SweepManifest manifest;
  manifest.spec = spec;
  manifest.runs.resize(jobs.size());
  manifest.tool_version = kToolVersion;
  manifest.timestamp = iso_utc_now();

  std::atomic<size_t> cursor{0};
  const auto work = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      SweepRun& out = manifest.runs[i];
      out.alpha = job.alpha;
      out.p = job.res.p;
      out.q = job.res.q;
      out.dir = run_dir_name(job.alpha, job.res);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        RunConfig cfg = spec.base;
        cfg.resonance = job.res;
        cfg.schedule = PowerLawSchedule{kappa0, job.alpha};
        // An analytic base falls back to the banded back-end off q = 1.
        if (std::holds_alternative<AnalyticBackend>(cfg.backend) && !job.res.is_primary()) {
          cfg.backend = BandedBackend{};
        }
        const std::filesystem::path dir = spec.output_dir / out.dir;
        std::filesystem::create_directories(dir);

        const EvolveResult result = evolve(cfg);
        write_series_csv(dir / "series.csv", result.series);
        write_state_csv(dir / "final.csv", result.final_state);
        for (const auto& snap : result.snapshots) {
          char name[48];
          std::snprintf(name, sizeof(name), "snapshot_%06lld.csv",
                        static_cast<long long>(snap.step));
          write_state_csv(dir / name, snap.state);
        }
        {
          nlohmann::json meta = run_config_json(cfg);
          meta["fit_window"] = spec.window;
          meta["smooth_width"] = spec.smooth_width;
          meta["classify_tol"] = spec.classify_tol;
          meta["tool_version"] = kToolVersion;
          std::ofstream mf(dir / "meta.json");
          mf << meta.dump(2) << '\n';
        }

        FitOptions fo;
        fo.window_len = spec.window;
        fo.smooth_width = spec.smooth_width;
        const GammaFit fit = fit_gamma(result.series, fo);
        out.gamma = fit.gamma;
        out.rms_residual = fit.rms_residual;
        out.model = fit.model == FitModel::Logarithmic ? "logarithmic" : "power_law";
        out.regime = regime_name(classify(fit, spec.classify_tol));
        out.final_sigma = result.series.records.back().sigma;
        out.norm_leak = result.final_state.leaked_norm;
        out.ok = true;
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
      }
      out.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  write_manifest(spec.output_dir / "manifest.json", manifest);
  return manifest;
}

nlohmann::json manifest_json(const SweepManifest& manifest) {
  nlohmann::json j;
  j["tool_version"] = manifest.tool_version;
  j["timestamp"] = manifest.timestamp;
  j["spec"] = {
      {"base", run_config_json(manifest.spec.base)},
      {"alpha_values", manifest.spec.alpha_values},
      {"window", manifest.spec.window},
      {"smooth_width", manifest.spec.smooth_width},
      {"classify_tol", manifest.spec.classify_tol},
      {"output_dir", manifest.spec.output_dir.string()},
  };
  std::vector<nlohmann::json> res;
  for (const auto& r : manifest.spec.resonances) {
    res.push_back({{"p", r.p}, {"q", r.q}});
  }
  j["spec"]["resonances"] = res;
  std::vector<nlohmann::json> runs;
  for (const auto& r : manifest.runs) {
    nlohmann::json rj = {
        {"alpha", r.alpha}, {"p", r.p}, {"q", r.q}, {"dir", r.dir}, {"ok", r.ok},
        {"wall_time_s", r.wall_time_s},
    };
    if (r.ok) {
      rj["gamma"] = r.gamma;
      rj["rms_residual"] = r.rms_residual;
      rj["model"] = r.model;
      rj["regime"] = r.regime;
      rj["final_sigma"] = r.final_sigma;
      rj["norm_leak"] = r.norm_leak;
      rj["series"] = r.dir + "/series.csv";
      rj["final"] = r.dir + "/final.csv";
      rj["meta"] = r.dir + "/meta.json";
    } else {
      rj["error"] = r.error;
    }
    runs.push_back(rj);
  }
  j["runs"] = runs;
  return j;
}

void write_manifest(const std::filesystem::path& path, const SweepManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path.string());
  out << manifest_json(manifest).dump(2) << '\n';
}

std::string summarize(const SweepManifest& manifest) {
  std::ostringstream out;
  out << "alpha,p,q,gamma,regime,predicted_gamma,residual\n";
  for (const auto& r : manifest.runs) {
    if (!r.ok) continue;
    out << format_double(r.alpha) << ',' << r.p << ',' << r.q << ',' << format_double(r.gamma)
        << ',' << r.regime << ',';
    if (r.q == 1) {
      const GammaPrediction pred = predicted_gamma(r.alpha);
      if (pred.logarithmic) {
        out << "logarithmic," << (r.model == "logarithmic" ? "0" : "n/a");
      } else {
        out << format_double(pred.gamma) << ',' << format_double(r.gamma - pred.gamma);
      }
    } else {
      out << "n/a,n/a";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qkr
