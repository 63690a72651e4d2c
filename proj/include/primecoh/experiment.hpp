#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "primecoh/config.hpp"
#include "primecoh/controls.hpp"
#include "primecoh/csv.hpp"
#include "primecoh/divergence.hpp"
#include "primecoh/eigenspectrum.hpp"
#include "primecoh/errors.hpp"
#include "primecoh/fits.hpp"
#include "primecoh/observables.hpp"
#include "primecoh/operators.hpp"
#include "primecoh/primes.hpp"
#include "primecoh/version.hpp"

namespace primecoh {

/// Everything one run computed, before anything touches the filesystem.
struct RunOutcome {
  RunConfig config;
  bool ok = false;
  std::optional<ObservableProfile> profile;
  std::optional<KernelMatrix> kernel;
  json report;
};

namespace detail {

inline json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json ks_json(const KsResult& r) {
  return {{"d", r.d_statistic}, {"sample_size", r.sample_size}};
}

inline Provenance provenance_of(const RunConfig& rc) {
  Provenance p{rc.model, rc.delta0, std::nullopt, std::nullopt};
  if (rc.model == "index-power") p.gamma = rc.gamma;
  if (rc.model == "gue") p.seed = rc.seed;
  return p;
}

inline DivergenceMatrix run_divergence(const RunConfig& rc) {
  if (rc.model == "gue") return gue_divergence(gue_eigenvalues(rc.n, rc.seed));
  if (rc.model == "external")
    return divergence_matrix(PrimeSet{},
                             DivergenceModel::external(rc.external_values, rc.external_spacing));
  DivergenceModel m;
  m.kind = *parse_divergence_kind(rc.model);
  m.gamma = rc.gamma;
  m.literal_diagonal = rc.literal_diagonal;
  return divergence_matrix(first_n_primes(rc.n), m);
}

inline json run_controls(const RunConfig& rc, const SpectralSystem& s, const TimeGrid& grid) {
  json out = json::object();
  if (rc.controls.gue) {
    const auto draw = gue_eigenvalues(rc.n, rc.seed);
    const auto local = nn_spacings(draw.eigenvalues, Unfolding::LocalWindow);
    const auto global = nn_spacings(draw.eigenvalues, Unfolding::GlobalMean);
    double mean = 0.0;
    for (double x : local.spacings) mean += x;
    mean /= static_cast<double>(local.spacings.size());
    const auto kernel = coherence_kernel(gue_divergence(draw), rc.delta0);
    Provenance prov{"gue", rc.delta0, std::nullopt, rc.seed};
    const auto gue_sys = symmetric_eigenvalues(build_operator(kernel, rc.spec, prov));
    const auto gue_prof = profile(gue_sys, grid);
    const auto shape = profile_shape(gue_prof);
    out["gue"] = {{"seed", rc.seed},
                  {"n", rc.n},
                  {"delta_bulk", draw.delta_bulk},
                  {"spacing_mean_local", mean},
                  {"ks_local", ks_json(ks_distance_wigner(local))},
                  {"ks_global", ks_json(ks_distance_wigner(global))},
                  {"kernel_profile",
                   {{"peak_ds", shape.peak_ds},
                    {"peak_t", shape.peak_t},
                    {"fwhm_decades", shape.fwhm_decades},
                    {"final_ds", gue_prof.rows.back().ds_exact}}}};
  }
  if (rc.controls.bilaplacian) {
    const auto bl = bilaplacian_control(rc.n);
    const auto bl_prof = profile(bl, grid);
    const auto shape = profile_shape(bl_prof);
    json entry{{"n", rc.n},
               {"peak_ds", shape.peak_ds},
               {"peak_t", shape.peak_t},
               {"fwhm_decades", shape.fwhm_decades},
               {"plateau_decades", band_decades(bl_prof, 0.45, 0.55)}};
    const IndexWindow w{1, std::max<std::size_t>(rc.n / 10, 1)};
    try {
      const auto fit = fit_eigenvalue_growth(bl, w);
      entry["alpha"] = fit.alpha;
      entry["alpha_window"] = {w.first, w.last};
    } catch (const InsufficientData& e) {
      entry["alpha"] = nullptr;
      entry["alpha_error"] = e.what();
    }
    out["bilaplacian"] = entry;
  }
  if (rc.controls.ks) {
    const auto scaled = rescale_eigenvalues(s, rc.n);
    json entry{{"rescale_factor", 2.0 * std::numbers::pi / std::log(static_cast<double>(rc.n)),}};
    for (auto u : {Unfolding::GlobalMean, Unfolding::LocalWindow}) {
      try {
        entry[std::string(to_string(u))] = ks_json(ks_distance_wigner(nn_spacings(scaled, u)));
      } catch (const InsufficientData& e) {
        entry[std::string(to_string(u))] = {{"error", e.what()}};
      }
    }
    out["ks"] = entry;
  }
  return out;
}

}  // namespace detail

/// Full pipeline for one run: divergence, kernel, operator, spectrum,
/// profile, fits, controls. Failures are captured in the report.
inline RunOutcome execute_run(const RunConfig& rc, bool keep_kernel = false) {
  RunOutcome out;
  out.config = rc;
  json& r = out.report;
  r["schema"] = "primecoh-report/1";
  r["run_id"] = rc.id;
  r["model"] = rc.model;
  r["n"] = rc.n;
  r["delta0"] = rc.delta0;
  if (rc.model == "index-power") r["gamma"] = rc.gamma;
  r["normalization"] = std::string(to_string(rc.spec.normalization));
  r["order"] = std::string(to_string(rc.spec.order));
  r["seed"] = rc.seed;
  r["alpha"] = nullptr;
  r["alpha_r2"] = nullptr;
  r["ds"] = nullptr;
  r["beta"] = nullptr;
  r["beta_r2"] = nullptr;
  r["pcp"] = nullptr;
  r["windows"] = {{"alpha", nullptr}, {"beta", nullptr}};
  r["fit_errors"] = json::object();
  r["controls"] = json::object();
  r["error"] = nullptr;

  try {
    auto kernel = coherence_kernel(detail::run_divergence(rc), rc.delta0);
    const auto op = build_operator(kernel, rc.spec, detail::provenance_of(rc));
    if (keep_kernel) out.kernel = std::move(kernel);
    const auto sys = symmetric_eigenvalues(op);
    r["spectrum"] = {{"count", sys.size()},
                     {"min", sys.eigenvalues.front()},
                     {"max", sys.eigenvalues.back()},
                     {"trace", op.trace}};

    const auto grid = log_grid(rc.grid.t_min, rc.grid.t_max, rc.grid.count);
    out.profile = profile(sys, grid);

    if (rc.fits.alpha) {
      try {
        const auto f = fit_eigenvalue_growth(sys, rc.fits.alpha_window);
        r["alpha"] = detail::nullable(f.alpha);
        r["ds"] = detail::nullable(f.ds_from_alpha);
        r["alpha_r2"] = detail::nullable(f.r_squared);
        r["windows"]["alpha"] = {f.window.first, f.window.last};
      } catch (const InsufficientData& e) {
        r["fit_errors"]["alpha"] = e.what();
      }
    }
    if (rc.fits.beta) {
      try {
        const auto f = fit_entropy_exponent(*out.profile, rc.fits.beta_lo, rc.fits.beta_hi);
        r["beta"] = detail::nullable(f.beta);
        r["beta_r2"] = detail::nullable(f.r_squared);
        r["windows"]["beta"] = {f.t_lo, f.t_hi};
      } catch (const InsufficientData& e) {
        r["fit_errors"]["beta"] = e.what();
      }
    }
    if (rc.fits.pcp) {
      try {
        const auto f = fit_pcp(*out.profile);
        r["pcp"] = {{"A", f.params.amplitude},
                    {"alpha", f.params.alpha},
                    {"beta", f.params.beta},
                    {"tau", f.params.tau},
                    {"r2log", detail::nullable(f.r_squared_log)},
                    {"converged", f.converged},
                    {"at_bound", f.at_bound},
                    {"starts_tried", f.starts_tried},
                    {"points_used", f.points_used}};
      } catch (const InsufficientData& e) {
        r["fit_errors"]["pcp"] = e.what();
      }
    }
    r["controls"] = detail::run_controls(rc, sys, grid);
    out.ok = true;
  } catch (const NumericalFailure& e) {
    r["error"] = {{"kind", "numerical-failure"}, {"message", e.what()}};
  } catch (const InsufficientData& e) {
    r["error"] = {{"kind", "insufficient-data"}, {"message", e.what()}};
  } catch (const InvalidArgument& e) {
    r["error"] = {{"kind", "invalid-argument"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r["error"] = {{"kind", "internal"}, {"message", e.what()}};
  }
  r["status"] = out.ok ? "ok" : "failed";
  r["provenance"] = {{"config", to_json(rc)}, {"software", "primecoh " PRIMECOH_VERSION}};
  return out;
}

// ---------------------------------------------------------------------------
// Artifacts

struct SweepOptions {
  std::filesystem::path out_dir = "out";
  unsigned jobs = 1;
  bool emit_kernel = false;
  std::optional<std::uint64_t> seed_override;
};

struct RunArtifact {
  std::string run_id;
  bool ok = false;
  std::filesystem::path profile_csv;
  std::filesystem::path report_json;
  std::optional<std::filesystem::path> kernel_csv;
  std::string error;
  double wall_seconds = 0.0;
};

/// Write-temp-then-rename so readers never see a partial file.
inline void write_atomically(const std::filesystem::path& path,
                             const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(os);
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline RunArtifact write_artifacts(const RunOutcome& o, const std::filesystem::path& out_dir,
                                   double wall_seconds) {
  RunArtifact a;
  a.run_id = o.config.id;
  a.ok = o.ok;
  a.wall_seconds = wall_seconds;
  if (!o.ok) a.error = o.report["error"].value("message", std::string{});
  const auto dir = out_dir / o.config.id;
  std::filesystem::create_directories(dir);
  if (o.profile) {
    a.profile_csv = dir / "profile.csv";
    write_atomically(a.profile_csv, [&](std::ostream& os) { write_profile_csv(os, *o.profile); });
  }
  a.report_json = dir / "report.json";
  write_atomically(a.report_json, [&](std::ostream& os) { os << o.report.dump(2) << '\n'; });
  if (o.kernel) {
    a.kernel_csv = dir / "kernel.csv";
    write_atomically(*a.kernel_csv, [&](std::ostream& os) { csv::write_matrix(os, o.kernel->k); });
  }
  // Wall time lives outside report.json so reruns stay byte-identical.
  write_atomically(dir / "timing.json", [&](std::ostream& os) {
    os << json{{"run_id", o.config.id}, {"wall_seconds", wall_seconds}}.dump(2) << '\n';
  });
  return a;
}

/// Executes every run with at most `jobs` in flight. One run failing does
/// not stop the others; artifacts come back in config order.
inline std::vector<RunArtifact> run_sweep(const ExperimentConfig& cfg, const SweepOptions& opt) {
  std::vector<RunArtifact> artifacts(cfg.runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.runs.size()) return;
      RunConfig rc = cfg.runs[i];
      if (opt.seed_override) rc.seed = *opt.seed_override;
      const auto start = std::chrono::steady_clock::now();
      const auto outcome = execute_run(rc, opt.emit_kernel || rc.emit_kernel);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      try {
        artifacts[i] = write_artifacts(outcome, opt.out_dir, secs);
      } catch (const std::exception& e) {
        artifacts[i].run_id = rc.id;
        artifacts[i].ok = false;
        artifacts[i].error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(cfg.runs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
  }
  return artifacts;
}

}  // namespace primecoh
