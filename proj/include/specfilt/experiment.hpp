#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "specfilt/consensus.hpp"
#include "specfilt/filter_design.hpp"
#include "specfilt/graphgen.hpp"
#include "specfilt/spectral.hpp"
#include "specfilt/weights.hpp"

namespace specfilt {

inline constexpr int kMaxFilterDegree = 10;

/// One experiment: a random graph model, one or both weight schemes, a set of
/// design methods and degrees, evaluated over independent graph trials with a
/// shared density-based design per scheme.
struct ExperimentConfig {
  std::optional<ErdosRenyiParams> er;    // exactly one model is set
  std::optional<LatticeSbmParams> sbm;
  std::vector<WeightScheme> schemes{WeightScheme::laplacian};
  std::vector<std::string> methods{"minimax-lp"};  // + "newton-baseline", "oracle-minimax", "plain"
  std::vector<int> degrees{1};

  int mc_realizations = 20;      // density averaging depth
  int density_grid = 1024;
  double kde_bandwidth_rel = 0.01;  // kernel width / sample range; <= 0 selects Silverman
  double kappa = 0.05;           // exclusion margin below the consensus eigenvalue
  double tau_rel = 1e-3;         // support threshold as a fraction of the density peak
  int sample_count = 400;        // design region sample points

  int trials = 1;
  std::uint64_t seed = 0;
  int horizon_factor = 40;       // simulation horizon = factor * degree
  int record_every = 0;          // 0: one record per filter period
  double burn_in = 0.2;
  std::string output_dir = "out";
};

ExperimentConfig config_from_json(const nlohmann::json& j);  // throws ConfigError
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

GraphModel model_generator(const ExperimentConfig& cfg);

/// Density-based design state shared by every trial of one scheme:
/// expected base-matrix density -> alpha -> weight-domain density -> sampled
/// support region -> minimax filters per degree.
struct SchemeDesignContext {
  WeightScheme scheme = WeightScheme::laplacian;
  SpectralDensity base_density;
  double alpha = 0.0;
  SpectralDensity weight_density;
  SupportRegion region;
  std::map<int, FilterPolynomial> minimax;  // per degree
};

SchemeDesignContext build_design_context(const ExperimentConfig& cfg, WeightScheme scheme);

struct CellResult {
  std::string scheme;
  std::string method;
  int degree = 0;  // 0 for the plain (unfiltered) rows
  int trial = 0;
  double predicted_rho = 0.0;
  double predicted_rate = 0.0;
  double measured_rate = 0.0;
  double achieved_eps = 0.0;  // NaN where no design-set bound exists (plain)
  bool truncated = false;
};

struct RateRow {  // one rates.csv line
  std::string scheme;
  std::string method;
  int degree = 0;
  double predicted_rate = 0.0;
  double measured_rate_mean = 0.0;
  double measured_rate_std = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<SchemeDesignContext> contexts;
  std::vector<CellResult> cells;  // sorted by (scheme, method, degree, trial)
  std::vector<RateRow> rows;      // sorted by (scheme, method, degree)
};

/// Runs the full experiment. With write_files set, persists under
/// cfg.output_dir: results.json, rates.csv, density files, filter JSONs,
/// per-trial spectra and trajectory CSVs. Trials run in parallel with
/// deterministic per-trial seeding, so outputs are identical for a fixed
/// config and seed regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Writes the Monte Carlo expected density and a single-realization KDE for
/// the requested matrix kind to <out_path> and <out_path-stem>_single<ext>.
void emit_density(const ExperimentConfig& cfg, MatrixKind kind, const std::string& out_path);

std::string format_double(double v);  // %.17g with "-inf"/"inf"/"nan" spelled out

}  // namespace specfilt
