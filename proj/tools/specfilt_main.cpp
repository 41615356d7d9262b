#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specfilt/errors.hpp"
#include "specfilt/experiment.hpp"
#include "specfilt/filter_design.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_override) {
  specfilt::ExperimentConfig cfg = specfilt::load_config(config_path);
  if (!output_override.empty()) cfg.output_dir = output_override;
  const specfilt::ExperimentResult result = specfilt::run_experiment(cfg, true);
  std::printf("wrote %zu result rows to %s\n", result.rows.size(), cfg.output_dir.c_str());
  for (const auto& r : result.rows)
    std::printf("  %s %s d=%d predicted %s measured %s\n", r.scheme.c_str(),
                r.method.c_str(), r.degree, specfilt::format_double(r.predicted_rate).c_str(),
                specfilt::format_double(r.measured_rate_mean).c_str());
  return 0;
}

int cmd_density(const std::string& config_path, const std::string& matrix,
                const std::string& out_path) {
  const specfilt::ExperimentConfig cfg = specfilt::load_config(config_path);
  specfilt::MatrixKind kind;
  try {
    kind = specfilt::matrix_kind_from_string(matrix);
  } catch (const std::invalid_argument& e) {
    throw specfilt::ConfigError(std::string("config: --matrix: ") + e.what());
  }
  specfilt::emit_density(cfg, kind, out_path);
  std::printf("wrote expected density (%d realizations) and single-realization overlay to %s\n",
              cfg.mc_realizations, out_path.c_str());
  return 0;
}

int cmd_design(const std::string& config_path, int degree, const std::string& out_path) {
  specfilt::ExperimentConfig cfg = specfilt::load_config(config_path);
  if (degree < 1 || degree > specfilt::kMaxFilterDegree)
    throw specfilt::ConfigError("config: --degree: outside [1, " +
                                std::to_string(specfilt::kMaxFilterDegree) + "]");
  cfg.methods = {"minimax-lp"};
  cfg.degrees = {degree};
  const specfilt::SchemeDesignContext ctx =
      specfilt::build_design_context(cfg, cfg.schemes.front());
  const specfilt::FilterPolynomial& filt = ctx.minimax.at(degree);
  specfilt::save_filter(filt, out_path);
  std::printf("degree %d filter for scheme %s: alpha %s, design eps %s -> %s\n", degree,
              specfilt::to_string(cfg.schemes.front()).c_str(),
              specfilt::format_double(ctx.alpha).c_str(),
              specfilt::format_double(filt.achieved_eps).c_str(), out_path.c_str());
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const specfilt::ExperimentConfig cfg = specfilt::load_config(config_path);
  (void)specfilt::model_generator(cfg);
  std::printf("%s: ok\n", config_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectral consensus filter design: expected-density estimation, minimax filter "
      "synthesis, and consensus simulation on random graphs\n"
      "(set SPECFILT_THREADS to bound the worker count; results do not depend on it)"};
  app.require_subcommand(1);

  std::string config_path, output_override, matrix = "laplacian", out_path;
  int degree = 1;

  CLI::App* run = app.add_subcommand("run", "run the experiment described by a config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("-o,--output", output_override, "override the configured output directory");

  CLI::App* density = app.add_subcommand("density", "write expected spectral density files");
  density->add_option("config", config_path, "experiment config (JSON)")->required();
  density->add_option("-m,--matrix", matrix,
                      "matrix kind: adjacency | laplacian | row-normalized-laplacian");
  density->add_option("-o,--output", out_path, "output density file")->required();

  CLI::App* design = app.add_subcommand("design", "design one minimax filter and save it");
  design->add_option("config", config_path, "experiment config (JSON)")->required();
  design->add_option("-d,--degree", degree, "filter degree")->required();
  design->add_option("-o,--output", out_path, "output filter JSON")->required();

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("config", config_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, output_override);
    if (density->parsed()) return cmd_density(config_path, matrix, out_path);
    if (design->parsed()) return cmd_design(config_path, degree, out_path);
    if (validate->parsed()) return cmd_validate(config_path);
  } catch (const specfilt::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
