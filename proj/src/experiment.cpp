#include "specfilt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "specfilt/errors.hpp"
#include "specfilt/parallel.hpp"
#include "specfilt/rng.hpp"

namespace specfilt {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) config_fail(path + key, "missing required field");
  return j.at(key);
}

template <typename T>
T get_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<T>();
}

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) config_fail(path + it.key(), "unknown field");
  }
}

int scheme_index(WeightScheme s) {
  return s == WeightScheme::laplacian ? 0 : 1;
}

MatrixKind base_matrix_kind(WeightScheme s) {
  return s == WeightScheme::laplacian ? MatrixKind::laplacian
                                      : MatrixKind::row_normalized_laplacian;
}

constexpr std::uint64_t kSchemeStream = 0x736368ULL;  // density pipelines

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) config_fail("", "top level must be an object");
  check_known_keys(j,
                   {"model", "schemes", "methods", "degrees", "mc_realizations",
                    "density_grid", "kde_bandwidth_rel", "kappa", "tau_rel",
                    "sample_count", "trials", "seed", "horizon_factor", "record_every",
                    "burn_in", "output_dir"},
                   "");

  ExperimentConfig cfg;
  const json& model = require_field(j, "model", "");
  if (!model.is_object()) config_fail("model", "expected an object");
  const std::string type =
      require_field(model, "type", "model.").get<std::string>();
  if (type == "erdos-renyi") {
    check_known_keys(model, {"type", "n", "theta"}, "model.");
    ErdosRenyiParams p;
    p.n = get_number<int>(require_field(model, "n", "model."), "model.n");
    p.theta = get_number<double>(require_field(model, "theta", "model."), "model.theta");
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      config_fail("model", e.what());
    }
    cfg.er = p;
  } else if (type == "lattice-sbm") {
    check_known_keys(model, {"type", "dims", "m", "theta0", "thetas"}, "model.");
    LatticeSbmParams p;
    const json& dims = require_field(model, "dims", "model.");
    if (!dims.is_array() || dims.empty()) config_fail("model.dims", "expected a nonempty array");
    for (const auto& d : dims) p.dims.push_back(get_number<int>(d, "model.dims[]"));
    p.m = get_number<int>(require_field(model, "m", "model."), "model.m");
    p.theta0 = get_number<double>(require_field(model, "theta0", "model."), "model.theta0");
    const json& thetas = require_field(model, "thetas", "model.");
    if (!thetas.is_array()) config_fail("model.thetas", "expected an array");
    for (const auto& t : thetas) p.thetas.push_back(get_number<double>(t, "model.thetas[]"));
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      config_fail("model", e.what());
    }
    cfg.sbm = p;
  } else {
    config_fail("model.type", "must be \"erdos-renyi\" or \"lattice-sbm\"");
  }

  cfg.schemes.clear();
  if (j.contains("schemes")) {
    const json& schemes = j.at("schemes");
    if (!schemes.is_array() || schemes.empty())
      config_fail("schemes", "expected a nonempty array");
    for (const auto& s : schemes) {
      if (!s.is_string()) config_fail("schemes[]", "expected a string");
      try {
        cfg.schemes.push_back(weight_scheme_from_string(s.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        config_fail("schemes[]", e.what());
      }
    }
  } else {
    cfg.schemes = {WeightScheme::laplacian};
  }
  {
    std::set<int> seen;
    for (WeightScheme s : cfg.schemes)
      if (!seen.insert(scheme_index(s)).second) config_fail("schemes", "duplicate scheme");
  }

  if (j.contains("methods")) {
    const json& methods = j.at("methods");
    if (!methods.is_array() || methods.empty())
      config_fail("methods", "expected a nonempty array");
    cfg.methods.clear();
    for (const auto& m : methods) {
      if (!m.is_string()) config_fail("methods[]", "expected a string");
      const std::string name = m.get<std::string>();
      if (name != "plain") {
        try {
          design_method_from_string(name);
        } catch (const std::invalid_argument& e) {
          config_fail("methods[]", e.what());
        }
      }
      if (std::find(cfg.methods.begin(), cfg.methods.end(), name) != cfg.methods.end())
        config_fail("methods", "duplicate method " + name);
      cfg.methods.push_back(name);
    }
  }

  if (j.contains("degrees")) {
    const json& degrees = j.at("degrees");
    if (!degrees.is_array()) config_fail("degrees", "expected an array");
    cfg.degrees.clear();
    for (const auto& d : degrees) cfg.degrees.push_back(get_number<int>(d, "degrees[]"));
  }
  std::sort(cfg.degrees.begin(), cfg.degrees.end());
  if (std::adjacent_find(cfg.degrees.begin(), cfg.degrees.end()) != cfg.degrees.end())
    config_fail("degrees", "duplicate degree");
  for (int d : cfg.degrees)
    if (d < 1 || d > kMaxFilterDegree)
      config_fail("degrees",
                  "degree " + std::to_string(d) + " outside [1, " +
                      std::to_string(kMaxFilterDegree) + "]");
  const bool any_design =
      std::any_of(cfg.methods.begin(), cfg.methods.end(),
                  [](const std::string& m) { return m != "plain"; });
  if (any_design && cfg.degrees.empty())
    config_fail("degrees", "filter methods are requested but no degrees given");

  if (j.contains("mc_realizations"))
    cfg.mc_realizations = get_number<int>(j.at("mc_realizations"), "mc_realizations");
  if (cfg.mc_realizations < 1) config_fail("mc_realizations", "must be at least 1");
  if (j.contains("density_grid"))
    cfg.density_grid = get_number<int>(j.at("density_grid"), "density_grid");
  if (cfg.density_grid < 2) config_fail("density_grid", "must be at least 2");
  if (j.contains("kde_bandwidth_rel"))
    cfg.kde_bandwidth_rel = get_number<double>(j.at("kde_bandwidth_rel"), "kde_bandwidth_rel");
  if (j.contains("kappa")) cfg.kappa = get_number<double>(j.at("kappa"), "kappa");
  if (!(cfg.kappa >= 0.0 && cfg.kappa < 1.0)) config_fail("kappa", "must lie in [0, 1)");
  if (j.contains("tau_rel")) cfg.tau_rel = get_number<double>(j.at("tau_rel"), "tau_rel");
  if (!(cfg.tau_rel > 0.0)) config_fail("tau_rel", "must be positive");
  if (j.contains("sample_count"))
    cfg.sample_count = get_number<int>(j.at("sample_count"), "sample_count");
  if (cfg.sample_count < 2) config_fail("sample_count", "must be at least 2");
  if (j.contains("trials")) cfg.trials = get_number<int>(j.at("trials"), "trials");
  if (cfg.trials < 1) config_fail("trials", "must be at least 1");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() && !s.is_number_unsigned())
      config_fail("seed", "expected an integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("horizon_factor"))
    cfg.horizon_factor = get_number<int>(j.at("horizon_factor"), "horizon_factor");
  if (cfg.horizon_factor < 1) config_fail("horizon_factor", "must be at least 1");
  if (j.contains("record_every"))
    cfg.record_every = get_number<int>(j.at("record_every"), "record_every");
  if (cfg.record_every < 0) config_fail("record_every", "must be nonnegative");
  if (j.contains("burn_in")) cfg.burn_in = get_number<double>(j.at("burn_in"), "burn_in");
  if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) config_fail("burn_in", "must lie in [0, 1)");
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) config_fail("output_dir", "expected a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json model;
  if (cfg.er) {
    model = {{"type", "erdos-renyi"}, {"n", cfg.er->n}, {"theta", cfg.er->theta}};
  } else {
    model = {{"type", "lattice-sbm"},
             {"dims", cfg.sbm->dims},
             {"m", cfg.sbm->m},
             {"theta0", cfg.sbm->theta0},
             {"thetas", cfg.sbm->thetas}};
  }
  json schemes = json::array();
  for (WeightScheme s : cfg.schemes) schemes.push_back(to_string(s));
  return json{{"model", model},
              {"schemes", schemes},
              {"methods", cfg.methods},
              {"degrees", cfg.degrees},
              {"mc_realizations", cfg.mc_realizations},
              {"density_grid", cfg.density_grid},
              {"kde_bandwidth_rel", cfg.kde_bandwidth_rel},
              {"kappa", cfg.kappa},
              {"tau_rel", cfg.tau_rel},
              {"sample_count", cfg.sample_count},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"horizon_factor", cfg.horizon_factor},
              {"record_every", cfg.record_every},
              {"burn_in", cfg.burn_in},
              {"output_dir", cfg.output_dir}};
}

GraphModel model_generator(const ExperimentConfig& cfg) {
  if (cfg.er.has_value() == cfg.sbm.has_value())
    throw ConfigError("config: exactly one model must be set");
  if (cfg.er) {
    const ErdosRenyiParams p = *cfg.er;
    return [p](std::uint64_t seed) { return generate_erdos_renyi(p, seed); };
  }
  const LatticeSbmParams p = *cfg.sbm;
  return [p](std::uint64_t seed) { return generate_lattice_sbm(p, seed); };
}

SchemeDesignContext build_design_context(const ExperimentConfig& cfg, WeightScheme scheme) {
  SchemeDesignContext ctx;
  ctx.scheme = scheme;

  MonteCarloOptions opt;
  opt.realizations = cfg.mc_realizations;
  opt.grid_points = cfg.density_grid;
  if (cfg.kde_bandwidth_rel > 0.0) opt.bandwidth_rel = cfg.kde_bandwidth_rel;
  opt.drop_consensus_mode = true;

  const std::uint64_t density_seed =
      derive_seed(cfg.seed, kSchemeStream, scheme_index(scheme));
  ctx.base_density =
      monte_carlo_density(model_generator(cfg), base_matrix_kind(scheme), opt, density_seed);

  ctx.alpha = choose_alpha(ctx.base_density, cfg.tau_rel * ctx.base_density.peak());
  // Weight eigenvalues are 1 - alpha * (base eigenvalue).
  ctx.weight_density = map_density_affine(ctx.base_density, 1.0, -ctx.alpha);

  const bool want_minimax =
      std::find(cfg.methods.begin(), cfg.methods.end(), "minimax-lp") != cfg.methods.end();
  const bool any_design =
      std::any_of(cfg.methods.begin(), cfg.methods.end(),
                  [](const std::string& m) { return m != "plain"; });
  if (any_design) {
    const double tau = cfg.tau_rel * ctx.weight_density.peak();
    ctx.region = support_region(ctx.weight_density, cfg.kappa, tau, cfg.sample_count);
    if (want_minimax)
      for (int d : cfg.degrees)
        ctx.minimax.emplace(d, design_minimax_filter({ctx.region, d, DesignMethod::minimax_lp}));
  }
  return ctx;
}

namespace {

Graph connected_trial_graph(const GraphModel& model, std::uint64_t master_seed, int trial) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    Graph g = model(derive_seed(master_seed, seed_stream::trial_graph,
                                static_cast<std::uint64_t>(trial) * 64u + attempt));
    if (is_connected(g) && g.min_degree() >= 1) return g;
  }
  std::ostringstream msg;
  msg << "trial " << trial
      << ": no connected realization in 20 attempts; the model is too sparse";
  throw NumericError(msg.str());
}

struct TrialOutput {
  std::vector<CellResult> cells;
};

std::string filter_file_name(const std::string& scheme, const std::string& method,
                             int degree, int trial, bool shared) {
  std::ostringstream name;
  name << "filter_" << scheme << "_" << method << "_d" << degree;
  if (!shared) name << "_t" << trial;
  name << ".json";
  return name.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
  if (cfg.er.has_value() == cfg.sbm.has_value())
    throw ConfigError("config: exactly one model must be set");

  namespace fs = std::filesystem;
  const fs::path out_dir(cfg.output_dir);
  if (write_files) fs::create_directories(out_dir);

  ExperimentResult result;
  result.config = cfg;

  const GraphModel model = model_generator(cfg);
  for (WeightScheme scheme : cfg.schemes)
    result.contexts.push_back(build_design_context(cfg, scheme));

  if (write_files) {
    for (const auto& ctx : result.contexts) {
      const std::string tag = to_string(ctx.scheme);
      save_density(ctx.base_density, (out_dir / ("density_" + tag + "_base.txt")).string());
      save_density(ctx.weight_density, (out_dir / ("density_" + tag + "_weight.txt")).string());
      for (const auto& [d, filt] : ctx.minimax)
        save_filter(filt, (out_dir / filter_file_name(tag, "minimax-lp", d, 0, true)).string());
    }
  }

  std::vector<TrialOutput> trials(cfg.trials);
  parallel_for(cfg.trials, [&](int t) {
    auto shared_graph =
        std::make_shared<const Graph>(connected_trial_graph(model, cfg.seed, t));
    const std::uint64_t x0_seed = derive_seed(cfg.seed, seed_stream::initial_state, t);

    for (const auto& ctx : result.contexts) {
      const std::string scheme_tag = to_string(ctx.scheme);
      WeightMatrix wm = make_weight(shared_graph, ctx.scheme, ctx.alpha);
      const Spectrum spectrum = weight_spectrum(wm);
      const ConsensusReport report = check_consensus_conditions(wm);
      if (write_files)
        save_spectrum(spectrum,
                      (out_dir / ("spectrum_" + scheme_tag + "_t" + std::to_string(t) + ".txt"))
                          .string());

      for (const std::string& method : cfg.methods) {
        const bool plain = method == "plain";
        if (plain && !report.all()) {
          std::ostringstream msg;
          msg << "trial " << t << " (" << scheme_tag
              << "): consensus conditions fail for the plain iteration (rho = " << report.rho
              << ")";
          throw NumericError(msg.str());
        }
        const std::vector<int> degrees = plain ? std::vector<int>{0} : cfg.degrees;
        for (int d : degrees) {
          CellResult cell;
          cell.scheme = scheme_tag;
          cell.method = method;
          cell.degree = d;
          cell.trial = t;

          std::optional<FilterPolynomial> filt;
          if (!plain) {
            const DesignMethod dm = design_method_from_string(method);
            switch (dm) {
              case DesignMethod::minimax_lp: filt = ctx.minimax.at(d); break;
              case DesignMethod::newton_baseline: filt = newton_baseline_filter(spectrum, d); break;
              case DesignMethod::oracle_minimax:
                filt = oracle_minimax_filter(spectrum, cfg.kappa, d);
                break;
            }
          }
          cell.predicted_rho = filt ? predicted_spectral_radius(*filt, spectrum) : report.rho;
          cell.predicted_rate = per_iteration_rate(std::max(d, 1), cell.predicted_rho);
          cell.achieved_eps =
              filt ? filt->achieved_eps : std::numeric_limits<double>::quiet_NaN();

          SimulationConfig sim;
          sim.horizon = cfg.horizon_factor * std::max(d, 1);
          sim.record_every = cfg.record_every > 0 ? cfg.record_every : std::max(d, 1);
          sim.x0_seed = x0_seed;
          sim.filter = filt;
          sim.predicted_rho = cell.predicted_rho;
          const Trajectory traj = simulate(wm, sim);
          const RateEstimate rate = measure_rate(traj, cfg.burn_in);
          cell.measured_rate = rate.rate;
          cell.truncated = rate.truncated;

          if (write_files) {
            std::ostringstream traj_name;
            traj_name << "traj_" << scheme_tag << "_" << method << "_d" << d << "_t" << t
                      << ".csv";
            write_trajectory_csv(traj, (out_dir / traj_name.str()).string());
            if (!plain && method != "minimax-lp")
              save_filter(*filt,
                          (out_dir / filter_file_name(scheme_tag, method, d, t, false)).string());
          }
          trials[t].cells.push_back(std::move(cell));
        }
      }
    }
  });

  for (const auto& t : trials)
    result.cells.insert(result.cells.end(), t.cells.begin(), t.cells.end());
  std::sort(result.cells.begin(), result.cells.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.scheme, a.method, a.degree, a.trial) <
           std::tie(b.scheme, b.method, b.degree, b.trial);
  });

  // One rates.csv row per (scheme, method, degree).
  for (std::size_t i = 0; i < result.cells.size();) {
    std::size_t j = i;
    double pred_sum = 0.0, meas_sum = 0.0;
    while (j < result.cells.size() && result.cells[j].scheme == result.cells[i].scheme &&
           result.cells[j].method == result.cells[i].method &&
           result.cells[j].degree == result.cells[i].degree) {
      pred_sum += result.cells[j].predicted_rate;
      meas_sum += result.cells[j].measured_rate;
      ++j;
    }
    const double count = double(j - i);
    RateRow row;
    row.scheme = result.cells[i].scheme;
    row.method = result.cells[i].method;
    row.degree = result.cells[i].degree;
    row.predicted_rate = pred_sum / count;
    row.measured_rate_mean = meas_sum / count;
    double var = 0.0;
    if (j - i > 1) {
      for (std::size_t k = i; k < j; ++k) {
        const double dev = result.cells[k].measured_rate - row.measured_rate_mean;
        var += dev * dev;
      }
      var /= count - 1.0;
    }
    row.measured_rate_std = std::isnan(var) ? var : std::sqrt(var);
    result.rows.push_back(std::move(row));
    i = j;
  }

  if (write_files) {
    std::ofstream csv(out_dir / "rates.csv");
    if (!csv) throw std::runtime_error("cannot open rates.csv for writing");
    csv << "scheme,method,degree,predicted_rate,measured_rate_mean,measured_rate_std\n";
    for (const auto& r : result.rows)
      csv << r.scheme << "," << r.method << "," << r.degree << ","
          << format_double(r.predicted_rate) << "," << format_double(r.measured_rate_mean)
          << "," << format_double(r.measured_rate_std) << "\n";
    csv.close();

    json cells = json::array();
    for (const auto& c : result.cells)
      cells.push_back({{"scheme", c.scheme},
                       {"method", c.method},
                       {"degree", c.degree},
                       {"trial", c.trial},
                       {"predicted_rho", format_double(c.predicted_rho)},
                       {"predicted_rate", format_double(c.predicted_rate)},
                       {"measured_rate", format_double(c.measured_rate)},
                       {"achieved_eps", format_double(c.achieved_eps)},
                       {"truncated", c.truncated}});
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back({{"scheme", r.scheme},
                      {"method", r.method},
                      {"degree", r.degree},
                      {"predicted_rate", format_double(r.predicted_rate)},
                      {"measured_rate_mean", format_double(r.measured_rate_mean)},
                      {"measured_rate_std", format_double(r.measured_rate_std)}});
    json alphas = json::object();
    for (const auto& ctx : result.contexts)
      alphas[to_string(ctx.scheme)] = format_double(ctx.alpha);
    json doc{{"config", config_to_json(cfg)},
             {"alpha", alphas},
             {"cells", cells},
             {"rates", rows}};
    std::ofstream js(out_dir / "results.json");
    if (!js) throw std::runtime_error("cannot open results.json for writing");
    js << doc.dump(2) << "\n";
  }
  return result;
}

void emit_density(const ExperimentConfig& cfg, MatrixKind kind, const std::string& out_path) {
  const GraphModel model = model_generator(cfg);
  MonteCarloOptions opt;
  opt.realizations = cfg.mc_realizations;
  opt.grid_points = cfg.density_grid;
  if (cfg.kde_bandwidth_rel > 0.0) opt.bandwidth_rel = cfg.kde_bandwidth_rel;
  opt.drop_consensus_mode =
      kind == MatrixKind::laplacian || kind == MatrixKind::row_normalized_laplacian;

  const std::uint64_t seed = derive_seed(cfg.seed, kSchemeStream, 16 + static_cast<int>(kind));
  SpectralDensity mc = monte_carlo_density(model, kind, opt, seed);
  save_density(mc, out_path);

  // Single-realization overlay on the same grid: realization 0 of the same
  // stream, so with mc_realizations == 1 the two files coincide.
  MonteCarloOptions single = opt;
  single.realizations = 1;
  single.grid = mc.grid;
  SpectralDensity one = monte_carlo_density(model, kind, single, seed);
  one.provenance = "single-realization";

  const std::filesystem::path p(out_path);
  std::filesystem::path single_path = p.parent_path() / (p.stem().string() + "_single");
  single_path += p.extension();
  save_density(one, single_path.string());
}

}  // namespace specfilt
