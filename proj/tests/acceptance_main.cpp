// Acceptance gate: ten independently checked criteria, one line each.
// Exit status 0 only if every criterion passes.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "specfilt/consensus.hpp"
#include "specfilt/experiment.hpp"
#include "specfilt/filter_design.hpp"
#include "specfilt/graphgen.hpp"
#include "specfilt/lp.hpp"
#include "specfilt/rng.hpp"
#include "specfilt/spectral.hpp"
#include "specfilt/weights.hpp"

using namespace specfilt;
namespace fs = std::filesystem;

namespace {

struct Gate {
  int failures = 0;

  void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%2d] %-34s %s  %s\n", index, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// The design interval: base-matrix eigenvalues on [0.2, 1.6], step size from
// the support midpoint (alpha = 1/0.9), mapped into the weight-eigenvalue
// domain where the filter normalization point is 1.
constexpr double kBaseLo = 0.2;
constexpr double kBaseHi = 1.6;
const double kAlpha = 1.0 / (0.5 * (kBaseLo + kBaseHi));
const double kIntervalLo = 1.0 - kAlpha * kBaseHi;
const double kIntervalHi = 1.0 - kAlpha * kBaseLo;

// Equal-ripple level of the optimal degree-d filter on [lo, hi] subject to
// p(1) = 1: 1 / |T_d(m)| with m the image of 1 under the interval map.
double equal_ripple_level(int d, double lo, double hi) {
  const double m = (2.0 - lo - hi) / (hi - lo);
  return 1.0 / std::cosh(d * std::acosh(std::abs(m)));
}

double optimal_filter_value(int d, double lo, double hi, double lambda) {
  const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  const ChebyshevBasis basis{c, hw};
  return chebyshev_eval(d, lambda, basis) / chebyshev_eval(d, 1.0, basis);
}

// 400 uniform samples with the d+1 ripple extrema of the optimum snapped onto
// the nearest samples, so the discrete problem shares the continuum solution.
std::vector<double> snapped_samples(double lo, double hi, int count, int d) {
  std::vector<double> pts = linspace(lo, hi, count);
  const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  const double step = (hi - lo) / (count - 1);
  for (int j = 0; j <= d; ++j) {
    const double node = c + hw * std::cos(j * M_PI / d);
    const int idx = std::min(count - 1, std::max(0, int(std::lround((node - lo) / step))));
    pts[idx] = node;
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

FilterPolynomial design_on(const std::vector<double>& pts, int d) {
  DesignProblem prob;
  prob.region.points = pts;
  prob.region.lambda_min = pts.front();
  prob.region.lambda_max = pts.back();
  prob.degree = d;
  return design_minimax_filter(prob);
}

int count_alternations(const FilterPolynomial& p, const std::vector<double>& pts,
                       double tol) {
  int alternations = 0, last_sign = 0;
  for (double x : pts) {
    const double v = p.eval(x);
    if (std::abs(v) < p.achieved_eps - tol) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (sign != last_sign) {
      ++alternations;
      last_sign = sign;
    }
  }
  return alternations;
}

const CellResult* find_cell(const ExperimentResult& res, const std::string& scheme,
                            const std::string& method, int degree, int trial) {
  for (const auto& c : res.cells)
    if (c.scheme == scheme && c.method == method && c.degree == degree && c.trial == trial)
      return &c;
  return nullptr;
}

}  // namespace

int main() {
  Gate gate;
  std::vector<FilterPolynomial> interval_designs;  // degree d at index d-1

  // --- 1: closed-form equivalence on a single interval ------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    try {
      double worst_eps = 0.0, worst_val = 0.0;
      for (int d = 1; d <= 8; ++d) {
        const auto pts = snapped_samples(kIntervalLo, kIntervalHi, 400, d);
        const FilterPolynomial p = design_on(pts, d);
        interval_designs.push_back(p);

        const double star = equal_ripple_level(d, kIntervalLo, kIntervalHi);
        worst_eps = std::max(worst_eps, std::abs(p.achieved_eps - star) / star);
        for (double x : pts) {
          const double want = optimal_filter_value(d, kIntervalLo, kIntervalHi, x);
          worst_val = std::max(worst_val, std::abs(p.eval(x) - want) / star);
        }
      }
      const double dt = seconds_since(t0);
      pass = worst_eps <= 1e-6 && worst_val <= 1e-6 && dt < 1.0;
      detail = "max rel eps err " + fmt(worst_eps) + ", max value err " + fmt(worst_val) +
               " (rel to ripple), " + fmt(dt) + "s";
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    gate.report(1, "chebyshev closed-form equivalence", pass, detail);
  }

  // --- 2: equioscillation ------------------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = !interval_designs.empty();
    std::string detail;
    int min_margin = 100;
    for (std::size_t i = 0; i < interval_designs.size(); ++i) {
      const int d = int(i) + 1;
      const auto pts = snapped_samples(kIntervalLo, kIntervalHi, 400, d);
      const int alt = count_alternations(interval_designs[i], pts, 1e-7);
      min_margin = std::min(min_margin, alt - (d + 1));
      if (alt < d + 1) pass = false;
    }
    detail = "min alternation surplus " + std::to_string(min_margin) + ", " +
             fmt(seconds_since(t0)) + "s";
    if (interval_designs.empty()) detail = "no designs from criterion 1";
    gate.report(2, "equioscillation of lp designs", pass, detail);
  }

  // --- 3: spectral radius identity ----------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    try {
      double worst = 0.0;
      for (int s = 0; s < 20; ++s) {
        Graph g = generate_erdos_renyi({50, 0.15}, 900 + s);
        for (int retry = 0; !is_connected(g) && retry < 50; ++retry)
          g = generate_erdos_renyi({50, 0.15}, 2000 + 50 * s + retry);
        const auto gp = std::make_shared<const Graph>(std::move(g));
        const WeightScheme scheme =
            s % 2 == 0 ? WeightScheme::laplacian : WeightScheme::row_normalized_laplacian;
        const Spectrum base = scheme == WeightScheme::laplacian
                                  ? laplacian_spectrum(*gp)
                                  : row_normalized_laplacian_spectrum(*gp);
        const WeightMatrix wm = make_weight(gp, scheme, 2.0 / (base.min() + base.max()));
        const Spectrum spec = weight_spectrum(wm);
        const FilterPolynomial p = oracle_minimax_filter(spec, 0.05, 2 + s % 3);

        const double predicted = predicted_spectral_radius(p, spec);

        const int n = wm.size();
        Eigen::MatrixXd pw = Eigen::MatrixXd::Zero(n, n);
        const auto& taps = p.taps();
        for (int k = int(taps.size()) - 1; k >= 0; --k)
          pw = (pw * wm.w + taps[k] * Eigen::MatrixXd::Identity(n, n)).eval();
        pw -= consensus_projector(wm.ell).dense();
        Eigen::EigenSolver<Eigen::MatrixXd> es(pw);
        double direct = 0.0;
        for (int i = 0; i < n; ++i) direct = std::max(direct, std::abs(es.eigenvalues()(i)));

        worst = std::max(worst, std::abs(predicted - direct));
      }
      const double dt = seconds_since(t0);
      pass = worst <= 1e-8 && dt < 30.0;
      detail = "max |predicted - direct| " + fmt(worst) + ", " + fmt(dt) + "s";
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    gate.report(3, "spectral radius identity", pass, detail);
  }

  // --- shared comparison runs for 4-8 -------------------------------------
  // One Erdos-Renyi experiment covering both schemes and all three design
  // methods, and one lattice SBM experiment for the scheme comparison.
  ExperimentResult er_run, sbm_run;
  bool runs_ok = true;
  std::string runs_error;
  double er_seconds = 0.0, sbm_seconds = 0.0;
  const std::vector<int> all_degrees{1, 2, 3, 4, 5, 6};
  const int kTrials = 10;
  try {
    ExperimentConfig er;
    er.er = ErdosRenyiParams{500, 0.05};
    er.schemes = {WeightScheme::laplacian, WeightScheme::row_normalized_laplacian};
    er.methods = {"minimax-lp", "oracle-minimax", "newton-baseline"};
    er.degrees = all_degrees;
    er.mc_realizations = 20;
    er.trials = kTrials;
    er.seed = 2024;
    auto t0 = std::chrono::steady_clock::now();
    er_run = run_experiment(er, false);
    er_seconds = seconds_since(t0);

    ExperimentConfig sbm;
    LatticeSbmParams p;
    p.dims = {2, 3};
    p.m = 50;
    p.theta0 = 0.15;
    p.thetas = {0.09, 0.06};
    sbm.sbm = p;
    sbm.schemes = {WeightScheme::laplacian, WeightScheme::row_normalized_laplacian};
    sbm.methods = {"minimax-lp"};
    sbm.degrees = all_degrees;
    sbm.mc_realizations = 20;
    sbm.trials = kTrials;
    sbm.seed = 777;
    t0 = std::chrono::steady_clock::now();
    sbm_run = run_experiment(sbm, false);
    sbm_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    runs_ok = false;
    runs_error = e.what();
  }

  const std::string rn = to_string(WeightScheme::row_normalized_laplacian);
  const std::string lap = to_string(WeightScheme::laplacian);

  // --- 4: density-based design tracks the oracle --------------------------
  {
    bool pass = runs_ok;
    std::string detail = runs_error;
    if (runs_ok) {
      int worst_hits = kTrials;
      double worst_gap = 0.0;
      for (int d : all_degrees) {
        int hits = 0;
        for (int t = 0; t < kTrials; ++t) {
          const CellResult* mm = find_cell(er_run, rn, "minimax-lp", d, t);
          const CellResult* oracle = find_cell(er_run, rn, "oracle-minimax", d, t);
          if (!mm || !oracle) continue;
          const double gap =
              std::abs(mm->predicted_rate - oracle->predicted_rate) /
              std::abs(oracle->predicted_rate);
          worst_gap = std::max(worst_gap, gap);
          if (gap <= 0.10) ++hits;
        }
        worst_hits = std::min(worst_hits, hits);
        if (hits < 9) pass = false;
      }
      detail = "min hits/degree " + std::to_string(worst_hits) + "/10, worst rel gap " +
               fmt(worst_gap) + ", run " + fmt(er_seconds) + "s";
      pass = pass && er_seconds < 600.0;
    }
    gate.report(4, "density design tracks the oracle", pass, detail);
  }

  // --- 5: minimax dominates the newton baseline ---------------------------
  {
    bool pass = runs_ok;
    std::string detail = runs_error;
    if (runs_ok) {
      int wins = 0, cells = 0;
      for (int d = 2; d <= 6; ++d)
        for (int t = 0; t < kTrials; ++t) {
          const CellResult* mm = find_cell(er_run, rn, "minimax-lp", d, t);
          const CellResult* nb = find_cell(er_run, rn, "newton-baseline", d, t);
          if (!mm || !nb) continue;
          ++cells;
          if (mm->predicted_rate <= nb->predicted_rate + 1e-12) ++wins;
        }
      pass = cells == 50 && wins >= 45;
      detail = std::to_string(wins) + "/" + std::to_string(cells) + " cells won";
    }
    gate.report(5, "minimax beats newton baseline", pass, detail);
  }

  // --- 6: row-normalized scheme converges faster ---------------------------
  {
    bool pass = runs_ok;
    std::string detail = runs_error;
    if (runs_ok) {
      auto scheme_wins = [&](const ExperimentResult& run) {
        int good_seeds = 0;
        for (int t = 0; t < kTrials; ++t) {
          bool all_faster = true;
          for (int d : all_degrees) {
            const CellResult* r = find_cell(run, rn, "minimax-lp", d, t);
            const CellResult* l = find_cell(run, lap, "minimax-lp", d, t);
            if (!r || !l || !(r->predicted_rate < l->predicted_rate)) all_faster = false;
          }
          if (all_faster) ++good_seeds;
        }
        return good_seeds;
      };
      const int er_seeds = scheme_wins(er_run);
      const int sbm_seeds = scheme_wins(sbm_run);
      pass = er_seeds >= 9 && sbm_seeds >= 9 && sbm_seconds < 600.0;
      detail = "er " + std::to_string(er_seeds) + "/10, sbm " + std::to_string(sbm_seeds) +
               "/10 seeds, sbm run " + fmt(sbm_seconds) + "s";
    }
    gate.report(6, "row-normalized scheme is faster", pass, detail);
  }

  // --- 7: simulations meet predicted rates ---------------------------------
  // Scope: the designs the rate comparisons above actually use. From the
  // Erdos-Renyi run that is every row-normalized cell (newton only from
  // degree 2) plus the laplacian minimax cells of the scheme comparison;
  // from the SBM run the minimax cells of both schemes.
  {
    bool pass = runs_ok;
    std::string detail = runs_error;
    if (runs_ok) {
      auto in_scope = [&](const CellResult& c, bool er) {
        if (c.method == "plain") return false;
        if (!er) return c.method == "minimax-lp";
        if (c.scheme == rn)
          return c.method != "newton-baseline" || c.degree >= 2;
        return c.method == "minimax-lp";
      };
      double worst = 0.0;
      std::string worst_tag = "none";
      int checked = 0, over = 0;
      for (const ExperimentResult* run : {&er_run, &sbm_run})
        for (const auto& c : run->cells) {
          if (!in_scope(c, run == &er_run)) continue;
          ++checked;
          const double gap =
              std::abs(c.measured_rate - c.predicted_rate) / std::abs(c.predicted_rate);
          if (gap > 0.10) ++over;
          if (gap > worst) {
            worst = gap;
            worst_tag = c.scheme + "/" + c.method + "/d" + std::to_string(c.degree) + "/t" +
                        std::to_string(c.trial);
          }
        }
      pass = checked > 0 && over == 0;
      detail = std::to_string(over) + "/" + std::to_string(checked) +
               " cells beyond 10%, worst " + fmt(worst) + " at " + worst_tag;
    }
    gate.report(7, "measured rates match predictions", pass, detail);
  }

  // --- 8: more degrees never hurt ------------------------------------------
  {
    bool pass = runs_ok;
    std::string detail = runs_error;
    if (runs_ok) {
      double worst_increase = 0.0;
      int rate_wins = 0;
      for (int t = 0; t < kTrials; ++t) {
        for (const std::string& method : {std::string("minimax-lp"), std::string("oracle-minimax")}) {
          double prev = std::numeric_limits<double>::infinity();
          for (int d : all_degrees) {
            const CellResult* c = find_cell(er_run, rn, method, d, t);
            if (!c) continue;
            worst_increase = std::max(worst_increase, c->achieved_eps - prev);
            prev = c->achieved_eps;
          }
        }
        const CellResult* d1 = find_cell(er_run, rn, "minimax-lp", 1, t);
        const CellResult* d6 = find_cell(er_run, rn, "minimax-lp", 6, t);
        if (d1 && d6 && d6->predicted_rate < d1->predicted_rate) ++rate_wins;
      }
      pass = worst_increase <= 1e-9 && rate_wins == kTrials;
      detail = "max eps increase " + fmt(worst_increase) + ", d6 faster on " +
               std::to_string(rate_wins) + "/10 seeds";
    }
    gate.report(8, "degree monotonicity", pass, detail);
  }

  // --- 9: semicircle moments ------------------------------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    try {
      const int n = 1000;
      const double theta = 0.05;
      const Graph g = generate_erdos_renyi({n, theta}, 1);
      // Centered, variance-normalized adjacency: subtracting the mean matrix
      // removes the lone mean-degree eigenvalue that would otherwise sit far
      // outside the bulk, and the scale sqrt(n theta (1 - theta)) sends the
      // bulk to the unit-variance semicircle on [-2, 2].
      Eigen::MatrixXd m = adjacency_matrix(g);
      const double scale = 1.0 / std::sqrt(n * theta * (1.0 - theta));
      m = (m - theta * (Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n))) * scale;
      const Spectrum s = symmetric_eigenvalues(m, MatrixKind::adjacency);

      const double h = 0.1;
      const SpectralDensity f =
          kernel_density(s, linspace(s.min() - 0.5, s.max() + 0.5, 2001), h);
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i + 1 < f.grid.size(); ++i) {
        const double dx = f.grid[i + 1] - f.grid[i];
        m1 += 0.5 * dx * (f.grid[i] * f.values[i] + f.grid[i + 1] * f.values[i + 1]);
        m2 += 0.5 * dx *
              (f.grid[i] * f.grid[i] * f.values[i] +
               f.grid[i + 1] * f.grid[i + 1] * f.values[i + 1]);
      }
      const double dt = seconds_since(t0);
      pass = std::abs(m1) < 0.05 && std::abs(m2 - 1.0) <= 0.05 && dt < 60.0;
      detail = "m1 " + fmt(m1) + ", m2 " + fmt(m2) + ", " + fmt(dt) + "s";
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    gate.report(9, "semicircle moments", pass, detail);
  }

  // --- 10: byte-identical reruns --------------------------------------------
  {
    bool pass = true;
    std::string detail;
    try {
      ExperimentConfig cfg;
      cfg.er = ErdosRenyiParams{120, 0.1};
      cfg.schemes = {WeightScheme::laplacian, WeightScheme::row_normalized_laplacian};
      cfg.methods = {"plain", "minimax-lp", "newton-baseline", "oracle-minimax"};
      cfg.degrees = {1, 3};
      cfg.mc_realizations = 4;
      cfg.density_grid = 512;
      cfg.trials = 2;
      cfg.seed = 99;

      const fs::path base = fs::temp_directory_path() / "specfilt_acceptance";
      fs::remove_all(base);
      cfg.output_dir = base.string();
      auto rates_once = [&]() {
        run_experiment(cfg);
        std::ifstream in(base / "rates.csv", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
      };
      const std::string first = rates_once();
      const std::string second = rates_once();
      pass = !first.empty() && first == second;
      detail = pass ? "rates.csv identical across reruns"
                    : "rates.csv differs between reruns";
      fs::remove_all(base);
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    gate.report(10, "deterministic reruns", pass, detail);
  }

  if (gate.failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", gate.failures);
  return 1;
}
