#include "specfilt/consensus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "specfilt/rng.hpp"

namespace specfilt {

Trajectory simulate(const WeightMatrix& wm, const SimulationConfig& cfg) {
  if (cfg.horizon < 1) throw std::invalid_argument("simulate: horizon must be positive");
  if (cfg.record_every < 1)
    throw std::invalid_argument("simulate: record_every must be positive");
  const int d = cfg.filter ? cfg.filter->degree : 0;
  if (cfg.filter) {
    cfg.filter->taps();  // filtered runs need the monomial combination weights
    if (cfg.horizon % d != 0)
      std::fprintf(stderr,
                   "warning: horizon %d is not a multiple of the filter degree %d; "
                   "the trailing window stays unfiltered\n",
                   cfg.horizon, d);
    if (cfg.predicted_rho && *cfg.predicted_rho >= 1.0)
      std::fprintf(stderr,
                   "warning: predicted spectral radius %.6g >= 1, the filtered "
                   "iteration is expected to diverge\n",
                   *cfg.predicted_rho);
  }

  const int n = wm.size();
  Rng rng(cfg.x0_seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.normal();

  const ConsensusProjector proj = consensus_projector(wm.ell);
  const Eigen::VectorXd target = proj.apply(x);
  double denom = (x - target).norm();
  if (denom == 0.0) denom = 1.0;  // already at consensus; errors stay 0

  Trajectory traj;
  traj.steps.push_back(0);
  traj.errors.push_back((x - target).norm() / denom);

  // Last d+1 states, refreshed from scratch after each filter application.
  std::vector<Eigen::VectorXd> window;
  if (cfg.filter) {
    window.reserve(d + 1);
    window.push_back(x);
  }

  Eigen::VectorXd next(n);
  for (int step = 1; step <= cfg.horizon; ++step) {
    wm.apply(x, next);
    x.swap(next);
    if (cfg.filter) {
      window.push_back(x);
      if (step % d == 0) {
        const auto& taps = cfg.filter->taps();
        Eigen::VectorXd combo = taps[0] * window[0];
        for (int k = 1; k <= d; ++k) combo += taps[k] * window[k];
        x = std::move(combo);
        window.clear();
        window.push_back(x);
      }
    }
    if (step % cfg.record_every == 0 || step == cfg.horizon) {
      traj.steps.push_back(step);
      traj.errors.push_back((x - target).norm() / denom);
    }
  }
  traj.final_state = std::move(x);
  return traj;
}

RateEstimate measure_rate(const Trajectory& t, double burn_in) {
  if (t.steps.size() != t.errors.size() || t.steps.size() < 2)
    throw std::invalid_argument("measure rate: need at least two recorded points");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw std::invalid_argument("measure rate: burn_in must lie in [0, 1)");

  // Usable prefix: stop at the first error at or below the numerical floor,
  // where log-linearity breaks down.
  constexpr double kFloor = 1e-13;
  std::size_t usable = t.errors.size();
  for (std::size_t i = 0; i < t.errors.size(); ++i) {
    if (!(t.errors[i] > kFloor)) {
      usable = i;
      break;
    }
  }
  RateEstimate est;
  est.truncated = usable < t.errors.size();
  if (usable < 2) {
    // The error hit the floor immediately; fall back to the first recorded
    // drop so the caller still gets a (clearly truncated) figure.
    const double e1 = std::max(t.errors[1], 1e-300);
    est.rate = std::log(e1 / t.errors[0]) / double(t.steps[1] - t.steps[0]);
    est.truncated = true;
    est.points_used = 2;
    return est;
  }

  std::size_t start = static_cast<std::size_t>(burn_in * double(usable));
  if (usable - start < 2) start = usable - 2;
  const std::size_t count = usable - start;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = start; i < usable; ++i) {
    const double xi = double(t.steps[i]);
    const double yi = std::log(t.errors[i]);
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
  }
  const double nn = double(count);
  const double det = nn * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("measure rate: degenerate step layout");
  est.rate = (nn * sxy - sx * sy) / det;
  est.points_used = static_cast<int>(count);
  return est;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "step,error\n";
  char buf[64];
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", t.steps[i], t.errors[i]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace specfilt
