#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specfilt/filter_design.hpp"
#include "specfilt/weights.hpp"

namespace specfilt {

struct SimulationConfig {
  int horizon = 1;       // total W-applications; a multiple of the degree is recommended
  std::optional<FilterPolynomial> filter;
  int record_every = 1;  // error recording stride
  std::uint64_t x0_seed = 0;
  // When supplied, a value >= 1 triggers a divergence warning up front.
  std::optional<double> predicted_rho;
};

struct Trajectory {
  std::vector<int> steps;      // recorded iteration indices, steps[0] == 0
  std::vector<double> errors;  // ||x_n - x*|| / ||x_0 - x*||, errors[0] == 1
  Eigen::VectorXd final_state;
};

/// Runs x_{n+1} = W x_n from standard normal initial data, splicing in the
/// filter combination x_n := sum_k a_k x_{n-d+k} every d steps (first at
/// n = d). Matrix products run in O(edges); only the last d+1 states are kept.
Trajectory simulate(const WeightMatrix& wm, const SimulationConfig& cfg);

struct RateEstimate {
  double rate = 0.0;    // least-squares slope of ln error per iteration
  bool truncated = false;  // floor-level samples were discarded
  int points_used = 0;
};

/// Empirical per-iteration rate: least-squares slope of ln(error) over the
/// recorded steps, after discarding the leading burn_in fraction. Errors at
/// the numerical floor (<= 1e-13) and everything after them are dropped first
/// and flagged as truncation.
RateEstimate measure_rate(const Trajectory& t, double burn_in = 0.2);

// CSV with header "step,error".
void write_trajectory_csv(const Trajectory& t, const std::string& path);

}  // namespace specfilt
