#pragma once

#include <cstdint>
#include <vector>

#include "specfilt/graph.hpp"

namespace specfilt {

struct ErdosRenyiParams {
  int n = 0;
  double theta = 0.0;  // independent link probability per node pair
};

/// Stochastic block model whose populations sit on a finite D-dimensional
/// lattice. Each population holds m nodes; two nodes link with probability
/// theta0 inside a population, with thetas[k] when their populations are
/// adjacent along lattice dimension k (unit step, non-toroidal), and never
/// otherwise.
struct LatticeSbmParams {
  std::vector<int> dims;       // populations per lattice dimension
  int m = 0;                   // nodes per population
  double theta0 = 0.0;         // within-population link probability
  std::vector<double> thetas;  // per-dimension cross-population probabilities

  int population_count() const;
  int node_count() const;
};

void validate(const ErdosRenyiParams& p);   // throws std::invalid_argument
void validate(const LatticeSbmParams& p);   // throws std::invalid_argument

Graph generate_erdos_renyi(const ErdosRenyiParams& p, std::uint64_t seed);
Graph generate_lattice_sbm(const LatticeSbmParams& p, std::uint64_t seed);

}  // namespace specfilt
