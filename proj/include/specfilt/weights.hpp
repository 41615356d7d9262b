#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "specfilt/graph.hpp"
#include "specfilt/spectral.hpp"

namespace specfilt {

enum class WeightScheme { laplacian, row_normalized_laplacian };

std::string to_string(WeightScheme s);
WeightScheme weight_scheme_from_string(const std::string& s);

/// Consensus update matrix W = I - alpha * L or W = I - alpha * (I - D^{-1}A),
/// together with the left eigenvector for eigenvalue 1 and the construction
/// parameters. The dense form is materialized once; iteration uses the
/// adjacency-based apply().
struct WeightMatrix {
  std::shared_ptr<const Graph> graph;
  WeightScheme scheme = WeightScheme::laplacian;
  double alpha = 0.0;
  Eigen::VectorXd ell;  // all-ones or the degree vector
  Eigen::MatrixXd w;

  int size() const { return graph->node_count(); }

  // out = W x in O(edges).
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  // D^{1/2} W D^{-1/2}, which is symmetric for both schemes (W itself in the
  // Laplacian case). Spectral quantities of W are computed through it.
  Eigen::MatrixXd symmetrized() const;
  Eigen::VectorXd symmetrizing_sqrt() const;  // sqrt(degrees) or all-ones
};

// Both constructors require a connected graph so that eigenvalue 1 is simple.
WeightMatrix laplacian_weight(std::shared_ptr<const Graph> g, double alpha);
WeightMatrix row_normalized_laplacian_weight(std::shared_ptr<const Graph> g, double alpha);
WeightMatrix make_weight(std::shared_ptr<const Graph> g, WeightScheme scheme, double alpha);

// Eigenvalues of W via the symmetric similar matrix.
Spectrum weight_spectrum(const WeightMatrix& wm);

/// Step size rule: alpha = 1 / c where c is the midpoint of the tau-level
/// support of the base-matrix density. Errors if no density exceeds tau or
/// the midpoint is not positive.
double choose_alpha(const SpectralDensity& base_density, double tau);

/// Rank-one projector x -> (ell' x / ell' 1) * 1 onto the consensus line.
struct ConsensusProjector {
  Eigen::VectorXd ell;
  double normalization = 0.0;  // ell' 1

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
};

ConsensusProjector consensus_projector(const Eigen::VectorXd& ell);

struct ConsensusReport {
  bool row_sums_one = false;
  bool left_vector_fixed = false;
  bool contractive = false;
  double rho = 0.0;  // spectral radius of W - J

  bool all() const { return row_sums_one && left_vector_fixed && contractive; }
};

ConsensusReport check_consensus_conditions(const WeightMatrix& wm);

/// Rescales initial data so that plain averaging under the degree-weighted
/// consensus (ell = degrees) recovers the arithmetic mean: with
/// T = (mean degree) * D^{-1}, the degree-weighted average of T x equals the
/// arithmetic mean of x.
Eigen::VectorXd corrective_transform(const Eigen::VectorXd& x, const Graph& g);

}  // namespace specfilt
