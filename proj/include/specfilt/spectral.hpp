#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specfilt/graph.hpp"

namespace specfilt {

enum class MatrixKind { adjacency, laplacian, row_normalized_laplacian, weight };

std::string to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(const std::string& s);

struct Spectrum {
  std::vector<double> values;  // ascending
  MatrixKind source = MatrixKind::weight;

  int size() const { return static_cast<int>(values.size()); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

/// Eigenvalues of a dense symmetric matrix, ascending. Rejects matrices whose
/// asymmetry exceeds 1e-12 relative to the largest entry.
Spectrum symmetric_eigenvalues(const Eigen::MatrixXd& m, MatrixKind source);

Eigen::MatrixXd adjacency_matrix(const Graph& g);
Eigen::MatrixXd laplacian_matrix(const Graph& g);
// D^{-1/2} A D^{-1/2}; requires min degree >= 1.
Eigen::MatrixXd normalized_adjacency_sym(const Graph& g);

Spectrum adjacency_spectrum(const Graph& g);
Spectrum laplacian_spectrum(const Graph& g);
// Spectrum of I - D^{-1} A. The matrix is not symmetric, but it is similar to
// I - D^{-1/2} A D^{-1/2} via conjugation by D^{1/2}, so the eigenvalues are
// real and computed with the symmetric solver.
Spectrum row_normalized_laplacian_spectrum(const Graph& g);

// Fraction of eigenvalues <= lambda.
double empirical_distribution_at(const Spectrum& s, double lambda);

struct SpectralDensity {
  std::vector<double> grid;    // ascending
  std::vector<double> values;  // nonnegative
  std::string provenance;      // "single-realization" | "monte-carlo(R)" | "analytic-file"
  double bandwidth = 0.0;      // kernel width in eigenvalue units (0 for files)

  double integral() const;              // trapezoid rule over the grid
  double value_at(double lambda) const; // linear interpolation, 0 outside
  double peak() const;
};

// Gaussian kernel bandwidth: 0.9 * min(sd, IQR/1.34) * N^{-1/5}, floored at
// 1e-3 (with a warning) when the sample is degenerate.
double silverman_bandwidth(const std::vector<double>& sample);

std::vector<double> linspace(double lo, double hi, int count);

/// Gaussian KDE of the spectrum on the given grid. The grid must cover
/// [min - 3h, max + 3h]; bandwidth defaults to Silverman's rule.
SpectralDensity kernel_density(const Spectrum& s, const std::vector<double>& grid,
                               std::optional<double> bandwidth = std::nullopt);

using GraphModel = std::function<Graph(std::uint64_t seed)>;

// Seed for Monte Carlo realization r (attempt 0); exposed so callers can
// reconstruct individual realizations.
std::uint64_t mc_realization_seed(std::uint64_t seed, int r, int attempt = 0);

struct MonteCarloOptions {
  int realizations = 1;
  int grid_points = 1024;                 // used when grid is empty
  std::vector<double> grid;               // explicit shared grid (optional)
  std::optional<double> bandwidth;        // absolute kernel width
  std::optional<double> bandwidth_rel;    // kernel width / sample range
  // Remove the zero eigenvalue of L or the row-normalized L before smoothing.
  // That eigenvalue is the consensus mode (weight eigenvalue 1); its 1/N atom
  // vanishes in the large-N limit the expected density stands in for, and
  // keeping it would bias the support of the smoothed estimate.
  bool drop_consensus_mode = false;
};

/// Expected spectral density: average of per-realization KDEs on a shared
/// grid. Realizations that violate preconditions of the requested matrix kind
/// (e.g. an isolated node for the row-normalized Laplacian) are retried with
/// fresh sub-seeds, up to 10 attempts per slot.
SpectralDensity monte_carlo_density(const GraphModel& model, MatrixKind kind,
                                    const MonteCarloOptions& opt, std::uint64_t seed);

/// Plain-text density file: "# spectral-density v1" header, optional
/// "# provenance: ..." line, then "lambda value" pairs with 17 significant
/// digits. Loading validates grid order and nonnegativity; mass within 5% of
/// one is renormalized into the unit band, anything further off is an error.
SpectralDensity load_analytic_density(const std::string& path);
void save_density(const SpectralDensity& f, const std::string& path);

// Plain-text eigenvalue list: "# spectrum v1" and "# source: <kind>" headers,
// one value per line with 17 significant digits.
void save_spectrum(const Spectrum& s, const std::string& path);
Spectrum load_spectrum(const std::string& path);

// Change of variables lambda -> shift + scale * lambda, with the density
// reweighted by 1/|scale| so mass is preserved.
SpectralDensity map_density_affine(const SpectralDensity& f, double shift, double scale);

/// Sampled eigenvalue region a filter design targets: `count` equispaced
/// points spanning the tau-level support of the density restricted to
/// (-inf, 1 - kappa), with points falling in spectral gaps (density <= tau)
/// dropped.
struct SupportRegion {
  std::vector<double> points;  // ascending
  double kappa = 0.0;
  double tau = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

SupportRegion support_region(const SpectralDensity& f, double kappa, double tau,
                             int count);

}  // namespace specfilt
