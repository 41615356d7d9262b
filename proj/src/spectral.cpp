#include "specfilt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "specfilt/errors.hpp"
#include "specfilt/parallel.hpp"
#include "specfilt/rng.hpp"

namespace specfilt {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::adjacency: return "adjacency";
    case MatrixKind::laplacian: return "laplacian";
    case MatrixKind::row_normalized_laplacian: return "row-normalized-laplacian";
    case MatrixKind::weight: return "weight";
  }
  throw std::invalid_argument("unknown matrix kind");
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "adjacency") return MatrixKind::adjacency;
  if (s == "laplacian") return MatrixKind::laplacian;
  if (s == "row-normalized-laplacian") return MatrixKind::row_normalized_laplacian;
  if (s == "weight") return MatrixKind::weight;
  throw std::invalid_argument("unknown matrix kind: " + s);
}

Spectrum symmetric_eigenvalues(const Eigen::MatrixXd& m, MatrixKind source) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument("eigenvalues: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("eigenvalues: symmetric solver did not converge");
  Spectrum s;
  s.source = source;
  s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(s.values.begin(), s.values.end());
  return s;
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (auto [u, v] : g.edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Eigen::MatrixXd laplacian_matrix(const Graph& g) {
  Eigen::MatrixXd l = -adjacency_matrix(g);
  for (int v = 0; v < g.node_count(); ++v) l(v, v) = g.degree(v);
  return l;
}

Eigen::MatrixXd normalized_adjacency_sym(const Graph& g) {
  if (g.min_degree() < 1)
    throw std::invalid_argument("normalized adjacency: graph has an isolated node");
  Eigen::VectorXd dinv_sqrt(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) dinv_sqrt(v) = 1.0 / std::sqrt(double(g.degree(v)));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (auto [u, v] : g.edges()) {
    const double w = dinv_sqrt(u) * dinv_sqrt(v);
    a(u, v) = w;
    a(v, u) = w;
  }
  return a;
}

Spectrum adjacency_spectrum(const Graph& g) {
  return symmetric_eigenvalues(adjacency_matrix(g), MatrixKind::adjacency);
}

Spectrum laplacian_spectrum(const Graph& g) {
  return symmetric_eigenvalues(laplacian_matrix(g), MatrixKind::laplacian);
}

Spectrum row_normalized_laplacian_spectrum(const Graph& g) {
  Eigen::MatrixXd a = normalized_adjacency_sym(g);
  // I - D^{-1}A is similar to I - D^{-1/2}AD^{-1/2}; solve the symmetric one.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(g.node_count(), g.node_count()) - a;
  Spectrum s = symmetric_eigenvalues(m, MatrixKind::row_normalized_laplacian);
  return s;
}

double empirical_distribution_at(const Spectrum& s, double lambda) {
  if (s.values.empty()) throw std::invalid_argument("empirical distribution: empty spectrum");
  auto it = std::upper_bound(s.values.begin(), s.values.end(), lambda);
  return double(it - s.values.begin()) / double(s.values.size());
}

double SpectralDensity::integral() const {
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  return acc;
}

double SpectralDensity::value_at(double lambda) const {
  if (grid.empty() || lambda < grid.front() || lambda > grid.back()) return 0.0;
  auto it = std::upper_bound(grid.begin(), grid.end(), lambda);
  if (it == grid.begin()) return values.front();
  if (it == grid.end()) return values.back();
  const std::size_t i = it - grid.begin();
  const double t = (lambda - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

double SpectralDensity::peak() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

constexpr double kBandwidthFloor = 1e-3;

void check_density_invariants(const SpectralDensity& f, const char* where) {
  const double mass = f.integral();
  if (!(std::abs(mass - 1.0) <= 0.01)) {
    std::ostringstream msg;
    msg << where << ": density mass " << mass << " deviates from 1 by more than 1%"
        << " (grid too coarse for the bandwidth?)";
    throw NumericError(msg.str());
  }
}

}  // namespace

double silverman_bandwidth(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("bandwidth: empty sample");
  const double n = double(sample.size());
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = sample.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  std::vector<double> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  double h = 0.9 * spread * std::pow(n, -0.2);
  if (!(h > 0.0)) {
    std::fprintf(stderr,
                 "warning: degenerate sample, kernel bandwidth floored at %g\n",
                 kBandwidthFloor);
    h = kBandwidthFloor;
  }
  return h;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be positive");
  if (count == 1) return {lo};
  std::vector<double> v(count);
  const double step = (hi - lo) / double(count - 1);
  for (int i = 0; i < count; ++i) v[i] = double(i) * step + lo;
  v[count - 1] = hi;
  return v;
}

SpectralDensity kernel_density(const Spectrum& s, const std::vector<double>& grid,
                               std::optional<double> bandwidth) {
  if (s.values.empty()) throw std::invalid_argument("kernel density: empty spectrum");
  if (grid.size() < 2) throw std::invalid_argument("kernel density: grid needs >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("kernel density: grid must be strictly ascending");

  double h = bandwidth ? *bandwidth : silverman_bandwidth(s.values);
  if (!(h > 0.0)) {
    std::fprintf(stderr, "warning: nonpositive bandwidth, floored at %g\n", kBandwidthFloor);
    h = kBandwidthFloor;
  }

  const double lo = *std::min_element(s.values.begin(), s.values.end());
  const double hi = *std::max_element(s.values.begin(), s.values.end());
  const double slack = 1e-9 * std::max(1.0, hi - lo);
  if (grid.front() > lo - 3.0 * h + slack || grid.back() < hi + 3.0 * h - slack)
    throw std::invalid_argument(
        "kernel density: grid must cover the sample range plus 3 bandwidths");

  SpectralDensity f;
  f.grid = grid;
  f.values.assign(grid.size(), 0.0);
  f.bandwidth = h;
  f.provenance = "single-realization";

  const double norm = 1.0 / (double(s.values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  const double window = 8.0 * h;  // kernel mass beyond 8 sigma is ~1e-15
  for (double x : s.values) {
    auto first = std::lower_bound(grid.begin(), grid.end(), x - window);
    auto last = std::upper_bound(grid.begin(), grid.end(), x + window);
    for (auto it = first; it != last; ++it) {
      const double z = (*it - x) / h;
      f.values[it - grid.begin()] += norm * std::exp(-0.5 * z * z);
    }
  }
  check_density_invariants(f, "kernel density");
  return f;
}

std::uint64_t mc_realization_seed(std::uint64_t seed, int r, int attempt) {
  return derive_seed(seed, seed_stream::monte_carlo,
                     static_cast<std::uint64_t>(r) * 16u + static_cast<std::uint64_t>(attempt));
}

namespace {

Spectrum spectrum_of_kind(const Graph& g, MatrixKind kind) {
  switch (kind) {
    case MatrixKind::adjacency: return adjacency_spectrum(g);
    case MatrixKind::laplacian: return laplacian_spectrum(g);
    case MatrixKind::row_normalized_laplacian: return row_normalized_laplacian_spectrum(g);
    case MatrixKind::weight:
      throw std::invalid_argument("monte-carlo density: weight matrices are built downstream");
  }
  throw std::invalid_argument("unknown matrix kind");
}

// Removes the single eigenvalue nearest zero: the consensus mode of L and of
// the row-normalized Laplacian.
void drop_zero_mode(Spectrum& s) {
  if (s.values.size() < 2)
    throw std::invalid_argument("density: cannot drop the consensus mode of a 1x1 spectrum");
  auto it = std::min_element(s.values.begin(), s.values.end(),
                             [](double a, double b) { return std::abs(a) < std::abs(b); });
  s.values.erase(it);
}

}  // namespace

SpectralDensity monte_carlo_density(const GraphModel& model, MatrixKind kind,
                                    const MonteCarloOptions& opt, std::uint64_t seed) {
  if (opt.realizations < 1)
    throw std::invalid_argument("monte-carlo density: need at least one realization");
  if (opt.drop_consensus_mode && kind != MatrixKind::laplacian &&
      kind != MatrixKind::row_normalized_laplacian)
    throw std::invalid_argument(
        "monte-carlo density: consensus-mode removal applies to Laplacian kinds only");

  std::vector<Spectrum> spectra(opt.realizations);
  parallel_for(opt.realizations, [&](int r) {
    for (int attempt = 0; attempt < 10; ++attempt) {
      Graph g = model(mc_realization_seed(seed, r, attempt));
      if (kind == MatrixKind::row_normalized_laplacian && g.min_degree() < 1) continue;
      Spectrum s = spectrum_of_kind(g, kind);
      if (opt.drop_consensus_mode) drop_zero_mode(s);
      spectra[r] = std::move(s);
      return;
    }
    std::ostringstream msg;
    msg << "monte-carlo density: realization " << r
        << " kept violating matrix preconditions after 10 attempts";
    throw NumericError(msg.str());
  });

  std::vector<double> bandwidths(spectra.size());
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    const auto& vals = spectra[r].values;
    if (opt.bandwidth) {
      bandwidths[r] = *opt.bandwidth;
    } else if (opt.bandwidth_rel) {
      const double range = *std::max_element(vals.begin(), vals.end()) -
                           *std::min_element(vals.begin(), vals.end());
      bandwidths[r] = *opt.bandwidth_rel * range;
    } else {
      bandwidths[r] = silverman_bandwidth(vals);
    }
    if (!(bandwidths[r] > 0.0)) bandwidths[r] = kBandwidthFloor;
  }

  std::vector<double> grid = opt.grid;
  if (grid.empty()) {
    if (opt.grid_points < 2)
      throw std::invalid_argument("monte-carlo density: grid needs >= 2 points");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < spectra.size(); ++r) {
      const auto& vals = spectra[r].values;
      lo = std::min(lo, *std::min_element(vals.begin(), vals.end()) - 3.0 * bandwidths[r]);
      hi = std::max(hi, *std::max_element(vals.begin(), vals.end()) + 3.0 * bandwidths[r]);
    }
    grid = linspace(lo, hi, opt.grid_points);
  }

  SpectralDensity avg;
  avg.grid = grid;
  avg.values.assign(grid.size(), 0.0);
  double mean_h = 0.0;
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    SpectralDensity f = kernel_density(spectra[r], grid, bandwidths[r]);
    for (std::size_t i = 0; i < grid.size(); ++i) avg.values[i] += f.values[i];
    mean_h += f.bandwidth;
  }
  const double inv = 1.0 / double(spectra.size());
  for (double& v : avg.values) v *= inv;
  avg.bandwidth = mean_h * inv;
  avg.provenance = "monte-carlo(" + std::to_string(opt.realizations) + ")";
  check_density_invariants(avg, "monte-carlo density");
  return avg;
}

SpectralDensity load_analytic_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# spectral-density v1")
    throw std::runtime_error(path + ": missing \"# spectral-density v1\" header");

  SpectralDensity f;
  f.provenance = "analytic-file";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string prov_tag = "# provenance: ";
      const std::string bw_tag = "# bandwidth: ";
      if (line.rfind(prov_tag, 0) == 0) f.provenance = line.substr(prov_tag.size());
      else if (line.rfind(bw_tag, 0) == 0) f.bandwidth = std::stod(line.substr(bw_tag.size()));
      continue;
    }
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) throw std::runtime_error(path + ": malformed density row: " + line);
    if (!f.grid.empty() && !(x > f.grid.back()))
      throw std::runtime_error(path + ": grid must be strictly ascending");
    if (v < 0.0) throw std::runtime_error(path + ": negative density value");
    f.grid.push_back(x);
    f.values.push_back(v);
  }
  if (f.grid.size() < 2) throw std::runtime_error(path + ": fewer than 2 density rows");

  const double mass = f.integral();
  if (std::abs(mass - 1.0) > 0.05) {
    std::ostringstream msg;
    msg << path << ": density mass " << mass << " is more than 5% away from 1";
    throw std::runtime_error(msg.str());
  }
  // Masses already inside the 1% tolerance band are kept untouched so that
  // saving and reloading a density is an exact round trip.
  if (std::abs(mass - 1.0) > 0.01)
    for (double& v : f.values) v /= mass;
  return f;
}

void save_density(const SpectralDensity& f, const std::string& path) {
  if (f.grid.size() != f.values.size() || f.grid.size() < 2)
    throw std::invalid_argument("save density: malformed density");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# spectral-density v1\n";
  if (!f.provenance.empty()) out << "# provenance: " << f.provenance << "\n";
  if (f.bandwidth > 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", f.bandwidth);
    out << "# bandwidth: " << buf << "\n";
  }
  char buf[160];
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", f.grid[i], f.values[i]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_spectrum(const Spectrum& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# spectrum v1\n";
  out << "# source: " << to_string(s.source) << "\n";
  char buf[64];
  for (double v : s.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Spectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# spectrum v1")
    throw std::runtime_error(path + ": missing \"# spectrum v1\" header");
  Spectrum s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# source: ";
      if (line.rfind(tag, 0) == 0) s.source = matrix_kind_from_string(line.substr(tag.size()));
      continue;
    }
    s.values.push_back(std::stod(line));
  }
  if (s.values.empty()) throw std::runtime_error(path + ": empty spectrum");
  if (!std::is_sorted(s.values.begin(), s.values.end()))
    throw std::runtime_error(path + ": spectrum must be ascending");
  return s;
}

SpectralDensity map_density_affine(const SpectralDensity& f, double shift, double scale) {
  if (scale == 0.0) throw std::invalid_argument("density map: scale must be nonzero");
  SpectralDensity g;
  g.provenance = f.provenance;
  g.bandwidth = f.bandwidth * std::abs(scale);
  const std::size_t n = f.grid.size();
  g.grid.resize(n);
  g.values.resize(n);
  const double inv = 1.0 / std::abs(scale);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = scale > 0.0 ? i : n - 1 - i;
    g.grid[i] = shift + scale * f.grid[j];
    g.values[i] = f.values[j] * inv;
  }
  return g;
}

SupportRegion support_region(const SpectralDensity& f, double kappa, double tau, int count) {
  if (count < 1) throw std::invalid_argument("support region: count must be positive");
  if (tau < 0.0) throw std::invalid_argument("support region: tau must be nonnegative");
  if (f.grid.size() != f.values.size() || f.grid.empty())
    throw std::invalid_argument("support region: malformed density");

  const double cutoff = 1.0 - kappa;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.grid[i] < cutoff && f.values[i] > tau) {
      if (!any) lo = f.grid[i];
      hi = f.grid[i];
      any = true;
    }
  }
  if (!any)
    throw std::invalid_argument(
        "support region: no density above tau below 1 - kappa; the spectrum may sit "
        "entirely inside the exclusion margin");

  SupportRegion region;
  region.kappa = kappa;
  region.tau = tau;
  region.lambda_min = lo;
  region.lambda_max = hi;
  if (lo == hi) {
    region.points = {lo};
    return region;
  }
  // Equispaced samples over the support, with spectral-gap points (density at
  // or below tau) dropped; the endpoints always qualify by construction.
  for (double x : linspace(lo, hi, std::max(count, 2)))
    if (f.value_at(x) > tau) region.points.push_back(x);
  return region;
}

}  // namespace specfilt
