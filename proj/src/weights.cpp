#include "specfilt/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "specfilt/errors.hpp"

namespace specfilt {

std::string to_string(WeightScheme s) {
  switch (s) {
    case WeightScheme::laplacian: return "laplacian";
    case WeightScheme::row_normalized_laplacian: return "row-normalized-laplacian";
  }
  throw std::invalid_argument("unknown weight scheme");
}

WeightScheme weight_scheme_from_string(const std::string& s) {
  if (s == "laplacian") return WeightScheme::laplacian;
  if (s == "row-normalized-laplacian") return WeightScheme::row_normalized_laplacian;
  throw std::invalid_argument("unknown weight scheme: " + s);
}

void WeightMatrix::apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  const Graph& g = *graph;
  const int n = g.node_count();
  if (x.size() != n) throw std::invalid_argument("weight apply: dimension mismatch");
  out.resize(n);
  if (scheme == WeightScheme::laplacian) {
    for (int v = 0; v < n; ++v) out(v) = (1.0 - alpha * g.degree(v)) * x(v);
    for (auto [u, v] : g.edges()) {
      out(u) += alpha * x(v);
      out(v) += alpha * x(u);
    }
  } else {
    for (int v = 0; v < n; ++v) out(v) = (1.0 - alpha) * x(v);
    for (auto [u, v] : g.edges()) {
      out(u) += alpha / double(g.degree(u)) * x(v);
      out(v) += alpha / double(g.degree(v)) * x(u);
    }
  }
}

Eigen::VectorXd WeightMatrix::symmetrizing_sqrt() const {
  const int n = graph->node_count();
  Eigen::VectorXd s(n);
  if (scheme == WeightScheme::laplacian) {
    s.setOnes();
  } else {
    for (int v = 0; v < n; ++v) s(v) = std::sqrt(double(graph->degree(v)));
  }
  return s;
}

Eigen::MatrixXd WeightMatrix::symmetrized() const {
  if (scheme == WeightScheme::laplacian) return w;
  const Eigen::VectorXd s = symmetrizing_sqrt();
  return s.asDiagonal() * w * s.cwiseInverse().asDiagonal();
}

namespace {

WeightMatrix build_weight(std::shared_ptr<const Graph> g, WeightScheme scheme, double alpha) {
  if (!g) throw std::invalid_argument("weight: null graph");
  if (!(alpha > 0.0)) throw std::invalid_argument("weight: alpha must be positive");
  if (!is_connected(*g))
    throw std::invalid_argument(
        "weight: graph is disconnected, eigenvalue 1 would not be simple");

  const int n = g->node_count();
  WeightMatrix wm;
  wm.scheme = scheme;
  wm.alpha = alpha;
  wm.w = Eigen::MatrixXd::Zero(n, n);
  wm.ell.resize(n);
  if (scheme == WeightScheme::laplacian) {
    for (int v = 0; v < n; ++v) wm.w(v, v) = 1.0 - alpha * g->degree(v);
    for (auto [u, v] : g->edges()) {
      wm.w(u, v) = alpha;
      wm.w(v, u) = alpha;
    }
    wm.ell.setOnes();
  } else {
    for (int v = 0; v < n; ++v) {
      wm.w(v, v) = 1.0 - alpha;
      wm.ell(v) = double(g->degree(v));
    }
    for (auto [u, v] : g->edges()) {
      wm.w(u, v) = alpha / double(g->degree(u));
      wm.w(v, u) = alpha / double(g->degree(v));
    }
  }
  wm.graph = std::move(g);
  return wm;
}

}  // namespace

WeightMatrix laplacian_weight(std::shared_ptr<const Graph> g, double alpha) {
  return build_weight(std::move(g), WeightScheme::laplacian, alpha);
}

WeightMatrix row_normalized_laplacian_weight(std::shared_ptr<const Graph> g, double alpha) {
  return build_weight(std::move(g), WeightScheme::row_normalized_laplacian, alpha);
}

WeightMatrix make_weight(std::shared_ptr<const Graph> g, WeightScheme scheme, double alpha) {
  return build_weight(std::move(g), scheme, alpha);
}

Spectrum weight_spectrum(const WeightMatrix& wm) {
  return symmetric_eigenvalues(wm.symmetrized(), MatrixKind::weight);
}

double choose_alpha(const SpectralDensity& base_density, double tau) {
  if (base_density.grid.empty())
    throw std::invalid_argument("choose alpha: empty density");
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < base_density.grid.size(); ++i) {
    if (base_density.values[i] > tau) {
      if (!any) lo = base_density.grid[i];
      hi = base_density.grid[i];
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("choose alpha: no density above tau");
  const double center = 0.5 * (lo + hi);
  if (!(center > 0.0))
    throw NumericError("choose alpha: support center is not positive");
  return 1.0 / center;
}

Eigen::VectorXd ConsensusProjector::apply(const Eigen::VectorXd& x) const {
  if (x.size() != ell.size())
    throw std::invalid_argument("consensus projector: dimension mismatch");
  const double avg = ell.dot(x) / normalization;
  return Eigen::VectorXd::Constant(x.size(), avg);
}

Eigen::MatrixXd ConsensusProjector::dense() const {
  return Eigen::VectorXd::Ones(ell.size()) * (ell.transpose() / normalization);
}

ConsensusProjector consensus_projector(const Eigen::VectorXd& ell) {
  if (ell.size() == 0) throw std::invalid_argument("consensus projector: empty vector");
  if (ell.minCoeff() < 0.0)
    throw std::invalid_argument("consensus projector: negative weight entry");
  const double norm = ell.sum();
  if (!(norm > 0.0))
    throw std::invalid_argument("consensus projector: weights sum to zero");
  return ConsensusProjector{ell, norm};
}

ConsensusReport check_consensus_conditions(const WeightMatrix& wm) {
  const int n = wm.size();
  ConsensusReport rep;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  rep.row_sums_one = ((wm.w * ones - ones).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::VectorXd left = wm.w.transpose() * wm.ell - wm.ell;
  rep.left_vector_fixed = (left.cwiseAbs().maxCoeff() <= 1e-10);

  // rho(W - J) through the symmetric similar form: with s = D^{1/2}1, the
  // projector conjugates to the rank-one s s'/(s's) and W to a symmetric S.
  const Eigen::VectorXd s = wm.symmetrizing_sqrt();
  const Eigen::MatrixXd m = wm.symmetrized() - (s * s.transpose()) / s.squaredNorm();
  const Spectrum spec = symmetric_eigenvalues(m, MatrixKind::weight);
  rep.rho = std::max(std::abs(spec.min()), std::abs(spec.max()));
  rep.contractive = rep.rho < 1.0;
  return rep;
}

Eigen::VectorXd corrective_transform(const Eigen::VectorXd& x, const Graph& g) {
  if (x.size() != g.node_count())
    throw std::invalid_argument("corrective transform: dimension mismatch");
  if (g.min_degree() < 1)
    throw std::invalid_argument("corrective transform: graph has an isolated node");
  const double mean_degree = g.mean_degree();
  Eigen::VectorXd y(x.size());
  for (int v = 0; v < g.node_count(); ++v) y(v) = mean_degree * x(v) / double(g.degree(v));
  return y;
}

}  // namespace specfilt
