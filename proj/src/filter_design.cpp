#include "specfilt/filter_design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "specfilt/errors.hpp"
#include "specfilt/lp.hpp"

namespace specfilt {

double FilterPolynomial::eval(double lambda) const {
  return 1.0 + (1.0 - lambda) * chebyshev_series_eval(q_coeffs, lambda, basis);
}

double FilterPolynomial::eval_monomial(double lambda) const {
  return polyval(taps(), lambda);
}

const std::vector<double>& FilterPolynomial::taps() const {
  if (p_monomial.empty())
    throw std::runtime_error(
        "filter: monomial taps were not expanded (degree above the cap)");
  return p_monomial;
}

std::string to_string(DesignMethod m) {
  switch (m) {
    case DesignMethod::minimax_lp: return "minimax-lp";
    case DesignMethod::newton_baseline: return "newton-baseline";
    case DesignMethod::oracle_minimax: return "oracle-minimax";
  }
  throw std::invalid_argument("unknown design method");
}

DesignMethod design_method_from_string(const std::string& s) {
  if (s == "minimax-lp") return DesignMethod::minimax_lp;
  if (s == "newton-baseline") return DesignMethod::newton_baseline;
  if (s == "oracle-minimax") return DesignMethod::oracle_minimax;
  throw std::invalid_argument("unknown design method: " + s);
}

namespace {

// p = 1 + (1 - lambda) q in monomial form.
std::vector<double> p_from_q_monomial(const std::vector<double>& q_mono) {
  std::vector<double> p = polymul({1.0, -1.0}, q_mono);
  p[0] += 1.0;
  return p;
}

void finish_filter(FilterPolynomial& f) {
  if (f.degree <= kMonomialDegreeCap) {
    const std::vector<double> q_mono = chebyshev_series_to_monomial(f.q_coeffs, f.basis);
    f.p_monomial = p_from_q_monomial(q_mono);
    const double at_one = polyval(f.p_monomial, 1.0);
    if (!(std::abs(at_one - 1.0) <= 1e-10)) {
      std::ostringstream msg;
      msg << "filter: monomial expansion drifted, p(1) = " << at_one;
      throw NumericError(msg.str());
    }
  } else {
    f.p_monomial.clear();
  }
}

}  // namespace

FilterPolynomial design_minimax_filter(const DesignProblem& problem) {
  const auto& pts = problem.region.points;
  if (pts.empty()) throw std::invalid_argument("minimax design: empty sample region");
  if (problem.degree < 1) throw std::invalid_argument("minimax design: degree must be positive");
  for (double x : pts)
    if (!(x < 1.0))
      throw std::invalid_argument("minimax design: region contains a point at or above 1");

  FilterPolynomial f;
  f.degree = problem.degree;
  f.basis = ChebyshevBasis::from_interval(pts.front(), pts.back());
  MinimaxSolution lp = solve_lp(minimax_tableau(pts, problem.degree, f.basis));
  f.q_coeffs = std::move(lp.coeffs);
  f.achieved_eps = lp.eps;
  finish_filter(f);
  return f;
}

FilterPolynomial newton_baseline_filter(const Spectrum& weight_spectrum, int degree) {
  if (degree < 1) throw std::invalid_argument("newton baseline: degree must be positive");

  // Distinct (tolerance 1e-6) eigenvalues different from 1.
  std::vector<double> distinct;
  for (double v : weight_spectrum.values) {
    if (std::abs(v - 1.0) <= 1e-6) continue;
    if (distinct.empty() || std::abs(v - distinct.back()) > 1e-6) distinct.push_back(v);
  }
  if (static_cast<int>(distinct.size()) < degree) {
    std::ostringstream msg;
    msg << "newton baseline: only " << distinct.size()
        << " distinct non-unit eigenvalues, need " << degree;
    throw std::invalid_argument(msg.str());
  }

  // Most convergence-limiting modes first: largest |lambda|, ties toward the
  // smaller value for determinism.
  std::sort(distinct.begin(), distinct.end(), [](double a, double b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  std::vector<double> zeros(distinct.begin(), distinct.begin() + degree);

  std::vector<double> p{1.0};
  double denom = 1.0;
  for (double z : zeros) {
    p = polymul(p, {-z, 1.0});
    denom *= 1.0 - z;
  }
  for (double& c : p) c /= denom;

  // q = (p - 1) / (1 - lambda) by synthetic division at the root 1.
  std::vector<double> r = p;
  r[0] -= 1.0;
  std::vector<double> t(degree);
  double carry = r[degree];
  for (int k = degree - 1; k >= 1; --k) {
    t[k] = carry;
    carry = r[k] + carry;
  }
  t[0] = carry;
  std::vector<double> q_mono(degree);
  for (int k = 0; k < degree; ++k) q_mono[k] = -t[k];

  const auto [zmin, zmax] = std::minmax_element(zeros.begin(), zeros.end());
  FilterPolynomial f;
  f.degree = degree;
  f.basis = ChebyshevBasis::from_interval(*zmin, *zmax);
  f.q_coeffs = monomial_to_chebyshev_series(q_mono, f.basis);
  f.p_monomial = std::move(p);
  double worst = 0.0;
  for (double v : distinct) worst = std::max(worst, std::abs(polyval(f.p_monomial, v)));
  f.achieved_eps = worst;
  return f;
}

FilterPolynomial oracle_minimax_filter(const Spectrum& weight_spectrum, double kappa,
                                       int degree) {
  SupportRegion region;
  region.kappa = kappa;
  region.tau = 0.0;
  for (double v : weight_spectrum.values) {
    if (v < 1.0 - kappa &&
        (region.points.empty() || v - region.points.back() > 1e-12))
      region.points.push_back(v);
  }
  if (region.points.empty())
    throw std::invalid_argument(
        "oracle design: no eigenvalues below 1 - kappa to target");
  region.lambda_min = region.points.front();
  region.lambda_max = region.points.back();
  return design_minimax_filter({region, degree, DesignMethod::oracle_minimax});
}

double predicted_spectral_radius(const FilterPolynomial& p, const Spectrum& weight_spectrum) {
  const auto& vals = weight_spectrum.values;
  if (vals.empty()) throw std::invalid_argument("spectral radius: empty spectrum");
  std::size_t unit = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double d = std::abs(vals[i] - 1.0);
    if (d < best) {
      best = d;
      unit = i;
    }
  }
  if (!(best <= 1e-8))
    throw std::invalid_argument("spectral radius: spectrum does not contain eigenvalue 1");
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i != unit && std::abs(vals[i] - 1.0) <= 1e-8)
      throw std::invalid_argument("spectral radius: eigenvalue 1 is not simple");

  double rho = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i != unit) rho = std::max(rho, std::abs(p.eval(vals[i])));
  return rho;
}

double per_iteration_rate(int degree, double rho) {
  if (degree < 1) throw std::invalid_argument("rate: degree must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("rate: rho must be nonnegative");
  if (rho == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(rho) / double(degree);
}

nlohmann::json filter_to_json(const FilterPolynomial& p) {
  nlohmann::json j;
  j["degree"] = p.degree;
  j["basis"] = {{"center", p.basis.center}, {"half_width", p.basis.half_width}};
  j["q_coeffs"] = p.q_coeffs;
  j["p_monomial"] = p.p_monomial;
  j["achieved_eps"] = p.achieved_eps;
  return j;
}

FilterPolynomial filter_from_json(const nlohmann::json& j) {
  FilterPolynomial p;
  p.degree = j.at("degree").get<int>();
  p.basis.center = j.at("basis").at("center").get<double>();
  p.basis.half_width = j.at("basis").at("half_width").get<double>();
  p.q_coeffs = j.at("q_coeffs").get<std::vector<double>>();
  p.p_monomial = j.at("p_monomial").get<std::vector<double>>();
  p.achieved_eps = j.at("achieved_eps").get<double>();
  if (p.degree < 1) throw std::runtime_error("filter json: degree must be positive");
  if (static_cast<int>(p.q_coeffs.size()) != p.degree)
    throw std::runtime_error("filter json: q_coeffs length must equal the degree");
  if (!p.p_monomial.empty() &&
      static_cast<int>(p.p_monomial.size()) != p.degree + 1)
    throw std::runtime_error("filter json: p_monomial length must be degree + 1");
  if (!(p.basis.half_width > 0.0))
    throw std::runtime_error("filter json: basis half_width must be positive");
  if (!p.p_monomial.empty() && std::abs(polyval(p.p_monomial, 1.0) - 1.0) > 1e-10)
    throw std::runtime_error("filter json: p(1) deviates from 1");
  return p;
}

void save_filter(const FilterPolynomial& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << filter_to_json(p).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

FilterPolynomial load_filter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return filter_from_json(j);
}

}  // namespace specfilt
