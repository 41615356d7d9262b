#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "specfilt/chebyshev.hpp"
#include "specfilt/spectral.hpp"

namespace specfilt {

// Monomial tap expansion is kept only up to this degree; beyond it the
// expansion is too ill conditioned to trust and the recurrence form is used.
inline constexpr int kMonomialDegreeCap = 10;

/// Degree-d consensus filter p with p(1) = 1, stored both as the residual
/// factorization p(lambda) = 1 + (1 - lambda) q(lambda) with q in a scaled
/// Chebyshev basis, and (for degree <= kMonomialDegreeCap) as monomial taps
/// a_0..a_d used by the periodic in-network update.
struct FilterPolynomial {
  int degree = 1;
  ChebyshevBasis basis;
  std::vector<double> q_coeffs;    // length degree
  std::vector<double> p_monomial;  // length degree + 1, possibly empty
  double achieved_eps = 0.0;       // design-set worst-case |p|

  double eval(double lambda) const;           // via the q form (stable)
  double eval_monomial(double lambda) const;  // via the taps
  const std::vector<double>& taps() const;    // throws if the expansion is absent
};

enum class DesignMethod { minimax_lp, newton_baseline, oracle_minimax };

std::string to_string(DesignMethod m);
DesignMethod design_method_from_string(const std::string& s);

struct DesignProblem {
  SupportRegion region;
  int degree = 1;
  DesignMethod method = DesignMethod::minimax_lp;
};

/// Equioscillating minimax filter: minimizes max |p| over the region samples
/// subject to p(1) = 1, by linear programming in the factorized form.
FilterPolynomial design_minimax_filter(const DesignProblem& problem);

/// Baseline that places the d zeros of p at the d distinct (tolerance 1e-6)
/// non-unit eigenvalues of largest modulus, i.e. the most
/// convergence-limiting modes first: p = prod (lambda - z_j) / prod (1 - z_j).
FilterPolynomial newton_baseline_filter(const Spectrum& weight_spectrum, int degree);

/// Minimax design with the realized eigenvalues below 1 - kappa as the sample
/// set; the benchmark a density-based design is compared against.
FilterPolynomial oracle_minimax_filter(const Spectrum& weight_spectrum, double kappa,
                                       int degree);

/// max |p(lambda_i)| over the spectrum with the (simple) eigenvalue 1
/// removed; equals the spectral radius of p(W) - J because p(1) = 1.
double predicted_spectral_radius(const FilterPolynomial& p, const Spectrum& weight_spectrum);

// (1/d) ln rho; -inf when rho == 0 (finite-time convergence).
double per_iteration_rate(int degree, double rho);

nlohmann::json filter_to_json(const FilterPolynomial& p);
FilterPolynomial filter_from_json(const nlohmann::json& j);
void save_filter(const FilterPolynomial& p, const std::string& path);
FilterPolynomial load_filter(const std::string& path);

}  // namespace specfilt
