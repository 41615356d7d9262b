#pragma once

#include <vector>

namespace specfilt {

/// Affine map carrying an eigenvalue interval onto [-1, 1]; Chebyshev
/// polynomials are evaluated in the mapped variable.
struct ChebyshevBasis {
  double center = 0.0;
  double half_width = 1.0;

  // Degenerate intervals (hi == lo) fall back to half_width 1 so the basis
  // stays well defined for single-point regions.
  static ChebyshevBasis from_interval(double lo, double hi);

  double map(double lambda) const { return (lambda - center) / half_width; }
};

// T_n evaluated at the mapped point, by three-term recurrence (valid outside
// [-1, 1] as well).
double chebyshev_eval(int n, double lambda, const ChebyshevBasis& basis);

// Fills out[0..count-1] with T_0..T_{count-1} at the mapped point.
void chebyshev_row(int count, double lambda, const ChebyshevBasis& basis, double* out);

// Clenshaw evaluation of sum_k coeffs[k] T_k at the mapped point.
double chebyshev_series_eval(const std::vector<double>& coeffs, double lambda,
                             const ChebyshevBasis& basis);

// Exact basis conversions (coefficient vectors are in ascending order; these
// are intended for small degrees where the monomial form is well conditioned).
std::vector<double> chebyshev_series_to_monomial(const std::vector<double>& coeffs,
                                                 const ChebyshevBasis& basis);
std::vector<double> monomial_to_chebyshev_series(const std::vector<double>& mono,
                                                 const ChebyshevBasis& basis);

double polyval(const std::vector<double>& mono, double x);  // Horner
std::vector<double> polymul(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace specfilt
