#include "specfilt/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace specfilt {

ChebyshevBasis ChebyshevBasis::from_interval(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("chebyshev basis: interval is reversed");
  ChebyshevBasis b;
  b.center = 0.5 * (lo + hi);
  b.half_width = lo == hi ? 1.0 : 0.5 * (hi - lo);
  return b;
}

double chebyshev_eval(int n, double lambda, const ChebyshevBasis& basis) {
  if (n < 0) throw std::invalid_argument("chebyshev: negative order");
  const double u = basis.map(lambda);
  double prev = 1.0;  // T_0
  if (n == 0) return prev;
  double cur = u;  // T_1
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void chebyshev_row(int count, double lambda, const ChebyshevBasis& basis, double* out) {
  if (count < 1) throw std::invalid_argument("chebyshev row: count must be positive");
  const double u = basis.map(lambda);
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = u;
  for (int k = 2; k < count; ++k) out[k] = 2.0 * u * out[k - 1] - out[k - 2];
}

double chebyshev_series_eval(const std::vector<double>& coeffs, double lambda,
                             const ChebyshevBasis& basis) {
  if (coeffs.empty()) return 0.0;
  const double u = basis.map(lambda);
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    const double b0 = 2.0 * u * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + coeffs[0];
}

namespace {

// Multiplies a monomial polynomial by (s*x + t) in coefficient space.
std::vector<double> affine_shift_mul(const std::vector<double>& p, double s, double t) {
  std::vector<double> r(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    r[k] += t * p[k];
    r[k + 1] += s * p[k];
  }
  return r;
}

// Composition p(s*x + t) for monomial p, by Horner in coefficient space.
std::vector<double> compose_affine(const std::vector<double>& p, double s, double t) {
  std::vector<double> r{0.0};
  for (std::size_t k = p.size(); k-- > 0;) {
    r = affine_shift_mul(r, s, t);
    r[0] += p[k];
  }
  r.resize(p.size());
  return r;
}

}  // namespace

std::vector<double> chebyshev_series_to_monomial(const std::vector<double>& coeffs,
                                                 const ChebyshevBasis& basis) {
  if (coeffs.empty()) return {};
  const std::size_t n = coeffs.size();
  // Accumulate sum_k coeffs[k] T_k(u) in monomial form over u.
  std::vector<double> acc(n, 0.0);
  std::vector<double> tprev{1.0};      // T_0
  std::vector<double> tcur{0.0, 1.0};  // T_1
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double>& tk = k == 0 ? tprev : tcur;
    for (std::size_t i = 0; i < tk.size(); ++i) acc[i] += coeffs[k] * tk[i];
    if (k >= 1 && k + 1 < n) {
      std::vector<double> tnext(k + 2, 0.0);
      for (std::size_t i = 0; i < tcur.size(); ++i) tnext[i + 1] += 2.0 * tcur[i];
      for (std::size_t i = 0; i < tprev.size(); ++i) tnext[i] -= tprev[i];
      tprev = std::move(tcur);
      tcur = std::move(tnext);
    }
  }
  // Substitute u = (lambda - center) / half_width.
  return compose_affine(acc, 1.0 / basis.half_width, -basis.center / basis.half_width);
}

std::vector<double> monomial_to_chebyshev_series(const std::vector<double>& mono,
                                                 const ChebyshevBasis& basis) {
  if (mono.empty()) return {};
  // First express the polynomial in the mapped variable u, lambda = hw*u + c.
  const std::vector<double> in_u = compose_affine(mono, basis.half_width, basis.center);
  const std::size_t n = in_u.size();
  // u^k in the Chebyshev basis, built from u*T_j = (T_{j+1} + T_{|j-1|}) / 2.
  std::vector<double> out(n, 0.0);
  std::vector<double> power{1.0};  // u^0 = T_0
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < power.size(); ++j) out[j] += in_u[k] * power[j];
    if (k + 1 < n) {
      std::vector<double> next(power.size() + 1, 0.0);
      next[1] += power[0];  // u*T_0 = T_1
      for (std::size_t j = 1; j < power.size(); ++j) {
        next[j + 1] += 0.5 * power[j];
        next[j - 1] += 0.5 * power[j];
      }
      power = std::move(next);
    }
  }
  return out;
}

double polyval(const std::vector<double>& mono, double x) {
  double r = 0.0;
  for (std::size_t k = mono.size(); k-- > 0;) r = r * x + mono[k];
  return r;
}

std::vector<double> polymul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace specfilt
