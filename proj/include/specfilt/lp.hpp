#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specfilt/chebyshev.hpp"

namespace specfilt {

struct SimplexOptions {
  int max_pivots = 10000;
  double tol = 1e-11;
};

enum class SimplexStatus { optimal, infeasible, unbounded, stalled };

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::stalled;
  Eigen::VectorXd x;            // primal solution
  Eigen::VectorXd multipliers;  // row duals at the optimal basis
  double objective = 0.0;
  int pivots = 0;
};

/// Dense two-phase tableau simplex for min c'x s.t. Ax = b, x >= 0.
/// Pricing is Dantzig's rule with lowest-index tie-breaking; after a long
/// degenerate streak it falls back to Bland's rule, which guarantees
/// termination. Fully deterministic for fixed input.
SimplexSolution simplex_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, const SimplexOptions& opt = {});

/// Constraint rows of the discrete minimax filter problem in epigraph form:
/// rows * a - eps <= rhs, minimizing eps over (a, eps). For sample point
/// lambda_i the residual 1 + (1 - lambda_i) q(lambda_i) must lie in
/// [-eps, eps], which gives the row pair
///   +(1 - lambda_i) phi(lambda_i) . a - eps <= -1
///   -(1 - lambda_i) phi(lambda_i) . a - eps <= +1
/// with phi the degree-(d-1) basis row for q.
struct MinimaxTableau {
  Eigen::MatrixXd rows;  // 2M x d
  Eigen::VectorXd rhs;   // 2M
};

enum class QBasis { chebyshev, monomial };

MinimaxTableau minimax_tableau(const std::vector<double>& points, int degree,
                               const ChebyshevBasis& basis,
                               QBasis qbasis = QBasis::chebyshev);

struct MinimaxSolution {
  std::vector<double> coeffs;  // q coefficients, length d
  double eps = 0.0;
  int pivots = 0;
  double residual = 0.0;  // |max_i(rows_i . a - rhs_i) - eps|, checked <= 1e-9
};

/// Solves the minimax tableau exactly, via the LP dual (d+1 equality rows,
/// one column per inequality), and recovers (a, eps) from the optimal
/// multipliers. Throws on infeasibility, stalls, or a certificate residual
/// above 1e-9.
MinimaxSolution solve_lp(const MinimaxTableau& t, const SimplexOptions& opt = {});

}  // namespace specfilt
