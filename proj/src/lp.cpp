#include "specfilt/lp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "specfilt/errors.hpp"

namespace specfilt {

namespace {

// Working state of the tableau method. The artificial block starts as the
// identity, so after any sequence of row operations it holds B^{-1}; the
// simplex multipliers at the end are read off it directly.
struct Tableau {
  Eigen::MatrixXd t;        // m x (n_real + m)
  Eigen::VectorXd rhs;      // m, kept >= 0
  std::vector<int> basis;   // per-row basic variable index
  int n_real = 0;
  int m = 0;
  int pivots = 0;
};

enum class PhaseOutcome { optimal, unbounded, stalled };

// Runs simplex iterations with the given cost vector. Dantzig pricing with
// lowest-index ties; switches to Bland's rule after a degenerate streak and
// back once the objective moves, so cycling cannot occur.
PhaseOutcome run_phase(Tableau& tb, const Eigen::VectorXd& cost, bool allow_artificial,
                       const SimplexOptions& opt) {
  const int ncols = tb.n_real + tb.m;
  const int limit = allow_artificial ? ncols : tb.n_real;
  bool bland = false;
  int degen_streak = 0;

  while (true) {
    if (tb.pivots >= opt.max_pivots) return PhaseOutcome::stalled;

    Eigen::VectorXd cb(tb.m);
    for (int i = 0; i < tb.m; ++i) cb(i) = cost(tb.basis[i]);

    int enter = -1;
    double best = -opt.tol;
    for (int j = 0; j < limit; ++j) {
      const double reduced = cost(j) - cb.dot(tb.t.col(j));
      if (reduced < best) {
        enter = j;
        best = reduced;
        if (bland) break;  // lowest eligible index
      }
    }
    if (enter < 0) return PhaseOutcome::optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tb.m; ++i) {
      const double a = tb.t(i, enter);
      if (a <= opt.tol) continue;
      const double ratio = tb.rhs(i) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && tb.basis[i] < tb.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return PhaseOutcome::unbounded;

    const double pivot_val = tb.t(leave, enter);
    tb.t.row(leave) /= pivot_val;
    tb.rhs(leave) /= pivot_val;
    for (int i = 0; i < tb.m; ++i) {
      if (i == leave) continue;
      const double f = tb.t(i, enter);
      if (f == 0.0) continue;
      tb.t.row(i) -= f * tb.t.row(leave);
      tb.rhs(i) -= f * tb.rhs(leave);
      if (tb.rhs(i) < 0.0 && tb.rhs(i) > -1e-12) tb.rhs(i) = 0.0;
    }
    tb.basis[leave] = enter;
    ++tb.pivots;

    if (best_ratio <= opt.tol) {
      if (++degen_streak > 64) bland = true;
    } else {
      degen_streak = 0;
      bland = false;
    }
  }
}

}  // namespace

SimplexSolution simplex_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, const SimplexOptions& opt) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex: dimension mismatch");
  if (m == 0 || n == 0) throw std::invalid_argument("simplex: empty problem");

  Tableau tb;
  tb.n_real = n;
  tb.m = m;
  tb.t.resize(m, n + m);
  tb.t.leftCols(n) = A;
  tb.t.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  tb.rhs = b;
  std::vector<int> row_sign(m, 1);
  for (int i = 0; i < m; ++i) {
    if (tb.rhs(i) < 0.0) {
      tb.t.row(i) = -tb.t.row(i);
      tb.t(i, n + i) = 1.0;  // keep the artificial column positive
      tb.rhs(i) = -tb.rhs(i);
      row_sign[i] = -1;
    }
  }
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) tb.basis[i] = n + i;

  SimplexSolution sol;

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd phase1(n + m);
  phase1.setZero();
  phase1.tail(m).setOnes();
  PhaseOutcome out = run_phase(tb, phase1, true, opt);
  if (out == PhaseOutcome::stalled) {
    sol.status = SimplexStatus::stalled;
    sol.pivots = tb.pivots;
    return sol;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] >= n) infeas += tb.rhs(i);
  if (infeas > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    sol.status = SimplexStatus::infeasible;
    sol.pivots = tb.pivots;
    return sol;
  }
  // Drive any artificial that is still basic (necessarily at zero) out of the
  // basis with a degenerate pivot on a real column.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tb.t(i, j)) > opt.tol) {
        col = j;
        break;
      }
    }
    if (col < 0)
      throw NumericError("simplex: redundant equality row " + std::to_string(i));
    const double pivot_val = tb.t(i, col);
    tb.t.row(i) /= pivot_val;
    tb.rhs(i) /= pivot_val;
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      const double f = tb.t(k, col);
      if (f == 0.0) continue;
      tb.t.row(k) -= f * tb.t.row(i);
      tb.rhs(k) -= f * tb.rhs(i);
    }
    tb.basis[i] = col;
  }

  // Phase 2 with the true costs; artificial columns are barred from entering.
  Eigen::VectorXd phase2(n + m);
  phase2.setZero();
  phase2.head(n) = c;
  out = run_phase(tb, phase2, false, opt);
  sol.pivots = tb.pivots;
  if (out == PhaseOutcome::stalled) {
    sol.status = SimplexStatus::stalled;
    return sol;
  }
  if (out == PhaseOutcome::unbounded) {
    sol.status = SimplexStatus::unbounded;
    return sol;
  }

  sol.status = SimplexStatus::optimal;
  sol.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) sol.x(tb.basis[i]) = tb.rhs(i);
  sol.objective = c.dot(sol.x);
  // The artificial block holds B^{-1}; multipliers are c_B' B^{-1}, with the
  // sign flip undone for rows that were negated during setup.
  sol.multipliers = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd cb(m);
  for (int i = 0; i < m; ++i) cb(i) = phase2(tb.basis[i]);
  for (int k = 0; k < m; ++k)
    sol.multipliers(k) = row_sign[k] * cb.dot(tb.t.col(n + k));
  return sol;
}

MinimaxTableau minimax_tableau(const std::vector<double>& points, int degree,
                               const ChebyshevBasis& basis, QBasis qbasis) {
  if (points.empty()) throw std::invalid_argument("minimax tableau: no sample points");
  if (degree < 1) throw std::invalid_argument("minimax tableau: degree must be positive");
  const int m = static_cast<int>(points.size());
  MinimaxTableau t;
  t.rows.resize(2 * m, degree);
  t.rhs.resize(2 * m);
  std::vector<double> phi(degree);
  for (int i = 0; i < m; ++i) {
    const double lambda = points[i];
    if (qbasis == QBasis::chebyshev) {
      chebyshev_row(degree, lambda, basis, phi.data());
    } else {
      double p = 1.0;
      for (int k = 0; k < degree; ++k, p *= lambda) phi[k] = p;
    }
    const double factor = 1.0 - lambda;
    for (int k = 0; k < degree; ++k) {
      t.rows(i, k) = factor * phi[k];
      t.rows(m + i, k) = -factor * phi[k];
    }
    t.rhs(i) = -1.0;
    t.rhs(m + i) = 1.0;
  }
  return t;
}

MinimaxSolution solve_lp(const MinimaxTableau& t, const SimplexOptions& opt) {
  const int rows = static_cast<int>(t.rows.rows());
  const int d = static_cast<int>(t.rows.cols());
  if (rows == 0 || d == 0) throw std::invalid_argument("solve lp: empty tableau");
  if (t.rhs.size() != rows) throw std::invalid_argument("solve lp: rhs size mismatch");

  // Dual of  min eps  s.t.  rows.a - eps <= rhs:
  //   min rhs'y  s.t.  1'y = 1,  rows'y = 0,  y >= 0.
  // It has d+1 equality rows against 2M nonnegative columns, which the dense
  // tableau handles cheaply; (a, eps) come back as the row multipliers.
  Eigen::MatrixXd A(d + 1, rows);
  A.row(0).setOnes();
  A.bottomRows(d) = t.rows.transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(0) = 1.0;

  SimplexSolution sol = simplex_solve(A, b, t.rhs, opt);
  if (sol.status != SimplexStatus::optimal) {
    std::ostringstream msg;
    msg << "solve lp: simplex ";
    switch (sol.status) {
      case SimplexStatus::infeasible: msg << "reported an infeasible dual"; break;
      case SimplexStatus::unbounded: msg << "reported an unbounded dual"; break;
      default: msg << "stalled after " << sol.pivots << " pivots"; break;
    }
    msg << " (" << rows << " rows, degree " << d << ")";
    throw NumericError(msg.str());
  }

  MinimaxSolution r;
  r.pivots = sol.pivots;
  r.eps = -sol.multipliers(0);
  r.coeffs.resize(d);
  Eigen::VectorXd a(d);
  for (int k = 0; k < d; ++k) {
    a(k) = sol.multipliers(k + 1);
    r.coeffs[k] = a(k);
  }

  // Certificate: the recovered coefficients must achieve the reported optimum
  // on the constraint set (strong duality plus primal feasibility).
  const Eigen::VectorXd slack = t.rows * a - t.rhs;
  r.residual = std::abs(slack.maxCoeff() - r.eps);
  if (!(r.residual <= 1e-9 * std::max(1.0, std::abs(r.eps)))) {
    std::ostringstream msg;
    msg << "solve lp: optimality certificate violated, residual " << r.residual;
    throw NumericError(msg.str());
  }
  return r;
}

}  // namespace specfilt
