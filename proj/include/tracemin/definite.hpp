#pragma once

// min / max of tr(D X^H A X) subject to X^H B X = I_k with B positive definite.

#include <vector>

#include "tracemin/report.hpp"
#include "tracemin/spectral.hpp"

namespace tracemin {

struct DefinitePencilEigen {
  CMatrix U;                    // U^H B U = I, U^H A U = diag(lambdas)
  std::vector<double> lambdas;  // ascending
};

/// Reduction through the Cholesky factor of B.
DefinitePencilEigen pencil_eig_definite(const HermitianMatrix& a, const HermitianMatrix& b);

struct OmegaSplit {
  std::vector<double> omegas;  // descending
  int ell = 0;                 // count of omegas >= -tol
  CMatrix Q;
};

/// Tolerance for sign decisions on omegas: 1e-10 * (1 + max|D|).
double omega_tol(const HermitianMatrix& d);

OmegaSplit split_omegas(const HermitianMatrix& d);

/// k is taken from D. The optimizer is U Y Q^H with Y selecting e_1..e_ell
/// and e_{n-k+ell+1}..e_n.
SolveReport solve_definite_min(const HermitianMatrix& a, const HermitianMatrix& b,
                               const HermitianMatrix& d, bool want_optimizer);

/// Negated minimum of -A.
SolveReport solve_definite_max(const HermitianMatrix& a, const HermitianMatrix& b,
                               const HermitianMatrix& d, bool want_optimizer);

struct MinimizerCharacterization {
  CMatrix compressed;               // (X Q_hat)^H A (X Q_hat)
  double off_diagonal_max = 0.0;
  std::vector<double> diagonal;
  std::vector<double> expected_diagonal;  // lambda_1..lambda_{l+}, lambda_{n-l-+1}..lambda_n
  bool distinct_nonzero_omegas = false;
  int ell_plus = 0;
  int ell_minus = 0;
  double trace_value = 0.0;         // tr(D X^H A X)
};

/// Throws Error(MissingOptimizer) when the report carries no optimizer.
MinimizerCharacterization characterize_minimizer(const SolveReport& report,
                                                 const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const HermitianMatrix& d);

}  // namespace tracemin
