#pragma once

// Dispatch over the three congruence constraints and the infimum formulas
// for indefinite B.

#include <cstdint>

#include "tracemin/definite.hpp"
#include "tracemin/pencil.hpp"
#include "tracemin/report.hpp"

namespace tracemin {

/// True iff lambda_min(D) >= -1e-10 * (1 + max|D|).
bool check_finiteness(const HermitianMatrix& d);

/// inf tr(D X^H A X) over X^H B X = I_k, B with both signs. k = dim D <= n_plus.
SolveReport solve_indefinite_plus(const HermitianMatrix& a, const HermitianMatrix& b,
                                  const HermitianMatrix& d, bool want_optimizer);

/// inf tr(D X^H A X) over X^H B X = -I_k. k = dim D <= n_minus.
SolveReport solve_indefinite_minus(const HermitianMatrix& a, const HermitianMatrix& b,
                                   const HermitianMatrix& d, bool want_optimizer);

/// inf over X^H B X = diag(I_{k_plus}, -I_{k_minus}) with D = diag(D_plus, D_minus).
/// Either block may be empty (0 x 0), which reduces to the one-sided solvers.
SolveReport solve_signature(const HermitianMatrix& a, const HermitianMatrix& b,
                            const HermitianMatrix& d_plus, const HermitianMatrix& d_minus,
                            bool want_optimizer);

/// Full D: throws BlockStructureViolated when the k_plus/k_minus coupling
/// block exceeds 1e-10 * max|D|.
SolveReport solve_signature(const HermitianMatrix& a, const HermitianMatrix& b,
                            const HermitianMatrix& d, int k_plus, int k_minus,
                            bool want_optimizer);

SolveReport solve(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& d,
                  const ConstraintSpec& constraint, Sense sense, bool want_optimizer);

struct EpsilonResult {
  CMatrix X;
  double objective = 0.0;
  double residual = 0.0;
  bool from_optimizer = false;  // analytic optimizer rather than oracle descent
  int iterations = 0;
};

/// Feasible X with tr(D X^H A X) <= value + eps (below the divergence
/// threshold when the infimum is -inf). Throws BudgetExceeded when the
/// search falls short. The residual bound is 1e-8, relaxed on the -inf
/// branch to 1e-13 * |X|_F^2 * max|B| where rounding dominates.
EpsilonResult epsilon_suboptimal(const HermitianMatrix& a, const HermitianMatrix& b,
                                 const HermitianMatrix& d, const ConstraintSpec& constraint,
                                 double eps, std::uint64_t seed);

}  // namespace tracemin
