#pragma once

// Brute-force verification: parametrizations of the feasible set and a
// randomized projected-descent search for tr(D X^H A X).

#include <cstdint>
#include <optional>

#include "tracemin/report.hpp"
#include "tracemin/spectral.hpp"

namespace tracemin {

/// F with F^H B F = diag(I_{n_plus}, -I_{n_minus}, 0), built from the
/// eigen-decomposition of B. Columns: plus, minus, null.
struct InertiaFrame {
  CMatrix F;
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
};

InertiaFrame inertia_frame(const HermitianMatrix& b);

struct HyperbolicFactorization {
  CMatrix W;        // n_plus x n_minus
  CMatrix V_plus;   // n_plus x n_plus unitary
  CMatrix V_minus;  // n_minus x n_minus unitary
};

/// [[(I + W W^H)^{1/2}, W], [W^H, (I + W^H W)^{1/2}]] * diag(V_plus, V_minus).
CMatrix compose_hyperbolic(const HyperbolicFactorization& f);

/// Random feasible X (X^H B X = constraint matrix, residual <= 1e-8).
/// Throws InfeasibleConstraint when the inertia of B cannot host the
/// constraint and DegenerateDraw after 20 failed draws.
CMatrix feasible_sample(const HermitianMatrix& b, const ConstraintSpec& constraint,
                        std::uint64_t seed);

struct OracleResult {
  double best_value = 0.0;
  CMatrix best_X;
  int iterations = 0;
  double feasibility_residual = 0.0;
  bool unbounded_flag = false;
};

struct OracleOptions {
  int restarts = 50;
  int iters = 300;
  std::uint64_t seed = 0;
  /// Stop as soon as the objective drops to this level.
  std::optional<double> target;
};

/// Objective level below which the search declares the problem unbounded:
/// -1e6 * (1 + max|A| * max|D|).
double divergence_threshold(const HermitianMatrix& a, const HermitianMatrix& d);

OracleResult local_search(const HermitianMatrix& a, const HermitianMatrix& b,
                          const HermitianMatrix& d, const ConstraintSpec& constraint,
                          const OracleOptions& options);

OracleResult local_search(const HermitianMatrix& a, const HermitianMatrix& b,
                          const HermitianMatrix& d, const ConstraintSpec& constraint,
                          int restarts, int iters, std::uint64_t seed);

}  // namespace tracemin
