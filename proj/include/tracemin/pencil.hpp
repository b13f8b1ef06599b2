#pragma once

// Positive semi-definite Hermitian pencils A - lambda B with B possibly
// indefinite and singular.

#include <optional>
#include <vector>

#include "tracemin/spectral.hpp"

namespace tracemin {

struct PsdPencilAnalysis {
  double lambda0 = 0.0;
  Inertia inertia_b;
  std::vector<double> lambda_plus;   // ascending
  std::vector<double> lambda_minus;  // descending: lambda_minus[0] is the largest
  bool diagonalizable = true;
  int m0 = 0;
  std::optional<CMatrix> eigvecs_plus;   // v^H B v = +1, column j pairs with lambda_plus[j]
  std::optional<CMatrix> eigvecs_minus;  // v^H B v = -1, column j pairs with lambda_minus[j]

  int rank() const { return static_cast<int>(lambda_plus.size() + lambda_minus.size()); }
};

/// Maximizer of the concave g(lambda) = lambda_min(A - lambda B) when B is
/// indefinite; the boundary sup{lambda : A - lambda B >= 0} when B >= 0
/// (mirrored for B <= 0). Empty when no lambda makes A - lambda B
/// positive semi-definite within 1e-9 * (1 + max|A|).
std::optional<double> find_lambda0(const HermitianMatrix& a, const HermitianMatrix& b);

/// Finite eigenvalues, their +/- split, eigenvectors and m0.
/// Throws Error(NotPsdPencil) when find_lambda0 fails.
PsdPencilAnalysis finite_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& b);

/// Orthonormal basis of N(A - mu B) with the common null space of A and B
/// projected out. May have zero columns.
CMatrix eigenvectors_of(const HermitianMatrix& a, const HermitianMatrix& b, double mu);

struct Diagonalizability {
  bool diagonalizable = true;
  int m0 = 0;
  int gram_rank = 0;
};

/// Recomputed from eigenspaces: rank of the B-Gram matrix of all
/// eigenvectors of the finite eigenvalues, m0 = (r - rank) / 2.
Diagonalizability diagonalizability(const HermitianMatrix& a, const HermitianMatrix& b,
                                    const PsdPencilAnalysis& analysis);

}  // namespace tracemin
