#pragma once

// Dense Hermitian linear algebra: the matrix carrier, eigen-decomposition,
// inertia, Cholesky, and the majorization utilities used by the trace bounds.

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tracemin/error.hpp"

namespace tracemin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest absolute entry; 0 for an empty matrix.
double max_abs(const CMatrix& m);

/// Square complex matrix that is Hermitian up to 1e-12 * max|entry|.
/// The stored matrix is the exact Hermitian part (H + H^H) / 2.
class HermitianMatrix {
 public:
  static constexpr double kHermiticityTol = 1e-12;

  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& h);

  static HermitianMatrix from_real(const Eigen::MatrixXd& h);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix diagonal(std::initializer_list<double> d);
  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double max_abs() const { return tracemin::max_abs(m_); }
  bool is_zero() const { return max_abs() == 0.0; }

  HermitianMatrix operator-() const;
  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

  /// T^H H T, symmetrized.
  HermitianMatrix congruence(const CMatrix& t) const;

 private:
  CMatrix m_;
};

/// Hermitian part (M + M^H) / 2 of a square matrix, for products that are
/// Hermitian only up to rounding.
HermitianMatrix herm(const CMatrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  CMatrix vectors;             // unitary, column j pairs with values[j]
};

struct Inertia {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;

  int dim() const { return n_plus + n_zero + n_minus; }
  int rank() const { return n_plus + n_minus; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Eigen-decomposition with eigenvalues in descending order.
/// Throws Error(NonConvergence) if the solver does not converge.
EigenDecomposition eig_herm(const HermitianMatrix& h);

/// Eigenvalues only, descending.
std::vector<double> eigenvalues(const HermitianMatrix& h);

/// Default inertia tolerance: 1e-10 * max|H|, or 1e-12 for the zero matrix.
double default_inertia_tol(const HermitianMatrix& h);

Inertia inertia(const HermitianMatrix& h, std::optional<double> tol = std::nullopt);

/// Lower-triangular L with positive real diagonal and B = L L^H.
/// Throws Error(NotPositiveDefinite) when a pivot falls below
/// 1e-10 * max|B| (the caller should take the indefinite route).
CMatrix cholesky(const HermitianMatrix& b);

/// True iff beta majorizes alpha: descending prefix sums of beta dominate
/// those of alpha and the totals agree within 1e-9 * (1 + |sum beta|).
bool majorizes(std::span<const double> beta, std::span<const double> alpha);

struct WeightedSumBounds {
  double lower;  // sum gamma_i * beta ascending
  double upper;  // sum gamma_i * beta descending
};

/// gamma must be sorted in descending order.
WeightedSumBounds weighted_sum_bounds(std::span<const double> gamma,
                                      std::span<const double> beta);

/// Orthonormal basis of the numerical null space of m (singular values
/// below 1e-9 * largest count as zero).
CMatrix null_space(const CMatrix& m, double rel_tol = 1e-9);

/// Numerical rank with the same convention as null_space.
int numerical_rank(const CMatrix& m, double rel_tol = 1e-9);

}  // namespace tracemin
