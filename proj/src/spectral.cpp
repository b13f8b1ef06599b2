#include "tracemin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tracemin {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::NotPsdPencil: return "NOT_PSD_PENCIL";
    case ErrorCode::InfeasibleConstraint: return "INFEASIBLE_CONSTRAINT";
    case ErrorCode::KTooLarge: return "INFEASIBLE_CONSTRAINT";
    case ErrorCode::UnsupportedSense: return "UNSUPPORTED_SENSE";
    case ErrorCode::UnsupportedRoute: return "UNSUPPORTED_ROUTE";
    case ErrorCode::BlockStructureViolated: return "BLOCK_STRUCTURE_VIOLATED";
    case ErrorCode::MissingOptimizer: return "MISSING_OPTIMIZER";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::DegenerateDraw: return "DEGENERATE_DRAW";
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::ParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const CMatrix& h) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::InvalidInput, "Hermitian matrix must be square");
  }
  if (!h.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "Hermitian matrix has non-finite entries");
  }
  const double scale = tracemin::max_abs(h);
  const double skew = tracemin::max_abs(h - h.adjoint());
  if (skew > kHermiticityTol * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max|H - H^H| = " << skew << " exceeds "
        << kHermiticityTol << " * max|H|";
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
  m_ = 0.5 * (h + h.adjoint());
}

HermitianMatrix HermitianMatrix::from_real(const Eigen::MatrixXd& h) {
  return HermitianMatrix(h.cast<Complex>());
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                            static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::operator-() const {
  return HermitianMatrix(CMatrix(-m_));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix sum: size mismatch");
  return HermitianMatrix(CMatrix(a.m_ + b.m_));
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix difference: size mismatch");
  return HermitianMatrix(CMatrix(a.m_ - b.m_));
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(CMatrix(s * a.m_));
}

HermitianMatrix HermitianMatrix::congruence(const CMatrix& t) const {
  CMatrix c = t.adjoint() * m_ * t;
  return HermitianMatrix(CMatrix(0.5 * (c + c.adjoint())));
}

HermitianMatrix herm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidInput, "herm: matrix must be square");
  return HermitianMatrix(CMatrix(0.5 * (m + m.adjoint())));
}

EigenDecomposition eig_herm(const HermitianMatrix& h) {
  const int n = h.dim();
  EigenDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = solver.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  return out;
}

std::vector<double> eigenvalues(const HermitianMatrix& h) {
  const int n = h.dim();
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  }
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = solver.eigenvalues()(n - 1 - j);
  return v;
}

double default_inertia_tol(const HermitianMatrix& h) {
  const double scale = h.max_abs();
  return scale == 0.0 ? 1e-12 : 1e-10 * scale;
}

Inertia inertia(const HermitianMatrix& h, std::optional<double> tol) {
  const double t = tol.value_or(default_inertia_tol(h));
  Inertia in;
  for (double v : eigenvalues(h)) {
    if (v > t) {
      ++in.n_plus;
    } else if (v < -t) {
      ++in.n_minus;
    } else {
      ++in.n_zero;
    }
  }
  return in;
}

CMatrix cholesky(const HermitianMatrix& b) {
  const int n = b.dim();
  const double scale = b.max_abs();
  const double pivot_tol = scale == 0.0 ? 1e-12 : 1e-10 * scale;
  Eigen::LLT<CMatrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not positive definite");
  }
  CMatrix l = llt.matrixL();
  for (int i = 0; i < n; ++i) {
    if (std::norm(l(i, i)) <= pivot_tol) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "Cholesky pivot below tolerance; matrix is not numerically positive definite");
    }
  }
  return l;
}

namespace {

std::vector<double> sorted_desc(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

bool majorizes(std::span<const double> beta, std::span<const double> alpha) {
  if (beta.size() != alpha.size()) {
    throw Error(ErrorCode::DimensionMismatch, "majorizes: multisets differ in size");
  }
  if (beta.empty()) {
    throw Error(ErrorCode::InvalidInput, "majorizes: empty multisets");
  }
  const auto b = sorted_desc(beta);
  const auto a = sorted_desc(alpha);
  const double total = std::accumulate(b.begin(), b.end(), 0.0);
  const double tol = 1e-9 * (1.0 + std::abs(total));
  double pb = 0.0;
  double pa = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    pb += b[j];
    pa += a[j];
    if (pa > pb + tol) return false;
  }
  return std::abs(pa - pb) <= tol;
}

WeightedSumBounds weighted_sum_bounds(std::span<const double> gamma,
                                      std::span<const double> beta) {
  if (gamma.size() != beta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weighted_sum_bounds: length mismatch");
  }
  const auto desc = sorted_desc(beta);
  WeightedSumBounds out{0.0, 0.0};
  const std::size_t m = gamma.size();
  for (std::size_t i = 0; i < m; ++i) {
    out.upper += gamma[i] * desc[i];
    out.lower += gamma[i] * desc[m - 1 - i];
  }
  return out;
}

CMatrix null_space(const CMatrix& m, double rel_tol) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  if (smax > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > rel_tol * smax) ++rank;
    }
  }
  return svd.matrixV().rightCols(cols - rank);
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

}  // namespace tracemin
