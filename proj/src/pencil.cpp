#include "tracemin/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

namespace tracemin {

namespace {

// The pencil restricted to the orthogonal complement of N(A) ∩ N(B).
struct Deflated {
  CMatrix Z;  // n x m, orthonormal columns
  HermitianMatrix a;
  HermitianMatrix b;
};

Deflated deflate(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int n = a.dim();
  CMatrix stacked(2 * n, n);
  stacked << a.matrix(), b.matrix();
  Deflated out;
  const int rank = numerical_rank(stacked);
  if (rank == n) {
    out.Z = CMatrix::Identity(n, n);
  } else if (rank == 0) {
    out.Z = CMatrix(n, 0);
  } else {
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    out.Z = svd.matrixV().leftCols(rank);
  }
  out.a = a.congruence(out.Z);
  out.b = b.congruence(out.Z);
  return out;
}

CMatrix common_null_space(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int n = a.dim();
  CMatrix stacked(2 * n, n);
  stacked << a.matrix(), b.matrix();
  return null_space(stacked);
}

double lambda_min(const CMatrix& m) {
  return eigenvalues(herm(m)).back();
}

// -v^H B v for a unit eigenvector of the smallest eigenvalue of A - lambda B:
// a supergradient of the concave g(lambda) = lambda_min(A - lambda B).
double supergradient(const HermitianMatrix& a, const HermitianMatrix& b, double lambda) {
  const auto eig = eig_herm(herm(a.matrix() - lambda * b.matrix()));
  const CVector v = eig.vectors.col(a.dim() - 1);
  return -(v.adjoint() * b.matrix() * v)(0, 0).real();
}

double smallest_nonzero_abs(const std::vector<double>& values, double tol) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (std::abs(v) > tol) best = std::min(best, std::abs(v));
  }
  return best;
}

// Maximizer of g for an indefinite (deflated) B.
double maximize_g(const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto beta = eigenvalues(b);
  const double sigma = smallest_nonzero_abs(beta, default_inertia_tol(b));
  double rho = 1.0 + a.max_abs() / sigma;
  for (int i = 0; i < 100; ++i) {
    if (supergradient(a, b, -rho) > 0.0 && supergradient(a, b, rho) < 0.0) break;
    rho *= 2.0;
  }
  double lo = -rho;
  double hi = rho;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (supergradient(a, b, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// sup{lambda : A - lambda B >= 0} for B >= 0 with trivial common null space.
std::optional<double> semidefinite_boundary(const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto eig = eig_herm(b);
  const double tol = default_inertia_tol(b);
  const int m = b.dim();
  std::vector<int> range_idx;
  std::vector<int> null_idx;
  for (int j = 0; j < m; ++j) {
    (eig.values[j] > tol ? range_idx : null_idx).push_back(j);
  }
  const auto pick = [&](const std::vector<int>& idx) {
    CMatrix out(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = eig.vectors.col(idx[j]);
    return out;
  };
  const CMatrix p = pick(range_idx);
  const CMatrix nb = pick(null_idx);
  const double psd_tol = 1e-9 * (1.0 + a.max_abs());

  CMatrix s = p.adjoint() * a.matrix() * p;
  if (nb.cols() > 0) {
    const CMatrix ann = nb.adjoint() * a.matrix() * nb;
    if (lambda_min(ann) <= psd_tol) return std::nullopt;
    const CMatrix apn = p.adjoint() * a.matrix() * nb;
    s -= apn * ann.ldlt().solve(CMatrix(apn.adjoint()));
  }
  if (p.cols() == 0) return std::nullopt;
  RVector scale(p.cols());
  for (std::size_t j = 0; j < range_idx.size(); ++j) scale(j) = 1.0 / std::sqrt(eig.values[range_idx[j]]);
  const CMatrix c = scale.asDiagonal() * s * scale.asDiagonal();
  return lambda_min(c);
}

struct Lambda0Search {
  std::optional<double> lambda0;
  Deflated deflated;
  Inertia inertia_b;  // of the deflated B
};

Lambda0Search search_lambda0(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in size");
  Lambda0Search out;
  out.deflated = deflate(a, b);
  const auto& da = out.deflated.a;
  const auto& db = out.deflated.b;
  if (da.dim() == 0) {
    out.lambda0 = 0.0;
    return out;
  }
  out.inertia_b = inertia(db);
  const double accept = -1e-9 * (1.0 + a.max_abs());
  std::optional<double> candidate;
  if (out.inertia_b.rank() == 0) {
    candidate = 0.0;
  } else if (out.inertia_b.n_minus == 0) {
    candidate = semidefinite_boundary(da, db);
  } else if (out.inertia_b.n_plus == 0) {
    const auto mirrored = semidefinite_boundary(da, -db);
    if (mirrored) candidate = -*mirrored;
  } else {
    candidate = maximize_g(da, db);
  }
  if (candidate && lambda_min(da.matrix() - *candidate * db.matrix()) >= accept) {
    out.lambda0 = candidate;
  }
  return out;
}

}  // namespace

std::optional<double> find_lambda0(const HermitianMatrix& a, const HermitianMatrix& b) {
  return search_lambda0(a, b).lambda0;
}

PsdPencilAnalysis finite_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto search = search_lambda0(a, b);
  if (!search.lambda0) {
    throw Error(ErrorCode::NotPsdPencil,
                "pencil is not positive semi-definite: no real lambda makes A - lambda B >= 0");
  }
  PsdPencilAnalysis out;
  out.lambda0 = *search.lambda0;
  out.inertia_b = inertia(b);
  const int n = a.dim();
  const auto& z = search.deflated.Z;
  const CMatrix& ap = search.deflated.a.matrix();
  const CMatrix& bp = search.deflated.b.matrix();
  const int m = static_cast<int>(z.cols());
  const int r = out.inertia_b.rank();
  if (m == 0 || r == 0) {
    out.eigvecs_plus = CMatrix(n, 0);
    out.eigvecs_minus = CMatrix(n, 0);
    return out;
  }

  // Shift at which A - shift B >= 0, strictly definite when possible.
  double shift = out.lambda0;
  if (search.inertia_b.n_minus == 0) {
    shift = out.lambda0 - (1.0 + std::abs(out.lambda0));
  } else if (search.inertia_b.n_plus == 0) {
    shift = out.lambda0 + (1.0 + std::abs(out.lambda0));
  }

  const double bscale = max_abs(bp);
  const CMatrix a0 = ap - shift * bp;
  const auto eig0 = eig_herm(herm(a0));
  const double ktol = 1e-9 * (1.0 + max_abs(ap) + std::abs(shift) * bscale);
  std::vector<int> kernel_idx;
  std::vector<int> range_idx;
  for (int j = 0; j < m; ++j) {
    (eig0.values[j] <= ktol ? kernel_idx : range_idx).push_back(j);
  }
  const auto pick = [&](const CMatrix& basis, const std::vector<int>& idx) {
    CMatrix o(basis.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) o.col(j) = basis.col(idx[j]);
    return o;
  };
  const CMatrix kmat = pick(eig0.vectors, kernel_idx);
  const CMatrix rmat = pick(eig0.vectors, range_idx);

  // Split the kernel by the B-Gram matrix on it.
  CMatrix knd(m, 0);
  CMatrix kd(m, 0);
  std::vector<double> gamma;
  if (kmat.cols() > 0) {
    const auto geig = eig_herm(herm(kmat.adjoint() * bp * kmat));
    const double gtol = 1e-8 * std::max(bscale, 1e-300);
    std::vector<int> nd_idx;
    std::vector<int> d_idx;
    for (int j = 0; j < static_cast<int>(geig.values.size()); ++j) {
      if (std::abs(geig.values[j]) > gtol) {
        nd_idx.push_back(j);
        gamma.push_back(geig.values[j]);
      } else {
        d_idx.push_back(j);
      }
    }
    knd = kmat * pick(geig.vectors, nd_idx);
    kd = kmat * pick(geig.vectors, d_idx);
  }
  const int n_nd = static_cast<int>(knd.cols());
  const int m_d = static_cast<int>(kd.cols());

  struct Eigenpair {
    double value;
    double sign;
    CVector vec;  // deflated coordinates
  };
  std::vector<Eigenpair> pairs;
  for (int j = 0; j < n_nd; ++j) {
    pairs.push_back({shift, gamma[j] > 0 ? 1.0 : -1.0, knd.col(j) / std::sqrt(std::abs(gamma[j]))});
  }

  const int needed = r - n_nd - 2 * m_d;
  if (needed < 0 || needed > rmat.cols()) {
    throw Error(ErrorCode::NonConvergence, "finite eigenvalue count inconsistent with rank(B)");
  }
  if (needed > 0) {
    RVector dinvh(rmat.cols());
    for (std::size_t j = 0; j < range_idx.size(); ++j) dinvh(j) = 1.0 / std::sqrt(eig0.values[range_idx[j]]);
    const CMatrix bqq = rmat.adjoint() * bp * rmat;
    CMatrix s = bqq;
    CMatrix cnd(0, rmat.cols());
    RVector ginv(n_nd);
    if (n_nd > 0) {
      cnd = knd.adjoint() * bp * rmat;
      for (int j = 0; j < n_nd; ++j) ginv(j) = 1.0 / gamma[j];
      s -= cnd.adjoint() * ginv.asDiagonal() * cnd;
    }
    const CMatrix m0 = dinvh.asDiagonal() * s * dinvh.asDiagonal();
    CMatrix e(rmat.cols(), 0);
    CMatrix ptilde = CMatrix::Identity(rmat.cols(), rmat.cols());
    if (m_d > 0) {
      e = dinvh.asDiagonal() * (kd.adjoint() * bp * rmat).adjoint();
      ptilde = null_space(CMatrix(e.adjoint()));
    }
    const CMatrix mm = ptilde.adjoint() * m0 * ptilde;
    const auto theig = eig_herm(herm(mm));
    std::vector<int> order(theig.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return std::abs(theig.values[x]) > std::abs(theig.values[y]);
    });
    if (static_cast<int>(order.size()) < needed) {
      throw Error(ErrorCode::NonConvergence, "reduced pencil too small for rank(B)");
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> e_solver;
    if (m_d > 0) e_solver.compute(e);
    for (int q = 0; q < needed; ++q) {
      const int j = order[q];
      const double theta = theig.values[j];
      const CVector u = ptilde * theig.vectors.col(j);
      const CVector w = dinvh.asDiagonal() * u;
      CVector x = rmat * w;
      if (n_nd > 0) x -= knd * (ginv.asDiagonal() * (cnd * w));
      if (m_d > 0) x += kd * e_solver.solve(CVector(theta * u - m0 * u));
      x /= std::sqrt(std::abs(theta));
      pairs.push_back({shift + 1.0 / theta, theta > 0 ? 1.0 : -1.0, x});
    }
  }

  std::vector<Eigenpair> plus;
  std::vector<Eigenpair> minus;
  for (auto& p : pairs) (p.sign > 0 ? plus : minus).push_back(p);
  if (static_cast<int>(plus.size()) + m_d != out.inertia_b.n_plus ||
      static_cast<int>(minus.size()) + m_d != out.inertia_b.n_minus) {
    throw Error(ErrorCode::NonConvergence, "B-signs of eigenvectors disagree with the inertia of B");
  }
  std::sort(plus.begin(), plus.end(), [](const Eigenpair& x, const Eigenpair& y) { return x.value < y.value; });
  std::sort(minus.begin(), minus.end(), [](const Eigenpair& x, const Eigenpair& y) { return x.value > y.value; });

  for (const auto& p : plus) out.lambda_plus.push_back(p.value);
  for (const auto& p : minus) out.lambda_minus.push_back(p.value);
  for (int j = 0; j < m_d; ++j) {
    out.lambda_plus.push_back(shift);
    out.lambda_minus.push_back(shift);
  }
  std::sort(out.lambda_plus.begin(), out.lambda_plus.end());
  std::sort(out.lambda_minus.begin(), out.lambda_minus.end(), std::greater<>());

  out.m0 = m_d;
  out.diagonalizable = m_d == 0;
  if (out.diagonalizable) {
    CMatrix vp(n, static_cast<Eigen::Index>(plus.size()));
    CMatrix vm(n, static_cast<Eigen::Index>(minus.size()));
    for (std::size_t j = 0; j < plus.size(); ++j) vp.col(j) = z * plus[j].vec;
    for (std::size_t j = 0; j < minus.size(); ++j) vm.col(j) = z * minus[j].vec;
    out.eigvecs_plus = vp;
    out.eigvecs_minus = vm;
  }
  return out;
}

CMatrix eigenvectors_of(const HermitianMatrix& a, const HermitianMatrix& b, double mu) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in size");
  const int n = a.dim();
  const CMatrix v = null_space(a.matrix() - mu * b.matrix());
  if (v.cols() == 0) return CMatrix(n, 0);
  const CMatrix common = common_null_space(a, b);
  CMatrix proj = v;
  if (common.cols() > 0) proj -= common * (common.adjoint() * v);
  Eigen::JacobiSVD<CMatrix> svd(proj, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int keep = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-6) ++keep;
  }
  return svd.matrixU().leftCols(keep);
}

Diagonalizability diagonalizability(const HermitianMatrix& a, const HermitianMatrix& b,
                                    const PsdPencilAnalysis& analysis) {
  std::vector<double> values = analysis.lambda_plus;
  values.insert(values.end(), analysis.lambda_minus.begin(), analysis.lambda_minus.end());
  std::sort(values.begin(), values.end());
  const double gtol = 1e-8 * std::max(b.max_abs(), 1e-300);

  Diagonalizability out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] - values[j - 1] <= 1e-8 * (1.0 + std::abs(values[j]))) ++j;
    const double mu = std::accumulate(values.begin() + i, values.begin() + j, 0.0) / double(j - i);
    const CMatrix v = eigenvectors_of(a, b, mu);
    if (v.cols() > 0) {
      const CMatrix gram = v.adjoint() * b.matrix() * v;
      for (double g : eigenvalues(herm(gram))) {
        if (std::abs(g) > gtol) ++out.gram_rank;
      }
    }
    i = j;
  }
  const int r = analysis.rank();
  out.gram_rank = std::min(out.gram_rank, r);
  out.m0 = (r - out.gram_rank) / 2;
  out.diagonalizable = out.gram_rank == r;
  return out;
}

}  // namespace tracemin
