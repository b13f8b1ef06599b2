#include "tracemin/definite.hpp"

#include <algorithm>
#include <cmath>

namespace tracemin {

namespace {

void check_dims(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& d) {
  if (a.dim() == 0 || a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "A and B must be nonempty and of equal size");
  }
  if (d.dim() < 1 || d.dim() > a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "D must be k x k with 1 <= k <= n");
  }
}

}  // namespace

DefinitePencilEigen pencil_eig_definite(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in size");
  const int n = a.dim();
  const CMatrix l = cholesky(b);
  const auto lower = l.triangularView<Eigen::Lower>();
  // C = L^{-1} A L^{-H}
  CMatrix tmp = lower.solve(a.matrix());
  CMatrix c = lower.solve(CMatrix(tmp.adjoint())).adjoint();
  const auto eig = eig_herm(herm(c));

  DefinitePencilEigen out;
  out.lambdas.resize(n);
  CMatrix v(n, n);
  for (int j = 0; j < n; ++j) {
    out.lambdas[j] = eig.values[n - 1 - j];
    v.col(j) = eig.vectors.col(n - 1 - j);
  }
  out.U = l.adjoint().triangularView<Eigen::Upper>().solve(v);
  return out;
}

double omega_tol(const HermitianMatrix& d) { return 1e-10 * (1.0 + d.max_abs()); }

OmegaSplit split_omegas(const HermitianMatrix& d) {
  const auto eig = eig_herm(d);
  OmegaSplit s;
  s.omegas = eig.values;
  s.Q = eig.vectors;
  const double tol = omega_tol(d);
  s.ell = static_cast<int>(std::count_if(s.omegas.begin(), s.omegas.end(),
                                         [tol](double w) { return w >= -tol; }));
  return s;
}

SolveReport solve_definite_min(const HermitianMatrix& a, const HermitianMatrix& b,
                               const HermitianMatrix& d, bool want_optimizer) {
  check_dims(a, b, d);
  const int n = a.dim();
  const int k = d.dim();
  const auto pe = pencil_eig_definite(a, b);
  const auto split = split_omegas(d);
  const int ell = split.ell;

  SolveReport r;
  r.route = Route::DefiniteMin;
  r.finite = true;
  r.attained = true;

  std::vector<int> sel;
  for (int i = 0; i < ell; ++i) sel.push_back(i);
  for (int i = ell; i < k; ++i) sel.push_back(i + n - k);

  double value = 0.0;
  for (int i = 0; i < k; ++i) {
    PairingTerm t;
    t.omega = split.omegas[i];
    t.lambda = pe.lambdas[sel[i]];
    t.omega_index = i + 1;
    t.lambda_index = sel[i] + 1;
    t.role = "lambda";
    value += t.omega * t.lambda;
    r.pairing.push_back(t);
  }
  r.value = value;

  if (want_optimizer) {
    CMatrix uy(n, k);
    for (int i = 0; i < k; ++i) uy.col(i) = pe.U.col(sel[i]);
    r.x_opt = uy * split.Q.adjoint();
  }

  r.diagnostics.inertia_b = inertia(b);
  r.diagnostics.omegas = split.omegas;
  r.diagnostics.lambdas = pe.lambdas;
  r.diagnostics.ell = ell;
  return r;
}

SolveReport solve_definite_max(const HermitianMatrix& a, const HermitianMatrix& b,
                               const HermitianMatrix& d, bool want_optimizer) {
  SolveReport r = solve_definite_min(-a, b, d, want_optimizer);
  const int n = a.dim();
  r.route = Route::DefiniteMax;
  r.value = -*r.value;
  for (auto& t : r.pairing) {
    t.lambda = -t.lambda;
    t.lambda_index = n + 1 - t.lambda_index;
  }
  std::vector<double> lam(r.diagnostics.lambdas.rbegin(), r.diagnostics.lambdas.rend());
  for (auto& x : lam) x = -x;
  r.diagnostics.lambdas = lam;
  return r;
}

MinimizerCharacterization characterize_minimizer(const SolveReport& report,
                                                 const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 const HermitianMatrix& d) {
  if (!report.attained || !report.x_opt) {
    throw Error(ErrorCode::MissingOptimizer, "report carries no optimizer");
  }
  check_dims(a, b, d);
  const CMatrix& x = *report.x_opt;
  const int n = a.dim();
  const auto split = split_omegas(d);
  const double tol = omega_tol(d);

  MinimizerCharacterization mc;
  std::vector<int> keep;
  std::vector<double> nonzero;
  for (int i = 0; i < d.dim(); ++i) {
    const double w = split.omegas[i];
    if (w > tol) {
      ++mc.ell_plus;
    } else if (w < -tol) {
      ++mc.ell_minus;
    } else {
      continue;
    }
    keep.push_back(i);
    nonzero.push_back(w);
  }
  mc.distinct_nonzero_omegas = true;
  for (std::size_t i = 1; i < nonzero.size(); ++i) {
    if (std::abs(nonzero[i] - nonzero[i - 1]) <= 1e-8 * (1.0 + d.max_abs())) {
      mc.distinct_nonzero_omegas = false;
    }
  }

  CMatrix qhat(d.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) qhat.col(j) = split.Q.col(keep[j]);
  const CMatrix xq = x * qhat;
  mc.compressed = xq.adjoint() * a.matrix() * xq;
  const auto m = mc.compressed.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    mc.diagonal.push_back(mc.compressed(i, i).real());
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) mc.off_diagonal_max = std::max(mc.off_diagonal_max, std::abs(mc.compressed(i, j)));
    }
  }

  const auto lambdas = pencil_eig_definite(a, b).lambdas;
  for (int i = 0; i < mc.ell_plus; ++i) mc.expected_diagonal.push_back(lambdas[i]);
  for (int i = n - mc.ell_minus; i < n; ++i) mc.expected_diagonal.push_back(lambdas[i]);
  mc.trace_value = objective(a, d, x);
  return mc;
}

}  // namespace tracemin
