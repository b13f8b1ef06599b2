#include "tracemin/solver.hpp"

#include <algorithm>
#include <cmath>

#include "tracemin/oracle.hpp"

namespace tracemin {

namespace {

constexpr const char* kDegenerateA = "degenerate_A";

void check_dims(const HermitianMatrix& a, const HermitianMatrix& b, int k) {
  if (a.dim() == 0 || a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "A and B must be nonempty and of equal size");
  }
  if (k < 1 || k > a.dim()) throw Error(ErrorCode::DimensionMismatch, "need 1 <= k <= n");
}

Inertia require_indefinite(const HermitianMatrix& b) {
  const Inertia in = inertia(b);
  if (in.n_plus == 0 || in.n_minus == 0) {
    throw Error(ErrorCode::InvalidInput,
                "indefinite solvers need B with both positive and negative eigenvalues");
  }
  return in;
}

void fill_pencil_diagnostics(SolveReport& r, const PsdPencilAnalysis& an) {
  r.diagnostics.inertia_b = an.inertia_b;
  r.diagnostics.lambda0 = an.lambda0;
  r.diagnostics.lambda_plus = an.lambda_plus;
  r.diagnostics.lambda_minus = an.lambda_minus;
  r.diagnostics.diagonalizable = an.diagonalizable;
  r.diagnostics.m0 = an.m0;
}

SolveReport degenerate_a_report(const HermitianMatrix& b, const ConstraintSpec& c, Route route,
                                const std::vector<double>& omegas, bool want_optimizer) {
  SolveReport r;
  r.route = route;
  r.finite = true;
  r.value = 0.0;
  r.attained = true;
  r.warnings.push_back(kDegenerateA);
  r.diagnostics.inertia_b = inertia(b);
  r.diagnostics.omegas = omegas;
  if (want_optimizer) r.x_opt = feasible_sample(b, c, 0);
  return r;
}

// Appends sign * sum omega_i * lambda_i with omegas descending against
// lambdas in the given order; returns the contribution.
double add_pairing(SolveReport& r, const std::vector<double>& omegas,
                   const std::vector<double>& lambdas, const char* role, double sign,
                   int omega_offset) {
  double v = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    PairingTerm t;
    t.omega = omegas[i];
    t.lambda = lambdas[i];
    t.omega_index = omega_offset + static_cast<int>(i) + 1;
    t.lambda_index = static_cast<int>(i) + 1;
    t.role = role;
    t.sign = sign;
    v += sign * t.omega * t.lambda;
    r.pairing.push_back(t);
  }
  return v;
}

// Columns V[:, :k] Q^H for the eigenvectors of one sign group.
CMatrix group_optimizer(const CMatrix& vecs, const CMatrix& q) {
  const auto k = q.rows();
  return vecs.leftCols(k) * q.adjoint();
}

SolveReport one_sided(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& d,
                      bool plus, bool want_optimizer) {
  const int k = d.dim();
  check_dims(a, b, k);
  const Inertia in = require_indefinite(b);
  const int available = plus ? in.n_plus : in.n_minus;
  if (k > available) {
    throw Error(ErrorCode::KTooLarge,
                "k=" + std::to_string(k) + " exceeds the " + (plus ? "positive" : "negative") +
                    " inertia " + std::to_string(available) + " of B");
  }
  const Route route = plus ? Route::IndefinitePlus : Route::IndefiniteMinus;
  const ConstraintSpec c = plus ? ConstraintSpec::plus_identity(k) : ConstraintSpec::minus_identity(k);
  const auto split = split_omegas(d);
  if (a.is_zero()) return degenerate_a_report(b, c, route, split.omegas, want_optimizer);

  const auto an = finite_eigenvalues(a, b);
  SolveReport r;
  r.route = route;
  fill_pencil_diagnostics(r, an);
  r.diagnostics.omegas = split.omegas;
  if (!check_finiteness(d)) {
    r.finite = false;
    r.attained = false;
    return r;
  }
  const auto& lambdas = plus ? an.lambda_plus : an.lambda_minus;
  r.value = add_pairing(r, split.omegas, lambdas, plus ? "lambda_plus" : "lambda_minus",
                        plus ? 1.0 : -1.0, 0);
  r.attained = an.diagonalizable;
  if (want_optimizer && r.attained) {
    r.x_opt = group_optimizer(plus ? *an.eigvecs_plus : *an.eigvecs_minus, split.Q);
  }
  return r;
}

}  // namespace

bool check_finiteness(const HermitianMatrix& d) {
  if (d.dim() == 0) return true;
  return eigenvalues(d).back() >= -1e-10 * (1.0 + d.max_abs());
}

SolveReport solve_indefinite_plus(const HermitianMatrix& a, const HermitianMatrix& b,
                                  const HermitianMatrix& d, bool want_optimizer) {
  return one_sided(a, b, d, true, want_optimizer);
}

SolveReport solve_indefinite_minus(const HermitianMatrix& a, const HermitianMatrix& b,
                                   const HermitianMatrix& d, bool want_optimizer) {
  return one_sided(a, b, d, false, want_optimizer);
}

SolveReport solve_signature(const HermitianMatrix& a, const HermitianMatrix& b,
                            const HermitianMatrix& d_plus, const HermitianMatrix& d_minus,
                            bool want_optimizer) {
  const int kp = d_plus.dim();
  const int km = d_minus.dim();
  if (km == 0) return solve_indefinite_plus(a, b, d_plus, want_optimizer);
  if (kp == 0) return solve_indefinite_minus(a, b, d_minus, want_optimizer);
  check_dims(a, b, kp + km);
  const Inertia in = require_indefinite(b);
  if (kp > in.n_plus || km > in.n_minus) {
    throw Error(ErrorCode::KTooLarge, "signature split (" + std::to_string(kp) + "," +
                                          std::to_string(km) + ") exceeds the inertia of B");
  }
  if (!check_finiteness(d_plus) || !check_finiteness(d_minus)) {
    throw Error(ErrorCode::UnsupportedRoute,
                "signature constraint with D_plus or D_minus not positive semi-definite has no "
                "eigenvalue-product formula");
  }
  const auto sp = split_omegas(d_plus);
  const auto sm = split_omegas(d_minus);
  std::vector<double> omegas = sp.omegas;
  omegas.insert(omegas.end(), sm.omegas.begin(), sm.omegas.end());
  const ConstraintSpec c = ConstraintSpec::signature(kp, km);
  if (a.is_zero()) {
    return degenerate_a_report(b, c, Route::IndefiniteSignature, omegas, want_optimizer);
  }

  const auto an = finite_eigenvalues(a, b);
  SolveReport r;
  r.route = Route::IndefiniteSignature;
  fill_pencil_diagnostics(r, an);
  r.diagnostics.omegas = omegas;
  double value = add_pairing(r, sp.omegas, an.lambda_plus, "lambda_plus", 1.0, 0);
  value += add_pairing(r, sm.omegas, an.lambda_minus, "lambda_minus", -1.0, kp);
  r.value = value;
  r.attained = an.diagonalizable;
  if (want_optimizer && r.attained) {
    CMatrix x(a.dim(), kp + km);
    x.leftCols(kp) = group_optimizer(*an.eigvecs_plus, sp.Q);
    x.rightCols(km) = group_optimizer(*an.eigvecs_minus, sm.Q);
    r.x_opt = x;
  }
  return r;
}

SolveReport solve_signature(const HermitianMatrix& a, const HermitianMatrix& b,
                            const HermitianMatrix& d, int k_plus, int k_minus,
                            bool want_optimizer) {
  if (k_plus < 0 || k_minus < 0 || k_plus + k_minus != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "D must be (k_plus + k_minus) square");
  }
  const CMatrix& m = d.matrix();
  const double coupling = max_abs(CMatrix(m.topRightCorner(k_plus, k_minus)));
  if (coupling > 1e-10 * d.max_abs()) {
    throw Error(ErrorCode::BlockStructureViolated,
                "D couples the plus and minus column groups (max coupling " +
                    std::to_string(coupling) +
                    "); for such D the infimum may not be expressible as a sum of eigenvalue "
                    "products, see the two-by-two counterexample (tracemin counterexample)");
  }
  const HermitianMatrix dp(CMatrix(m.topLeftCorner(k_plus, k_plus)));
  const HermitianMatrix dm(CMatrix(m.bottomRightCorner(k_minus, k_minus)));
  return solve_signature(a, b, dp, dm, want_optimizer);
}

SolveReport solve(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& d,
                  const ConstraintSpec& constraint, Sense sense, bool want_optimizer) {
  constraint.validate();
  if (d.dim() != constraint.k) throw Error(ErrorCode::DimensionMismatch, "D must be k x k");
  check_dims(a, b, constraint.k);
  const Inertia in = inertia(b);
  const int n = b.dim();
  const auto infeasible = [&](const std::string& why) {
    return Error(ErrorCode::InfeasibleConstraint, why);
  };

  if (in.n_plus == n) {
    if (constraint.k_minus > 0) {
      throw infeasible("B is positive definite, so X^H B X cannot have negative eigenvalues");
    }
    return sense == Sense::Min ? solve_definite_min(a, b, d, want_optimizer)
                               : solve_definite_max(a, b, d, want_optimizer);
  }
  if (in.n_minus == n) {
    if (constraint.k_plus > 0) {
      throw infeasible("B is negative definite, so X^H B X cannot have positive eigenvalues");
    }
    const HermitianMatrix nb = -b;
    SolveReport r = sense == Sense::Min ? solve_definite_min(a, nb, d, want_optimizer)
                                        : solve_definite_max(a, nb, d, want_optimizer);
    r.route = Route::DefiniteNegatedB;
    r.diagnostics.inertia_b = in;
    return r;
  }
  if (in.n_plus == 0 || in.n_minus == 0) {
    if (constraint.k_plus > in.n_plus || constraint.k_minus > in.n_minus) {
      throw infeasible("constraint needs more signed directions than B provides");
    }
    throw Error(ErrorCode::UnsupportedRoute,
                "singular semi-definite B is not covered by the analytic solvers");
  }
  if (sense == Sense::Max) {
    throw Error(ErrorCode::UnsupportedSense,
                "maximization with indefinite B has no analytic result; only the infimum is solved");
  }
  switch (constraint.kind) {
    case ConstraintKind::PlusIdentity: return solve_indefinite_plus(a, b, d, want_optimizer);
    case ConstraintKind::MinusIdentity: return solve_indefinite_minus(a, b, d, want_optimizer);
    case ConstraintKind::Signature:
      return solve_signature(a, b, d, constraint.k_plus, constraint.k_minus, want_optimizer);
  }
  throw Error(ErrorCode::InvalidInput, "unknown constraint kind");
}

EpsilonResult epsilon_suboptimal(const HermitianMatrix& a, const HermitianMatrix& b,
                                 const HermitianMatrix& d, const ConstraintSpec& constraint,
                                 double eps, std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidInput, "eps must be positive and finite");
  }
  const SolveReport rep = solve(a, b, d, constraint, Sense::Min, true);
  EpsilonResult out;
  if (rep.attained && rep.x_opt) {
    out.X = *rep.x_opt;
    out.objective = objective(a, d, out.X);
    out.residual = constraint_residual(out.X, b, constraint);
    out.from_optimizer = true;
    return out;
  }
  OracleOptions opt;
  opt.restarts = 10;
  opt.iters = 5000;
  opt.seed = seed;
  opt.target = rep.finite ? *rep.value + eps : divergence_threshold(a, d);
  const OracleResult res = local_search(a, b, d, constraint, opt);
  // Two first-order steps of X <- X (C X^H B X)^{-1/2} remove the drift the
  // descent leaves behind.
  const CMatrix c = constraint.matrix();
  out.X = res.best_X;
  for (int i = 0; i < 2; ++i) {
    const CMatrix g = out.X.adjoint() * b.matrix() * out.X;
    out.X = out.X * (CMatrix::Identity(c.rows(), c.cols()) - 0.5 * c * (g - c));
  }
  out.objective = objective(a, d, out.X);
  out.residual = constraint_residual(out.X, b, constraint);
  out.iterations = res.iterations;
  // Far out on an unbounded problem X^H B X cannot be formed to better than
  // a few ulps of |X|^2 |B|.
  const double tol =
      rep.finite ? 1e-8 : std::max(1e-8, 1e-13 * out.X.squaredNorm() * b.max_abs());
  if (out.objective > *opt.target) {
    throw Error(ErrorCode::BudgetExceeded,
                "search stopped at objective " + std::to_string(out.objective) +
                    " above the target " + std::to_string(*opt.target));
  }
  if (!(out.residual <= tol)) {
    throw Error(ErrorCode::BudgetExceeded,
                "search point is infeasible: residual " + std::to_string(out.residual));
  }
  return out;
}

}  // namespace tracemin
