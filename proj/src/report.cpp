#include "tracemin/report.hpp"

namespace tracemin {

ConstraintSpec ConstraintSpec::plus_identity(int k) {
  ConstraintSpec c;
  c.kind = ConstraintKind::PlusIdentity;
  c.k = k;
  c.k_plus = k;
  c.validate();
  return c;
}

ConstraintSpec ConstraintSpec::minus_identity(int k) {
  ConstraintSpec c;
  c.kind = ConstraintKind::MinusIdentity;
  c.k = k;
  c.k_minus = k;
  c.validate();
  return c;
}

ConstraintSpec ConstraintSpec::signature(int k_plus, int k_minus) {
  ConstraintSpec c;
  c.kind = ConstraintKind::Signature;
  c.k = k_plus + k_minus;
  c.k_plus = k_plus;
  c.k_minus = k_minus;
  c.validate();
  return c;
}

void ConstraintSpec::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "constraint needs k >= 1");
  if (k_plus < 0 || k_minus < 0 || k_plus + k_minus != k) {
    throw Error(ErrorCode::InvalidInput, "constraint split must satisfy k = k_plus + k_minus");
  }
  if (kind == ConstraintKind::PlusIdentity && k_minus != 0) {
    throw Error(ErrorCode::InvalidInput, "plus_identity constraint has no minus columns");
  }
  if (kind == ConstraintKind::MinusIdentity && k_plus != 0) {
    throw Error(ErrorCode::InvalidInput, "minus_identity constraint has no plus columns");
  }
}

std::vector<double> ConstraintSpec::signs() const {
  std::vector<double> s(k_plus, 1.0);
  s.insert(s.end(), k_minus, -1.0);
  return s;
}

CMatrix ConstraintSpec::matrix() const {
  const auto s = signs();
  CMatrix c = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) c(i, i) = s[i];
  return c;
}

std::string_view constraint_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::PlusIdentity: return "plus_identity";
    case ConstraintKind::MinusIdentity: return "minus_identity";
    case ConstraintKind::Signature: return "signature";
  }
  return "unknown";
}

std::string_view route_name(Route route) {
  switch (route) {
    case Route::DefiniteMin: return "definite-min";
    case Route::DefiniteMax: return "definite-max";
    case Route::DefiniteNegatedB: return "definite-negated-b";
    case Route::IndefinitePlus: return "indefinite-plus";
    case Route::IndefiniteMinus: return "indefinite-minus";
    case Route::IndefiniteSignature: return "indefinite-signature";
  }
  return "unknown";
}

double SolveReport::pairing_sum() const {
  double s = 0.0;
  for (const auto& t : pairing) s += t.sign * t.omega * t.lambda;
  return s;
}

double constraint_residual(const CMatrix& x, const HermitianMatrix& b, const ConstraintSpec& c) {
  if (x.rows() != b.dim() || x.cols() != c.k) {
    throw Error(ErrorCode::DimensionMismatch, "constraint_residual: shape mismatch");
  }
  return max_abs(x.adjoint() * b.matrix() * x - c.matrix());
}

double objective(const HermitianMatrix& a, const HermitianMatrix& d, const CMatrix& x) {
  if (x.rows() != a.dim() || x.cols() != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "objective: shape mismatch");
  }
  return (d.matrix() * x.adjoint() * a.matrix() * x).trace().real();
}

}  // namespace tracemin
