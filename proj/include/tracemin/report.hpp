#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tracemin/spectral.hpp"

namespace tracemin {

enum class ConstraintKind { PlusIdentity, MinusIdentity, Signature };

/// X^H B X = I_k, -I_k, or diag(I_{k_plus}, -I_{k_minus}).
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::PlusIdentity;
  int k = 0;
  int k_plus = 0;
  int k_minus = 0;

  static ConstraintSpec plus_identity(int k);
  static ConstraintSpec minus_identity(int k);
  static ConstraintSpec signature(int k_plus, int k_minus);

  /// Diagonal of the right-hand side, plus entries first.
  std::vector<double> signs() const;
  CMatrix matrix() const;
  void validate() const;
};

std::string_view constraint_name(ConstraintKind kind);

enum class Sense { Min, Max };

enum class Route {
  DefiniteMin,
  DefiniteMax,
  DefiniteNegatedB,
  IndefinitePlus,
  IndefiniteMinus,
  IndefiniteSignature,
};

std::string_view route_name(Route route);

/// One product omega * lambda contributing sign * omega * lambda to the value.
struct PairingTerm {
  double omega = 0.0;
  double lambda = 0.0;
  int omega_index = 0;   // 1-based, omegas descending
  int lambda_index = 0;  // 1-based within its list
  std::string role;      // "lambda", "lambda_plus" or "lambda_minus"
  double sign = 1.0;
};

struct SolveDiagnostics {
  Inertia inertia_b;
  std::vector<double> omegas;          // descending (D, or D_plus then D_minus)
  std::vector<double> lambdas;         // definite route, ascending
  std::vector<double> lambda_plus;     // indefinite routes, ascending
  std::vector<double> lambda_minus;    // indefinite routes, descending
  std::optional<double> lambda0;
  std::optional<bool> diagonalizable;
  int m0 = 0;
  int ell = 0;                         // count of nonnegative omegas (definite)
};

struct SolveReport {
  bool finite = true;
  std::optional<double> value;
  bool attained = false;
  std::optional<CMatrix> x_opt;
  std::vector<PairingTerm> pairing;
  Route route = Route::DefiniteMin;
  std::vector<std::string> warnings;
  SolveDiagnostics diagnostics;

  /// Sum of sign * omega * lambda over the pairing.
  double pairing_sum() const;
};

/// max |X^H B X - C|.
double constraint_residual(const CMatrix& x, const HermitianMatrix& b, const ConstraintSpec& c);

/// Re tr(D X^H A X).
double objective(const HermitianMatrix& a, const HermitianMatrix& d, const CMatrix& x);

}  // namespace tracemin
