#pragma once

// Two-by-two signature problem whose D is not block diagonal:
//   A = diag(1, mu), B = J_2 = diag(1, -1), D = Q^H diag(1, delta) Q,
// restricted to the hyperbolic family Y(tau). Its infimum undercuts both
// eigenvalue-product sums 1 + delta*mu and mu + delta.

#include "tracemin/spectral.hpp"

namespace tracemin {

struct CounterexampleParams {
  double mu = 0.0;
  double delta = 0.0;
  double gamma = 0.0;  // (1 - delta) / (1 + delta)
  double nu = 0.0;     // (1 - mu) / (1 + mu)
  double eta = 0.0;    // sqrt((1 - gamma^2) / (1 - nu^2))

  /// Throws Error(DomainError) unless 0 < delta < 1/mu < 1 < mu.
  static CounterexampleParams make(double mu, double delta);
};

/// f(sigma, tau) = 1 + delta*mu + (1+delta)(1+mu) *
///   [tau^2 - gamma*nu*sigma^2 - 2*gamma*tau*sigma*sqrt(1-sigma^2)*sqrt(1+tau^2)].
/// Requires sigma in (-1, 1) and tau >= 0.
double counterexample_f(const CounterexampleParams& p, double sigma, double tau);

struct CounterexampleMatrices {
  CMatrix A;
  CMatrix B;
  CMatrix Q;
  CMatrix D;
  CMatrix Y;  // [[sqrt(1+tau^2), tau], [tau, sqrt(1+tau^2)]]
};

CounterexampleMatrices counterexample_matrices(const CounterexampleParams& p, double sigma,
                                               double tau);

/// tr(D Y^H A Y) by explicit matrix products.
double counterexample_trace(const CounterexampleParams& p, double sigma, double tau);

/// (df/dsigma, df/dtau) from the closed-form partial derivatives.
std::pair<double, double> counterexample_gradient(const CounterexampleParams& p, double sigma,
                                                  double tau);

struct StationaryPoints {
  double tau_star = 0.0;
  double sigma_star_minus = 0.0;  // negative root
  double sigma_star_plus = 0.0;   // positive root
};

/// tau*^2 = (1/eta - 1) / 2, sigma*^2 = ((nu/gamma) * eta + 1) / 2.
StationaryPoints counterexample_stationary(const CounterexampleParams& p);

struct CounterexampleGap {
  StationaryPoints points;
  double f_at_plus = 0.0;    // f(sigma*^+, tau*) = 2 sqrt(delta*mu), the stationary minimum
  double f_at_minus = 0.0;   // f(sigma*^-, tau*), evaluated
  double f_min = 0.0;        // min of the two
  double closed_form = 0.0;  // 1 + delta*mu - (sqrt(mu) - sqrt(delta))^2
  double bound = 0.0;        // min(1 + delta*mu, mu + delta)
  double margin = 0.0;       // bound - f_min
};

CounterexampleGap counterexample_gap(const CounterexampleParams& p);

}  // namespace tracemin
