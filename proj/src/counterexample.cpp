#include "tracemin/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tracemin {

namespace {

void check_point(double sigma, double tau) {
  if (!std::isfinite(sigma) || !std::isfinite(tau) || !(sigma > -1.0 && sigma < 1.0) ||
      !(tau >= 0.0)) {
    std::ostringstream msg;
    msg << "counterexample point (sigma=" << sigma << ", tau=" << tau
        << ") outside sigma in (-1,1), tau >= 0";
    throw Error(ErrorCode::DomainError, msg.str());
  }
}

}  // namespace

CounterexampleParams CounterexampleParams::make(double mu, double delta) {
  if (!std::isfinite(mu) || !std::isfinite(delta) || !(mu > 1.0) || !(delta > 0.0) ||
      !(delta < 1.0 / mu)) {
    std::ostringstream msg;
    msg << "need 0 < delta < 1/mu < 1 < mu, got mu=" << mu << ", delta=" << delta;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  CounterexampleParams p;
  p.mu = mu;
  p.delta = delta;
  p.gamma = (1.0 - delta) / (1.0 + delta);
  p.nu = (1.0 - mu) / (1.0 + mu);
  p.eta = std::sqrt((1.0 - p.gamma * p.gamma) / (1.0 - p.nu * p.nu));
  return p;
}

double counterexample_f(const CounterexampleParams& p, double sigma, double tau) {
  check_point(sigma, tau);
  const double c = std::sqrt(1.0 - sigma * sigma);
  const double h = std::sqrt(1.0 + tau * tau);
  return 1.0 + p.delta * p.mu +
         (1.0 + p.delta) * (1.0 + p.mu) *
             (tau * tau - p.gamma * p.nu * sigma * sigma - 2.0 * p.gamma * tau * sigma * c * h);
}

CounterexampleMatrices counterexample_matrices(const CounterexampleParams& p, double sigma,
                                               double tau) {
  check_point(sigma, tau);
  const double c = std::sqrt(1.0 - sigma * sigma);
  const double h = std::sqrt(1.0 + tau * tau);
  CounterexampleMatrices m;
  m.A = CMatrix::Zero(2, 2);
  m.A(0, 0) = 1.0;
  m.A(1, 1) = p.mu;
  m.B = CMatrix::Zero(2, 2);
  m.B(0, 0) = 1.0;
  m.B(1, 1) = -1.0;
  m.Q.resize(2, 2);
  m.Q << c, -sigma, sigma, c;
  CMatrix omega = CMatrix::Zero(2, 2);
  omega(0, 0) = 1.0;
  omega(1, 1) = p.delta;
  m.D = m.Q.adjoint() * omega * m.Q;
  m.Y.resize(2, 2);
  m.Y << h, tau, tau, h;
  return m;
}

double counterexample_trace(const CounterexampleParams& p, double sigma, double tau) {
  const auto m = counterexample_matrices(p, sigma, tau);
  return (m.D * m.Y.adjoint() * m.A * m.Y).trace().real();
}

std::pair<double, double> counterexample_gradient(const CounterexampleParams& p, double sigma,
                                                  double tau) {
  check_point(sigma, tau);
  const double c = std::sqrt(1.0 - sigma * sigma);
  const double h = std::sqrt(1.0 + tau * tau);
  const double k = (1.0 + p.delta) * (1.0 + p.mu);
  const double dtau = 2.0 * k * (tau - p.gamma * (1.0 + 2.0 * tau * tau) / h * sigma * c);
  const double dsigma =
      -2.0 * k * p.gamma * (p.nu * sigma + tau * h * (1.0 - 2.0 * sigma * sigma) / c);
  return {dsigma, dtau};
}

StationaryPoints counterexample_stationary(const CounterexampleParams& p) {
  StationaryPoints s;
  s.tau_star = std::sqrt(0.5 * (1.0 / p.eta - 1.0));
  const double sigma = std::sqrt(0.5 * ((p.nu / p.gamma) * p.eta + 1.0));
  s.sigma_star_plus = sigma;
  s.sigma_star_minus = -sigma;
  return s;
}

CounterexampleGap counterexample_gap(const CounterexampleParams& p) {
  CounterexampleGap g;
  g.points = counterexample_stationary(p);
  g.f_at_plus = counterexample_f(p, g.points.sigma_star_plus, g.points.tau_star);
  g.f_at_minus = counterexample_f(p, g.points.sigma_star_minus, g.points.tau_star);
  g.f_min = std::min(g.f_at_plus, g.f_at_minus);
  const double root_gap = std::sqrt(p.mu) - std::sqrt(p.delta);
  g.closed_form = 1.0 + p.delta * p.mu - root_gap * root_gap;
  g.bound = std::min(1.0 + p.delta * p.mu, p.mu + p.delta);
  g.margin = g.bound - g.f_min;
  return g;
}

}  // namespace tracemin
