#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "support/instances.hpp"
#include "tracemin/solver.hpp"

using namespace tracemin;
using namespace tracemin::testing;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) { return HermitianMatrix::diagonal(d); }

HermitianMatrix direct_sum(const HermitianMatrix& x, const HermitianMatrix& y) {
  CMatrix m = CMatrix::Zero(x.dim() + y.dim(), x.dim() + y.dim());
  m.topLeftCorner(x.dim(), x.dim()) = x.matrix();
  m.bottomRightCorner(y.dim(), y.dim()) = y.matrix();
  return HermitianMatrix(m);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

HermitianMatrix random_psd(int k, Rng& rng) {
  if (k == 0) return HermitianMatrix::zero(0);
  std::vector<double> w(k);
  for (auto& x : w) x = uniform(rng, 0.0, 2.0);
  return hermitian_with_spectrum(w, rng);
}

CanonicalPencil diagonalizable_pencil(Rng& rng) {
  CanonicalShape s;
  s.p = uniform_int(rng, 1, 3);
  s.q = uniform_int(rng, 1, 3);
  s.z = uniform_int(rng, 0, 6 - s.p - s.q);
  return canonical_pencil(s, rng);
}

const HermitianMatrix kLambda0 = HermitianMatrix::from_real((Eigen::MatrixXd(2, 2) << 0, 0, 0, 1).finished());
const HermitianMatrix kF2 = HermitianMatrix::from_real((Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());

}  // namespace

TEST(CheckFinitenessTest, Examples) {
  EXPECT_TRUE(check_finiteness(diag({1, 0})));
  EXPECT_FALSE(check_finiteness(diag({1, -0.1})));
  EXPECT_TRUE(check_finiteness(HermitianMatrix::zero(2)));
}

TEST(SolveIndefinitePlusTest, Examples) {
  auto r = solve_indefinite_plus(diag({1, 2}), diag({1, -1}), diag({2}), true);
  EXPECT_EQ(r.route, Route::IndefinitePlus);
  EXPECT_NEAR(*r.value, 2.0, 1e-10);
  EXPECT_TRUE(r.attained);
  EXPECT_LE(constraint_residual(*r.x_opt, diag({1, -1}), ConstraintSpec::plus_identity(1)), 1e-8);

  const auto a = diag({1, 2, 5});
  const auto b = diag({1, 1, -1});
  r = solve_indefinite_plus(a, b, diag({2, 1}), true);
  ASSERT_EQ(r.diagnostics.lambda_plus.size(), 2u);
  EXPECT_NEAR(r.diagnostics.lambda_plus[0], 1.0, 1e-10);
  EXPECT_NEAR(r.diagnostics.lambda_plus[1], 2.0, 1e-10);
  EXPECT_NEAR(*r.value, 4.0, 1e-10);
  EXPECT_NEAR(objective(a, diag({2, 1}), *r.x_opt), 4.0, 1e-9);

  r = solve_indefinite_plus(diag({1, 2}), diag({1, -1}), diag({-1}), true);
  EXPECT_FALSE(r.finite);
  EXPECT_FALSE(r.value.has_value());
  EXPECT_FALSE(r.attained);
  EXPECT_FALSE(r.x_opt.has_value());
}

TEST(SolveIndefiniteMinusTest, Examples) {
  const auto a = diag({1, 2, 5});
  const auto b = diag({1, 1, -1});
  auto r = solve_indefinite_minus(a, b, diag({1}), true);
  EXPECT_EQ(r.route, Route::IndefiniteMinus);
  EXPECT_NEAR(*r.value, 5.0, 1e-10);
  EXPECT_LE(constraint_residual(*r.x_opt, b, ConstraintSpec::minus_identity(1)), 1e-8);
  EXPECT_NEAR(objective(a, diag({1}), *r.x_opt), 5.0, 1e-9);

  r = solve_indefinite_minus(a, b, diag({0}), false);
  EXPECT_NEAR(*r.value, 0.0, 1e-15);
  r = solve_indefinite_minus(a, b, diag({-1}), false);
  EXPECT_FALSE(r.finite);
}

TEST(SolveSignatureTest, Examples) {
  const auto a = diag({1, 2, 5});
  const auto b = diag({1, 1, -1});
  auto r = solve_signature(a, b, diag({2}), diag({3}), true);
  EXPECT_EQ(r.route, Route::IndefiniteSignature);
  EXPECT_NEAR(*r.value, 17.0, 1e-9);
  EXPECT_LE(constraint_residual(*r.x_opt, b, ConstraintSpec::signature(1, 1)), 1e-8);
  EXPECT_NEAR(objective(a, direct_sum(diag({2}), diag({3})), *r.x_opt), 17.0, 1e-8);

  const auto plus = solve_indefinite_plus(a, b, diag({2, 1}), false);
  r = solve_signature(a, b, diag({2, 1}), HermitianMatrix::zero(0), false);
  EXPECT_EQ(r.route, Route::IndefinitePlus);
  EXPECT_EQ(*r.value, *plus.value);

  r = solve_signature(a, b, HermitianMatrix::zero(1), HermitianMatrix::zero(1), false);
  EXPECT_NEAR(*r.value, 0.0, 1e-15);
}

TEST(SolveSignatureTest, FullDGuards) {
  const auto a = diag({1, 2});
  const auto b = diag({1, -1});
  CMatrix d(2, 2);
  d << 0.8125, Complex(-0.3, 0.1), Complex(-0.3, -0.1), 0.4375;
  EXPECT_EQ(code_of([&] { solve_signature(a, b, HermitianMatrix(d), 1, 1, false); }),
            ErrorCode::BlockStructureViolated);
  try {
    solve_signature(a, b, HermitianMatrix(d), 1, 1, false);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("counterexample"), std::string::npos);
  }
  const auto r = solve_signature(a, b, diag({2, 3}), 1, 1, false);
  EXPECT_NEAR(*r.value, 2.0 * 1.0 - 3.0 * (-2.0), 1e-9);
  EXPECT_EQ(code_of([&] { solve_signature(a, b, diag({-1}), diag({1}), false); }),
            ErrorCode::UnsupportedRoute);
}

TEST(SolveDispatchTest, Routes) {
  auto r = solve(diag({1, 2, 3}), HermitianMatrix::identity(3), HermitianMatrix::identity(2),
                 ConstraintSpec::plus_identity(2), Sense::Min, false);
  EXPECT_EQ(r.route, Route::DefiniteMin);
  EXPECT_NEAR(*r.value, 3.0, 1e-14);

  r = solve(diag({1, 2}), diag({1, -1}), diag({1}), ConstraintSpec::plus_identity(1), Sense::Min, false);
  EXPECT_EQ(r.route, Route::IndefinitePlus);
  EXPECT_NEAR(*r.value, 1.0, 1e-10);

  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2}), diag({1, -1}), diag({1}), ConstraintSpec::plus_identity(1), Sense::Max,
                    false);
            }),
            ErrorCode::UnsupportedSense);

  r = solve(diag({1, 2, 3}), -HermitianMatrix::identity(3), HermitianMatrix::identity(2),
            ConstraintSpec::minus_identity(2), Sense::Min, true);
  EXPECT_EQ(r.route, Route::DefiniteNegatedB);
  EXPECT_NEAR(*r.value, 3.0, 1e-14);
  EXPECT_LE(constraint_residual(*r.x_opt, -HermitianMatrix::identity(3), ConstraintSpec::minus_identity(2)),
            1e-12);

  r = solve(diag({1, 2, 3}), HermitianMatrix::identity(3), HermitianMatrix::identity(2),
            ConstraintSpec::plus_identity(2), Sense::Max, false);
  EXPECT_EQ(r.route, Route::DefiniteMax);
  EXPECT_NEAR(*r.value, 5.0, 1e-14);
}

TEST(SolveDispatchTest, Errors) {
  const auto i3 = HermitianMatrix::identity(3);
  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2, 3}), i3, diag({1, 1}), ConstraintSpec::signature(1, 1), Sense::Min, false);
            }),
            ErrorCode::InfeasibleConstraint);
  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2, 3}), diag({1, 1, 0}), diag({1, 1, 1}), ConstraintSpec::plus_identity(3),
                    Sense::Min, false);
            }),
            ErrorCode::InfeasibleConstraint);
  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2, 3}), diag({1, 1, 0}), diag({1}), ConstraintSpec::plus_identity(1),
                    Sense::Min, false);
            }),
            ErrorCode::UnsupportedRoute);
  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2, 5}), diag({1, 1, -1}), diag({1, 1}), ConstraintSpec::minus_identity(2),
                    Sense::Min, false);
            }),
            ErrorCode::KTooLarge);
  EXPECT_EQ(error_code_name(ErrorCode::KTooLarge), "INFEASIBLE_CONSTRAINT");
  EXPECT_EQ(code_of([&] {
              solve(diag({1, 2}), diag({1, -1}), diag({1, 1}), ConstraintSpec::plus_identity(1), Sense::Min,
                    false);
            }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] {
              solve(HermitianMatrix::from_real((Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished()),
                    diag({1, -1}), diag({1}), ConstraintSpec::plus_identity(1), Sense::Min, false);
            }),
            ErrorCode::NotPsdPencil);
}

TEST(SolveDispatchTest, ZeroA) {
  const auto b = diag({1, -1, 2});
  const auto r = solve(HermitianMatrix::zero(3), b, diag({3, -1}), ConstraintSpec::plus_identity(2),
                       Sense::Min, true);
  EXPECT_EQ(*r.value, 0.0);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0], "degenerate_A");
  EXPECT_LE(constraint_residual(*r.x_opt, b, ConstraintSpec::plus_identity(2)), 1e-8);
}

TEST(SolveDispatchTest, JordanNotAttained) {
  const auto a = direct_sum(kLambda0, diag({1, 2}));
  const auto b = direct_sum(kF2, diag({1, -1}));
  const auto r = solve(a, b, diag({1}), ConstraintSpec::plus_identity(1), Sense::Min, true);
  EXPECT_TRUE(r.finite);
  EXPECT_FALSE(r.attained);
  EXPECT_FALSE(r.x_opt.has_value());
  EXPECT_NEAR(*r.value, 0.0, 1e-8);
  EXPECT_EQ(r.diagnostics.m0, 1);
  EXPECT_EQ(r.diagnostics.diagonalizable, false);
}

TEST(EpsilonSuboptimalTest, AttainedInstanceReturnsOptimizer) {
  const auto a = diag({1, 2, 5});
  const auto b = diag({1, 1, -1});
  const auto e = epsilon_suboptimal(a, b, diag({2, 1}), ConstraintSpec::plus_identity(2), 1e-6, 0);
  EXPECT_TRUE(e.from_optimizer);
  EXPECT_NEAR(e.objective, 4.0, 1e-9);
  EXPECT_LE(e.residual, 1e-8);
}

TEST(EpsilonSuboptimalTest, JordanInstanceReachesTolerance) {
  const auto a = direct_sum(kLambda0, diag({1, 2}));
  const auto b = direct_sum(kF2, diag({1, -1}));
  const auto c = ConstraintSpec::plus_identity(1);
  const auto e = epsilon_suboptimal(a, b, diag({1}), c, 1e-2, 7);
  EXPECT_FALSE(e.from_optimizer);
  EXPECT_LE(e.objective, 1e-2);
  EXPECT_GE(e.objective, -1e-8);
  EXPECT_LE(e.residual, 1e-8);
  EXPECT_NEAR(objective(a, diag({1}), e.X), e.objective, 1e-9);
  EXPECT_LE(constraint_residual(e.X, b, c), 1e-8);
}

TEST(EpsilonSuboptimalTest, LargeEpsAndUnbounded) {
  const auto a = diag({1, 2});
  const auto b = diag({1, -1});
  auto e = epsilon_suboptimal(a, b, diag({1}), ConstraintSpec::plus_identity(1), 10.0, 0);
  EXPECT_LE(e.objective, 1.0 + 10.0);
  e = epsilon_suboptimal(a, b, diag({-1}), ConstraintSpec::plus_identity(1), 1.0, 0);
  EXPECT_LT(e.objective, -1e6);
  EXPECT_LE(constraint_residual(e.X, b, ConstraintSpec::plus_identity(1)), 1e-8);
  EXPECT_EQ(code_of([&] { epsilon_suboptimal(a, b, diag({1}), ConstraintSpec::plus_identity(1), 0.0, 0); }),
            ErrorCode::InvalidInput);
}

TEST(IndefiniteProperties, PairingDirectionIsOptimal) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cp = diagonalizable_pencil(rng);
    const int k = uniform_int(rng, 1, std::min(3, cp.n_plus));
    const auto d = random_psd(k, rng);
    const auto r = solve_indefinite_plus(cp.a, cp.b, d, false);
    const auto [lo, hi] = permutation_extremes(eigenvalues(d), r.diagnostics.lambda_plus);
    EXPECT_NEAR(*r.value, lo, 1e-9 * (1 + std::abs(lo)));

    const int km = uniform_int(rng, 1, std::min(3, cp.n_minus));
    const auto dm = random_psd(km, rng);
    const auto rm = solve_indefinite_minus(cp.a, cp.b, dm, false);
    std::vector<double> neg;
    for (double l : rm.diagnostics.lambda_minus) neg.push_back(-l);
    const auto [lo_m, hi_m] = permutation_extremes(eigenvalues(dm), neg);
    EXPECT_NEAR(*rm.value, lo_m, 1e-9 * (1 + std::abs(lo_m)));
  }
}

TEST(IndefiniteProperties, OptimizerValidity) {
  Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cp = diagonalizable_pencil(rng);
    const int kp = uniform_int(rng, 0, std::min(3, cp.n_plus));
    const int km = uniform_int(rng, kp == 0 ? 1 : 0, std::min(3, cp.n_minus));
    const auto dp = random_psd(kp, rng);
    const auto dm = random_psd(km, rng);
    const auto r = solve_signature(cp.a, cp.b, dp, dm, true);
    ASSERT_TRUE(r.attained);
    ASSERT_TRUE(r.x_opt.has_value());
    const auto c = km == 0 ? ConstraintSpec::plus_identity(kp)
                   : kp == 0 ? ConstraintSpec::minus_identity(km)
                             : ConstraintSpec::signature(kp, km);
    EXPECT_LE(constraint_residual(*r.x_opt, cp.b, c), 1e-8);
    EXPECT_NEAR(objective(cp.a, direct_sum(dp, dm), *r.x_opt), *r.value, 1e-7 * (1 + std::abs(*r.value)));
  }
}

TEST(IndefiniteProperties, SumRule) {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cp = diagonalizable_pencil(rng);
    const auto dp = random_psd(uniform_int(rng, 1, std::min(3, cp.n_plus)), rng);
    const auto dm = random_psd(uniform_int(rng, 1, std::min(3, cp.n_minus)), rng);
    const double s = *solve_signature(cp.a, cp.b, dp, dm, false).value;
    const double p = *solve_indefinite_plus(cp.a, cp.b, dp, false).value;
    const double m = *solve_indefinite_minus(cp.a, cp.b, dm, false).value;
    EXPECT_NEAR(s, p + m, 1e-9 * (1 + std::abs(s)));
  }
}

TEST(IndefiniteProperties, ShiftRule) {
  Rng rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cp = diagonalizable_pencil(rng);
    const auto dp = random_psd(uniform_int(rng, 1, std::min(3, cp.n_plus)), rng);
    const auto dm = random_psd(uniform_int(rng, 1, std::min(3, cp.n_minus)), rng);
    const double shift = uniform(rng, -2, 2);
    const auto as = cp.a + shift * cp.b;
    const double tp = dp.matrix().trace().real();
    const double tm = dm.matrix().trace().real();
    EXPECT_NEAR(*solve_indefinite_plus(as, cp.b, dp, false).value,
                *solve_indefinite_plus(cp.a, cp.b, dp, false).value + shift * tp, 1e-8);
    EXPECT_NEAR(*solve_indefinite_minus(as, cp.b, dm, false).value,
                *solve_indefinite_minus(cp.a, cp.b, dm, false).value - shift * tm, 1e-8);
    EXPECT_NEAR(*solve_signature(as, cp.b, dp, dm, false).value,
                *solve_signature(cp.a, cp.b, dp, dm, false).value + shift * (tp - tm), 1e-8);
  }
}

TEST(IndefiniteProperties, CongruenceInvariance) {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cp = diagonalizable_pencil(rng);
    const int n = cp.a.dim();
    const auto dp = random_psd(1, rng);
    const auto dm = random_psd(1, rng);
    const CMatrix t = CMatrix::Identity(n, n) + random_complex(n, n, rng, 0.2);
    const double v = *solve_signature(cp.a, cp.b, dp, dm, false).value;
    const double vt = *solve_signature(cp.a.congruence(t), cp.b.congruence(t), dp, dm, false).value;
    EXPECT_NEAR(vt, v, 1e-6 * (1 + std::abs(v)));
  }
}
