#include "tracemin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

namespace tracemin {

namespace {

constexpr int kMaxDraws = 20;
constexpr int kMaxHalvings = 30;
constexpr int kHistory = 5;
constexpr double kArmijo = 1e-4;

CMatrix gaussian(int rows, int cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, scale / std::sqrt(2.0));
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(nd(rng), nd(rng));
  }
  return m;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix g = gaussian(n, n, 1.0, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

// Principal square root of a Hermitian positive semi-definite matrix.
CMatrix herm_sqrt(const CMatrix& m) {
  if (m.rows() == 0) return m;
  const auto eig = eig_herm(herm(m));
  RVector s(m.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::sqrt(std::max(eig.values[i], 0.0));
  return eig.vectors * s.asDiagonal() * eig.vectors.adjoint();
}

// Problem in the coordinates X = F * Xi of an inertia frame.
struct FrameProblem {
  InertiaFrame frame;
  CMatrix a;           // F^H A F
  CMatrix d;
  RVector j;           // diagonal of F^H B F
  RVector j2;          // j .* j
  std::vector<double> c;
  bool all_plus = false;
  bool all_minus = false;
};

Eigen::Index rows_of(const InertiaFrame& f) { return f.n_plus + f.n_minus + f.n_zero; }

CMatrix sample_xi(const InertiaFrame& frame, const ConstraintSpec& c, std::mt19937_64& rng) {
  HyperbolicFactorization h;
  h.W = gaussian(frame.n_plus, frame.n_minus, 0.5, rng);
  h.V_plus = random_unitary(frame.n_plus, rng);
  h.V_minus = random_unitary(frame.n_minus, rng);
  const CMatrix core = compose_hyperbolic(h);
  CMatrix xi = CMatrix::Zero(rows_of(frame), c.k);
  const int r = frame.n_plus + frame.n_minus;
  for (int j = 0; j < c.k_plus; ++j) xi.col(j).head(r) = core.col(j);
  for (int j = 0; j < c.k_minus; ++j) xi.col(c.k_plus + j).head(r) = core.col(frame.n_plus + j);
  if (frame.n_zero > 0) xi.bottomRows(frame.n_zero) = gaussian(frame.n_zero, c.k, 0.5, rng);
  return xi;
}

void check_host(const InertiaFrame& frame, const ConstraintSpec& c) {
  if (c.k_plus > frame.n_plus || c.k_minus > frame.n_minus) {
    throw Error(ErrorCode::InfeasibleConstraint,
                "constraint needs " + std::to_string(c.k_plus) + " positive and " +
                    std::to_string(c.k_minus) + " negative directions of B, which has inertia (" +
                    std::to_string(frame.n_plus) + "," + std::to_string(frame.n_zero) + "," +
                    std::to_string(frame.n_minus) + ")");
  }
}

FrameProblem make_frame_problem(const HermitianMatrix& a, const HermitianMatrix& b,
                                const HermitianMatrix& d, const ConstraintSpec& c) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in size");
  if (d.dim() != c.k) throw Error(ErrorCode::DimensionMismatch, "D must be k x k");
  if (c.k > a.dim()) throw Error(ErrorCode::DimensionMismatch, "k exceeds n");
  FrameProblem p;
  p.frame = inertia_frame(b);
  check_host(p.frame, c);
  p.a = a.congruence(p.frame.F).matrix();
  p.d = d.matrix();
  const auto n = rows_of(p.frame);
  p.j = RVector::Zero(n);
  p.j.head(p.frame.n_plus).setOnes();
  p.j.segment(p.frame.n_plus, p.frame.n_minus).setConstant(-1.0);
  p.j2 = p.j.cwiseAbs();
  p.c = c.signs();
  p.all_plus = c.k_minus == 0;
  p.all_minus = c.k_plus == 0;
  return p;
}

double frame_objective(const FrameProblem& p, const CMatrix& xi) {
  return (p.d * (xi.adjoint() * (p.a * xi))).trace().real();
}

double frame_residual(const FrameProblem& p, const CMatrix& xi) {
  CMatrix n = xi.adjoint() * p.j.asDiagonal() * xi;
  for (Eigen::Index i = 0; i < n.rows(); ++i) n(i, i) -= p.c[i];
  return max_abs(n);
}

// Xi * T with T^H (Xi^H J Xi) T = C. Empty on failure.
std::optional<CMatrix> retract(const FrameProblem& p, const CMatrix& xi) {
  CMatrix cur = xi;
  for (int pass = 0; pass < 3; ++pass) {
    const CMatrix n = cur.adjoint() * p.j.asDiagonal() * cur;
    CMatrix t;
    if (p.all_plus || p.all_minus) {
      const double s = p.all_plus ? 1.0 : -1.0;
      const auto eig = eig_herm(herm(s * n));
      if (eig.values.back() <= 0.0) return std::nullopt;
      RVector inv(n.rows());
      for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / std::sqrt(eig.values[i]);
      t = eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
    } else {
      CMatrix cn = n;
      for (Eigen::Index i = 0; i < cn.rows(); ++i) cn.row(i) *= p.c[i];
      const CMatrix root = cn.sqrt();
      if (!root.allFinite()) return std::nullopt;
      t = root.inverse();
    }
    if (!t.allFinite()) return std::nullopt;
    cur = cur * t;
    const double res = frame_residual(p, cur);
    if (!std::isfinite(res)) return std::nullopt;
    // Cancellation in Xi^H J Xi grows with |Xi|^2 along escaping directions.
    const double growth = std::max(1.0, 1e-6 * cur.squaredNorm());
    if (res <= 1e-10 * growth) return cur;
    if (res > 1e-2) return std::nullopt;
    if (pass == 2 && res <= 1e-8 * growth) return cur;
  }
  return std::nullopt;
}

// Projection of the Euclidean gradient onto the tangent space of
// {Xi : Xi^H J Xi = C}; normal directions are J Xi S with S Hermitian.
CMatrix riemannian_gradient(const FrameProblem& p, const CMatrix& xi, const CMatrix& g) {
  const CMatrix jxi = p.j.asDiagonal() * xi;
  const CMatrix h = g.adjoint() * jxi + jxi.adjoint() * g;
  const CMatrix m = xi.adjoint() * p.j2.asDiagonal() * xi;
  const auto eig = eig_herm(herm(m));
  const CMatrix ht = eig.vectors.adjoint() * h * eig.vectors;
  CMatrix st(ht.rows(), ht.cols());
  for (Eigen::Index i = 0; i < st.rows(); ++i) {
    for (Eigen::Index k = 0; k < st.cols(); ++k) {
      const double den = eig.values[i] + eig.values[k];
      st(i, k) = den > 0.0 ? ht(i, k) / den : Complex(0.0);
    }
  }
  const CMatrix s = eig.vectors * st * eig.vectors.adjoint();
  return g - jxi * s;
}

}  // namespace

InertiaFrame inertia_frame(const HermitianMatrix& b) {
  const auto eig = eig_herm(b);
  const double tol = default_inertia_tol(b);
  const int n = b.dim();
  InertiaFrame f;
  f.F.resize(n, n);
  std::vector<int> plus;
  std::vector<int> minus;
  std::vector<int> zero;
  for (int j = 0; j < n; ++j) {
    if (eig.values[j] > tol) {
      plus.push_back(j);
    } else if (eig.values[j] < -tol) {
      minus.push_back(j);
    } else {
      zero.push_back(j);
    }
  }
  int col = 0;
  for (int j : plus) f.F.col(col++) = eig.vectors.col(j) / std::sqrt(eig.values[j]);
  // Most negative first so the minus block mirrors the plus block.
  for (auto it = minus.rbegin(); it != minus.rend(); ++it) {
    f.F.col(col++) = eig.vectors.col(*it) / std::sqrt(-eig.values[*it]);
  }
  for (int j : zero) f.F.col(col++) = eig.vectors.col(j);
  f.n_plus = static_cast<int>(plus.size());
  f.n_minus = static_cast<int>(minus.size());
  f.n_zero = static_cast<int>(zero.size());
  return f;
}

CMatrix compose_hyperbolic(const HyperbolicFactorization& f) {
  const auto p = f.W.rows();
  const auto q = f.W.cols();
  if (f.V_plus.rows() != p || f.V_plus.cols() != p || f.V_minus.rows() != q ||
      f.V_minus.cols() != q) {
    throw Error(ErrorCode::DimensionMismatch, "compose_hyperbolic: block sizes disagree");
  }
  CMatrix x(p + q, p + q);
  x.topLeftCorner(p, p) = herm_sqrt(CMatrix::Identity(p, p) + f.W * f.W.adjoint()) * f.V_plus;
  x.topRightCorner(p, q) = f.W * f.V_minus;
  x.bottomLeftCorner(q, p) = f.W.adjoint() * f.V_plus;
  x.bottomRightCorner(q, q) = herm_sqrt(CMatrix::Identity(q, q) + f.W.adjoint() * f.W) * f.V_minus;
  return x;
}

CMatrix feasible_sample(const HermitianMatrix& b, const ConstraintSpec& constraint,
                        std::uint64_t seed) {
  constraint.validate();
  if (constraint.k > b.dim()) throw Error(ErrorCode::DimensionMismatch, "k exceeds n");
  const auto frame = inertia_frame(b);
  check_host(frame, constraint);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(ss);
    const CMatrix x = frame.F * sample_xi(frame, constraint, rng);
    if (x.allFinite() && constraint_residual(x, b, constraint) <= 1e-8) return x;
  }
  throw Error(ErrorCode::DegenerateDraw, "no feasible draw met the 1e-8 residual in 20 attempts");
}

double divergence_threshold(const HermitianMatrix& a, const HermitianMatrix& d) {
  return -1e6 * (1.0 + a.max_abs() * d.max_abs());
}

OracleResult local_search(const HermitianMatrix& a, const HermitianMatrix& b,
                          const HermitianMatrix& d, const ConstraintSpec& constraint,
                          int restarts, int iters, std::uint64_t seed) {
  OracleOptions o;
  o.restarts = restarts;
  o.iters = iters;
  o.seed = seed;
  return local_search(a, b, d, constraint, o);
}

OracleResult local_search(const HermitianMatrix& a, const HermitianMatrix& b,
                          const HermitianMatrix& d, const ConstraintSpec& constraint,
                          const OracleOptions& options) {
  constraint.validate();
  const FrameProblem p = make_frame_problem(a, b, d, constraint);
  const double threshold = divergence_threshold(a, d);
  std::mt19937_64 seeder(options.seed);

  OracleResult out;
  out.best_value = std::numeric_limits<double>::infinity();
  CMatrix best_xi;
  bool stop = false;

  for (int rs = 0; rs < std::max(1, options.restarts) && !stop; ++rs) {
    std::mt19937_64 rng(seeder());
    std::optional<CMatrix> start;
    for (int attempt = 0; attempt < kMaxDraws && !start; ++attempt) {
      start = retract(p, sample_xi(p.frame, constraint, rng));
    }
    if (!start) continue;
    CMatrix xi = *start;
    double f = frame_objective(p, xi);
    if (f < out.best_value) {
      out.best_value = f;
      best_xi = xi;
    }
    std::deque<double> history{f};
    CMatrix prev_xi;
    CMatrix prev_r;
    double alpha = 1.0;

    for (int it = 0; it < options.iters; ++it) {
      if (f < threshold) {
        out.unbounded_flag = true;
        stop = true;
        break;
      }
      if (options.target && f <= *options.target) {
        stop = true;
        break;
      }
      ++out.iterations;
      const CMatrix g = 2.0 * p.a * xi * p.d;
      const CMatrix r = riemannian_gradient(p, xi, g);
      const double rr = r.squaredNorm();
      if (std::sqrt(rr) <= 1e-10 * (1.0 + g.norm())) break;
      if (it > 0) {
        const CMatrix s = xi - prev_xi;
        const CMatrix y = r - prev_r;
        const double sy = (s.adjoint() * y).trace().real();
        alpha = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * alpha;
        alpha = std::clamp(alpha, 1e-12, 1e12);
      }
      const double ref = *std::max_element(history.begin(), history.end());
      bool accepted = false;
      for (int h = 0; h <= kMaxHalvings; ++h, alpha *= 0.5) {
        const auto cand = retract(p, xi - alpha * r);
        if (!cand) continue;
        const double fc = frame_objective(p, *cand);
        if (std::isfinite(fc) && fc <= ref - kArmijo * alpha * rr) {
          prev_xi = xi;
          prev_r = r;
          xi = *cand;
          f = fc;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      history.push_back(f);
      if (static_cast<int>(history.size()) > kHistory) history.pop_front();
      if (f < out.best_value) {
        out.best_value = f;
        best_xi = xi;
      }
    }
    if (f < threshold) {
      out.unbounded_flag = true;
      stop = true;
    }
  }

  if (best_xi.size() == 0) {
    throw Error(ErrorCode::DegenerateDraw, "oracle could not draw a feasible starting point");
  }
  out.best_X = p.frame.F * best_xi;
  out.best_value = objective(a, d, out.best_X);
  out.feasibility_residual = constraint_residual(out.best_X, b, constraint);
  return out;
}

}  // namespace tracemin
