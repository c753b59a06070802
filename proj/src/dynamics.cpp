#include "qfb/dynamics.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfb {

namespace {

constexpr Complex kI{0.0, 1.0};

const ValidationLimits kFlowLimits{1e-10, 1e-9, 1e-9};

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "feedback parameter " << name << " is not finite";
    throw ValidationError(os.str());
  }
}

}  // namespace

Mat2 feedback_matrix(const FeedbackOperator& f) {
  Mat2 m;
  if (const auto* xy = std::get_if<XYFeedback>(&f)) {
    check_finite(xy->lambda, "lambda");
    check_finite(xy->beta, "beta");
    m = xy->lambda *
        (std::sin(xy->beta) * pauli(Pauli::X) + std::cos(xy->beta) * pauli(Pauli::Y));
  } else if (const auto* z = std::get_if<ZFeedback>(&f)) {
    check_finite(z->mu, "mu");
    m = z->mu * pauli(Pauli::Z);
  } else {
    const auto& gen = std::get<GeneralFeedback>(f);
    validate(gen.op, 1e-12);
    m = gen.op.m;
  }
  if (hermiticity_defect(m) > 1e-12) throw ValidationError("feedback operator is not Hermitian");
  return m;
}

Mat2 dissipator(const Mat2& jump, const Mat2& rho) {
  const Mat2 jj = jump.adjoint() * jump;
  return jump * rho * jump.adjoint() - 0.5 * (jj * rho + rho * jj);
}

LindbladOps LindbladOps::make(const FeedbackOperator& f) {
  const Mat2 fm = feedback_matrix(f);
  LindbladOps ops;
  ops.hamiltonian = 0.5 * (pauli(Pauli::Plus) * fm + fm * pauli(Pauli::Minus));
  ops.jump = pauli(Pauli::Minus) - kI * fm;
  ops.jump_sq = ops.jump.adjoint() * ops.jump;
  return ops;
}

Mat2 LindbladOps::apply(const Mat2& rho) const {
  return -kI * (hamiltonian * rho - rho * hamiltonian) + jump * rho * jump.adjoint() -
         0.5 * (jump_sq * rho + rho * jump_sq);
}

Mat2 feedback_rhs(const DensityMatrix& rho, const FeedbackOperator& f) {
  return LindbladOps::make(f).apply(rho.m);
}

namespace {

Mat2 rk4_step(const LindbladOps& ops, const Mat2& y, double h) {
  const Mat2 k1 = ops.apply(y);
  const Mat2 k2 = ops.apply(y + 0.5 * h * k1);
  const Mat2 k3 = ops.apply(y + 0.5 * h * k2);
  const Mat2 k4 = ops.apply(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advances y from t0 to t1 with fixed steps no larger than h, landing on t1
// exactly (the interval is split into equal substeps).
Mat2 rk4_span(const LindbladOps& ops, Mat2 y, double t0, double t1, double h) {
  const double span = t1 - t0;
  if (span <= 0.0) return y;
  const auto n = static_cast<long>(std::ceil(span / h - 1e-12));
  const long steps = std::max<long>(n, 1);
  const double hs = span / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) y = rk4_step(ops, y, hs);
  return y;
}

// Cash-Karp embedded 4(5) pair.
struct Rk45Result {
  Mat2 y5;
  double error;
};

Rk45Result rk45_step(const LindbladOps& ops, const Mat2& y, double h) {
  const Mat2 k1 = ops.apply(y);
  const Mat2 k2 = ops.apply(y + h * (k1 / 5.0));
  const Mat2 k3 = ops.apply(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
  const Mat2 k4 = ops.apply(y + h * (3.0 / 10.0 * k1 - 9.0 / 10.0 * k2 + 6.0 / 5.0 * k3));
  const Mat2 k5 = ops.apply(y + h * (-11.0 / 54.0 * k1 + 5.0 / 2.0 * k2 - 70.0 / 27.0 * k3 +
                                     35.0 / 27.0 * k4));
  const Mat2 k6 = ops.apply(y + h * (1631.0 / 55296.0 * k1 + 175.0 / 512.0 * k2 +
                                     575.0 / 13824.0 * k3 + 44275.0 / 110592.0 * k4 +
                                     253.0 / 4096.0 * k5));
  const Mat2 y5 = y + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 +
                           512.0 / 1771.0 * k6);
  const Mat2 y4 = y + h * (2825.0 / 27648.0 * k1 + 18575.0 / 48384.0 * k3 +
                           13525.0 / 55296.0 * k4 + 277.0 / 14336.0 * k5 + 0.25 * k6);
  return {y5, (y5 - y4).cwiseAbs().maxCoeff()};
}

Mat2 rk45_span(const LindbladOps& ops, Mat2 y, double t0, double t1, double tol) {
  constexpr double kMinStep = 1e-12;
  double t = t0;
  double h = std::min(0.1, t1 - t0);
  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < kMinStep) {
      std::ostringstream os;
      os << "adaptive step underflowed " << kMinStep << " at t = " << t;
      throw StepSizeError(os.str());
    }
    const Rk45Result r = rk45_step(ops, y, h);
    const double scale = tol * (1.0 + y.cwiseAbs().maxCoeff());
    if (std::isfinite(r.error) && r.error <= scale) {
      y = r.y5;
      t += h;
      const double grow = (r.error > 0.0) ? 0.9 * std::pow(scale / r.error, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else if (std::isfinite(r.error)) {
      h *= std::clamp(0.9 * std::pow(scale / r.error, 0.25), 0.1, 1.0);
    } else {
      h *= 0.1;  // non-finite error estimate: back off hard
    }
  }
  return y;
}

void check_options(const EvolveOptions& opts) {
  if (opts.method == Method::RK4Fixed && !(opts.step > 0.0))
    throw ValidationError("evolve: step must be positive");
  if (opts.method == Method::RK45Adaptive && !(opts.tolerance > 0.0))
    throw ValidationError("evolve: tolerance must be positive");
  double prev = -1.0;
  for (double t : opts.record_grid) {
    if (!std::isfinite(t) || t < 0.0 || t <= prev)
      throw ValidationError("evolve: record grid must be strictly increasing and nonnegative");
    prev = t;
  }
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const FeedbackOperator& f,
                  const EvolveOptions& opts) {
  check_options(opts);
  validate(rho0);
  const LindbladOps ops = LindbladOps::make(f);

  Trajectory traj;
  traj.times.reserve(opts.record_grid.size());
  traj.states.reserve(opts.record_grid.size());

  Mat2 y = rho0.m;
  double t = 0.0;
  for (double target : opts.record_grid) {
    if (opts.method == Method::RK4Fixed) {
      y = rk4_span(ops, y, t, target, opts.step);
    } else {
      y = rk45_span(ops, y, t, target, opts.tolerance);
    }
    t = target;
    DensityMatrix state;
    state.m = y;
    validate(state, kFlowLimits);
    traj.times.push_back(t);
    traj.states.push_back(state);
  }
  return traj;
}

Vec4 vectorize(const Mat2& m) {
  Vec4 v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

Mat2 unvectorize(const Vec4& v) {
  Mat2 m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

Superoperator4 liouvillian_matrix(const FeedbackOperator& f) {
  const LindbladOps ops = LindbladOps::make(f);
  const Mat2 id = Mat2::Identity();
  const Mat2& h = ops.hamiltonian;
  const Mat2& a = ops.jump;
  const Mat2& aa = ops.jump_sq;
  // vec(X rho Y) = (Y^T kron X) vec(rho) under column stacking.
  Superoperator4 l =
      -kI * (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id));
  l += Eigen::kroneckerProduct(a.conjugate(), a);
  l -= 0.5 * (Eigen::kroneckerProduct(id, aa) + Eigen::kroneckerProduct(aa.transpose(), id));
  return l;
}

SteadySolve try_steady_state(const FeedbackOperator& f) {
  const Superoperator4 l = liouvillian_matrix(f);
  Eigen::JacobiSVD<Superoperator4> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv(0));

  SteadySolve out;
  for (int i = 0; i < 4; ++i)
    if (sv(i) < cutoff) ++out.null_dimension;
  if (out.null_dimension != 1) return out;

  const Vec4 null_vec = svd.matrixV().col(3);
  Mat2 rho = unvectorize(null_vec);
  // The null vector carries an arbitrary complex phase; dividing by the
  // complex trace removes it and normalizes in one step.
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw ValidationError("steady-state null vector is traceless; cannot normalize");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint().eval());

  DensityMatrix state;
  state.m = rho;
  out.residual = LindbladOps::make(f).apply(rho).cwiseAbs().maxCoeff();
  if (out.residual > 1e-10) {
    std::ostringstream os;
    os << "steady-state residual " << out.residual << " exceeds 1e-10";
    throw ValidationError(os.str());
  }
  validate(state);
  out.state = state;
  return out;
}

DensityMatrix steady_state(const FeedbackOperator& f) {
  SteadySolve solve = try_steady_state(f);
  if (!solve.state.has_value()) {
    std::ostringstream os;
    os << "Liouvillian null space has dimension " << solve.null_dimension
       << " (expected 1); the steady state is not unique";
    throw DegenerateSteadyStateError(solve.null_dimension, os.str());
  }
  return *solve.state;
}

}  // namespace qfb
