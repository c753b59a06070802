#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qfb/algebra.hpp"

namespace qfb {

/// F = lambda (sin(beta) sigma_x + cos(beta) sigma_y)
struct XYFeedback {
  double lambda = 0.0;
  double beta = 0.0;
};

/// F = mu sigma_z
struct ZFeedback {
  double mu = 0.0;
};

/// Arbitrary Hermitian feedback operator.
struct GeneralFeedback {
  HermitianObservable op;
};

using FeedbackOperator = std::variant<XYFeedback, ZFeedback, GeneralFeedback>;

/// Materializes F as a matrix. Throws ValidationError if the parameters are
/// non-finite or the resulting matrix is not Hermitian within 1e-12.
Mat2 feedback_matrix(const FeedbackOperator& f);

/// D(A) rho = A rho A^dag - (A^dag A rho + rho A^dag A)/2
Mat2 dissipator(const Mat2& jump, const Mat2& rho);

/// Precomputed operators of the feedback master equation
///   drho/dt = -i [(sigma_+ F + F sigma_-)/2, rho] + D(sigma_- - i F) rho.
struct LindbladOps {
  Mat2 hamiltonian;
  Mat2 jump;
  Mat2 jump_sq;  // jump^dag jump

  static LindbladOps make(const FeedbackOperator& f);
  Mat2 apply(const Mat2& rho) const;
};

/// drho/dt for the given state; traceless and Hermitian within 1e-12.
Mat2 feedback_rhs(const DensityMatrix& rho, const FeedbackOperator& f);

enum class Method { RK4Fixed, RK45Adaptive };

struct EvolveOptions {
  Method method = Method::RK4Fixed;
  double step = 1e-3;        // RK4Fixed step size
  double tolerance = 1e-10;  // RK45Adaptive local error tolerance
  std::vector<double> record_grid;  // strictly increasing, >= 0
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Integrates the master equation from rho0, recording the state at every
/// time in opts.record_grid. Recorded states are validated with the
/// along-flow limits (trace 1e-9, hermiticity 1e-10, eigenvalue -1e-9).
Trajectory evolve(const DensityMatrix& rho0, const FeedbackOperator& f,
                  const EvolveOptions& opts);

using Superoperator4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

/// Column-stacking vectorization: vec(rho) = (rho00, rho10, rho01, rho11).
Vec4 vectorize(const Mat2& m);
Mat2 unvectorize(const Vec4& v);

/// 4x4 matrix L with feedback_rhs(rho) = unvec(L vec(rho)).
Superoperator4 liouvillian_matrix(const FeedbackOperator& f);

struct SteadySolve {
  std::optional<DensityMatrix> state;  // set iff null_dimension == 1
  int null_dimension = 0;
  double residual = 0.0;  // max |feedback_rhs(state)| when state is set
};

/// Null-space solve that reports degeneracy instead of throwing.
SteadySolve try_steady_state(const FeedbackOperator& f);

/// Unique steady state of the Liouvillian (trace-normalized null vector,
/// Hermitian-symmetrized). Throws DegenerateSteadyStateError when the null
/// space is not one-dimensional.
DensityMatrix steady_state(const FeedbackOperator& f);

}  // namespace qfb
