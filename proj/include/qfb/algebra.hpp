#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qfb/errors.hpp"

namespace qfb {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Basis convention used throughout: index 0 = |e>, index 1 = |g>,
/// sigma_z = diag(+1, -1) = |e><e| - |g><g|, sigma_minus |e> = |g>.
enum class Pauli { X, Y, Z, Plus, Minus, Identity };

Mat2 pauli(Pauli axis);

struct BlochVector {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double norm2() const { return rx * rx + ry * ry + rz * rz; }
};

/// 2x2 state. Plain value type; invariants are checked by an explicit
/// validate() call, never in the constructor, so integrator intermediates
/// can be carried around freely.
struct DensityMatrix {
  Mat2 m = Mat2::Zero();
};

/// 2x2 Hermitian operator (epsilon_1 I + epsilon_2 a.sigma for a qubit).
struct HermitianObservable {
  Mat2 m = Mat2::Zero();
};

struct ValidationLimits {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double eigenvalue = 1e-10;  // min eigenvalue >= -eigenvalue
};

/// max_ij |M - M^dagger|
double hermiticity_defect(const Mat2& m);

/// Smallest eigenvalue of a (nearly) Hermitian 2x2 matrix, closed form.
double min_eigenvalue(const Mat2& m);

/// Throws ValidationError unless rho is Hermitian, trace-one and positive
/// semidefinite within the given limits (all entries finite).
void validate(const DensityMatrix& rho, const ValidationLimits& limits = {});

/// Throws ValidationError unless the matrix is Hermitian within tol.
void validate(const HermitianObservable& obs, double tol = 1e-12);

/// |phi_0(alpha)> = cos(alpha)|g> + sin(alpha)|e>, as a projector.
DensityMatrix superposition_state(double alpha);

DensityMatrix maximally_mixed();

/// Tr(rho O). Throws ValidationError if the imaginary residue exceeds
/// 1e-10 (signals a non-Hermitian input); smaller residue is discarded.
double expectation(const DensityMatrix& rho, const HermitianObservable& obs);

BlochVector bloch_from_rho(const DensityMatrix& rho);

/// rho = (I + r.sigma)/2. Throws ValidationError when |r| > 1 + 1e-10.
DensityMatrix rho_from_bloch(const BlochVector& r);

/// Tr(rho^2), in [1/2, 1] for a qubit.
double purity(const DensityMatrix& rho);

/// Projects a slightly non-positive state back onto the physical cone by
/// flooring negative eigenvalues at zero and renormalizing the trace.
/// Stores the eigenvalue clip amount (0 when nothing was clipped).
DensityMatrix clip_to_physical(const DensityMatrix& rho, double* clip_amount = nullptr);

}  // namespace qfb
