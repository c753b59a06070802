#include "qfb/algebra.hpp"

#include <cmath>
#include <sstream>

namespace qfb {

namespace {
constexpr Complex kI{0.0, 1.0};

bool all_finite(const Mat2& m) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}
}  // namespace

Mat2 pauli(Pauli axis) {
  Mat2 m;
  switch (axis) {
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, -kI, kI, 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
    case Pauli::Plus:  // |e><g|
      m << 0, 1, 0, 0;
      break;
    case Pauli::Minus:  // |g><e|
      m << 0, 0, 1, 0;
      break;
    case Pauli::Identity:
      m << 1, 0, 0, 1;
      break;
  }
  return m;
}

double hermiticity_defect(const Mat2& m) {
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat2& m) {
  // Hermitian 2x2: eigenvalues are mean +- sqrt(gap^2 + |offdiag|^2).
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double off = std::abs(0.5 * (m(0, 1) + std::conj(m(1, 0))));
  const double mean = 0.5 * (a + d);
  const double gap = 0.5 * (a - d);
  return mean - std::hypot(gap, off);
}

void validate(const DensityMatrix& rho, const ValidationLimits& limits) {
  if (!all_finite(rho.m)) throw ValidationError("density matrix has non-finite entries");
  const double herm = hermiticity_defect(rho.m);
  if (herm > limits.hermiticity) {
    std::ostringstream os;
    os << "density matrix hermiticity defect " << herm << " exceeds " << limits.hermiticity;
    throw ValidationError(os.str());
  }
  const double tr_err = std::abs(rho.m.trace() - Complex{1.0, 0.0});
  if (tr_err > limits.trace) {
    std::ostringstream os;
    os << "density matrix trace deviates from one by " << tr_err;
    throw ValidationError(os.str());
  }
  const double lam_min = min_eigenvalue(rho.m);
  if (lam_min < -limits.eigenvalue) {
    std::ostringstream os;
    os << "density matrix minimum eigenvalue " << lam_min << " below -" << limits.eigenvalue;
    throw ValidationError(os.str());
  }
}

void validate(const HermitianObservable& obs, double tol) {
  if (!all_finite(obs.m)) throw ValidationError("observable has non-finite entries");
  const double herm = hermiticity_defect(obs.m);
  if (herm > tol) {
    std::ostringstream os;
    os << "observable hermiticity defect " << herm << " exceeds " << tol;
    throw ValidationError(os.str());
  }
}

DensityMatrix superposition_state(double alpha) {
  Eigen::Vector2cd psi;
  psi << std::sin(alpha), std::cos(alpha);
  DensityMatrix rho;
  rho.m = psi * psi.adjoint();
  return rho;
}

DensityMatrix maximally_mixed() {
  DensityMatrix rho;
  rho.m = 0.5 * Mat2::Identity();
  return rho;
}

double expectation(const DensityMatrix& rho, const HermitianObservable& obs) {
  const Complex value = (rho.m * obs.m).trace();
  if (std::abs(value.imag()) > 1e-10) {
    std::ostringstream os;
    os << "expectation value has imaginary residue " << value.imag();
    throw ValidationError(os.str());
  }
  return value.real();
}

BlochVector bloch_from_rho(const DensityMatrix& rho) {
  BlochVector r;
  r.rx = (rho.m * pauli(Pauli::X)).trace().real();
  r.ry = (rho.m * pauli(Pauli::Y)).trace().real();
  r.rz = (rho.m * pauli(Pauli::Z)).trace().real();
  return r;
}

DensityMatrix rho_from_bloch(const BlochVector& r) {
  const double norm = std::sqrt(r.norm2());
  if (!(norm <= 1.0 + 1e-10)) {
    std::ostringstream os;
    os << "Bloch vector norm " << norm << " outside the unit ball";
    throw ValidationError(os.str());
  }
  DensityMatrix rho;
  rho.m = 0.5 * (Mat2::Identity() + r.rx * pauli(Pauli::X) + r.ry * pauli(Pauli::Y) +
                 r.rz * pauli(Pauli::Z));
  return rho;
}

double purity(const DensityMatrix& rho) { return (rho.m * rho.m).trace().real(); }

DensityMatrix clip_to_physical(const DensityMatrix& rho, double* clip_amount) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (rho.m + rho.m.adjoint().eval()));
  Eigen::Vector2d ev = es.eigenvalues();
  double clipped = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (ev(i) < 0.0) {
      clipped += -ev(i);
      ev(i) = 0.0;
    }
  }
  const double total = ev.sum();
  if (total <= 0.0) throw ValidationError("state has no positive weight after clipping");
  ev /= total;
  DensityMatrix out;
  out.m = es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<Complex>() *
          es.eigenvectors().adjoint();
  if (clip_amount != nullptr) *clip_amount = clipped;
  return out;
}

}  // namespace qfb
