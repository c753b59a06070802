#pragma once

#include "qfb/algebra.hpp"

namespace qfb {

struct ObservablePair {
  HermitianObservable a;
  HermitianObservable b;
};

/// The paper's working pair A = sigma_x, B = sigma_z.
ObservablePair sigma_xz_pair();

/// <O^2> - <O>^2, clamped to >= 0. Round-off below -1e-12 is a validation
/// error (signals invalid inputs) rather than being silently clamped.
double variance(const DensityMatrix& rho, const HermitianObservable& obs);

/// |<[A,B]>|^2 / 4
double comm_term(const DensityMatrix& rho, const ObservablePair& pair);

/// |<{A,B}>/2 - <A><B>|^2  (the covariance term of the SUR)
double anticomm_term(const DensityMatrix& rho, const ObservablePair& pair);

/// U = varA varB - comm_term; the RUR gap.
double tightness_U(const DensityMatrix& rho, const ObservablePair& pair);

/// W = U - anticomm_term; the SUR gap.
double tightness_W(const DensityMatrix& rho, const ObservablePair& pair);

/// Y = 1 - Tr(rho^2), in [0, 1/2] for a qubit.
double mixedness_Y(const DensityMatrix& rho);

struct TightnessReport {
  double var_a = 0.0;
  double var_b = 0.0;
  double comm_term = 0.0;
  double anticomm_term = 0.0;
  double tightness_u = 0.0;
  double tightness_w = 0.0;
  double mixedness_y = 0.0;
};

/// Bundles all metrics with exactly consistent definitions:
/// tightness_u = var_a var_b - comm_term, tightness_w = tightness_u - anticomm_term.
TightnessReport report(const DensityMatrix& rho, const ObservablePair& pair);

}  // namespace qfb
