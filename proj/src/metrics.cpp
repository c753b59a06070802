#include "qfb/metrics.hpp"

#include <cmath>
#include <sstream>

namespace qfb {

ObservablePair sigma_xz_pair() {
  return ObservablePair{HermitianObservable{pauli(Pauli::X)}, HermitianObservable{pauli(Pauli::Z)}};
}

double variance(const DensityMatrix& rho, const HermitianObservable& obs) {
  const double mean = expectation(rho, obs);
  const HermitianObservable sq{(obs.m * obs.m).eval()};
  const double raw = expectation(rho, sq) - mean * mean;
  if (raw < -1e-12) {
    std::ostringstream os;
    os << "variance " << raw << " below -1e-12; inputs violate their invariants";
    throw ValidationError(os.str());
  }
  return std::max(raw, 0.0);
}

double comm_term(const DensityMatrix& rho, const ObservablePair& pair) {
  const Complex value = (rho.m * (pair.a.m * pair.b.m - pair.b.m * pair.a.m)).trace();
  return 0.25 * std::norm(value);
}

double anticomm_term(const DensityMatrix& rho, const ObservablePair& pair) {
  const Complex sym = (rho.m * (pair.a.m * pair.b.m + pair.b.m * pair.a.m)).trace();
  const double ea = expectation(rho, pair.a);
  const double eb = expectation(rho, pair.b);
  return std::norm(0.5 * sym - ea * eb);
}

double tightness_U(const DensityMatrix& rho, const ObservablePair& pair) {
  return variance(rho, pair.a) * variance(rho, pair.b) - comm_term(rho, pair);
}

double tightness_W(const DensityMatrix& rho, const ObservablePair& pair) {
  const double w = tightness_U(rho, pair) - anticomm_term(rho, pair);
  if (w < -1e-10) {
    std::ostringstream os;
    os << "SUR gap " << w << " below -1e-10; inputs violate their invariants";
    throw ValidationError(os.str());
  }
  return w;
}

double mixedness_Y(const DensityMatrix& rho) {
  const double y = 1.0 - purity(rho);
  if (y < -1e-10) {
    std::ostringstream os;
    os << "mixedness " << y << " below -1e-10; inputs violate their invariants";
    throw ValidationError(os.str());
  }
  return std::max(y, 0.0);
}

TightnessReport report(const DensityMatrix& rho, const ObservablePair& pair) {
  TightnessReport r;
  r.var_a = variance(rho, pair.a);
  r.var_b = variance(rho, pair.b);
  r.comm_term = comm_term(rho, pair);
  r.anticomm_term = anticomm_term(rho, pair);
  r.tightness_u = r.var_a * r.var_b - r.comm_term;
  r.tightness_w = r.tightness_u - r.anticomm_term;
  r.mixedness_y = mixedness_Y(rho);
  if (r.tightness_w < -1e-10) {
    std::ostringstream os;
    os << "SUR gap " << r.tightness_w << " below -1e-10; inputs violate their invariants";
    throw ValidationError(os.str());
  }
  return r;
}

}  // namespace qfb
