#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <numbers>
#include <random>

#include "qfb/algebra.hpp"
#include "test_support.hpp"

using namespace qfb;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("pauli matrices follow the |e>,|g> convention") {
  CHECK(max_abs(pauli(Pauli::X) * pauli(Pauli::X) - pauli(Pauli::Identity)) == 0.0);
  CHECK(max_abs(pauli(Pauli::Plus) * pauli(Pauli::Plus)) == 0.0);
  CHECK(max_abs(pauli(Pauli::X) - (pauli(Pauli::Plus) + pauli(Pauli::Minus))) == 0.0);

  CHECK(pauli(Pauli::Z)(0, 0) == Complex{1.0, 0.0});
  CHECK(pauli(Pauli::Z)(1, 1) == Complex{-1.0, 0.0});
  // sigma_minus |e> = |g>
  Eigen::Vector2cd e;
  e << 1, 0;
  Eigen::Vector2cd g = pauli(Pauli::Minus) * e;
  CHECK(g(0) == Complex{0.0, 0.0});
  CHECK(g(1) == Complex{1.0, 0.0});
}

TEST_CASE("superposition_state places alpha = 0 on the ground state") {
  CHECK(superposition_state(0.0).m(1, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(superposition_state(kPi / 2).m(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
  // rho_11 (excited population) starts at sin(alpha)^2
  const double a = 0.7;
  CHECK(superposition_state(a).m(0, 0).real() ==
        doctest::Approx(std::sin(a) * std::sin(a)).epsilon(1e-15));
}

TEST_CASE("expectation values on eigenstates and mixtures") {
  const HermitianObservable sz{pauli(Pauli::Z)};
  const HermitianObservable sx{pauli(Pauli::X)};
  CHECK(expectation(superposition_state(kPi / 2), sz) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(maximally_mixed(), sx) == doctest::Approx(0.0).epsilon(1e-14));

  // |phi_0(pi/4)> = (|g>+|e>)/sqrt(2): direct 2x2 product gives Tr(rho sx) = 1.
  Mat2 plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  const double oracle = (plus * pauli(Pauli::X)).trace().real();
  CHECK(oracle == doctest::Approx(1.0));
  CHECK(expectation(superposition_state(kPi / 4), sx) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("expectation rejects non-Hermitian operators via the imaginary residue") {
  HermitianObservable bad;
  bad.m << 0, Complex{0, 1}, Complex{0, 1}, 0;
  CHECK_THROWS_AS(expectation(superposition_state(kPi / 4), bad), ValidationError);
}

TEST_CASE("bloch round trips") {
  CHECK(bloch_from_rho(superposition_state(0.0)).rz == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(bloch_from_rho(superposition_state(0.0)).rx == doctest::Approx(0.0).epsilon(1e-14));
  const BlochVector center = bloch_from_rho(maximally_mixed());
  CHECK(center.norm2() == doctest::Approx(0.0).epsilon(1e-28));

  // expectation oracle per axis for the +x state
  const DensityMatrix plus = superposition_state(kPi / 4);
  const BlochVector r = bloch_from_rho(plus);
  CHECK(r.rx == doctest::Approx(expectation(plus, HermitianObservable{pauli(Pauli::X)})));
  CHECK(r.rx == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.ry == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.rz == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("rho_from_bloch endpoints and rejection") {
  CHECK(max_abs(rho_from_bloch({0, 0, 0}).m - maximally_mixed().m) < 1e-15);
  Mat2 excited = Mat2::Zero();
  excited(0, 0) = 1.0;
  CHECK(max_abs(rho_from_bloch({0, 0, 1}).m - excited) < 1e-15);
  CHECK_THROWS_AS(rho_from_bloch({1.5, 0, 0}), ValidationError);
}

TEST_CASE("purity endpoints and the Bloch oracle") {
  CHECK(purity(superposition_state(0.3)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(purity(maximally_mixed()) == doctest::Approx(0.5).epsilon(1e-14));
  // (1 + |r|^2)/2 for r = (0.6, 0, 0)
  CHECK(purity(rho_from_bloch({0.6, 0, 0})) == doctest::Approx(0.68).epsilon(1e-13));
}

TEST_CASE("validate enforces hermiticity, trace and positivity") {
  DensityMatrix ok = superposition_state(1.1);
  CHECK_NOTHROW(validate(ok));

  DensityMatrix skew = ok;
  skew.m(0, 1) += Complex{1e-6, 0.0};
  CHECK_THROWS_AS(validate(skew), ValidationError);

  DensityMatrix off_trace = ok;
  off_trace.m *= 1.0 + 1e-6;
  CHECK_THROWS_AS(validate(off_trace), ValidationError);

  DensityMatrix negative;
  negative.m << 1.1, 0, 0, -0.1;
  CHECK_THROWS_AS(validate(negative), ValidationError);

  DensityMatrix infinite = ok;
  infinite.m(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(infinite), ValidationError);
}

TEST_CASE("min_eigenvalue agrees with Eigen's solver") {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const HermitianObservable o = test::random_observable(rng);
    Eigen::SelfAdjointEigenSolver<Mat2> es(o.m);
    CHECK(min_eigenvalue(o.m) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
  }
}

TEST_CASE("clip_to_physical floors a slightly negative eigenvalue") {
  DensityMatrix rho;
  rho.m << 1.0 + 1e-8, 0, 0, -1e-8;
  double clipped = 0.0;
  const DensityMatrix fixed = clip_to_physical(rho, &clipped);
  CHECK(clipped == doctest::Approx(1e-8).epsilon(1e-3));
  CHECK_NOTHROW(validate(fixed));
  CHECK(min_eigenvalue(fixed.m) >= 0.0);
}

TEST_CASE("property: purity equals (1 + |r|^2)/2") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix rho = test::random_state(rng);
    const BlochVector r = bloch_from_rho(rho);
    CHECK(std::abs(purity(rho) - 0.5 * (1.0 + r.norm2())) <= 1e-12);
  }
}

TEST_CASE("property: rho_from_bloch inverts bloch_from_rho") {
  std::mt19937 rng(13);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix rho = test::random_state(rng);
    CHECK(max_abs(rho_from_bloch(bloch_from_rho(rho)).m - rho.m) <= 1e-12);
  }
}

TEST_CASE("property: expectation is linear in the observable") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = test::random_state(rng);
    const HermitianObservable o1 = test::random_observable(rng);
    const HermitianObservable o2 = test::random_observable(rng);
    const double a = coeff(rng);
    const double b = coeff(rng);
    HermitianObservable combo;
    combo.m = a * o1.m + b * o2.m;
    const double lhs = expectation(rho, combo);
    const double rhs = a * expectation(rho, o1) + b * expectation(rho, o2);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}
