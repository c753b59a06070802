#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qfb/analytic.hpp"
#include "qfb/dynamics.hpp"
#include "qfb/metrics.hpp"
#include "test_support.hpp"

using namespace qfb;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

std::map<FormulaId, FormulaStatusKind> status_map(const std::vector<FormulaStatus>& v) {
  std::map<FormulaId, FormulaStatusKind> out;
  for (const auto& s : v) out[s.id] = s.status;
  return out;
}

DensityMatrix numeric_state(double alpha, const FeedbackOperator& f, double t) {
  EvolveOptions opts;
  opts.record_grid = {t};
  return evolve(superposition_state(alpha), f, opts).states[0];
}
}  // namespace

TEST_CASE("XY shorthand constants at a hand-checked point") {
  const XYConstants c = XYConstants::evaluate(0.3, 0.5, 0.0, 1.0);
  CHECK(c.big_p == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c.big_t == doctest::Approx(1.0 + 0.5 + 1.0).epsilon(1e-15));
  CHECK(c.xi == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c.big_o == doctest::Approx(std::exp(1.0 + 1.0 + 2.0)).epsilon(1e-14));
  // G(t=0) would be P; at t=1, lambda=0.5, beta=0: cosh(0.75) P - (1 + 0.5) sinh(0.75)
  CHECK(c.big_g ==
        doctest::Approx(1.5 * std::cosh(0.75) - 1.5 * std::sinh(0.75)).epsilon(1e-14));
}

TEST_CASE("Z shorthand constants") {
  const ZConstants c = ZConstants::evaluate(0.3, 2.0);
  CHECK(c.gamma == doctest::Approx(std::exp(2.0 * 2.0 * 0.09)).epsilon(1e-15));
  CHECK(c.big_r == doctest::Approx((1.0 - 0.36) * (1.0 - 0.36)).epsilon(1e-15));
}

TEST_CASE("rho_xy recovers the initial state exactly at t = 0") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    const double alpha = angle(rng);
    CHECK(t0_recovery_error_xy(alpha, 0.6, 1.9) <= 1e-12);
    CHECK(t0_recovery_error_xy(alpha, -0.8, 0.4) <= 1e-12);
  }
}

TEST_CASE("rho_xy at lambda = 0 reduces to plain decay") {
  for (double t : {0.2, 1.0, 3.0}) {
    const DensityMatrix rho = rho_xy(0.7, 0.0, 0.9, t);
    CHECK(rho.m(0, 0).real() ==
          doctest::Approx(std::exp(-t) * std::sin(0.7) * std::sin(0.7)).epsilon(1e-12));
    // cross-consistent with the Z family at mu = 0
    CHECK(max_abs(rho.m - rho_z(0.7, 0.0, t).m) <= 1e-12);
  }
}

TEST_CASE("rho_xy rejects the P = 0 singular curve and t < 0") {
  CHECK_THROWS_AS(rho_xy(0.5, -1.0, 0.0, 1.0), SingularParameterError);
  CHECK_THROWS_AS(rho_xy(0.5, 0.0, kPi / 2, 1.0), SingularParameterError);
  CHECK_THROWS_AS(rho_xy(0.5, 0.3, 1.0, -0.1), DomainError);
}

TEST_CASE("rho_z endpoints: t = 0 recovery and the paper's decay value") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    const double alpha = angle(rng);
    CHECK(t0_recovery_error_z(alpha, 0.8) <= 1e-12);
    CHECK(t0_recovery_error_z(alpha, -0.3) <= 1e-12);
  }
  CHECK(rho_z(kPi / 2, 1.0, 1.0).m(0, 0).real() ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("rho_z rejects the band around mu = 1/2") {
  CHECK_THROWS_AS(rho_z(0.5, 0.5, 1.0), SingularParameterError);
  CHECK_THROWS_AS(rho_z(0.5, -0.5 + 1e-8, 1.0), SingularParameterError);
  CHECK_NOTHROW(rho_z(0.5, 0.501, 1.0));
}

TEST_CASE("rho_z matches the numeric oracle away from the singular band") {
  const DensityMatrix numeric = numeric_state(kPi / 4, ZFeedback{0.3}, 0.7);
  CHECK(max_abs(rho_z(kPi / 4, 0.3, 0.7).m - numeric.m) <= 1e-6);
}

TEST_CASE("quantities_xy at t = 0 and against the numeric oracle") {
  {
    const DerivedQuantities q = quantities_xy(kPi / 4, 0.8, kPi / 2, 0.0);
    CHECK(std::abs(q.var_a) <= 1e-13);  // <sx> = 1 on |phi_0(pi/4)>
    CHECK(std::abs(q.mixedness) <= 1e-13);
  }
  for (double alpha : {0.3, 1.0}) {
    const DerivedQuantities q = quantities_xy(alpha, -0.6, 2.2, 0.0);
    CHECK(std::abs(q.mixedness) <= 1e-13);
  }

  // The confirmed formulas match metrics on the numeric state; the comm
  // term (Eq. 11) is printed with exponent e^{2Pt} and at lambda = 1 that
  // coincides with the correct e^{2 lambda P t}, so probe it at 0.5.
  {
    const double alpha = kPi / 4, lambda = 1.0, beta = kPi / 2, t = 0.5;
    const TightnessReport m =
        report(numeric_state(alpha, XYFeedback{lambda, beta}, t), sigma_xz_pair());
    const DerivedQuantities q = quantities_xy(alpha, lambda, beta, t);
    CHECK(std::abs(q.var_a - m.var_a) <= 1e-6);
    CHECK(std::abs(q.var_b - m.var_b) <= 1e-6);
    CHECK(std::abs(0.25 * q.comm_sq - m.comm_term) <= 1e-6);  // lambda = 1 masks the typo
    CHECK(std::abs(0.25 * q.anticomm_sq - m.anticomm_term) <= 1e-6);
    CHECK(std::abs(q.mixedness - m.mixedness_y) <= 1e-6);
  }
  {
    const double alpha = kPi / 4, lambda = 0.5, beta = 1.1, t = 0.8;
    const TightnessReport m =
        report(numeric_state(alpha, XYFeedback{lambda, beta}, t), sigma_xz_pair());
    const DerivedQuantities q = quantities_xy(alpha, lambda, beta, t);
    CHECK(std::abs(q.var_a - m.var_a) <= 1e-6);
    CHECK(std::abs(q.var_b - m.var_b) <= 1e-6);
    CHECK(std::abs(q.mixedness - m.mixedness_y) <= 1e-6);
    CHECK(std::abs(0.25 * q.anticomm_sq - m.anticomm_term) <= 1e-6);
    CHECK(std::abs(0.25 * q.comm_sq - m.comm_term) > 1e-4);  // Eq. 11 as printed
  }
}

TEST_CASE("quantities_z at t = 0 and against the numeric oracle") {
  for (double t : {0.0, 0.5, 2.0}) {
    CHECK(std::abs(quantities_z(0.0, 0.7, t).mixedness) <= 1e-13);
  }
  {
    const double alpha = 0.6;
    const DerivedQuantities q = quantities_z(alpha, 0.4, 0.0);
    const double mean =
        expectation(superposition_state(alpha), HermitianObservable{pauli(Pauli::X)});
    CHECK(q.var_a == doctest::Approx(1.0 - mean * mean).epsilon(1e-12));
  }
  {
    const double alpha = kPi / 4, mu = 1.0, t = 0.5;
    const TightnessReport m = report(numeric_state(alpha, ZFeedback{mu}, t), sigma_xz_pair());
    const DerivedQuantities q = quantities_z(alpha, mu, t);
    CHECK(std::abs(q.var_a - m.var_a) <= 1e-6);
    CHECK(std::abs(q.var_b - m.var_b) <= 1e-6);
    CHECK(std::abs(0.25 * q.anticomm_sq - m.anticomm_term) <= 1e-6);
    // Eq. 26 (exponent as printed) and Eq. 28 (Gamma power) disagree:
    CHECK(std::abs(0.25 * q.comm_sq - m.comm_term) > 1e-3);
    CHECK(std::abs(q.mixedness - m.mixedness_y) > 1e-3);
  }
}

TEST_CASE("steady_xy reproduces the printed limits") {
  {
    const SteadyTightness s = steady_xy(1.0, kPi / 2);
    CHECK(s.u_inf == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(s.y_inf == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  }
  {
    const SteadyTightness s = steady_xy(1.0, 0.0);
    CHECK(s.u_inf == doctest::Approx(16.0 / 25.0).epsilon(1e-12));
    CHECK(s.y_inf == doctest::Approx(8.0 / 25.0).epsilon(1e-12));
  }
  CHECK(steady_xy(-1.0, 0.0).u_inf == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(steady_xy(0.0, 1.3).u_inf == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(steady_xy(0.0, 1.3).y_inf == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("printed specializations are consistent with the general form") {
  CHECK(specialization_consistency_error() <= 1e-12);
  // and y_inf = u_inf / 2 identically
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> lam(-2.0, 2.0);
  std::uniform_real_distribution<double> beta(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const SteadyTightness s = steady_xy(lam(rng), beta(rng));
    CHECK(std::abs(s.y_inf - 0.5 * s.u_inf) <= 1e-15);
  }
}

TEST_CASE("cross_validate classifies the XY family as pre-established") {
  const auto statuses = cross_validate(FormulaFamily::XY, default_xy_grid(), 1e-6, 2);
  const auto m = status_map(statuses);
  CHECK(m.size() == 14);
  for (FormulaId id : {FormulaId::Eq6, FormulaId::Eq7, FormulaId::Eq8, FormulaId::Eq9,
                       FormulaId::Eq10, FormulaId::Eq12, FormulaId::Eq13, FormulaId::Eq15,
                       FormulaId::Eq16, FormulaId::Eq17, FormulaId::Eq18, FormulaId::Eq19,
                       FormulaId::Eq20}) {
    CHECK(m.at(id) == FormulaStatusKind::Confirmed);
  }
  CHECK(m.at(FormulaId::Eq11) == FormulaStatusKind::Discrepant);
  for (const auto& s : statuses) CHECK(s.grid_id == "xy-default-v1");
}

TEST_CASE("cross_validate classifies the Z family as pre-established") {
  const auto statuses = cross_validate(FormulaFamily::Z, default_z_grid(), 1e-6, 2);
  const auto m = status_map(statuses);
  CHECK(m.size() == 8);
  for (FormulaId id : {FormulaId::Eq21, FormulaId::Eq22, FormulaId::Eq23, FormulaId::Eq24,
                       FormulaId::Eq25, FormulaId::Eq27}) {
    CHECK(m.at(id) == FormulaStatusKind::Confirmed);
  }
  CHECK(m.at(FormulaId::Eq26) == FormulaStatusKind::Discrepant);
  CHECK(m.at(FormulaId::Eq28) == FormulaStatusKind::Discrepant);
}

TEST_CASE("cross_validate confirms Eq. 22 on the spec's example grid") {
  ParameterGrid grid;
  grid.id = "eq22-example";
  grid.alphas = {0.0, kPi / 4, kPi / 2};
  grid.strengths = {0.0, 0.3, 1.0};
  grid.times = {0.0, 0.5, 1.0, 2.0};
  const auto m = status_map(cross_validate(FormulaFamily::Z, grid, 1e-6));
  CHECK(m.at(FormulaId::Eq22) == FormulaStatusKind::Confirmed);
}

TEST_CASE("cross_validate at the degenerate t = 0 grid point") {
  ParameterGrid grid;
  grid.id = "t0-only";
  grid.alphas = {0.0, 0.4, kPi / 4, 1.2};
  grid.strengths = {-0.8, 0.3, 1.0};
  grid.betas = {0.7, kPi / 2, 2.9};
  grid.times = {0.0};
  const auto xy = cross_validate(FormulaFamily::XY, grid, 1e-6);
  for (const auto& s : xy) {
    if (s.id == FormulaId::Eq19 || s.id == FormulaId::Eq20 || s.id == FormulaId::Eq15 ||
        s.id == FormulaId::Eq16 || s.id == FormulaId::Eq17 || s.id == FormulaId::Eq18)
      continue;  // steady forms have no t axis
    CHECK(s.max_abs_error <= 1e-12);
  }

  grid.strengths = {-0.9, 0.3, 0.8};
  const auto z = cross_validate(FormulaFamily::Z, grid, 1e-6);
  for (const auto& s : z) {
    if (s.id == FormulaId::Eq26) {
      // the printed e^{2 - 2 t mu^2} exponent is already wrong at t = 0
      CHECK(s.status == FormulaStatusKind::Discrepant);
    } else {
      CHECK(s.max_abs_error <= 1e-12);
    }
  }
}

TEST_CASE("confirmed formulas stay confirmed on a fresh random grid") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> strength(-1.0, 1.0);
  std::uniform_real_distribution<double> beta(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> time(0.0, 3.0);

  ParameterGrid grid;
  grid.id = "random-53";
  for (int i = 0; i < 3; ++i) grid.alphas.push_back(angle(rng));
  while (grid.strengths.size() < 3) {
    const double s = strength(rng);
    if (std::abs(1.0 - 4.0 * s * s) > 1e-2) grid.strengths.push_back(s);
  }
  for (int i = 0; i < 3; ++i) grid.betas.push_back(beta(rng));
  grid.times = {0.0};
  for (int i = 0; i < 3; ++i) {
    // stratified ascending draws: one from each of (0, 1], (1, 2], (2, 3]
    grid.times.push_back(static_cast<double>(i) + time(rng) / 3.0 + 0.05);
  }
  for (int i = 0; i <= 10; ++i) grid.steady_lambdas.push_back(-1.0 + 0.2 * i);
  for (int i = 0; i <= 10; ++i) grid.steady_betas.push_back(2.0 * kPi * i / 10.0);

  const auto xy = status_map(cross_validate(FormulaFamily::XY, grid, 1e-6, 2));
  for (FormulaId id : {FormulaId::Eq6, FormulaId::Eq7, FormulaId::Eq8, FormulaId::Eq9,
                       FormulaId::Eq10, FormulaId::Eq12, FormulaId::Eq13, FormulaId::Eq19,
                       FormulaId::Eq20}) {
    CHECK(xy.at(id) == FormulaStatusKind::Confirmed);
  }
  const auto z = status_map(cross_validate(FormulaFamily::Z, grid, 1e-6, 2));
  for (FormulaId id : {FormulaId::Eq21, FormulaId::Eq22, FormulaId::Eq23, FormulaId::Eq24,
                       FormulaId::Eq25, FormulaId::Eq27}) {
    CHECK(z.at(id) == FormulaStatusKind::Confirmed);
  }
}

TEST_CASE("errata formatting lists every formula with a status") {
  const auto statuses = cross_validate(FormulaFamily::Z, default_z_grid(), 1e-6, 2);
  const std::string table = format_errata(statuses);
  CHECK(table.find("Eq22") != std::string::npos);
  CHECK(table.find("CONFIRMED") != std::string::npos);
  CHECK(table.find("DISCREPANT") != std::string::npos);
  CHECK(table.find("z-default-v1") != std::string::npos);
}
