#pragma once

#include <string>
#include <vector>

#include "qfb/algebra.hpp"

namespace qfb {

/// Shorthand constants of the XY-family closed forms. All real.
struct XYConstants {
  double big_o = 0.0;  // exp(t + 4 t lambda^2 + 4 t lambda cos(beta))
  double big_p = 0.0;  // lambda + cos(beta)
  double big_t = 0.0;  // 1 + 2 lambda^2 + 2 lambda cos(beta)
  double xi = 0.0;     // 1 + lambda cos(beta)
  double ell = 0.0;    // 1 + 2 lambda^2 e^{Tt} - (1 + 2 lambda^2) cos(2a) + 4 lambda cos(beta) sin(a)^2
  double big_g = 0.0;  // P cosh(t lambda P) - (cos(beta) + lambda cos(2 beta)) sinh(t lambda P)

  /// Throws DomainError when big_t <= 0.
  static XYConstants evaluate(double alpha, double lambda, double beta, double t);
};

/// Shorthand constants of the Z-family closed forms.
struct ZConstants {
  double gamma = 1.0;  // exp(2 t mu^2)
  double big_r = 0.0;  // (1 - 4 mu^2)^2

  static ZConstants evaluate(double mu, double t);
};

/// Width of the band around the removable singularities of the printed
/// forms inside which the analytic evaluators refuse to run: |1 - 4 mu^2|
/// for the Z family, |lambda + cos(beta)| for the XY family.
inline constexpr double kSingularBand = 1e-6;

/// Printed closed-form state for F = lambda(sin(beta) sx + cos(beta) sy).
/// Transcribed verbatim; the output is not validated here (cross-validation
/// decides whether the formula deserves trust at these parameters).
/// Throws DomainError when T <= 0 and SingularParameterError when
/// |lambda + cos(beta)| < 1e-9 (use the numeric path there).
DensityMatrix rho_xy(double alpha, double lambda, double beta, double t);

/// Printed closed-form state for F = mu sigma_z. Throws
/// SingularParameterError inside the band |1 - 4 mu^2| < kSingularBand.
DensityMatrix rho_z(double alpha, double mu, double t);

/// The five printed derived quantities, verbatim. comm_sq and anticomm_sq
/// are the paper's unnormalized |<.>|^2; the metrics module's terms carry
/// the extra 1/4, applied explicitly at any comparison boundary.
struct DerivedQuantities {
  double var_a = 0.0;
  double var_b = 0.0;
  double comm_sq = 0.0;
  double anticomm_sq = 0.0;
  double mixedness = 0.0;
};

DerivedQuantities quantities_xy(double alpha, double lambda, double beta, double t);
DerivedQuantities quantities_z(double alpha, double mu, double t);

struct SteadyTightness {
  double u_inf = 0.0;
  double y_inf = 0.0;
};

/// Printed steady-state tightness/mixedness, general beta form.
SteadyTightness steady_xy(double lambda, double beta);

/// The printed beta = pi/2 and beta = 0 specializations of u_inf.
double steady_xy_u_beta_half(double lambda);
double steady_xy_u_beta_zero(double lambda);

enum class FormulaId {
  Eq6, Eq7, Eq8, Eq9, Eq10, Eq11, Eq12, Eq13,
  Eq15, Eq16, Eq17, Eq18, Eq19, Eq20,
  Eq21, Eq22, Eq23, Eq24, Eq25, Eq26, Eq27, Eq28,
};

const char* formula_name(FormulaId id);

enum class FormulaFamily { XY, Z };

enum class FormulaStatusKind { Confirmed, Discrepant };

struct FormulaStatus {
  FormulaId id = FormulaId::Eq6;
  FormulaStatusKind status = FormulaStatusKind::Discrepant;
  double max_abs_error = 0.0;
  std::string grid_id;
};

/// Cartesian parameter grid for a cross-validation campaign. Combinations
/// inside a singular band are skipped. strengths holds lambda (XY) or mu (Z).
struct ParameterGrid {
  std::string id;
  std::vector<double> alphas;
  std::vector<double> strengths;
  std::vector<double> betas;          // XY only
  std::vector<double> times;          // ascending, >= 0
  std::vector<double> steady_lambdas; // XY steady-state scan
  std::vector<double> steady_betas;
};

ParameterGrid default_xy_grid();
ParameterGrid default_z_grid();

/// Compares every printed formula of the family against the numeric oracle
/// (RK4 integration of the master equation for the time-dependent forms,
/// the null-space steady state for Eqs. 15-20) over the grid. Discrepancy
/// is data, not failure. Degenerate steady-state grid points are skipped.
std::vector<FormulaStatus> cross_validate(FormulaFamily family, const ParameterGrid& grid,
                                          double tol, int jobs = 1);

/// Aligned plain-text errata table.
std::string format_errata(const std::vector<FormulaStatus>& statuses);

/// Elementwise max |rho_xy(alpha,...,0) - |phi_0><phi_0||, and the Z analog.
double t0_recovery_error_xy(double alpha, double lambda, double beta);
double t0_recovery_error_z(double alpha, double mu);

/// Max over lambda in [-2, 2] (step 0.01) of the deviation between the
/// printed beta = pi/2 / beta = 0 specializations and the printed general
/// form, plus the y = u/2 identity. Internal consistency only.
double specialization_consistency_error();

}  // namespace qfb
