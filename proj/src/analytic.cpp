#include "qfb/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "qfb/dynamics.hpp"
#include "qfb/metrics.hpp"
#include "qfb/parallel.hpp"

namespace qfb {

namespace {
constexpr Complex kI{0.0, 1.0};

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("closed forms are stated for t >= 0");
}
}  // namespace

XYConstants XYConstants::evaluate(double alpha, double lambda, double beta, double t) {
  XYConstants c;
  const double cb = std::cos(beta);
  c.big_p = lambda + cb;
  c.big_t = 1.0 + 2.0 * lambda * lambda + 2.0 * lambda * cb;
  if (!(c.big_t > 0.0)) {
    std::ostringstream os;
    os << "T = " << c.big_t << " <= 0 at lambda = " << lambda << ", beta = " << beta;
    throw DomainError(os.str());
  }
  c.big_o = std::exp(t + 4.0 * t * lambda * lambda + 4.0 * t * lambda * cb);
  c.xi = 1.0 + lambda * cb;
  c.ell = 1.0 + 2.0 * lambda * lambda * std::exp(c.big_t * t) -
          (1.0 + 2.0 * lambda * lambda) * std::cos(2.0 * alpha) +
          4.0 * lambda * cb * std::sin(alpha) * std::sin(alpha);
  c.big_g = c.big_p * std::cosh(t * lambda * c.big_p) -
            (cb + lambda * std::cos(2.0 * beta)) * std::sinh(t * lambda * c.big_p);
  return c;
}

ZConstants ZConstants::evaluate(double mu, double t) {
  ZConstants c;
  c.gamma = std::exp(2.0 * t * mu * mu);
  c.big_r = (1.0 - 4.0 * mu * mu) * (1.0 - 4.0 * mu * mu);
  return c;
}

namespace {

void require_xy_nonsingular(const XYConstants& c, double lambda, double beta) {
  if (std::abs(c.big_p) < 1e-9) {
    std::ostringstream os;
    os << "printed XY forms are singular at lambda + cos(beta) = 0 (lambda = " << lambda
       << ", beta = " << beta << "); use the numeric path";
    throw SingularParameterError(os.str());
  }
}

void require_z_nonsingular(double mu) {
  if (std::abs(1.0 - 4.0 * mu * mu) < kSingularBand) {
    std::ostringstream os;
    os << "printed Z forms are singular around mu = +-1/2 (mu = " << mu
       << "); use the numeric path";
    throw SingularParameterError(os.str());
  }
}

}  // namespace

DensityMatrix rho_xy(double alpha, double lambda, double beta, double t) {
  require_time(t);
  const XYConstants c = XYConstants::evaluate(alpha, lambda, beta, t);
  require_xy_nonsingular(c, lambda, beta);

  const double r11 =
      (1.0 + 2.0 * std::exp(c.big_t * t) * lambda * lambda -
       (1.0 + 2.0 * lambda * lambda) * std::cos(2.0 * alpha) +
       4.0 * lambda * std::cos(beta) * std::sin(alpha) * std::sin(alpha)) /
      (2.0 * c.big_t * std::exp(c.big_t * t));

  const Complex eib = std::polar(1.0, beta);
  const Complex num =
      std::sin(2.0 * alpha) *
      (-2.0 * eib * c.xi +
       2.0 * kI * std::exp(2.0 * t * lambda * c.big_p) * (1.0 + eib * lambda) * std::sin(beta));
  const Complex r12 = -num / (4.0 * c.big_p * std::sqrt(c.big_o));

  DensityMatrix rho;
  rho.m << Complex{r11, 0.0}, r12, std::conj(r12), Complex{1.0 - r11, 0.0};
  return rho;
}

DensityMatrix rho_z(double alpha, double mu, double t) {
  require_time(t);
  require_z_nonsingular(mu);
  const ZConstants c = ZConstants::evaluate(mu, t);

  const double r11 = std::exp(-t) * std::sin(alpha) * std::sin(alpha);
  const Complex r12 =
      std::exp(-t / 2.0) * std::sin(2.0 * alpha) / (2.0 * c.gamma) -
      kI * 8.0 * std::exp(-t) * (std::exp(t / 2.0) - c.gamma) * mu * std::sin(alpha) *
          std::sin(alpha) / (2.0 * c.gamma * (1.0 - 4.0 * mu * mu));

  DensityMatrix rho;
  rho.m << Complex{r11, 0.0}, r12, std::conj(r12), Complex{1.0 - r11, 0.0};
  return rho;
}

DerivedQuantities quantities_xy(double alpha, double lambda, double beta, double t) {
  require_time(t);
  const XYConstants c = XYConstants::evaluate(alpha, lambda, beta, t);
  require_xy_nonsingular(c, lambda, beta);

  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const double s2a = std::sin(2.0 * alpha);
  const double c2a = std::cos(2.0 * alpha);
  const double ett = std::exp(c.big_t * t);

  DerivedQuantities q;
  {
    const double inner =
        2.0 * cb + lambda * (1.0 + std::cos(2.0 * beta) +
                             2.0 * std::exp(2.0 * t * lambda * c.big_p) * sb * sb);
    q.var_a = 1.0 - s2a * s2a * inner * inner / (4.0 * c.big_o * c.big_p * c.big_p);
  }
  {
    const double inner = c.big_t * c2a + (ett - 1.0) * (1.0 + 2.0 * lambda * cb);
    q.var_b = 1.0 - inner * inner / (c.big_t * c.big_t * ett * ett);
  }
  {
    // Exponent transcribed exactly as printed: e^{2 P t}, with no lambda.
    const double e2pt = std::exp(2.0 * c.big_p * t);
    q.comm_sq = 4.0 * c.xi * c.xi * s2a * s2a * sb * sb * (e2pt - 1.0) * (e2pt - 1.0) /
                (c.big_o * c.big_p * c.big_p);
  }
  {
    const double inner = (ett - 1.0) * (1.0 + 2.0 * lambda * cb) + c2a * c.big_t;
    q.anticomm_sq = 4.0 * inner * inner * s2a * s2a * c.big_g * c.big_g /
                    (c.big_p * c.big_p * c.big_t * c.big_t * ett * ett * ett);
  }
  {
    const double e2ptl = std::exp(2.0 * c.big_p * t * lambda);
    q.mixedness =
        (-c.big_p * c.big_p * c.ell * (c.ell - 2.0 * c.big_t * ett) -
         c.big_t * c.big_t * std::exp(t) * s2a * s2a *
             (c.xi * c.xi +
              e2ptl * (-2.0 * c.xi + e2ptl * (c.big_t - lambda * lambda)) * sb * sb)) /
        (2.0 * ett * ett * c.big_t * c.big_t * c.big_p * c.big_p);
  }
  return q;
}

DerivedQuantities quantities_z(double alpha, double mu, double t) {
  require_time(t);
  require_z_nonsingular(mu);
  const ZConstants c = ZConstants::evaluate(mu, t);

  const double sa = std::sin(alpha);
  const double s2a = std::sin(2.0 * alpha);

  DerivedQuantities q;
  q.var_a = 0.5 * std::exp(-t * (1.0 + 4.0 * mu * mu)) *
            (-1.0 + 2.0 * std::exp(t + 4.0 * t * mu * mu) + std::cos(4.0 * alpha));
  q.var_b = 2.0 * std::exp(-2.0 * t) * sa * sa *
            (2.0 * std::exp(t) + std::cos(2.0 * alpha) - 1.0);
  {
    // Exponent transcribed exactly as printed: e^{2 - 2 t mu^2}.
    const double e = std::exp(2.0 - 2.0 * t * mu * mu);
    q.comm_sq = 256.0 * std::exp(-2.0 * t) * (-1.0 + e) * (-1.0 + e) * mu * mu * sa * sa *
                sa * sa / c.big_r;
  }
  {
    const double inner = std::exp(t) - 2.0 * sa * sa;
    q.anticomm_sq = 4.0 * std::exp(-t * (3.0 + 4.0 * mu * mu)) * inner * inner * s2a * s2a;
  }
  {
    const double et = std::exp(t);
    const double eh = std::exp(t / 2.0);
    q.mixedness = sa * sa *
                  (c.big_r * c.gamma * (2.0 * et + std::cos(2.0 * alpha) - 1.0) -
                   2.0 * (et * c.big_r * std::cos(alpha) * std::cos(alpha) +
                          16.0 * (eh - c.gamma) * (eh - c.gamma) * mu * mu * sa * sa)) /
                  (c.big_r * c.gamma * et * et);
  }
  return q;
}

SteadyTightness steady_xy(double lambda, double beta) {
  const double cb = std::cos(beta);
  const double big_t = 1.0 + 2.0 * lambda * lambda + 2.0 * lambda * cb;
  if (!(big_t > 0.0)) {
    std::ostringstream os;
    os << "T = " << big_t << " <= 0 at lambda = " << lambda << ", beta = " << beta;
    throw DomainError(os.str());
  }
  const double ratio = (1.0 + 2.0 * lambda * cb) / big_t;
  SteadyTightness s;
  s.u_inf = 1.0 - ratio * ratio;
  s.y_inf = 0.5 * (1.0 - ratio * ratio);
  return s;
}

double steady_xy_u_beta_half(double lambda) {
  const double d = 1.0 + 2.0 * lambda * lambda;
  return 1.0 - 1.0 / (d * d);
}

double steady_xy_u_beta_zero(double lambda) {
  const double d = 1.0 + 2.0 * lambda + 2.0 * lambda * lambda;
  return 4.0 * lambda * lambda * (1.0 + lambda) * (1.0 + lambda) / (d * d);
}

const char* formula_name(FormulaId id) {
  switch (id) {
    case FormulaId::Eq6: return "Eq6";
    case FormulaId::Eq7: return "Eq7";
    case FormulaId::Eq8: return "Eq8";
    case FormulaId::Eq9: return "Eq9";
    case FormulaId::Eq10: return "Eq10";
    case FormulaId::Eq11: return "Eq11";
    case FormulaId::Eq12: return "Eq12";
    case FormulaId::Eq13: return "Eq13";
    case FormulaId::Eq15: return "Eq15";
    case FormulaId::Eq16: return "Eq16";
    case FormulaId::Eq17: return "Eq17";
    case FormulaId::Eq18: return "Eq18";
    case FormulaId::Eq19: return "Eq19";
    case FormulaId::Eq20: return "Eq20";
    case FormulaId::Eq21: return "Eq21";
    case FormulaId::Eq22: return "Eq22";
    case FormulaId::Eq23: return "Eq23";
    case FormulaId::Eq24: return "Eq24";
    case FormulaId::Eq25: return "Eq25";
    case FormulaId::Eq26: return "Eq26";
    case FormulaId::Eq27: return "Eq27";
    case FormulaId::Eq28: return "Eq28";
  }
  return "unknown";
}

ParameterGrid default_xy_grid() {
  const double pi = std::numbers::pi;
  ParameterGrid g;
  g.id = "xy-default-v1";
  g.alphas = {0.0, pi / 8.0, pi / 4.0, 3.0 * pi / 8.0, pi / 2.0};
  g.strengths = {-0.8, -0.5, 0.25, 0.6, 1.0};
  g.betas = {0.0, 0.9, pi / 2.0, 2.4, 5.1};
  g.times = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  g.steady_lambdas.reserve(21);
  for (int i = 0; i <= 20; ++i) g.steady_lambdas.push_back(-1.0 + 0.1 * i);
  g.steady_betas.reserve(21);
  for (int i = 0; i <= 20; ++i) g.steady_betas.push_back(2.0 * pi * i / 20.0);
  return g;
}

ParameterGrid default_z_grid() {
  const double pi = std::numbers::pi;
  ParameterGrid g;
  g.id = "z-default-v1";
  g.alphas = {0.0, pi / 8.0, pi / 4.0, 3.0 * pi / 8.0, pi / 2.0};
  g.strengths = {-0.9, -0.45, 0.3, 0.6, 1.0};
  g.times = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  return g;
}

namespace {

// Width of the band the campaign grids keep away from (wider than the
// evaluators' own reject band so near-singular blowup cannot masquerade as
// formula discrepancy).
constexpr double kGridBand = 1e-3;

constexpr std::size_t kFormulaCount = 22;

std::size_t formula_index(FormulaId id) { return static_cast<std::size_t>(id); }

struct ErrorAccumulator {
  std::array<double, kFormulaCount> max_err{};

  void record(FormulaId id, double err) {
    auto& slot = max_err[formula_index(id)];
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    slot = std::max(slot, err);
  }

  void merge(const ErrorAccumulator& other) {
    for (std::size_t i = 0; i < kFormulaCount; ++i)
      max_err[i] = std::max(max_err[i], other.max_err[i]);
  }
};

double max_entry_error(const Mat2& a, const Mat2& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Numeric oracle settings for the campaign: fixed-step RK4 at the module's
// default h = 1e-3.
EvolveOptions campaign_options(const std::vector<double>& times) {
  EvolveOptions opts;
  opts.method = Method::RK4Fixed;
  opts.step = 1e-3;
  for (double t : times)
    if (t > 0.0) opts.record_grid.push_back(t);
  return opts;
}

void validate_xy_point(double alpha, double lambda, double beta,
                       const std::vector<double>& times, ErrorAccumulator& acc) {
  if (std::abs(lambda + std::cos(beta)) < kGridBand) return;

  const FeedbackOperator f = XYFeedback{lambda, beta};
  const DensityMatrix rho0 = superposition_state(alpha);
  const ObservablePair pair = sigma_xz_pair();

  const EvolveOptions opts = campaign_options(times);
  const Trajectory traj = evolve(rho0, f, opts);

  std::size_t k = 0;
  for (double t : times) {
    const DensityMatrix numeric = (t > 0.0) ? traj.states[k++] : rho0;
    const TightnessReport m = report(numeric, pair);

    const DensityMatrix analytic = rho_xy(alpha, lambda, beta, t);
    acc.record(FormulaId::Eq6, max_entry_error(analytic.m, numeric.m));
    acc.record(FormulaId::Eq7, std::abs(analytic.m(0, 0).real() - numeric.m(0, 0).real()));
    acc.record(FormulaId::Eq8, std::abs(analytic.m(0, 1) - numeric.m(0, 1)));

    const DerivedQuantities q = quantities_xy(alpha, lambda, beta, t);
    acc.record(FormulaId::Eq9, std::abs(q.var_a - m.var_a));
    acc.record(FormulaId::Eq10, std::abs(q.var_b - m.var_b));
    acc.record(FormulaId::Eq11, std::abs(0.25 * q.comm_sq - m.comm_term));
    acc.record(FormulaId::Eq12, std::abs(0.25 * q.anticomm_sq - m.anticomm_term));
    acc.record(FormulaId::Eq13, std::abs(q.mixedness - m.mixedness_y));
  }
}

void validate_z_point(double alpha, double mu, const std::vector<double>& times,
                      ErrorAccumulator& acc) {
  if (std::abs(1.0 - 4.0 * mu * mu) < kGridBand) return;

  const FeedbackOperator f = ZFeedback{mu};
  const DensityMatrix rho0 = superposition_state(alpha);
  const ObservablePair pair = sigma_xz_pair();

  const EvolveOptions opts = campaign_options(times);
  const Trajectory traj = evolve(rho0, f, opts);

  std::size_t k = 0;
  for (double t : times) {
    const DensityMatrix numeric = (t > 0.0) ? traj.states[k++] : rho0;
    const TightnessReport m = report(numeric, pair);

    const DensityMatrix analytic = rho_z(alpha, mu, t);
    acc.record(FormulaId::Eq21, max_entry_error(analytic.m, numeric.m));
    acc.record(FormulaId::Eq22, std::abs(analytic.m(0, 0).real() - numeric.m(0, 0).real()));
    acc.record(FormulaId::Eq23, std::abs(analytic.m(0, 1) - numeric.m(0, 1)));

    const DerivedQuantities q = quantities_z(alpha, mu, t);
    acc.record(FormulaId::Eq24, std::abs(q.var_a - m.var_a));
    acc.record(FormulaId::Eq25, std::abs(q.var_b - m.var_b));
    acc.record(FormulaId::Eq26, std::abs(0.25 * q.comm_sq - m.comm_term));
    acc.record(FormulaId::Eq27, std::abs(0.25 * q.anticomm_sq - m.anticomm_term));
    acc.record(FormulaId::Eq28, std::abs(q.mixedness - m.mixedness_y));
  }
}

void validate_steady_point(double lambda, double beta, ErrorAccumulator& acc) {
  const SteadySolve solve = try_steady_state(FeedbackOperator{XYFeedback{lambda, beta}});
  if (!solve.state.has_value()) return;  // degenerate point; no unique value to compare

  const TightnessReport m = report(*solve.state, sigma_xz_pair());
  const SteadyTightness printed = steady_xy(lambda, beta);
  acc.record(FormulaId::Eq19, std::abs(printed.u_inf - m.tightness_u));
  acc.record(FormulaId::Eq20, std::abs(printed.y_inf - m.mixedness_y));
}

void validate_steady_slices(double lambda, ErrorAccumulator& acc) {
  const double pi = std::numbers::pi;
  {
    const SteadySolve s = try_steady_state(FeedbackOperator{XYFeedback{lambda, pi / 2.0}});
    if (s.state.has_value()) {
      const TightnessReport m = report(*s.state, sigma_xz_pair());
      acc.record(FormulaId::Eq15, std::abs(steady_xy_u_beta_half(lambda) - m.tightness_u));
      acc.record(FormulaId::Eq16, std::abs(0.5 * steady_xy_u_beta_half(lambda) - m.mixedness_y));
    }
  }
  {
    const SteadySolve s = try_steady_state(FeedbackOperator{XYFeedback{lambda, 0.0}});
    if (s.state.has_value()) {
      const TightnessReport m = report(*s.state, sigma_xz_pair());
      acc.record(FormulaId::Eq17, std::abs(steady_xy_u_beta_zero(lambda) - m.tightness_u));
      acc.record(FormulaId::Eq18, std::abs(0.5 * steady_xy_u_beta_zero(lambda) - m.mixedness_y));
    }
  }
}

}  // namespace

std::vector<FormulaStatus> cross_validate(FormulaFamily family, const ParameterGrid& grid,
                                          double tol, int jobs) {
  if (grid.alphas.empty() || grid.strengths.empty() || grid.times.empty())
    throw ValidationError("cross_validate: grid must be nonempty");

  std::vector<FormulaId> ids;
  std::vector<ErrorAccumulator> partials;

  if (family == FormulaFamily::XY) {
    if (grid.betas.empty()) throw ValidationError("cross_validate: XY grid needs beta values");
    struct Task {
      double alpha, lambda, beta;
    };
    std::vector<Task> tasks;
    for (double a : grid.alphas)
      for (double l : grid.strengths)
        for (double b : grid.betas) tasks.push_back({a, l, b});

    partials.resize(tasks.size() + grid.steady_lambdas.size() +
                    grid.steady_lambdas.size() * grid.steady_betas.size());
    std::vector<std::pair<double, double>> steady_points;
    for (double l : grid.steady_lambdas)
      for (double b : grid.steady_betas) steady_points.emplace_back(l, b);

    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
      validate_xy_point(tasks[i].alpha, tasks[i].lambda, tasks[i].beta, grid.times, partials[i]);
    });
    const std::size_t off1 = tasks.size();
    parallel_for(grid.steady_lambdas.size(), jobs, [&](std::size_t i) {
      validate_steady_slices(grid.steady_lambdas[i], partials[off1 + i]);
    });
    const std::size_t off2 = off1 + grid.steady_lambdas.size();
    parallel_for(steady_points.size(), jobs, [&](std::size_t i) {
      validate_steady_point(steady_points[i].first, steady_points[i].second, partials[off2 + i]);
    });

    ids = {FormulaId::Eq6,  FormulaId::Eq7,  FormulaId::Eq8,  FormulaId::Eq9,
           FormulaId::Eq10, FormulaId::Eq11, FormulaId::Eq12, FormulaId::Eq13,
           FormulaId::Eq15, FormulaId::Eq16, FormulaId::Eq17, FormulaId::Eq18,
           FormulaId::Eq19, FormulaId::Eq20};
  } else {
    struct Task {
      double alpha, mu;
    };
    std::vector<Task> tasks;
    for (double a : grid.alphas)
      for (double m : grid.strengths) tasks.push_back({a, m});
    partials.resize(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
      validate_z_point(tasks[i].alpha, tasks[i].mu, grid.times, partials[i]);
    });
    ids = {FormulaId::Eq21, FormulaId::Eq22, FormulaId::Eq23, FormulaId::Eq24,
           FormulaId::Eq25, FormulaId::Eq26, FormulaId::Eq27, FormulaId::Eq28};
  }

  ErrorAccumulator total;
  for (const auto& p : partials) total.merge(p);

  std::vector<FormulaStatus> out;
  out.reserve(ids.size());
  for (FormulaId id : ids) {
    FormulaStatus st;
    st.id = id;
    st.max_abs_error = total.max_err[formula_index(id)];
    st.status = (st.max_abs_error <= tol) ? FormulaStatusKind::Confirmed
                                          : FormulaStatusKind::Discrepant;
    st.grid_id = grid.id;
    out.push_back(std::move(st));
  }
  return out;
}

std::string format_errata(const std::vector<FormulaStatus>& statuses) {
  std::ostringstream os;
  os << std::left << std::setw(9) << "formula" << std::setw(12) << "status" << std::setw(16)
     << "max_abs_error" << "grid\n";
  for (const auto& s : statuses) {
    std::ostringstream err;
    err << std::scientific << std::setprecision(3) << s.max_abs_error;
    os << std::left << std::setw(9) << formula_name(s.id) << std::setw(12)
       << (s.status == FormulaStatusKind::Confirmed ? "CONFIRMED" : "DISCREPANT")
       << std::setw(16) << err.str() << s.grid_id << "\n";
  }
  return os.str();
}

double t0_recovery_error_xy(double alpha, double lambda, double beta) {
  const DensityMatrix expected = superposition_state(alpha);
  return max_entry_error(rho_xy(alpha, lambda, beta, 0.0).m, expected.m);
}

double t0_recovery_error_z(double alpha, double mu) {
  const DensityMatrix expected = superposition_state(alpha);
  return max_entry_error(rho_z(alpha, mu, 0.0).m, expected.m);
}

double specialization_consistency_error() {
  const double pi = std::numbers::pi;
  double worst = 0.0;
  for (int i = -200; i <= 200; ++i) {
    const double lambda = 0.01 * i;
    const SteadyTightness general_half = steady_xy(lambda, pi / 2.0);
    const SteadyTightness general_zero = steady_xy(lambda, 0.0);
    worst = std::max(worst, std::abs(general_half.u_inf - steady_xy_u_beta_half(lambda)));
    worst = std::max(worst, std::abs(general_zero.u_inf - steady_xy_u_beta_zero(lambda)));
    worst = std::max(worst, std::abs(general_half.y_inf - 0.5 * general_half.u_inf));
    worst = std::max(worst, std::abs(general_zero.y_inf - 0.5 * general_zero.u_inf));
  }
  return worst;
}

}  // namespace qfb
