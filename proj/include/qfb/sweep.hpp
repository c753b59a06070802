#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qfb/analytic.hpp"
#include "qfb/dynamics.hpp"

namespace qfb {

/// One double at 17 significant digits ("%.17g"): round-trip exact and
/// byte-stable across runs.
std::string format_double(double v);

enum class SweepAxis { Time, Lambda, Beta, Mu, Alpha };

/// Inclusive arithmetic grid start + i*step, i = 0..floor((stop-start)/step).
struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> values() const;  // throws ValidationError when malformed
};

struct EvolveArgs {
  FeedbackOperator feedback;
  std::vector<double> alphas;
  SweepRange time{0.0, 6.0, 0.01};
  EvolveOptions integrator;
  bool analytic_column = false;
  int jobs = 1;
};

/// Time series of the full CSV schema, one block per initial alpha.
void run_evolve(const EvolveArgs& args, std::ostream& out);

struct SweepArgs {
  SweepAxis axis = SweepAxis::Lambda;
  SweepRange range{-1.0, 1.0, 0.01};
  double t = 0.5;  // evolution time per grid point (non-time axes)
  FeedbackOperator feedback;
  std::vector<double> alphas;
  EvolveOptions integrator;
  int jobs = 1;
};

/// One evolution per (alpha, axis value); same CSV schema as run_evolve.
void run_sweep(const SweepArgs& args, std::ostream& out);

struct SteadyArgs {
  bool z_family = false;
  SweepAxis axis = SweepAxis::Lambda;  // Lambda | Beta | Mu, or surface
  bool surface = false;                // XY only: full lambda x beta grid
  SweepRange lambda_range{-1.0, 1.0, 0.01};
  SweepRange beta_range{0.0, 6.283185307179586, 0.02};
  SweepRange mu_range{-1.0, 1.0, 0.01};
  double fixed_lambda = 1.0;
  double fixed_beta = 1.5707963267948966;
  int jobs = 1;
};

/// Steady-state scan: numeric null-space solve vs the printed t->infinity
/// forms. Degenerate points are emitted with a status column, not dropped.
void run_steady(const SteadyArgs& args, std::ostream& out);

struct VerifyArgs {
  double tol = 1e-6;
  int jobs = 1;
};

/// Full cross-validation campaign on the default grids plus the
/// t=0-recovery and specialization-consistency checks. Prints the errata
/// table; returns 0 when the MUST-CONFIRM set passes, 1 otherwise.
int run_verify(const VerifyArgs& args, std::ostream& out);

/// Everything needed to reproduce one of the paper's figures 2-10.
struct FigurePreset {
  int id = 0;
  enum class Kind { Evolve, Sweep, SteadyScan, SteadySurface } kind = Kind::Evolve;
  FeedbackOperator feedback;
  std::vector<double> alphas;          // Evolve/Sweep series
  SweepAxis axis = SweepAxis::Time;    // Sweep/SteadyScan axis
  double t = 0.5;                      // Sweep fixed time
};

/// Throws ValidationError for ids outside 2..10.
FigurePreset figure_preset(int id);

/// Writes fig<id>.csv into out_dir; byte-identical across runs and
/// independent of jobs. Returns the file path.
std::string run_figure(int id, const std::string& out_dir, int jobs);

}  // namespace qfb
