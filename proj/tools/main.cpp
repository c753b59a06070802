#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qfb/sweep.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

double parse_alpha(const std::string& text) {
  if (text == "ground") return 0.0;
  if (text == "superposition") return kPi / 4.0;
  if (text == "excited") return kPi / 2.0;
  std::size_t consumed = 0;
  const double value = std::stod(text, &consumed);
  if (consumed != text.size())
    throw CLI::ValidationError("--alpha", "expected radians or ground|superposition|excited");
  return value;
}

std::vector<double> parse_alphas(const std::vector<std::string>& texts) {
  // Default to the three initial states of the paper's figures.
  if (texts.empty()) return {0.0, kPi / 4.0, kPi / 2.0};
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_alpha(t));
  return out;
}

struct CommonFlags {
  std::string feedback = "xy";
  double lambda = 1.0;
  double beta = kPi / 2.0;
  double mu = 1.0;
  std::vector<std::string> alphas;
  std::string out_path;
  int jobs = 1;
  std::string integrator = "rk4";
  double integrator_step = 1e-3;
  double tolerance = 1e-10;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_integrator = true) {
  cmd->add_option("--feedback", flags.feedback, "Feedback family: xy or z")
      ->check(CLI::IsMember({"xy", "z"}))
      ->capture_default_str();
  cmd->add_option("--lambda", flags.lambda, "XY feedback strength")->capture_default_str();
  cmd->add_option("--beta", flags.beta, "XY feedback angle in radians")->capture_default_str();
  cmd->add_option("--mu", flags.mu, "Z feedback strength")->capture_default_str();
  cmd->add_option("--alpha", flags.alphas,
                  "Initial state angle in radians, or ground|superposition|excited "
                  "(repeatable; default: all three)");
  cmd->add_option("--out", flags.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--jobs", flags.jobs, "Worker threads for sweep points")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  if (with_integrator) {
    cmd->add_option("--integrator", flags.integrator, "Time integrator: rk4 or rk45")
        ->check(CLI::IsMember({"rk4", "rk45"}))
        ->capture_default_str();
    cmd->add_option("--integrator-step", flags.integrator_step, "RK4 step size")
        ->capture_default_str();
    cmd->add_option("--tolerance", flags.tolerance, "RK45 local error tolerance")
        ->capture_default_str();
  }
}

qfb::FeedbackOperator make_feedback(const CommonFlags& flags) {
  if (flags.feedback == "z") return qfb::ZFeedback{flags.mu};
  return qfb::XYFeedback{flags.lambda, flags.beta};
}

qfb::EvolveOptions make_integrator(const CommonFlags& flags) {
  qfb::EvolveOptions opts;
  opts.method = (flags.integrator == "rk45") ? qfb::Method::RK45Adaptive : qfb::Method::RK4Fixed;
  opts.step = flags.integrator_step;
  opts.tolerance = flags.tolerance;
  return opts;
}

qfb::SweepAxis parse_axis(const std::string& name) {
  if (name == "time") return qfb::SweepAxis::Time;
  if (name == "lambda") return qfb::SweepAxis::Lambda;
  if (name == "beta") return qfb::SweepAxis::Beta;
  if (name == "mu") return qfb::SweepAxis::Mu;
  return qfb::SweepAxis::Alpha;
}

// Streams to --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw qfb::ValidationError("cannot open " + path + " for writing");
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-qubit Markovian feedback: uncertainty tightness and mixedness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file (flags take precedence)");

  CommonFlags evolve_flags;
  double evolve_tmax = 6.0;
  double evolve_step = 0.01;
  bool evolve_analytic = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "Time evolution as CSV");
  add_common(evolve_cmd, evolve_flags);
  evolve_cmd->add_option("--t-max", evolve_tmax, "End of the time grid")->capture_default_str();
  evolve_cmd->add_option("--step", evolve_step, "Time grid spacing")->capture_default_str();
  evolve_cmd->add_flag("--analytic", evolve_analytic,
                       "Append max |rho_numeric - rho_printed| column");

  CommonFlags sweep_flags;
  std::string sweep_axis = "lambda";
  double sweep_from = -1.0;
  double sweep_to = 1.0;
  double sweep_by = 0.01;
  double sweep_t = 0.5;
  bool sweep_range_set = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep at a fixed time as CSV");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--axis", sweep_axis, "Sweep axis: time, lambda, beta, mu or alpha")
      ->check(CLI::IsMember({"time", "lambda", "beta", "mu", "alpha"}))
      ->capture_default_str();
  auto* from_opt = sweep_cmd->add_option("--from", sweep_from, "Axis start")->capture_default_str();
  sweep_cmd->add_option("--to", sweep_to, "Axis stop")->capture_default_str();
  sweep_cmd->add_option("--by", sweep_by, "Axis step")->capture_default_str();
  sweep_cmd->add_option("--t", sweep_t, "Evolution time per grid point")->capture_default_str();

  CommonFlags steady_flags;
  std::string steady_axis = "lambda";
  bool steady_surface = false;
  double steady_from = 0.0;
  double steady_to = 0.0;
  double steady_by = 0.0;
  auto* steady_cmd = app.add_subcommand("steady", "Steady-state scan as CSV");
  add_common(steady_cmd, steady_flags, false);
  steady_cmd->add_option("--axis", steady_axis, "Scan axis: lambda, beta or mu")
      ->check(CLI::IsMember({"lambda", "beta", "mu"}))
      ->capture_default_str();
  steady_cmd->add_flag("--surface", steady_surface, "Full lambda x beta grid (xy family)");
  auto* steady_from_opt = steady_cmd->add_option("--from", steady_from, "Axis start");
  steady_cmd->add_option("--to", steady_to, "Axis stop");
  steady_cmd->add_option("--by", steady_by, "Axis step");

  double verify_tol = 1e-6;
  int verify_jobs = 1;
  std::string verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-validate the printed closed forms");
  verify_cmd->add_option("--tol", verify_tol, "Campaign tolerance")->capture_default_str();
  verify_cmd->add_option("--jobs", verify_jobs, "Worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "Write the report to this file as well");

  int figure_id = 0;
  std::string figure_outdir = ".";
  int figure_jobs = 1;
  auto* figure_cmd = app.add_subcommand("figure", "Reproduce the data behind figures 2-10");
  figure_cmd->add_option("id", figure_id, "Figure number (2-10)")->required();
  figure_cmd->add_option("--outdir", figure_outdir, "Directory for fig<N>.csv")
      ->capture_default_str();
  figure_cmd->add_option("--jobs", figure_jobs, "Worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (evolve_cmd->parsed()) {
      qfb::EvolveArgs args;
      args.feedback = make_feedback(evolve_flags);
      args.alphas = parse_alphas(evolve_flags.alphas);
      args.time = {0.0, evolve_tmax, evolve_step};
      args.integrator = make_integrator(evolve_flags);
      args.analytic_column = evolve_analytic;
      args.jobs = evolve_flags.jobs;
      OutputTarget target(evolve_flags.out_path);
      qfb::run_evolve(args, target.stream());
      return 0;
    }
    if (sweep_cmd->parsed()) {
      qfb::SweepArgs args;
      args.axis = parse_axis(sweep_axis);
      if (!*from_opt && args.axis == qfb::SweepAxis::Beta) {
        args.range = {0.0, 2.0 * kPi, 0.02};
      } else if (!*from_opt && args.axis == qfb::SweepAxis::Time) {
        args.range = {0.0, 6.0, 0.01};
      } else if (!*from_opt && args.axis == qfb::SweepAxis::Alpha) {
        args.range = {0.0, kPi / 2.0, 0.01};
      } else {
        args.range = {sweep_from, sweep_to, sweep_by};
      }
      args.t = sweep_t;
      args.feedback = make_feedback(sweep_flags);
      args.alphas = parse_alphas(sweep_flags.alphas);
      args.integrator = make_integrator(sweep_flags);
      args.jobs = sweep_flags.jobs;
      OutputTarget target(sweep_flags.out_path);
      qfb::run_sweep(args, target.stream());
      return 0;
    }
    if (steady_cmd->parsed()) {
      qfb::SteadyArgs args;
      args.z_family = (steady_flags.feedback == "z");
      args.axis = parse_axis(steady_axis);
      args.surface = steady_surface;
      args.fixed_lambda = steady_flags.lambda;
      args.fixed_beta = steady_flags.beta;
      args.jobs = steady_flags.jobs;
      if (*steady_from_opt) {
        const qfb::SweepRange range{steady_from, steady_to, steady_by};
        if (args.axis == qfb::SweepAxis::Beta) {
          args.beta_range = range;
        } else if (args.axis == qfb::SweepAxis::Mu) {
          args.mu_range = range;
        } else {
          args.lambda_range = range;
        }
      }
      OutputTarget target(steady_flags.out_path);
      qfb::run_steady(args, target.stream());
      return 0;
    }
    if (verify_cmd->parsed()) {
      std::ostringstream report;
      const int code = qfb::run_verify({verify_tol, verify_jobs}, report);
      std::cout << report.str();
      if (!verify_out.empty()) {
        std::ofstream file(verify_out, std::ios::binary | std::ios::trunc);
        if (!file) throw qfb::ValidationError("cannot open " + verify_out + " for writing");
        file << report.str();
      }
      return code;
    }
    if (figure_cmd->parsed()) {
      if (figure_id < 2 || figure_id > 10) {
        std::cerr << "unknown figure id " << figure_id << " (expected 2..10)\n";
        return 2;
      }
      const std::string path = qfb::run_figure(figure_id, figure_outdir, figure_jobs);
      std::cerr << "wrote " << path << "\n";
      return 0;
    }
  } catch (const qfb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
