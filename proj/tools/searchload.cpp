// searchload: minimum search-load beam parameters from a scenario file.
//
//   searchload optimize --config FILE --out DIR
//   searchload sweep    --config FILE --axis p_d0 --values 0.2,0.3,0.4 --out DIR
//   searchload verify   --preset q1_swerling2 --seed 7
//
// Exit status: 0 success, 1 usage, 2 configuration, 3 infeasible, 4 verification failed.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "searchload/errors.hpp"
#include "searchload/io.hpp"
#include "searchload/oracle.hpp"
#include "searchload/solver.hpp"

namespace fs = std::filesystem;
using namespace searchload;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kInfeasible = 3, kVerify = 4 };

struct Source {
  std::string config;
  std::string preset;
  std::optional<double> grid_step;
  std::string fidelity;

  ScenarioConfig load() const {
    fs::path path = config;
    if (!preset.empty()) path = fs::path(SEARCHLOAD_PRESET_DIR) / (preset + ".cfg");
    ScenarioConfig cfg = load_config(path);
    if (grid_step) {
      if (!(*grid_step > 0.0)) throw ConfigError("--grid-step", 0, "grid_step", "must be positive");
      cfg.options.grid_step = *grid_step;
    }
    if (fidelity == "paper") cfg.options.fidelity = Fidelity::Paper;
    if (fidelity == "exact") cfg.options.fidelity = Fidelity::Exact;
    return cfg;
  }
};

void add_source(CLI::App* cmd, Source& src) {
  auto* config = cmd->add_option("--config", src.config, "Scenario file");
  auto* preset = cmd->add_option("--preset", src.preset, "Shipped scenario (q1_swerling2, q2_swerling2)");
  config->excludes(preset);
  preset->excludes(config);
  cmd->add_option("--grid-step", src.grid_step, "Outer r_S grid step");
  cmd->add_option("--fidelity", src.fidelity, "paper or exact")
      ->check(CLI::IsMember({"paper", "exact"}));
}

void ensure_source(const Source& src) {
  if (src.config.empty() && src.preset.empty()) {
    throw ConfigError("<command line>", 0, "config", "give --config FILE or --preset NAME");
  }
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int run_optimize(const Source& src, const std::string& out_dir) {
  const ScenarioConfig cfg = src.load();
  const auto bounds = normalized_bounds(cfg.scenario);
  const OptimizationResult res =
      optimize(cfg.scenario, bounds, cfg.target, cfg.requirements, cfg.options);
  {
    auto out = open_output(out_dir, "result.txt");
    write_result(out, res, cfg);
  }
  {
    auto out = open_output(out_dir, "curves.csv");
    write_curves_csv(out, res.curves);
  }
  write_result(std::cout, res, cfg);
  return kOk;
}

int run_sweep(const Source& src, const std::string& axis, std::vector<double> values,
              const std::vector<double>& linspace, const std::string& out_dir) {
  const ScenarioConfig cfg = src.load();
  if (!linspace.empty()) {
    const int n = static_cast<int>(linspace[2]);
    if (n < 1 || linspace[2] != n) throw ConfigError("--linspace", 0, "count", "must be a positive integer");
    for (int i = 0; i < n; ++i) {
      values.push_back(n == 1 ? linspace[0] : linspace[0] + i * (linspace[1] - linspace[0]) / (n - 1));
    }
  }
  if (values.empty()) throw ConfigError("<command line>", 0, "values", "give --values or --linspace");
  const auto bounds = normalized_bounds(cfg.scenario);
  const auto points =
      axis == "p_d0"
          ? power_sweep(cfg.scenario, bounds, cfg.target, cfg.requirements, values, cfg.options)
          : p_c_sweep(cfg.scenario, bounds, cfg.target, cfg.requirements, values, cfg.options);
  auto out = open_output(out_dir, "sweep.csv");
  write_sweep_csv(out, axis, points);
  write_sweep_csv(std::cout, axis, points);
  return kOk;
}

int run_verify(const Source& src, std::uint64_t seed, long trials, int workers,
               std::optional<double> perturb_eps, const std::string& out_dir) {
  const ScenarioConfig cfg = src.load();
  const auto bounds = normalized_bounds(cfg.scenario);
  oracle::VerifyOptions options;
  options.seed = seed;
  options.mc_trials = trials;
  options.mc_workers = workers;
  oracle::BeamSolver solver = solve_beam_subproblem;
  if (perturb_eps) {
    // Negative control: scale eps* and stay on the r_S surface through r_d.
    const double factor = *perturb_eps;
    solver = [factor](double r_s, const NormalizedBounds& b, const RadarScenario& sc) {
      BeamSubproblemSolution s = solve_beam_subproblem(r_s, b, sc);
      s.eps *= factor;
      s.r_d = r_s * std::pow(s.r_theta, sc.p) * std::exp(sc.shape_coefficient() * s.eps * s.eps);
      s.l_tilde = reduced_load(s.r_theta, s.eps, s.r_d, sc.q);
      return s;
    };
  }
  const oracle::VerifyReport report =
      oracle::verify(cfg.scenario, bounds, cfg.target.detection(), options, solver);
  write_verify_report(std::cout, report);
  if (!out_dir.empty()) {
    auto out = open_output(out_dir, "verify.txt");
    write_verify_report(out, report);
  }
  if (!report.pass()) {
    std::cerr << "verify failed: " << report.worst_offender() << '\n';
    return kVerify;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum search-load beam parameters for a phased-array radar"};
  app.require_subcommand(1);

  Source src;
  std::string out_dir;

  auto* optimize_cmd = app.add_subcommand("optimize", "Solve one scenario");
  add_source(optimize_cmd, src);
  optimize_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string axis;
  std::vector<double> values;
  std::vector<double> linspace;
  auto* sweep_cmd = app.add_subcommand("sweep", "Re-solve over a grid of P_d0 or P_c,des");
  add_source(sweep_cmd, src);
  sweep_cmd->add_option("--axis", axis, "p_d0 or p_c_des")
      ->required()
      ->check(CLI::IsMember({"p_d0", "p_c_des"}));
  sweep_cmd->add_option("--values", values, "Comma-separated axis values")->delimiter(',');
  sweep_cmd->add_option("--linspace", linspace, "LO HI COUNT")->expected(3);
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::uint64_t seed = 1;
  long trials = 1000000;
  int workers = 1;
  std::optional<double> perturb_eps;
  auto* verify_cmd = app.add_subcommand("verify", "Check the solver against grid and Monte Carlo oracles");
  add_source(verify_cmd, src);
  verify_cmd->add_option("--seed", seed, "Monte Carlo seed");
  verify_cmd->add_option("--mc-trials", trials, "Monte Carlo trials per SNR")
      ->check(CLI::Range(100000L, 1000000000L));
  verify_cmd->add_option("--workers", workers, "Monte Carlo threads")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", out_dir, "Also write verify.txt here");
  verify_cmd->add_option("--perturb-eps", perturb_eps)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ensure_source(src);
    if (*optimize_cmd) return run_optimize(src, out_dir);
    if (*sweep_cmd) return run_sweep(src, axis, values, linspace, out_dir);
    return run_verify(src, seed, trials, workers, perturb_eps, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
