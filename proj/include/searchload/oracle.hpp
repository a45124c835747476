#pragma once

// Independent checks for the analytic machinery: exhaustive grid search over
// the beam subproblem, a dense-grid outer search, and Monte Carlo detection.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "searchload/detection.hpp"
#include "searchload/lattice.hpp"
#include "searchload/solver.hpp"

namespace searchload::oracle {

struct AxisGrid {
  double lo;
  double hi;
  int points;

  double step() const { return (hi - lo) / (points - 1); }
  double at(int i) const { return i == points - 1 ? hi : lo + i * step(); }
};

struct GridSpec {
  AxisGrid r_theta;
  AxisGrid eps;
  double outer_step = 1e-3;

  /// Throws DomainError if an axis has fewer than 64 points or an empty range.
  void validate() const;
};

/// r_theta over its bounds, eps over a band around the two constant-phase
/// spacing ratios.
GridSpec default_grid(const RadarScenario& scenario, const NormalizedBounds& bounds,
                      int points = 400);

struct GridBeamResult {
  BeamSubproblemSolution best;
  /// Number of grid points satisfying the r_S equality within the r_d bounds.
  long feasible_points;
};

/// Scans (r_theta, eps), solves r_d from the r_S equality, and keeps the
/// feasible point of least L~. Throws InfeasibleError if none is feasible.
GridBeamResult grid_beam_optimum(double r_s, const NormalizedBounds& bounds,
                                 const RadarScenario& scenario, const GridSpec& grid);

struct DenseOuterResult {
  double r_s_star;
  double l_s_star;
  double r_f_star;
  long samples;
};

/// Exhaustive outer search at `step` with no refinement.
DenseOuterResult dense_outer_optimum(const RadarScenario& scenario,
                                     const NormalizedBounds& bounds, const TargetModel& target,
                                     const Requirements& req, double step);

struct McEstimate {
  double p;
  double standard_error;
  long hits;
  long trials;
};

/// Monte Carlo P_d: fluctuating target power (exponential for I/II,
/// chi-square with 4 dof for III/IV; I/III redrawn per attempt, II/IV per
/// pulse) in unit complex Gaussian noise, square-law integrated over n_cpi
/// samples and compared with K_m^{-1}(P_fa, 2 n_cpi). Trials are split into
/// fixed chunks with derived seeds, so the result does not depend on
/// `workers`.
McEstimate mc_pd(double s, const DetectionContext& ctx, long trials, std::uint64_t seed,
                 int workers = 1);

using BeamSolver = std::function<BeamSubproblemSolution(double, const NormalizedBounds&,
                                                        const RadarScenario&)>;

struct BeamCheck {
  double r_s;
  Phase phase;
  double analytic_l_tilde;
  double grid_l_tilde;
  double gap;  // (grid - analytic) / analytic
  bool within_cell;
  bool pass;
};

struct McCheck {
  double s;
  double analytic;
  McEstimate estimate;
  double z;  // |mc - analytic| / standard_error
  bool pass;
};

struct VerifyOptions {
  int points_per_phase = 5;
  int grid_points = 400;
  double max_gap = 5e-3;
  std::vector<double> mc_snrs = {1.0, 5.0, 20.0};
  long mc_trials = 1000000;
  int mc_workers = 1;
  double mc_sigmas = 3.0;
  std::uint64_t seed = 1;
};

struct VerifyReport {
  std::vector<BeamCheck> beam;
  std::vector<McCheck> mc;
  bool pass() const;
  /// Check with the largest normalized excess over its tolerance, or empty.
  std::string worst_offender() const;
};

/// Sample r_S values equally spaced within each phase, endpoints included.
std::vector<double> phase_samples(const PhaseBoundaries& pb, int per_phase);

/// Beam-subproblem oracle at phase samples plus Monte Carlo P_d spot checks.
VerifyReport verify(const RadarScenario& scenario, const NormalizedBounds& bounds,
                    const DetectionContext& detection, const VerifyOptions& options,
                    const BeamSolver& solver = solve_beam_subproblem);

}  // namespace searchload::oracle
