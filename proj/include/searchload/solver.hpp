#pragma once

// Minimum-search-load beam parameters by decomposition:
//   1. (r_theta, eps, r_d) at fixed r_S, solved in closed form per phase;
//   2. r_f at fixed r_S, the largest frame time meeting the P_c requirement;
//   3. a line search over r_S.

#include <optional>
#include <span>
#include <vector>

#include "searchload/cumulative.hpp"
#include "searchload/detection.hpp"
#include "searchload/errors.hpp"
#include "searchload/lattice.hpp"

namespace searchload {

/// Regimes of the beam-subproblem optimum as r_S grows: beam width shrinking
/// at minimum dwell; both at their minimum with spacing tightening; dwell
/// growing at minimum beam width.
enum class Phase { Phase01, Phase12, Phase23 };

const char* to_string(Phase phase);

struct PhaseBoundaries {
  double r_s0;  // r_theta at its maximum
  double r_s1;
  double r_s2;
  double r_s3;  // r_d at its maximum
};

PhaseBoundaries phase_boundaries(const NormalizedBounds& bounds, const RadarScenario& scenario);

/// Constant spacing ratio of the 0->1 phase, k^-1 (8 (a/p) ln 2)^{-1/2}.
double eps_phase01(const RadarScenario& scenario);
/// Constant spacing ratio of the 2->3 phase, k^-1 (8 (a/q) ln 2)^{-1/2}.
double eps_phase23(const RadarScenario& scenario);

/// L~_s = r_theta^-q r_d eps^-q.
double reduced_load(double r_theta, double eps, double r_d, int q);

struct BeamSubproblemSolution {
  double r_theta;
  double eps;
  double r_d;
  double l_tilde;
  Phase phase;
};

/// Closed-form minimizer of L~_s on the surface r_s(r_theta, eps, r_d) = `r_s`.
/// A value exactly on a transition point belongs to the lower phase. Throws
/// InfeasibleError outside [r_S0, r_S3].
BeamSubproblemSolution solve_beam_subproblem(double r_s, const NormalizedBounds& bounds,
                                             const RadarScenario& scenario);

struct FrameBracket {
  double low = 1e-3;
  double high = 2.0;
};

struct FrameSolution {
  /// Lower end of the final bracket, so p_c(r_f) >= p_c_des up to quadrature error.
  double r_f;
  double width;
  /// p_c at the two ends of the final bracket.
  double p_c_low;
  double p_c_high;
};

/// Largest r_f with p_c(r_f, r_s) >= p_c_des, by bisection down to `width`.
/// The bracket is widened geometrically until it straddles the root. Throws
/// InfeasibleError if even the smallest admissible r_f misses p_c_des.
FrameSolution solve_frame_subproblem(double r_s, double p_c_des, const CumulativeModel& model,
                                     FrameBracket bracket = {}, double width = 1e-4);

struct TargetModel {
  SwerlingCase swerling = SwerlingCase::II;
  int n_cpi = 4;
  double p_fa = 1e-6;
  /// Exactly one of s0 (linear) and p_d0 = P_d(S_0) defines the reference SNR.
  std::optional<double> s0;
  std::optional<double> p_d0;
  double pd_floor = 1e-3;

  DetectionContext detection() const { return {p_fa, n_cpi, swerling}; }
  double reference_snr() const;
  CumulativeContext cumulative() const { return {reference_snr(), detection(), pd_floor}; }
};

struct Requirements {
  /// One-off requirement, either as a probability or directly as r_S. Neither
  /// set means no one-off constraint.
  std::optional<double> p_d_des;
  std::optional<double> r_s_des;
  double p_c_des = 0.85;
  std::optional<double> l_s_max;
  std::optional<double> r_f_max;
};

enum class Fidelity {
  /// Tight root finding at every sample plus golden-section refinement.
  Exact,
  /// 1e-4 bisection, a 10th-order polynomial fit of r_f*(r_S), grid-only minimizer.
  Paper,
};

struct SolverOptions {
  double grid_step = 0.1;
  Fidelity fidelity = Fidelity::Exact;
  /// Golden-section polish between the grid neighbours of the best sample.
  /// Ignored in Paper fidelity.
  bool refine = true;
  double exact_rf_width = 1e-9;
  double paper_rf_width = 1e-4;
  double refine_tolerance = 1e-7;
};

struct CurveSample {
  double r_s;
  double r_theta;
  double eps;
  double r_d;
  double l_tilde;
  double r_f;  // NaN when P_c,des is unreachable at this r_S
  double l_s;  // NaN when r_f is
  Phase phase;
  bool feasible;
  std::optional<Constraint> violated;
};

struct OptimizationResult {
  BeamParams params;
  double r_s_star;
  double l_s_star;
  Phase phase;
  std::vector<Constraint> active_constraints;
  std::vector<CurveSample> curves;

  double eta;
  double s0;
  /// Zero when there is no one-off constraint.
  double r_s_des;
  PhaseBoundaries boundaries;
};

/// Full four-variable minimization. Throws InfeasibleError naming the
/// constraints that emptied the feasible set.
OptimizationResult optimize(const RadarScenario& scenario, const NormalizedBounds& bounds,
                            const TargetModel& target, const Requirements& req,
                            const SolverOptions& options = {});

/// Evaluates one r_S sample of the outer line search (both subproblems plus
/// the operational caps). `warm` seeds the r_f bracket.
CurveSample evaluate_sample(double r_s, const RadarScenario& scenario,
                            const NormalizedBounds& bounds, const CumulativeModel& model,
                            const Requirements& req, double eta, double rf_width,
                            std::optional<double> warm = std::nullopt);

struct SweepPoint {
  double axis_value;
  bool feasible;
  double r_s_star;
  double r_f_star;
  double l_s_star;
  Phase phase;
  std::string reason;  // empty when feasible
};

/// Optimal r_S* and r_f* over a grid of P_d0 = P_d(S_0). The one-off
/// requirement and the operational caps are dropped. Infeasible points are
/// flagged, not thrown.
std::vector<SweepPoint> power_sweep(const RadarScenario& scenario, const NormalizedBounds& bounds,
                                    const TargetModel& target, const Requirements& req,
                                    std::span<const double> p_d0_grid,
                                    const SolverOptions& options = {});

/// Same, varying P_c,des with every other requirement kept.
std::vector<SweepPoint> p_c_sweep(const RadarScenario& scenario, const NormalizedBounds& bounds,
                                  const TargetModel& target, const Requirements& req,
                                  std::span<const double> p_c_grid,
                                  const SolverOptions& options = {});

/// Least-squares polynomial of degree `degree` through (x, y), evaluated back
/// at x. Used by Paper fidelity to smooth r_f*(r_S).
std::vector<double> polynomial_smooth(std::span<const double> x, std::span<const double> y,
                                      int degree);

}  // namespace searchload
