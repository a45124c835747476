#include "searchload/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "searchload/errors.hpp"

namespace searchload::oracle {

namespace {

constexpr long kChunk = 1 << 14;

void check_axis(const AxisGrid& axis, const char* name) {
  if (axis.points < 64) throw DomainError(std::string(name) + ": at least 64 grid points required");
  if (!(axis.hi > axis.lo)) throw DomainError(std::string(name) + ": empty grid range");
}

long run_chunk(double s, const DetectionContext& ctx, int n_e_draws_per_pulse, double threshold,
               long trials, std::uint64_t seed, long chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
  // Chi-square with 2 dof (I/II) or 4 dof (III/IV), scaled to mean s.
  std::gamma_distribution<double> power(n_e_draws_per_pulse, s / n_e_draws_per_pulse);
  const bool per_pulse = ctx.swerling == SwerlingCase::II || ctx.swerling == SwerlingCase::IV;

  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    double x = s > 0.0 ? power(rng) : 0.0;
    double stat = 0.0;
    for (int j = 0; j < ctx.n_cpi; ++j) {
      if (per_pulse && j > 0 && s > 0.0) x = power(rng);
      const double re = std::sqrt(x) + noise(rng);
      const double im = noise(rng);
      stat += 2.0 * (re * re + im * im);
    }
    if (stat > threshold) ++hits;
  }
  return hits;
}

}  // namespace

void GridSpec::validate() const {
  check_axis(r_theta, "r_theta grid");
  check_axis(eps, "eps grid");
  if (!(outer_step > 0.0)) throw DomainError("outer_step must be positive");
}

GridSpec default_grid(const RadarScenario& scenario, const NormalizedBounds& bounds,
                      int points) {
  const double e_lo = std::min(eps_phase01(scenario), eps_phase23(scenario));
  const double e_hi = std::max(eps_phase01(scenario), eps_phase23(scenario));
  return {{bounds.r_theta_min, bounds.r_theta_max, points},
          {0.9 * e_lo, 1.1 * e_hi, points},
          1e-3};
}

GridBeamResult grid_beam_optimum(double r_s, const NormalizedBounds& bounds,
                                 const RadarScenario& scenario, const GridSpec& grid) {
  grid.validate();
  const double beta = scenario.shape_coefficient();
  GridBeamResult out{{0.0, 0.0, 0.0, std::numeric_limits<double>::infinity(), Phase::Phase01}, 0};
  const auto consider = [&](double r_theta, double eps, double r_d) {
    ++out.feasible_points;
    const double l = reduced_load(r_theta, eps, r_d, scenario.q);
    if (l < out.best.l_tilde) out.best = {r_theta, eps, r_d, l, Phase::Phase01};
  };
  for (int i = 0; i < grid.r_theta.points; ++i) {
    const double r_theta = grid.r_theta.at(i);
    const double base = r_s * std::pow(r_theta, scenario.p);
    for (int j = 0; j < grid.eps.points; ++j) {
      const double eps = grid.eps.at(j);
      const double r_d = base * std::exp(beta * eps * eps);
      if (r_d < bounds.r_d_min || r_d > bounds.r_d_max) continue;
      consider(r_theta, eps, r_d);
    }
  }
  // The r_d bound faces: a 2-D grid only meets them by chance, so walk the
  // eps grid along each face and solve r_theta from the equality instead.
  for (const double r_d : {bounds.r_d_min, bounds.r_d_max}) {
    for (int j = 0; j < grid.eps.points; ++j) {
      const double eps = grid.eps.at(j);
      const double r_theta = std::pow(r_d * std::exp(-beta * eps * eps) / r_s, 1.0 / scenario.p);
      if (r_theta < bounds.r_theta_min || r_theta > bounds.r_theta_max) continue;
      consider(r_theta, eps, r_d);
    }
  }
  if (out.feasible_points == 0) {
    std::ostringstream os;
    os << "no grid point reaches r_S = " << r_s;
    throw InfeasibleError({Constraint::VariableBound}, os.str());
  }
  // Label by which bounds the grid optimum sits on.
  const bool theta_min = out.best.r_theta <= bounds.r_theta_min + 0.5 * grid.r_theta.step();
  const bool d_min = out.best.r_d <= bounds.r_d_min * (1.0 + 1e-2);
  out.best.phase = !theta_min ? Phase::Phase01 : (d_min ? Phase::Phase12 : Phase::Phase23);
  return out;
}

DenseOuterResult dense_outer_optimum(const RadarScenario& scenario,
                                     const NormalizedBounds& bounds, const TargetModel& target,
                                     const Requirements& req, double step) {
  SolverOptions options;
  options.grid_step = step;
  options.refine = false;
  const OptimizationResult r = optimize(scenario, bounds, target, req, options);
  return {r.r_s_star, r.l_s_star, r.params.r_f, static_cast<long>(r.curves.size())};
}

McEstimate mc_pd(double s, const DetectionContext& ctx, long trials, std::uint64_t seed,
                 int workers) {
  ctx.validate();
  if (trials < 100000) throw DomainError("mc_pd needs at least 1e5 trials");
  if (!(s >= 0.0)) throw DomainError("mc_pd: SNR must be nonnegative");
  const double threshold = km_inv(ctx.p_fa, 2 * ctx.n_cpi);
  const int shape =
      (ctx.swerling == SwerlingCase::III || ctx.swerling == SwerlingCase::IV) ? 2 : 1;

  const long chunks = (trials + kChunk - 1) / kChunk;
  std::vector<long> hits(static_cast<std::size_t>(chunks), 0);
  const auto work = [&](long first, long stride) {
    for (long c = first; c < chunks; c += stride) {
      const long n = std::min(kChunk, trials - c * kChunk);
      hits[static_cast<std::size_t>(c)] = run_chunk(s, ctx, shape, threshold, n, seed, c);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  long total = 0;
  for (long h : hits) total += h;
  const double p = static_cast<double>(total) / trials;
  return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / trials) / trials), total, trials};
}

bool VerifyReport::pass() const {
  return std::all_of(beam.begin(), beam.end(), [](const BeamCheck& c) { return c.pass; }) &&
         std::all_of(mc.begin(), mc.end(), [](const McCheck& c) { return c.pass; });
}

std::string VerifyReport::worst_offender() const {
  std::ostringstream os;
  double worst = 0.0;
  for (const auto& c : beam) {
    if (c.pass) continue;
    const double score = std::abs(c.gap) + (c.within_cell ? 0.0 : 1.0);
    if (score > worst) {
      worst = score;
      os.str("");
      os << "beam r_S=" << c.r_s << " gap=" << c.gap << (c.within_cell ? "" : " outside-cell");
    }
  }
  for (const auto& c : mc) {
    if (!c.pass && c.z > worst) {
      worst = c.z;
      os.str("");
      os << "mc s=" << c.s << " z=" << c.z;
    }
  }
  return os.str();
}

std::vector<double> phase_samples(const PhaseBoundaries& pb, int per_phase) {
  std::vector<double> out;
  const double edges[] = {pb.r_s0, pb.r_s1, pb.r_s2, pb.r_s3};
  for (int ph = 0; ph < 3; ++ph) {
    for (int i = 0; i < per_phase; ++i) {
      const double t = per_phase == 1 ? 0.5 : static_cast<double>(i) / (per_phase - 1);
      out.push_back(edges[ph] + t * (edges[ph + 1] - edges[ph]));
    }
  }
  return out;
}

VerifyReport verify(const RadarScenario& scenario, const NormalizedBounds& bounds,
                    const DetectionContext& detection, const VerifyOptions& options,
                    const BeamSolver& solver) {
  scenario.validate();
  VerifyReport report;
  const GridSpec grid = default_grid(scenario, bounds, options.grid_points);
  const double beta = scenario.shape_coefficient();
  for (double r : phase_samples(phase_boundaries(bounds, scenario), options.points_per_phase)) {
    const BeamSubproblemSolution exact = solver(r, bounds, scenario);
    const GridBeamResult approx = grid_beam_optimum(r, bounds, scenario, grid);
    const double dt = grid.r_theta.step();
    const double de = grid.eps.step();
    // One cell in r_theta or eps moves r_d by about r_d (p dt / r_theta + 2 beta eps de).
    const double dd =
        exact.r_d * (scenario.p * dt / exact.r_theta + 2.0 * beta * exact.eps * de);
    const bool within = std::abs(approx.best.r_theta - exact.r_theta) <= dt * (1 + 1e-9) &&
                        std::abs(approx.best.eps - exact.eps) <= de * (1 + 1e-9) &&
                        std::abs(approx.best.r_d - exact.r_d) <= dd;
    const double gap = (approx.best.l_tilde - exact.l_tilde) / exact.l_tilde;
    // The grid may not beat the analytic optimum beyond rounding.
    const bool pass = within && gap <= options.max_gap && gap >= -1e-9;
    report.beam.push_back({r, exact.phase, exact.l_tilde, approx.best.l_tilde, gap, within, pass});
  }
  const DetectionModel model(detection);
  for (std::size_t i = 0; i < options.mc_snrs.size(); ++i) {
    const double s = options.mc_snrs[i];
    const McEstimate est = mc_pd(s, detection, options.mc_trials, options.seed + i, options.mc_workers);
    const double analytic = model.pd(s);
    const double z = std::abs(est.p - analytic) / est.standard_error;
    report.mc.push_back({s, analytic, est, z, z <= options.mc_sigmas});
  }
  return report;
}

}  // namespace searchload::oracle
