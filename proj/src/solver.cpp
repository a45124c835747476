#include "searchload/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace searchload {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinFrame = 1e-5;
constexpr double kMaxFrame = 1e6;
// Relative slack for r_S values computed from the transition formulas.
constexpr double kBoundarySlack = 1e-12;
constexpr int kPaperPolynomialDegree = 10;

bool near(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

void apply_caps(CurveSample& s, const Requirements& req) {
  s.feasible = std::isfinite(s.r_f);
  s.violated.reset();
  if (!s.feasible) {
    s.violated = Constraint::CumulativePc;
    return;
  }
  if (req.r_f_max && s.r_f > *req.r_f_max) {
    s.feasible = false;
    s.violated = Constraint::RfMax;
  } else if (req.l_s_max && s.l_s > *req.l_s_max) {
    s.feasible = false;
    s.violated = Constraint::LsMax;
  }
}

// Strictly better: lower load, ties to the smaller r_S.
bool better(const CurveSample& a, const CurveSample& b) {
  if (!a.feasible) return false;
  if (!b.feasible) return true;
  if (a.l_s != b.l_s) return a.l_s < b.l_s;
  return a.r_s < b.r_s;
}

void validate_requirements(const Requirements& req) {
  const auto prob = [](double v) { return v > 0.0 && v < 1.0; };
  if (!prob(req.p_c_des)) throw DomainError("p_c_des must lie in (0, 1)");
  if (req.p_d_des && !prob(*req.p_d_des)) throw DomainError("p_d_des must lie in (0, 1)");
  if (req.r_s_des && !(*req.r_s_des > 0.0)) throw DomainError("r_s_des must be positive");
  if (req.l_s_max && !(*req.l_s_max > 0.0)) throw DomainError("l_s_max must be positive");
  if (req.r_f_max && !(*req.r_f_max > 0.0)) throw DomainError("r_f_max must be positive");
}

std::vector<double> sample_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  if (grid.back() < hi - 1e-12 * hi) grid.push_back(hi);
  return grid;
}

std::vector<Constraint> active_constraints(const CurveSample& best, const Requirements& req,
                                           const NormalizedBounds& bounds, double r_s_des) {
  std::vector<Constraint> active;
  if (r_s_des > 0.0 && best.r_s <= r_s_des * (1.0 + 1e-9)) active.push_back(Constraint::OneOffPd);
  active.push_back(Constraint::CumulativePc);
  if (req.l_s_max && best.l_s >= *req.l_s_max * (1.0 - 1e-4)) active.push_back(Constraint::LsMax);
  if (req.r_f_max && best.r_f >= *req.r_f_max * (1.0 - 1e-4)) active.push_back(Constraint::RfMax);
  if (near(best.r_theta, bounds.r_theta_min, 1e-12) ||
      near(best.r_theta, bounds.r_theta_max, 1e-12) || near(best.r_d, bounds.r_d_min, 1e-12) ||
      near(best.r_d, bounds.r_d_max, 1e-12)) {
    active.push_back(Constraint::VariableBound);
  }
  return active;
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Phase01: return "0->1";
    case Phase::Phase12: return "1->2";
    case Phase::Phase23: return "2->3";
  }
  return "?";
}

PhaseBoundaries phase_boundaries(const NormalizedBounds& b, const RadarScenario& sc) {
  const double p = sc.p;
  const double q = sc.q;
  const double theta_min_p = std::pow(b.r_theta_min, -p);
  return {std::pow(b.r_theta_max, -p) * b.r_d_min * std::exp(-p / 2),
          theta_min_p * b.r_d_min * std::exp(-p / 2), theta_min_p * b.r_d_min * std::exp(-q / 2),
          theta_min_p * b.r_d_max * std::exp(-q / 2)};
}

double eps_phase01(const RadarScenario& sc) {
  return 1.0 / (sc.k() * std::sqrt(8.0 * (sc.a / sc.p) * std::numbers::ln2));
}

double eps_phase23(const RadarScenario& sc) {
  return 1.0 / (sc.k() * std::sqrt(8.0 * (sc.a / sc.q) * std::numbers::ln2));
}

double reduced_load(double r_theta, double eps, double r_d, int q) {
  return r_d * std::pow(r_theta * eps, -q);
}

BeamSubproblemSolution solve_beam_subproblem(double r_s, const NormalizedBounds& b,
                                             const RadarScenario& sc) {
  const PhaseBoundaries pb = phase_boundaries(b, sc);
  if (!(r_s >= pb.r_s0 * (1.0 - kBoundarySlack))) {
    std::ostringstream os;
    os << "r_S = " << r_s << " lies below r_S0 = " << pb.r_s0
       << ": even the widest beam at minimum dwell overshoots it";
    throw InfeasibleError({Constraint::VariableBound}, os.str());
  }
  if (!(r_s <= pb.r_s3 * (1.0 + kBoundarySlack))) {
    std::ostringstream os;
    os << "r_S = " << r_s << " exceeds r_S3 = " << pb.r_s3
       << ": maximum dwell at minimum beam width cannot reach it";
    throw InfeasibleError({Constraint::VariableBound}, os.str());
  }

  BeamSubproblemSolution s{};
  if (r_s <= pb.r_s1) {
    s.phase = Phase::Phase01;
    s.eps = eps_phase01(sc);
    s.r_d = b.r_d_min;
    s.r_theta = std::clamp(std::pow(b.r_d_min / r_s, 1.0 / sc.p) * std::exp(-0.5), b.r_theta_min,
                           b.r_theta_max);
  } else if (r_s <= pb.r_s2) {
    s.phase = Phase::Phase12;
    s.r_theta = b.r_theta_min;
    s.r_d = b.r_d_min;
    const double log_ratio = std::log(b.r_d_min * std::pow(b.r_theta_min, -sc.p) / r_s);
    s.eps = std::sqrt(std::max(0.0, log_ratio) / sc.shape_coefficient());
  } else {
    s.phase = Phase::Phase23;
    s.eps = eps_phase23(sc);
    s.r_theta = b.r_theta_min;
    s.r_d = std::clamp(r_s * std::pow(b.r_theta_min, sc.p) * std::exp(sc.q / 2.0), b.r_d_min,
                       b.r_d_max);
  }
  s.l_tilde = reduced_load(s.r_theta, s.eps, s.r_d, sc.q);
  return s;
}

FrameSolution solve_frame_subproblem(double r_s, double p_c_des, const CumulativeModel& model,
                                     FrameBracket bracket, double width) {
  if (!(p_c_des > 0.0 && p_c_des < 1.0)) throw DomainError("p_c_des must lie in (0, 1)");
  if (!(bracket.low > 0.0 && bracket.high > bracket.low)) {
    throw DomainError("frame bracket must satisfy 0 < low < high");
  }
  double lo = bracket.low;
  double hi = bracket.high;
  double p_lo = model.p_c(lo, r_s);
  double p_hi = kNaN;
  while (p_lo < p_c_des) {
    hi = lo;
    p_hi = p_lo;
    lo *= 0.25;
    if (lo < kMinFrame) {
      std::ostringstream os;
      os << "P_c,des = " << p_c_des << " unreachable at r_S = " << r_s
         << " even with r_f = " << kMinFrame;
      throw InfeasibleError({Constraint::CumulativePc}, os.str());
    }
    p_lo = model.p_c(lo, r_s);
  }
  if (std::isnan(p_hi)) p_hi = model.p_c(hi, r_s);
  while (p_hi >= p_c_des) {
    lo = hi;
    p_lo = p_hi;
    hi *= 2.0;
    if (hi > kMaxFrame) {
      throw InfeasibleError({Constraint::CumulativePc},
                            "P_c stays above P_c,des for arbitrarily long frames");
    }
    p_hi = model.p_c(hi, r_s);
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double p_mid = model.p_c(mid, r_s);
    if (p_mid >= p_c_des) {
      lo = mid;
      p_lo = p_mid;
    } else {
      hi = mid;
      p_hi = p_mid;
    }
  }
  return {lo, hi - lo, p_lo, p_hi};
}

double TargetModel::reference_snr() const {
  if (s0.has_value() == p_d0.has_value()) {
    throw DomainError("exactly one of s0 and p_d0 must define the reference SNR");
  }
  if (s0) {
    if (!(*s0 > 0.0)) throw DomainError("s0 must be positive");
    return *s0;
  }
  return required_snr(*p_d0, detection());
}

CurveSample evaluate_sample(double r_s, const RadarScenario& scenario,
                            const NormalizedBounds& bounds, const CumulativeModel& model,
                            const Requirements& req, double eta_value, double rf_width,
                            std::optional<double> warm) {
  const BeamSubproblemSolution beam = solve_beam_subproblem(r_s, bounds, scenario);
  CurveSample s{r_s,  beam.r_theta, beam.eps, beam.r_d, beam.l_tilde,
                kNaN, kNaN,         beam.phase, false, std::nullopt};
  FrameBracket bracket;
  if (warm && *warm > 0.0) bracket = {*warm, 1.5 * *warm};
  try {
    s.r_f = solve_frame_subproblem(r_s, req.p_c_des, model, bracket, rf_width).r_f;
    s.l_s = eta_value * s.l_tilde / s.r_f;
  } catch (const InfeasibleError&) {
  }
  apply_caps(s, req);
  return s;
}

std::vector<double> polynomial_smooth(std::span<const double> x, std::span<const double> y,
                                      int degree) {
  if (x.size() != y.size()) throw DomainError("polynomial_smooth: size mismatch");
  if (degree < 0 || x.size() <= static_cast<std::size_t>(degree)) {
    throw DomainError("polynomial_smooth: need more points than the degree");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (*lo_it + *hi_it);
  const double half = std::max(0.5 * (*hi_it - *lo_it), 1e-300);

  // Chebyshev basis on the scaled abscissa keeps the normal equations tame.
  Eigen::MatrixXd basis(n, degree + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (x[i] - mid) / half;
    basis(i, 0) = 1.0;
    if (degree >= 1) basis(i, 1) = t;
    for (int j = 2; j <= degree; ++j) basis(i, j) = 2.0 * t * basis(i, j - 1) - basis(i, j - 2);
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), n);
  const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd fitted = basis * coeffs;
  return {fitted.data(), fitted.data() + n};
}

OptimizationResult optimize(const RadarScenario& scenario, const NormalizedBounds& bounds,
                            const TargetModel& target, const Requirements& req,
                            const SolverOptions& options) {
  scenario.validate();
  validate_requirements(req);
  if (!(options.grid_step > 0.0)) throw DomainError("grid_step must be positive");

  const CumulativeModel model(target.cumulative());
  const double s0 = model.context().s0;
  const double eta_value = eta(scenario, bounds);
  const PhaseBoundaries pb = phase_boundaries(bounds, scenario);

  double r_s_des = 0.0;
  if (req.r_s_des) {
    r_s_des = *req.r_s_des;
  } else if (req.p_d_des) {
    r_s_des = model.detection().required_snr(*req.p_d_des) / s0;
  }
  if (r_s_des > pb.r_s3) {
    std::ostringstream os;
    os << "required r_S,des = " << r_s_des << " exceeds r_S3 = " << pb.r_s3;
    throw InfeasibleError({Constraint::OneOffPd, Constraint::VariableBound}, os.str());
  }

  const bool paper = options.fidelity == Fidelity::Paper;
  const double rf_width = paper ? options.paper_rf_width : options.exact_rf_width;
  const double lo = std::max(r_s_des, pb.r_s0);
  const double hi = pb.r_s3;

  std::vector<CurveSample> curves;
  std::optional<double> warm;
  for (double r : sample_grid(lo, hi, options.grid_step)) {
    curves.push_back(evaluate_sample(r, scenario, bounds, model, req, eta_value, rf_width, warm));
    if (std::isfinite(curves.back().r_f)) warm = curves.back().r_f;
  }

  if (paper) {
    std::vector<double> xs, ys;
    for (const auto& s : curves) {
      if (std::isfinite(s.r_f)) {
        xs.push_back(s.r_s);
        ys.push_back(s.r_f);
      }
    }
    if (xs.size() > kPaperPolynomialDegree) {
      const std::vector<double> fit = polynomial_smooth(xs, ys, kPaperPolynomialDegree);
      std::size_t j = 0;
      for (auto& s : curves) {
        if (!std::isfinite(s.r_f)) continue;
        s.r_f = fit[j++];
        s.l_s = s.r_f > 0.0 ? eta_value * s.l_tilde / s.r_f : kNaN;
        if (!(s.r_f > 0.0)) s.r_f = kNaN;
        apply_caps(s, req);
      }
    }
  }

  std::size_t best_index = curves.size();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].feasible && (best_index == curves.size() || better(curves[i], curves[best_index]))) {
      best_index = i;
    }
  }
  if (best_index == curves.size()) {
    std::vector<Constraint> culprits;
    for (auto c : {Constraint::OneOffPd, Constraint::CumulativePc, Constraint::LsMax,
                   Constraint::RfMax, Constraint::VariableBound}) {
      const bool seen = std::any_of(curves.begin(), curves.end(),
                                    [c](const CurveSample& s) { return s.violated == c; });
      if (seen) culprits.push_back(c);
    }
    if (r_s_des > 0.0) culprits.insert(culprits.begin(), Constraint::OneOffPd);
    std::ostringstream os;
    os << "no r_S in [" << lo << ", " << hi << "] satisfies every requirement";
    throw InfeasibleError(culprits, os.str());
  }

  CurveSample best = curves[best_index];
  if (!paper && options.refine && curves.size() > 1) {
    double a = curves[best_index == 0 ? 0 : best_index - 1].r_s;
    double b = curves[std::min(best_index + 1, curves.size() - 1)].r_s;
    const std::optional<double> seed =
        best_index > 0 && std::isfinite(curves[best_index - 1].r_f)
            ? std::optional<double>(curves[best_index - 1].r_f)
            : std::nullopt;
    const auto eval = [&](double r) {
      CurveSample s = evaluate_sample(r, scenario, bounds, model, req, eta_value, rf_width, seed);
      if (better(s, best)) best = s;
      return s.feasible ? s.l_s : kInf;
    };
    const double anchor = best.r_s;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > options.refine_tolerance) {
      bool keep_left;
      if (std::isinf(fc) && std::isinf(fd)) {
        // Both probes infeasible: keep the side holding the known feasible point.
        if (anchor <= c) {
          b = c;
        } else if (anchor >= d) {
          a = d;
        } else {
          a = c;
          b = d;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
        fc = eval(c);
        fd = eval(d);
        continue;
      }
      keep_left = fc <= fd;
      if (keep_left) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = eval(d);
      }
    }
  }

  OptimizationResult out;
  out.params = {best.r_theta, best.eps, best.r_d, best.r_f};
  out.r_s_star = best.r_s;
  out.l_s_star = search_load(out.params, eta_value, scenario.q);
  out.phase = best.phase;
  out.active_constraints = active_constraints(best, req, bounds, r_s_des);
  out.curves = std::move(curves);
  out.eta = eta_value;
  out.s0 = s0;
  out.r_s_des = r_s_des;
  out.boundaries = pb;
  return out;
}

namespace {

SweepPoint run_point(double axis_value, const RadarScenario& scenario,
                     const NormalizedBounds& bounds, const TargetModel& target,
                     const Requirements& req, const SolverOptions& options) {
  SweepPoint point{axis_value, false, kNaN, kNaN, kNaN, Phase::Phase01, {}};
  try {
    const OptimizationResult r = optimize(scenario, bounds, target, req, options);
    point.feasible = true;
    point.r_s_star = r.r_s_star;
    point.r_f_star = r.params.r_f;
    point.l_s_star = r.l_s_star;
    point.phase = r.phase;
  } catch (const InfeasibleError& e) {
    point.reason = e.what();
  } catch (const DomainError& e) {
    point.reason = e.what();
  }
  return point;
}

}  // namespace

std::vector<SweepPoint> power_sweep(const RadarScenario& scenario, const NormalizedBounds& bounds,
                                    const TargetModel& target, const Requirements& req,
                                    std::span<const double> p_d0_grid,
                                    const SolverOptions& options) {
  Requirements released;
  released.p_c_des = req.p_c_des;
  std::vector<SweepPoint> out;
  out.reserve(p_d0_grid.size());
  for (double p_d0 : p_d0_grid) {
    TargetModel t = target;
    t.s0.reset();
    t.p_d0 = p_d0;
    out.push_back(run_point(p_d0, scenario, bounds, t, released, options));
  }
  return out;
}

std::vector<SweepPoint> p_c_sweep(const RadarScenario& scenario, const NormalizedBounds& bounds,
                                  const TargetModel& target, const Requirements& req,
                                  std::span<const double> p_c_grid,
                                  const SolverOptions& options) {
  std::vector<SweepPoint> out;
  out.reserve(p_c_grid.size());
  for (double p_c : p_c_grid) {
    Requirements r = req;
    r.p_c_des = p_c;
    out.push_back(run_point(p_c, scenario, bounds, target, r, options));
  }
  return out;
}

}  // namespace searchload
