#include "searchload/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "searchload/errors.hpp"

namespace searchload {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 1000;

void check_dof(int dof) {
  if (dof < 2 || dof % 2 != 0) {
    throw DomainError("chi-square degrees of freedom must be a positive even integer, got " +
                      std::to_string(dof));
  }
}

// exp(a ln z - z - lgamma(a)), the common prefactor of both expansions.
double gamma_prefactor(double a, double z) {
  return std::exp(a * std::log(z) - z - std::lgamma(a));
}

double gamma_p_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= z / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * gamma_prefactor(a, z);
}

// Modified Lentz evaluation of the continued fraction for Q(a, z).
double gamma_q_fraction(double a, double z) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return gamma_prefactor(a, z) * h;
}

// Chi-square density with `dof` degrees of freedom.
double chi2_pdf(double x, int dof) {
  const double a = 0.5 * dof;
  if (x <= 0.0) return dof == 2 ? 0.5 : 0.0;
  return 0.5 * std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a));
}

}  // namespace

double detail::gamma_q(double a, double z) {
  if (z <= 0.0) return 1.0;
  if (a == 1.0) return std::exp(-z);
  if (z < a + 1.0) return 1.0 - gamma_p_series(a, z);
  return gamma_q_fraction(a, z);
}

int independent_samples(SwerlingCase sw, int n_cpi) {
  switch (sw) {
    case SwerlingCase::I: return 1;
    case SwerlingCase::II: return n_cpi;
    case SwerlingCase::III: return 2;
    case SwerlingCase::IV: return 2 * n_cpi;
  }
  return 1;
}

const char* to_string(SwerlingCase sw) {
  switch (sw) {
    case SwerlingCase::I: return "I";
    case SwerlingCase::II: return "II";
    case SwerlingCase::III: return "III";
    case SwerlingCase::IV: return "IV";
  }
  return "?";
}

void DetectionContext::validate() const {
  if (!(p_fa > 0.0 && p_fa < 1.0)) {
    throw DomainError("p_fa must lie in (0, 1)");
  }
  if (n_cpi < 1) throw DomainError("n_cpi must be at least 1");
}

double km(double x, int dof) {
  check_dof(dof);
  if (!(x >= 0.0)) throw DomainError("km: x must be nonnegative");
  if (std::isinf(x)) return 0.0;
  return detail::gamma_q(0.5 * dof, 0.5 * x);
}

double km_inv(double p, int dof) {
  check_dof(dof);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("km_inv: p must lie in (0, 1)");
  if (dof == 2) return -2.0 * std::log(p);

  // Bracket [lo, hi] with km(lo) >= p > km(hi); km is decreasing.
  double lo = 0.0;
  double hi = static_cast<double>(dof);
  while (km(hi, dof) >= p) {
    lo = hi;
    hi *= 2.0;
  }
  // Newton on log km(x) - log p, falling back to bisection outside the bracket.
  const double log_p = std::log(p);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double q = km(x, dof);
    if (q == p) return x;
    if (q > p) {
      lo = x;
    } else {
      hi = x;
    }
    const double f = std::log(q) - log_p;
    const double fprime = -chi2_pdf(x, dof) / q;
    double next = x - f / fprime;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * std::max(x, 1.0)) return next;
    x = next;
  }
  return x;
}

DetectionModel::DetectionModel(const DetectionContext& ctx)
    : ctx_(ctx),
      n_e_((ctx.validate(), independent_samples(ctx.swerling, ctx.n_cpi))),
      threshold_(km_inv(ctx.p_fa, 2 * ctx.n_cpi)),
      shifted_threshold_(threshold_ - 2.0 * (ctx.n_cpi - n_e_)) {}

double DetectionModel::pd(double s) const {
  if (!(s >= 0.0)) throw DomainError("pd: SNR must be nonnegative");
  if (std::isinf(s)) return 1.0;
  const double ratio = static_cast<double>(ctx_.n_cpi) / n_e_;
  // A nonpositive argument means the threshold sits below the fluctuation
  // offset; the survival function saturates at 1.
  const double arg = std::max(0.0, shifted_threshold_ / (ratio * s + 1.0));
  return detail::gamma_q(static_cast<double>(n_e_), 0.5 * arg);
}

double DetectionModel::required_snr(double p_d_des) const {
  if (!(p_d_des > 0.0 && p_d_des < 1.0)) {
    throw DomainError("required_snr: probability must lie in (0, 1)");
  }
  if (p_d_des <= ctx_.p_fa) {
    std::ostringstream os;
    os << "desired P_d " << p_d_des << " does not exceed P_fa " << ctx_.p_fa;
    throw InfeasibleError({Constraint::OneOffPd}, os.str());
  }
  const double denom = km_inv(p_d_des, 2 * n_e_);
  const double s =
      (shifted_threshold_ / denom - 1.0) * static_cast<double>(n_e_) / ctx_.n_cpi;
  if (!(s > 0.0)) {
    std::ostringstream os;
    os << "desired P_d " << p_d_des << " is reached at zero SNR for Swerling "
       << to_string(ctx_.swerling) << " with n_cpi = " << ctx_.n_cpi;
    throw InfeasibleError({Constraint::OneOffPd}, os.str());
  }
  return s;
}

double pd(double s, const DetectionContext& ctx) { return DetectionModel(ctx).pd(s); }

double required_snr(double p_d_des, const DetectionContext& ctx) {
  return DetectionModel(ctx).required_snr(p_d_des);
}

}  // namespace searchload
