#include "searchload/cumulative.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "searchload/errors.hpp"

namespace searchload {

namespace {

double floor_snr(const DetectionModel& model, double pd_floor) {
  try {
    return model.required_snr(pd_floor);
  } catch (const InfeasibleError&) {
    return 0.0;
  }
}

void check_positive(double r_f, double r_s) {
  if (!(r_f > 0.0)) throw DomainError("r_f must be positive");
  if (!(r_s > 0.0)) throw DomainError("r_s must be positive");
}

}  // namespace

void CumulativeContext::validate() const {
  if (!(s0 > 0.0)) throw DomainError("s0 must be positive");
  if (!(pd_floor > 0.0 && pd_floor < 1.0)) throw DomainError("pd_floor must lie in (0, 1)");
  detection.validate();
}

CumulativeModel::CumulativeModel(const CumulativeContext& ctx)
    : ctx_((ctx.validate(), ctx)),
      detection_(ctx.detection),
      floor_snr_(floor_snr(detection_, ctx.pd_floor)) {}

double CumulativeModel::scan_snr(int i, double y, double r_f, double r_s) const {
  if (i < 1) throw DomainError("scan index must be at least 1");
  if (!(y >= 0.0)) throw DomainError("range offset must be nonnegative");
  check_positive(r_f, r_s);
  const double d = 1.0 + y + (i - 1) * r_f;
  const double d2 = d * d;
  return ctx_.s0 * r_s / (d2 * d2);
}

ScanCount CumulativeModel::m_f(double r_f, double r_s) const {
  check_positive(r_f, r_s);
  ScanCount out;
  const auto below = [&](int scan) {
    return detection_.pd(scan_snr(scan, r_f, r_f, r_s)) < ctx_.pd_floor;
  };
  out.degenerate = below(1);
  if (floor_snr_ <= 0.0) {
    out.count = kMaxScans;
    out.capped = true;
    return out;
  }
  // pd(s) < floor <=> s < floor_snr; solve for the first scan index past the
  // crossing, then settle the boundary with direct evaluations.
  const double reach = std::pow(ctx_.s0 * r_s / floor_snr_, 0.25);
  const double guess = std::floor((reach - 1.0) / r_f);
  if (guess >= kMaxScans) {
    out.count = kMaxScans;
    out.capped = true;
    return out;
  }
  int m = std::max(1, static_cast<int>(guess));
  while (m > 1 && below(m)) --m;
  while (!below(m + 1)) {
    if (++m >= kMaxScans) {
      out.capped = true;
      break;
    }
  }
  out.count = m;
  return out;
}

double CumulativeModel::integrand(double y, double r_f, double r_s, int scans) const {
  const double signal = ctx_.s0 * r_s;
  double miss = 1.0;
  for (int k = 0; k < scans; ++k) {
    const double d = 1.0 + y + k * r_f;
    const double d2 = d * d;
    miss *= 1.0 - detection_.pd(signal / (d2 * d2));
    // Below half an ulp of 1 the complement is exactly 1.0 in double.
    if (miss < 1e-17) break;
  }
  return 1.0 - miss;
}

double CumulativeModel::p_c(double r_f, double r_s) const {
  check_positive(r_f, r_s);
  const int scans = m_f(r_f, r_s).count;
  const auto f = [&](double y) { return integrand(y, r_f, r_s, scans); };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, 0.0, r_f, 15, kTolerance, &error);
  const double abs_error = error / r_f;
  if (abs_error > kTolerance) throw QuadratureError(abs_error, kTolerance);
  return std::clamp(integral / r_f, 0.0, 1.0);
}

double scan_snr(int i, double y, double r_f, double r_s, const CumulativeContext& ctx) {
  return CumulativeModel(ctx).scan_snr(i, y, r_f, r_s);
}

ScanCount m_f(double r_f, double r_s, const CumulativeContext& ctx) {
  return CumulativeModel(ctx).m_f(r_f, r_s);
}

double p_c(double r_f, double r_s, const CumulativeContext& ctx) {
  return CumulativeModel(ctx).p_c(r_f, r_s);
}

}  // namespace searchload
