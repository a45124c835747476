#pragma once

// Cumulative probability of detection for an inbound constant-velocity target,
// averaged over its arrival phase within a frame. Frame time is normalized by
// R0 / v_t and ranges by R0, so a scan i frames earlier sits at
// 1 + y + (i - 1) r_f.

#include "searchload/detection.hpp"

namespace searchload {

struct CumulativeContext {
  double s0 = 1.0;  // reference SNR, linear
  DetectionContext detection;
  double pd_floor = 1e-3;

  void validate() const;
};

struct ScanCount {
  int count = 1;
  /// Even the first scan is below the floor; count forced to 1.
  bool degenerate = false;
  /// P_d never falls below the floor; count truncated at CumulativeModel::kMaxScans.
  bool capped = false;
};

class CumulativeModel {
 public:
  static constexpr int kMaxScans = 200000;
  /// Absolute tolerance on P_c for the adaptive quadrature.
  static constexpr double kTolerance = 1e-7;

  explicit CumulativeModel(const CumulativeContext& ctx);

  /// s0 r_s / (1 + y + (i - 1) r_f)^4.
  double scan_snr(int i, double y, double r_f, double r_s) const;

  /// Smallest m >= 1 such that P_d at scan m + 1, evaluated at the far edge of
  /// the frame (y = r_f), is below pd_floor.
  ScanCount m_f(double r_f, double r_s) const;

  /// 1 - prod_{k < scans} [1 - P_d(s0 r_s / (1 + y + k r_f)^4)].
  double integrand(double y, double r_f, double r_s, int scans) const;

  /// Frame-averaged cumulative detection probability. Throws QuadratureError
  /// if the adaptive rule misses kTolerance.
  double p_c(double r_f, double r_s) const;

  const CumulativeContext& context() const noexcept { return ctx_; }
  const DetectionModel& detection() const noexcept { return detection_; }

 private:
  CumulativeContext ctx_;
  DetectionModel detection_;
  // SNR at which P_d equals pd_floor; nonpositive if P_d never drops that low.
  double floor_snr_;
};

double scan_snr(int i, double y, double r_f, double r_s, const CumulativeContext& ctx);
ScanCount m_f(double r_f, double r_s, const CumulativeContext& ctx);
double p_c(double r_f, double r_s, const CumulativeContext& ctx);

}  // namespace searchload
