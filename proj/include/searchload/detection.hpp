#pragma once

// One-off probability of detection for Swerling targets with noncoherent
// integration, built on the chi-square survival function.

namespace searchload {

enum class SwerlingCase { I, II, III, IV };

/// Number of independent Rayleigh samples seen during one detection attempt.
int independent_samples(SwerlingCase sw, int n_cpi);

const char* to_string(SwerlingCase sw);

struct DetectionContext {
  double p_fa = 1e-6;
  int n_cpi = 1;
  SwerlingCase swerling = SwerlingCase::I;

  /// Throws DomainError unless 0 < p_fa < 1 and n_cpi >= 1.
  void validate() const;
};

/// Chi-square survival function K_m(x, d) = 1 - F_chi2(x; d) for even d.
double km(double x, int dof);

/// Inverse of km in x: km(km_inv(p, d), d) == p.
double km_inv(double p, int dof);

/// P_d for a linear SNR `s`. Recomputes the detection threshold on each call;
/// hot loops should hold a DetectionModel instead.
double pd(double s, const DetectionContext& ctx);

/// SNR giving exactly `p_d_des`. Throws InfeasibleError when no positive SNR
/// does (p_d_des <= p_fa, or p_d_des already reached at zero signal).
double required_snr(double p_d_des, const DetectionContext& ctx);

/// A DetectionContext with its threshold K_m^{-1}(P_fa, 2 n_cpi) precomputed.
class DetectionModel {
 public:
  explicit DetectionModel(const DetectionContext& ctx);

  double pd(double s) const;
  double required_snr(double p_d_des) const;

  const DetectionContext& context() const noexcept { return ctx_; }
  /// K_m^{-1}(P_fa, 2 n_cpi), the noise-only threshold on the integrated statistic.
  double threshold() const noexcept { return threshold_; }
  int n_e() const noexcept { return n_e_; }

 private:
  DetectionContext ctx_;
  int n_e_;
  double threshold_;
  // threshold_ - 2 (n_cpi - n_e)
  double shifted_threshold_;
};

namespace detail {

/// Regularized upper incomplete gamma Q(a, z); series below z = a + 1,
/// continued fraction above.
double gamma_q(double a, double z);

}  // namespace detail

}  // namespace searchload
