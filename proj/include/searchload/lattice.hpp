#pragma once

// Beam-lattice geometry, the dimensionless SNR at the weakest lattice point,
// and the search load expressed in dimensionless design variables.

namespace searchload {

enum class LatticeKind { Triangular, Rectangular };

/// Worst-point offset factor: 1/sqrt(3) triangular, 1/sqrt(2) rectangular.
double lattice_k(LatticeKind lattice);

const char* to_string(LatticeKind lattice);

/// Search extent along one axis: an angular half-width (radians) or, on the
/// non-dimensional axis of a one-dimensional lattice, a bar count.
struct Extent {
  enum class Unit { Radians, Bars };
  double value = 0.0;
  Unit unit = Unit::Radians;

  static Extent radians(double half_width) { return {half_width, Unit::Radians}; }
  static Extent bars(double count) { return {count, Unit::Bars}; }
};

/// Length of the extent in direction-cosine space: 2 sin(theta) for +-theta,
/// the count itself for bars.
double effective_length(const Extent& extent);

struct RadarScenario {
  double theta_bw_min = 0.0;  // rad
  double theta_bw_max = 0.0;  // rad
  double t_d_min = 0.0;       // s
  double t_d_max = 0.0;       // s
  double r0 = 0.0;            // m
  double v_t = 0.0;           // closing velocity, m/s
  Extent az;
  Extent el;
  LatticeKind lattice = LatticeKind::Triangular;
  double a = 2.0;  // beam-shape loss coefficient
  double p = 4.0;  // beam-width SNR exponent
  int q = 1;       // lattice dimension

  /// Throws DomainError naming the first offending field.
  void validate() const;

  double k() const { return lattice_k(lattice); }
  /// 4 a k^2 ln 2, the Gaussian beam-shape coefficient on eps^2.
  double shape_coefficient() const;
};

struct NormalizedBounds {
  double r_theta_min = 0.0;
  double r_theta_max = 0.0;
  double r_d_min = 0.0;
  double r_d_max = 0.0;
};

/// Bounds under the standard normalization r_theta_min = e^{-1/2},
/// r_d_min = 1, which places the first phase transition at r_S = 1.
NormalizedBounds normalized_bounds(const RadarScenario& scenario);

struct BeamParams {
  double r_theta = 1.0;
  double eps = 1.0;
  double r_d = 1.0;
  double r_f = 1.0;
};

/// Reference quantities that turn dimensionless ratios back into physical units.
struct References {
  double theta_bw0;  // rad
  double t_d0;       // s
  double t_f0;       // s, R0 / v_t
};

References references(const RadarScenario& scenario, const NormalizedBounds& bounds);

double max_deviation(double eps, double theta_bw, LatticeKind lattice);

/// Dimensionless SNR at the weakest lattice point at R0. Ignores r_f.
double r_s(const BeamParams& params, const RadarScenario& scenario);

/// Linear SNR of a target `delta_phi` off boresight at range `range`, with
/// the scenario's normalized references.
double snr_at(double delta_phi, double range, const BeamParams& params,
              const RadarScenario& scenario, double s0);

/// L_s = eta r_d r_theta^-q eps^-q / r_f. Throws DomainError at eps = 0 (pole).
double search_load(const BeamParams& params, double eta, int q);

/// eta = t_d0 v_t AZ EL / (R0 theta_bw0^q) with extents and beam width in
/// direction-cosine units.
double eta(const RadarScenario& scenario, const NormalizedBounds& bounds);

}  // namespace searchload
