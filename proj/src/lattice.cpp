#include "searchload/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "searchload/errors.hpp"

namespace searchload {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw DomainError(field + ": " + why);
}

void check_extent(const Extent& e, const std::string& field) {
  require(std::isfinite(e.value) && e.value > 0.0, field, "search extent must be positive");
  if (e.unit == Extent::Unit::Radians) {
    require(e.value <= std::numbers::pi / 2, field, "angular half-width exceeds 90 degrees");
  }
}

}  // namespace

double lattice_k(LatticeKind lattice) {
  return lattice == LatticeKind::Triangular ? 1.0 / std::sqrt(3.0) : 1.0 / std::sqrt(2.0);
}

const char* to_string(LatticeKind lattice) {
  return lattice == LatticeKind::Triangular ? "triangular" : "rectangular";
}

double effective_length(const Extent& extent) {
  return extent.unit == Extent::Unit::Radians ? 2.0 * std::sin(extent.value) : extent.value;
}

void RadarScenario::validate() const {
  require(theta_bw_min > 0.0, "theta_bw_min", "must be positive");
  require(theta_bw_max >= theta_bw_min, "theta_bw_max", "must not be below theta_bw_min");
  require(theta_bw_max < std::numbers::pi / 2, "theta_bw_max", "beam width too large");
  require(t_d_min > 0.0, "t_d_min", "must be positive");
  require(t_d_max >= t_d_min, "t_d_max", "must not be below t_d_min");
  require(r0 > 0.0, "r0", "must be positive");
  require(v_t > 0.0, "v_t", "must be positive");
  require(a == 1.0 || a == 2.0, "a", "must be 1 or 2");
  require(q == 1 || q == 2, "q", "must be 1 or 2");
  require(p > q, "p", "must exceed the lattice dimension q");
  check_extent(az, "az");
  check_extent(el, "el");
  const int bar_axes = (az.unit == Extent::Unit::Bars) + (el.unit == Extent::Unit::Bars);
  if (q == 1) {
    require(bar_axes == 1, "el",
            "a one-dimensional lattice needs exactly one axis given as a bar count");
  } else {
    require(bar_axes == 0, bar_axes && az.unit == Extent::Unit::Bars ? "az" : "el",
            "a two-dimensional lattice needs angular extents on both axes");
  }
}

double RadarScenario::shape_coefficient() const {
  const double kk = k();
  return 4.0 * a * kk * kk * std::numbers::ln2;
}

NormalizedBounds normalized_bounds(const RadarScenario& scenario) {
  const double r_theta_min = std::exp(-0.5);
  return {r_theta_min, r_theta_min * scenario.theta_bw_max / scenario.theta_bw_min, 1.0,
          scenario.t_d_max / scenario.t_d_min};
}

References references(const RadarScenario& scenario, const NormalizedBounds& bounds) {
  return {scenario.theta_bw_min / bounds.r_theta_min, scenario.t_d_min / bounds.r_d_min,
          scenario.r0 / scenario.v_t};
}

double max_deviation(double eps, double theta_bw, LatticeKind lattice) {
  if (!(theta_bw > 0.0)) throw DomainError("max_deviation: beam width must be positive");
  if (!(eps >= 0.0)) throw DomainError("max_deviation: spacing ratio must be nonnegative");
  return lattice_k(lattice) * eps * theta_bw;
}

double r_s(const BeamParams& params, const RadarScenario& scenario) {
  return params.r_d / std::pow(params.r_theta, scenario.p) *
         std::exp(-scenario.shape_coefficient() * params.eps * params.eps);
}

double snr_at(double delta_phi, double range, const BeamParams& params,
              const RadarScenario& scenario, double s0) {
  if (!(range > 0.0)) throw DomainError("snr_at: range must be positive");
  const double theta_bw = params.r_theta * references(scenario, normalized_bounds(scenario)).theta_bw0;
  const double range_ratio = scenario.r0 / range;
  const double off = delta_phi / theta_bw;
  return s0 * std::pow(range_ratio, 4) * params.r_d / std::pow(params.r_theta, scenario.p) *
         std::exp(-4.0 * scenario.a * std::numbers::ln2 * off * off);
}

double search_load(const BeamParams& params, double eta, int q) {
  if (!(params.eps > 0.0)) {
    throw DomainError("search_load: eps = 0 is a pole of the load (infinitely many beams)");
  }
  if (!(params.r_f > 0.0)) throw DomainError("search_load: r_f must be positive");
  return eta * params.r_d * std::pow(params.r_theta * params.eps, -q) / params.r_f;
}

double eta(const RadarScenario& scenario, const NormalizedBounds& bounds) {
  scenario.validate();
  const double t_d0 = scenario.t_d_min / bounds.r_d_min;
  const double theta_uv0 = std::sin(scenario.theta_bw_min) / bounds.r_theta_min;
  return t_d0 * scenario.v_t * effective_length(scenario.az) * effective_length(scenario.el) /
         (scenario.r0 * std::pow(theta_uv0, scenario.q));
}

}  // namespace searchload
