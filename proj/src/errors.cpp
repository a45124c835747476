#include "searchload/errors.hpp"

#include <sstream>

namespace searchload {

std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::OneOffPd: return "one_off_pd";
    case Constraint::CumulativePc: return "cumulative_pc";
    case Constraint::LsMax: return "l_s_max";
    case Constraint::RfMax: return "r_f_max";
    case Constraint::VariableBound: return "variable_bound";
  }
  return "unknown";
}

namespace {

std::string describe(const std::vector<Constraint>& culprits, const std::string& what) {
  std::ostringstream os;
  os << what;
  if (!culprits.empty()) {
    os << " [";
    for (std::size_t i = 0; i < culprits.size(); ++i) {
      os << (i ? ", " : "") << to_string(culprits[i]);
    }
    os << "]";
  }
  return os.str();
}

std::string quadrature_message(double estimate, double tolerance) {
  std::ostringstream os;
  os << "quadrature did not converge: error estimate " << estimate << " exceeds tolerance "
     << tolerance;
  return os.str();
}

}  // namespace

InfeasibleError::InfeasibleError(std::vector<Constraint> culprits, const std::string& what)
    : std::runtime_error(describe(culprits, what)), culprits_(std::move(culprits)) {}

QuadratureError::QuadratureError(double error_estimate, double tolerance)
    : std::runtime_error(quadrature_message(error_estimate, tolerance)),
      error_estimate_(error_estimate) {}

}  // namespace searchload
