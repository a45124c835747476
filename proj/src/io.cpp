#include "searchload/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "searchload/errors.hpp"

namespace searchload {

namespace {

struct Entry {
  std::string value;
  int line;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, key, message);
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  std::string text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing required key");
    return it->second.value;
  }

  double number(const std::string& key) const {
    const std::string v = text(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      fail(key, "expected a finite number, got '" + v + "'");
    }
    return out;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const std::string v = text(key);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      fail(key, "expected an integer, got '" + v + "'");
    }
    return out;
  }

  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }

  double probability(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0 && v < 1.0)) fail(key, "must lie in (0, 1)");
    return v;
  }

  /// Exactly one of two alternative keys.
  std::string one_of(const std::string& a, const std::string& b) const {
    if (has(a) && has(b)) fail(b, "conflicts with " + a + "; give only one");
    if (!has(a) && !has(b)) throw ConfigError(source_, 0, a, "missing; give " + a + " or " + b);
    return has(a) ? a : b;
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

Extent read_extent(const Reader& r, const std::string& axis) {
  const std::string key = r.one_of(axis + "_deg", axis + "_bars");
  const double v = r.number(key);
  if (!(v > 0.0)) r.fail(key, "search extent must be positive");
  if (key.ends_with("_bars")) return Extent::bars(v);
  if (v > 90.0) r.fail(key, "half-width must not exceed 90 degrees");
  return Extent::radians(deg(v));
}

SwerlingCase read_swerling(const Reader& r) {
  const std::string v = lower(r.text("swerling"));
  if (v == "i" || v == "1") return SwerlingCase::I;
  if (v == "ii" || v == "2") return SwerlingCase::II;
  if (v == "iii" || v == "3") return SwerlingCase::III;
  if (v == "iv" || v == "4") return SwerlingCase::IV;
  r.fail("swerling", "expected I, II, III or IV");
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string constraint_list(const std::vector<Constraint>& cs) {
  std::string out;
  for (const auto c : cs) {
    if (!out.empty()) out += ",";
    out += to_string(c);
  }
  return out.empty() ? "none" : out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("curves csv: bad number '" + s + "'");
  }
  return out;
}

Phase parse_phase(const std::string& s) {
  for (const Phase p : {Phase::Phase01, Phase::Phase12, Phase::Phase23}) {
    if (s == to_string(p)) return p;
  }
  throw std::runtime_error("curves csv: bad phase '" + s + "'");
}

std::optional<Constraint> parse_constraint(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (const Constraint c : {Constraint::OneOffPd, Constraint::CumulativePc, Constraint::LsMax,
                             Constraint::RfMax, Constraint::VariableBound}) {
    if (s == to_string(c)) return c;
  }
  throw std::runtime_error("curves csv: bad constraint '" + s + "'");
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field,
                         const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         field + ": " + message),
      line_(line),
      field_(std::move(field)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "lattice",   "a",          "p",          "q",           "theta_bw_min_deg",
      "theta_bw_ratio", "t_d_min_s", "t_d_ratio", "r0_m",   "v_t_mps",
      "az_deg",    "az_bars",    "el_deg",     "el_bars",     "swerling",
      "n_cpi",     "p_fa",       "p_d0",       "s0_db",       "pd_floor",
      "p_d_des",   "r_s_des",    "p_c_des",    "l_s_max",     "r_f_max",
      "grid_step", "fidelity_mode"};
  return keys;
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  const auto& keys = config_keys();
  std::map<std::string, Entry> entries;
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, line, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(source, line_no, key, "unknown key");
    }
    if (value.empty()) throw ConfigError(source, line_no, key, "empty value");
    if (entries.contains(key)) {
      throw ConfigError(source, line_no, key,
                        "duplicate key (first set on line " +
                            std::to_string(entries[key].line) + ")");
    }
    entries.emplace(key, Entry{value, line_no});
  }
  const Reader r(source, std::move(entries));

  ScenarioConfig cfg;
  RadarScenario& sc = cfg.scenario;
  const std::string lattice = lower(r.text("lattice"));
  if (lattice == "triangular") {
    sc.lattice = LatticeKind::Triangular;
  } else if (lattice == "rectangular") {
    sc.lattice = LatticeKind::Rectangular;
  } else {
    r.fail("lattice", "expected triangular or rectangular");
  }
  sc.a = r.number("a", 2.0);
  if (sc.a != 1.0 && sc.a != 2.0) r.fail("a", "must be 1 or 2");
  sc.p = r.number("p", 4.0);
  sc.q = r.has("q") ? r.integer("q") : 1;
  if (sc.q != 1 && sc.q != 2) r.fail("q", "must be 1 or 2");
  if (!(sc.p > sc.q)) r.fail("p", "must exceed q");

  const double bw_deg = r.positive("theta_bw_min_deg");
  if (bw_deg >= 90.0) r.fail("theta_bw_min_deg", "must be below 90 degrees");
  const double bw_ratio = r.number("theta_bw_ratio");
  if (!(bw_ratio > 1.0)) r.fail("theta_bw_ratio", "must exceed 1");
  sc.theta_bw_min = deg(bw_deg);
  sc.theta_bw_max = sc.theta_bw_min * bw_ratio;
  if (sc.theta_bw_max >= std::numbers::pi / 2) {
    r.fail("theta_bw_ratio", "maximum beam width must stay below 90 degrees");
  }
  sc.t_d_min = r.positive("t_d_min_s");
  const double td_ratio = r.number("t_d_ratio");
  if (!(td_ratio > 1.0)) r.fail("t_d_ratio", "must exceed 1");
  sc.t_d_max = sc.t_d_min * td_ratio;
  sc.r0 = r.positive("r0_m");
  sc.v_t = r.positive("v_t_mps");
  sc.az = read_extent(r, "az");
  sc.el = read_extent(r, "el");
  const int bar_axes = (sc.az.unit == Extent::Unit::Bars) + (sc.el.unit == Extent::Unit::Bars);
  if (sc.q == 1 && bar_axes != 1) {
    r.fail(r.has("el_bars") ? "az_bars" : "el_bars",
           "a one-dimensional lattice needs exactly one axis given in bars");
  }
  if (sc.q == 2 && bar_axes != 0) {
    r.fail(r.has("az_bars") ? "az_bars" : "el_bars",
           "a two-dimensional lattice needs both axes in degrees");
  }

  TargetModel& t = cfg.target;
  t.swerling = read_swerling(r);
  t.n_cpi = r.integer("n_cpi");
  if (t.n_cpi < 1) r.fail("n_cpi", "must be at least 1");
  t.p_fa = r.has("p_fa") ? r.probability("p_fa") : 1e-6;
  if (r.one_of("p_d0", "s0_db") == "p_d0") {
    t.p_d0 = r.probability("p_d0");
    if (*t.p_d0 <= t.p_fa) r.fail("p_d0", "must exceed p_fa");
  } else {
    t.s0 = db_to_linear(r.number("s0_db"));
  }
  if (r.has("pd_floor")) t.pd_floor = r.probability("pd_floor");

  Requirements& q = cfg.requirements;
  if (r.has("p_d_des") && r.has("r_s_des")) r.fail("r_s_des", "conflicts with p_d_des");
  if (r.has("p_d_des")) {
    q.p_d_des = r.probability("p_d_des");
    if (*q.p_d_des <= t.p_fa) r.fail("p_d_des", "must exceed p_fa");
  }
  if (r.has("r_s_des")) q.r_s_des = r.positive("r_s_des");
  q.p_c_des = r.probability("p_c_des");
  if (r.has("l_s_max")) q.l_s_max = r.positive("l_s_max");
  if (r.has("r_f_max")) q.r_f_max = r.positive("r_f_max");

  SolverOptions& o = cfg.options;
  o.grid_step = r.number("grid_step", 0.1);
  if (!(o.grid_step > 0.0)) r.fail("grid_step", "must be positive");
  if (r.has("fidelity_mode")) {
    const std::string mode = lower(r.text("fidelity_mode"));
    if (mode == "exact") {
      o.fidelity = Fidelity::Exact;
    } else if (mode == "paper") {
      o.fidelity = Fidelity::Paper;
    } else {
      r.fail("fidelity_mode", "expected exact or paper");
    }
  }

  try {
    sc.validate();
    t.detection().validate();
  } catch (const DomainError& e) {
    throw ConfigError(source, 0, "scenario", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "file", "cannot open");
  return parse_config(in, path.string());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& curves) {
  out << "r_S,r_theta,eps,r_d,l_tilde,r_f,L_s,phase,feasible,violated\n";
  out << std::setprecision(17);
  for (const auto& c : curves) {
    out << c.r_s << ',' << c.r_theta << ',' << c.eps << ',' << c.r_d << ',' << c.l_tilde << ','
        << c.r_f << ',' << c.l_s << ',' << to_string(c.phase) << ',' << (c.feasible ? 1 : 0)
        << ',' << (c.violated ? to_string(*c.violated) : std::string()) << '\n';
  }
}

std::vector<CurveSample> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("curves csv: empty input");
  std::vector<CurveSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw std::runtime_error("curves csv: expected 10 fields");
    out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]),
                   parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
                   parse_double(f[6]), parse_phase(f[7]), f[8] == "1", parse_constraint(f[9])});
  }
  return out;
}

void write_result(std::ostream& out, const OptimizationResult& res, const ScenarioConfig& cfg) {
  const auto bounds = normalized_bounds(cfg.scenario);
  const References ref = references(cfg.scenario, bounds);
  const BeamParams& b = res.params;
  out << "# searchload result, eta = " << num(res.eta) << '\n';
  out << "eta = " << num(res.eta) << '\n';
  out << "s0 = " << num(res.s0) << '\n';
  out << "s0_db = " << num(linear_to_db(res.s0)) << '\n';
  out << "r_s_des = " << num(res.r_s_des) << '\n';
  out << "r_s0 = " << num(res.boundaries.r_s0) << '\n';
  out << "r_s1 = " << num(res.boundaries.r_s1) << '\n';
  out << "r_s2 = " << num(res.boundaries.r_s2) << '\n';
  out << "r_s3 = " << num(res.boundaries.r_s3) << '\n';
  out << "phase = " << to_string(res.phase) << '\n';
  out << "r_s_star = " << num(res.r_s_star) << '\n';
  out << "l_s_star = " << num(res.l_s_star) << '\n';
  out << "r_theta = " << num(b.r_theta) << '\n';
  out << "eps = " << num(b.eps) << '\n';
  out << "r_d = " << num(b.r_d) << '\n';
  out << "r_f = " << num(b.r_f) << '\n';
  out << "theta_bw_deg = " << num(b.r_theta * ref.theta_bw0 * 180.0 / std::numbers::pi) << '\n';
  out << "beam_spacing_deg = "
      << num(b.eps * b.r_theta * ref.theta_bw0 * 180.0 / std::numbers::pi) << '\n';
  out << "t_d_s = " << num(b.r_d * ref.t_d0) << '\n';
  out << "t_f_s = " << num(b.r_f * ref.t_f0) << '\n';
  out << "active_constraints = " << constraint_list(res.active_constraints) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::string& axis,
                     const std::vector<SweepPoint>& points) {
  out << axis << ",r_S,r_f,L_s,phase,feasible,reason\n";
  out << std::setprecision(17);
  for (const auto& p : points) {
    std::string reason = p.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    out << p.axis_value << ',' << p.r_s_star << ',' << p.r_f_star << ',' << p.l_s_star << ','
        << (p.feasible ? to_string(p.phase) : "") << ',' << (p.feasible ? 1 : 0) << ','
        << reason << '\n';
  }
}

void write_verify_report(std::ostream& out, const oracle::VerifyReport& report) {
  out << std::setprecision(6);
  out << "beam subproblem vs grid oracle\n";
  for (const auto& c : report.beam) {
    out << "  r_S=" << std::setw(10) << c.r_s << "  phase " << to_string(c.phase)
        << "  analytic=" << std::setw(10) << c.analytic_l_tilde << "  grid=" << std::setw(10)
        << c.grid_l_tilde << "  gap=" << std::setw(12) << c.gap
        << "  cell=" << (c.within_cell ? "yes" : "no") << "  " << (c.pass ? "ok" : "FAIL")
        << '\n';
  }
  out << "detection vs Monte Carlo\n";
  for (const auto& c : report.mc) {
    out << "  s=" << std::setw(8) << c.s << "  analytic=" << std::setw(10) << c.analytic
        << "  mc=" << std::setw(10) << c.estimate.p << "  se=" << std::setw(10)
        << c.estimate.standard_error << "  z=" << std::setw(8) << c.z << "  "
        << (c.pass ? "ok" : "FAIL") << '\n';
  }
  out << (report.pass() ? "verify: pass" : "verify: FAIL (worst: " + report.worst_offender() + ")")
      << '\n';
}

}  // namespace searchload
