#include "zklab/lab.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "zklab/carleman.hpp"
#include "zklab/coordinates.hpp"
#include "zklab/evolution.hpp"
#include "zklab/experiments.hpp"
#include "zklab/fft.hpp"
#include "zklab/fundamental.hpp"
#include "zklab/interpolation.hpp"
#include "zklab/smoothing.hpp"
#include "zklab/spectral.hpp"
#include "zklab/weights.hpp"

namespace zklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Kind { Real, Int, U64, Bool, RealList, IntList };

struct KeySpec {
  std::string key;
  std::string fallback;
  Kind kind;
  double lo;
  double hi;
  bool lo_open;
  std::string doc;
};

KeySpec real(std::string key, std::string def, double lo, double hi, bool lo_open, std::string doc) {
  return {std::move(key), std::move(def), Kind::Real, lo, hi, lo_open, std::move(doc)};
}
KeySpec positive(std::string key, std::string def, std::string doc) {
  return real(std::move(key), std::move(def), 0.0, kInf, true, std::move(doc));
}
KeySpec integer(std::string key, std::string def, double lo, double hi, std::string doc) {
  return {std::move(key), std::move(def), Kind::Int, lo, hi, false, std::move(doc)};
}
KeySpec reals(std::string key, std::string def, double lo, double hi, std::string doc) {
  return {std::move(key), std::move(def), Kind::RealList, lo, hi, false, std::move(doc)};
}
KeySpec integers(std::string key, std::string def, double lo, double hi, std::string doc) {
  return {std::move(key), std::move(def), Kind::IntList, lo, hi, false, std::move(doc)};
}
KeySpec flag(std::string key, std::string def, std::string doc) {
  return {std::move(key), std::move(def), Kind::Bool, 0, 0, false, std::move(doc)};
}

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = {
      integer("global.threads", "1", 1, 256, "FFTW threads"),
      real("global.tol_scale", "1", 0.0, 1e6, true, "multiplies every numerical tolerance"),
      {"global.seed", "20240611", Kind::U64, 0, 0, false, "seed for the Carleman and smoothing corpora"},

      integers("spectral.sizes", "64 128 256 512", 8, 4096, "grid points per side, even"),
      positive("spectral.L", "32", "box side [length]"),

      positive("fundsol.xi_max", "12", "frequency truncation radius [1/length]"),
      positive("fundsol.taper_width", "4", "raised-cosine roll-off [1/length]"),
      integer("fundsol.n_quad", "256", 16, 1 << 16, "base quadrature panels"),
      positive("fundsol.tol", "1e-6", "absolute tolerance on S"),
      reals("fundsol.points", "-2 0 0 0 2 1 1 3 -1 -2", -50, 50, "x y pairs compared against the direct oracle"),
      positive("fundsol.fit_lo", "2", "decay fit start [length]"),
      positive("fundsol.fit_hi", "6", "decay fit end [length]"),
      integer("fundsol.fit_samples", "21", 5, 10000, "decay fit sample count"),
      integers("fundsol.y_decay_m", "0 4", 0, 20, "polynomial weights (1+|y|)^m"),
      real("fundsol.y_decay_x", "1", -50, 50, false, "fixed x for the y-decay scan [length]"),
      positive("fundsol.y_max", "20", "half-width of the y-decay scan [length]"),
      positive("fundsol.kernel_half_width", "96", "kernel table half-width [length]"),
      positive("fundsol.kernel_spacing", "0.25", "kernel table spacing [length]"),
      positive("fundsol.kernel_taper", "36", "kernel window taper [length]"),
      positive("fundsol.kernel_eta_step", "0.01", "eta step of the Airy reduction [1/length]"),

      integer("evolve.n", "128", 8, 4096, "grid points per side"),
      positive("evolve.L", "64", "box side [length]"),
      positive("evolve.amplitude", "1", "Gaussian amplitude"),
      positive("evolve.width2", "8", "Gaussian exp(-r^2/width2) [length^2]"),
      positive("evolve.dt", "0.01", "step for the conservation runs [time]"),
      positive("evolve.dt_coarse", "0.02", "coarsest step of the halving ladder [time]"),
      positive("evolve.t_end", "1", "final time [time]"),
      real("evolve.group_split", "0.3", 0.0, 1.0, true, "first leg of the group-law check, fraction of t_end"),

      integer("equivalence.n", "256", 8, 4096, "grid points per side"),
      integer("equivalence.linear_n", "128", 8, 4096, "grid points per side, linear regime"),
      positive("equivalence.L_original", "64", "box side, original frame [length]"),
      positive("equivalence.L_symmetric", "96", "box side, symmetric frame [length]"),
      positive("equivalence.dt", "5e-3", "step [time]"),
      positive("equivalence.t_end", "1", "final time [time]"),
      positive("equivalence.amplitude", "1", "Gaussian amplitude, nonlinear regime"),
      positive("equivalence.linear_amplitude", "1e-6", "Gaussian amplitude, linear regime"),
      positive("equivalence.width2", "8", "Gaussian exp(-r^2/width2) [length^2]"),
      positive("equivalence.identity_rate", "1", "rate a of e^{a|x|^{3/2}} in the norm identity"),
      positive("equivalence.identity_half_width", "8", "quadrature box half-width [length]"),

      positive("weights.a0", "1", "initial decay rate"),
      integers("weights.ns", "4 8 16", 1, 1000, "truncation levels"),
      reals("weights.times", "0 0.25 0.5 1", 0, 100, "sample times for dominance [time]"),
      integer("weights.samples", "1000", 10, 1000000, "z samples per truncation level"),
      reals("weights.ode_times", "0.1 0.5 1", 0, 100, "times for the finite-difference ODE check [time]"),
      positive("weights.fd_step", "1e-5", "finite-difference step [time]"),
      positive("weights.kato_beta", "0.5", "beta for the Kato weight checks"),

      integer("interp.corpus", "50", 1, 10000, "Gaussian mixtures"),
      {"interp.seed", "20240611", Kind::U64, 0, 0, false, "mixture corpus seed"},
      integer("interp.n", "128", 16, 4096, "grid points per side"),
      positive("interp.L", "24", "box side [length]"),
      integer("interp.refine", "2", 2, 8, "refinement factor for the stability check"),
      positive("interp.stability_tol", "0.1", "allowed relative ratio change under refinement"),
      reals("interp.l26", "2 1 0.25", 0, 100, "s a theta for the exponential-weight lemma"),
      reals("interp.l26_extra", "4 1 0.25", 0, 100, "s a theta for an extra exponential-weight run, reported only"),
      reals("interp.l27", "4 1.4333333333333333 0.26875", 0, 100, "s a theta for the polynomial-weight lemma"),
      reals("interp.lb1", "4 0.5 0.5", 0, 100, "s beta theta for the linear-exponential lemma"),

      integer("carleman.count", "20", 1, 10000, "test functions per radius"),
      reals("carleman.radii", "1 2 4", 1, 1000, "scales R"),
      reals("carleman.alpha_factors", "1 2", 1, 1000, "alpha as multiples of the minimal alpha"),
      real("carleman.ramp", "0.25", 0.0, 0.5, true, "time profile margin r"),
      integer("carleman.order", "32", 4, 256, "Gauss points per axis"),
      positive("carleman.eps_max", "0.05", "largest accepted discretisation estimate"),
      integer("carleman.coeff_n", "128", 16, 2048, "solver grid for the lower-order coefficients"),
      positive("carleman.coeff_L", "64", "solver box side [length]"),
      real("carleman.coeff_amplitude", "0.1", 0.0, 0.1, true, "amplitude of both solutions"),
      positive("carleman.coeff_width2", "8", "Gaussian exp(-r^2/width2) [length^2]"),
      real("carleman.coeff_shift", "1", -10, 10, false, "x offset of the second solution [length]"),
      positive("carleman.coeff_dt", "0.01", "solver step [time]"),
      positive("carleman.coeff_snapshot", "0.02", "snapshot spacing [time]"),

      integer("smoothing.count", "20", 1, 1000, "corpus size"),
      integer("smoothing.n", "96", 16, 512, "grid points per axis"),
      positive("smoothing.L", "24", "box side in x, y and t"),
      positive("smoothing.lambda", "1", "lambda"),
      positive("smoothing.beta", "1", "beta"),
      integers("smoothing.a4_symbols", "2 0 1 1 0 2", 0, 2, "k l pairs for the mixed-norm bound"),
      positive("smoothing.ratio_max", "1.05", "acceptance bound on the corpus ratios"),
      positive("smoothing.eps_max", "0.05", "largest accepted discretisation estimate"),
      integer("smoothing.roundtrip_n", "64", 16, 512, "grid for the H T0 round trip"),
      positive("smoothing.roundtrip_L", "16", "box side for the round trip"),
      integer("smoothing.m0_samples", "1000", 1, 1000000, "random symbol samples"),
      integer("smoothing.pf_samples", "100", 1, 1000000, "random partial-fraction samples"),

      integer("decay15.n", "512", 16, 4096, "grid points per side"),
      positive("decay15.L", "64", "box side [length]"),
      positive("decay15.a0", "1", "initial rate"),
      positive("decay15.t_end", "0.5", "final time [time]"),
      integer("decay15.samples", "11", 2, 10000, "sample times"),
      positive("decay15.amplitude", "1e-6", "Gaussian amplitude"),
      positive("decay15.width", "1", "Gaussian width [length]"),
      flag("decay15.nonlinear", "false", "switch the nonlinearity on"),
      positive("decay15.dt", "1e-3", "solver step for nonlinear runs [time]"),
      positive("decay15.w_cap", "10", "regression cap on the normalised weighted norm"),
      real("decay15.window_margin", "0.05", 0.0, 0.25, false, "box window margin, fraction of L"),
      real("decay15.window_ramp", "0.05", 0.0, 0.25, false, "box window ramp, fraction of L"),
      positive("decay15.window_z_cap", "14", "diagonal window cap on x+y [length]"),
      positive("decay15.window_z_ramp", "2", "diagonal window ramp [length]"),
      positive("decay15.cap_sensitivity_max", "1e-3", "largest accepted change when the cap moves in"),

      integer("persistence.n", "256", 16, 4096, "grid points per side"),
      positive("persistence.L", "64", "box side [length]"),
      positive("persistence.beta", "0.5", "beta"),
      integers("persistence.ns", "4 8 16", 1, 1000, "truncation levels"),
      positive("persistence.t_end", "1", "final time [time]"),
      integer("persistence.samples", "21", 2, 10000, "sample times"),
      positive("persistence.amplitude", "1e-6", "Gaussian amplitude"),
      positive("persistence.width", "1", "Gaussian width [length]"),
      flag("persistence.nonlinear", "false", "switch the nonlinearity on"),
      positive("persistence.dt", "1e-3", "solver step for nonlinear runs [time]"),
      positive("persistence.spread_tol", "0.2", "allowed relative spread of the exponent across n"),
      positive("persistence.mirror_tol", "1e-6", "allowed gap of the mirrored run"),
      real("persistence.window_margin", "0.05", 0.0, 0.25, false, "box window margin, fraction of L"),
      real("persistence.window_ramp", "0.05", 0.0, 0.25, false, "box window ramp, fraction of L"),
      positive("persistence.window_z_cap", "40", "diagonal window cap on x+y [length]"),
      positive("persistence.window_z_ramp", "4", "diagonal window ramp [length]"),

      integer("annulus.n", "256", 16, 4096, "grid points per side"),
      positive("annulus.L", "64", "box side [length]"),
      reals("annulus.first", "0.5 2 0 0", -100, 100, "amplitude width cx cy of the first datum"),
      reals("annulus.second", "0.5 2 1 0", -100, 100, "amplitude width cx cy of the second datum"),
      positive("annulus.dt", "0.01", "solver step [time]"),
      positive("annulus.snapshot_interval", "0.05", "snapshot spacing [time]"),
      positive("annulus.t_end", "1", "final time [time]"),
      reals("annulus.radii", "3 4 5 6 7 8 9 10 11 12 13 14", 1, 1000, "radii R"),
      positive("annulus.edge_margin", "4", "distance annuli keep from the box edge [length]"),
      positive("annulus.noise_floor", "1e-10", "trusted floor relative to the full norm"),
      integer("annulus.quadrature_n", "1024", 16, 8192, "common lattice for the annulus integrals"),
      positive("annulus.refinement_tol", "0.05", "allowed change of log A_R under refinement"),
  };
  return s;
}

const KeySpec& spec_for(const std::string& key) {
  for (const auto& k : schema())
    if (k.key == key) return k;
  throw ZklabError("config: unknown key '" + key + "'");
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_real(const std::string& key, const std::string& w) {
  double v = 0.0;
  const char* end = w.data() + w.size();
  const auto res = std::from_chars(w.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ZklabError("config: " + key + ": '" + w + "' is not a finite number");
  return v;
}

void check_range(const KeySpec& k, double v) {
  const bool low_ok = k.lo_open ? v > k.lo : v >= k.lo;
  if (!low_ok || v > k.hi) {
    std::string lo = k.lo_open ? "> " + format_number(k.lo) : ">= " + format_number(k.lo);
    std::string msg = "config: " + k.key + " = " + format_number(v) + " violates " + lo;
    if (k.hi < kInf) msg += " and <= " + format_number(k.hi);
    throw ZklabError(msg);
  }
}

long long parse_int(const KeySpec& k, const std::string& w) {
  long long v = 0;
  const char* end = w.data() + w.size();
  const auto res = std::from_chars(w.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ZklabError("config: " + k.key + ": '" + w + "' is not an integer");
  check_range(k, static_cast<double>(v));
  return v;
}

// Parses, validates and returns the canonical spelling.
std::string normalise(const KeySpec& k, const std::string& text) {
  const auto words = tokens(text);
  switch (k.kind) {
    case Kind::Real: {
      if (words.size() != 1) throw ZklabError("config: " + k.key + " expects one number");
      const double v = parse_real(k.key, words[0]);
      check_range(k, v);
      return format_number(v);
    }
    case Kind::Int:
      if (words.size() != 1) throw ZklabError("config: " + k.key + " expects one integer");
      return std::to_string(parse_int(k, words[0]));
    case Kind::U64: {
      if (words.size() != 1) throw ZklabError("config: " + k.key + " expects one unsigned integer");
      std::uint64_t v = 0;
      const char* end = words[0].data() + words[0].size();
      const auto res = std::from_chars(words[0].data(), end, v);
      if (res.ec != std::errc() || res.ptr != end)
        throw ZklabError("config: " + k.key + ": '" + words[0] + "' is not an unsigned 64-bit integer");
      return std::to_string(v);
    }
    case Kind::Bool:
      if (words.size() == 1 && (words[0] == "true" || words[0] == "1")) return "true";
      if (words.size() == 1 && (words[0] == "false" || words[0] == "0")) return "false";
      throw ZklabError("config: " + k.key + " expects true or false");
    case Kind::RealList: {
      if (words.empty()) throw ZklabError("config: " + k.key + " expects at least one number");
      std::string out;
      for (const auto& w : words) {
        const double v = parse_real(k.key, w);
        check_range(k, v);
        out += (out.empty() ? "" : " ") + format_number(v);
      }
      return out;
    }
    case Kind::IntList: {
      if (words.empty()) throw ZklabError("config: " + k.key + " expects at least one integer");
      std::string out;
      for (const auto& w : words) out += (out.empty() ? "" : " ") + std::to_string(parse_int(k, w));
      return out;
    }
  }
  return {};
}

}  // namespace

LabConfig LabConfig::defaults() {
  LabConfig c;
  for (const auto& k : schema()) c.values_[k.key] = normalise(k, k.fallback);
  return c;
}

LabConfig LabConfig::from_string(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ZklabError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  LabConfig c = defaults();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ZklabError("config: key '" + section + "' outside any section");
    for (const auto& [name, node] : body) c.set(section + "." + name, node.get_value<std::string>());
  }
  return c;
}

LabConfig LabConfig::from_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ZklabError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

void LabConfig::set(const std::string& key, const std::string& value) {
  values_[key] = normalise(spec_for(key), trim(value));
}

std::string LabConfig::canonical_text() const {
  std::string out;
  for (const auto& k : schema()) out += k.key + " = " + values_.at(k.key) + "\n";
  return out;
}

std::string LabConfig::hash() const { return sha256_hex(canonical_text()); }

const std::string& LabConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ZklabError("config: unknown key '" + key + "'");
  return it->second;
}

double LabConfig::real(const std::string& key) const { return parse_real(key, raw(key)); }
int LabConfig::integer(const std::string& key) const { return std::stoi(raw(key)); }
std::uint64_t LabConfig::u64(const std::string& key) const { return std::stoull(raw(key)); }
bool LabConfig::flag(const std::string& key) const { return raw(key) == "true"; }

std::vector<double> LabConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : tokens(raw(key))) out.push_back(parse_real(key, w));
  return out;
}

std::vector<int> LabConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& w : tokens(raw(key))) out.push_back(std::stoi(w));
  return out;
}

std::string LabConfig::default_file_text() {
  std::string out;
  std::string section;
  for (const auto& k : schema()) {
    const auto dot = k.key.find('.');
    const std::string sec = k.key.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + sec + "]\n";
      section = sec;
    }
    out += "; " + k.doc + "\n" + k.key.substr(dot + 1) + " = " + normalise(k, k.fallback) + "\n";
  }
  return out;
}

Verdict overall_verdict(const std::vector<Assertion>& assertions) {
  bool inconclusive = false;
  for (const auto& a : assertions) {
    if (a.verdict == Verdict::Fail) return Verdict::Fail;
    inconclusive = inconclusive || a.verdict == Verdict::Inconclusive;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 1;
}

const std::vector<std::string>& lab_subcommands() {
  static const std::vector<std::string> s = {"fundsol", "evolve",   "equivalence", "weights",     "interp", "carleman",
                                             "smoothing", "decay15", "persistence", "annulus", "all"};
  return s;
}

const std::vector<std::string>& suite_steps() {
  static const std::vector<std::string> s = {"spectral", "fundsol",  "evolve",  "equivalence", "weights",    "interp",
                                             "carleman", "smoothing", "decay15", "persistence", "annulus"};
  return s;
}

const char* lab_version() { return "0.1.0"; }

ReportEnvelope make_envelope(const StepResult& step, const LabConfig& cfg) {
  ReportEnvelope env;
  env.tool_version = lab_version();
  env.subcommand = step.name;
  env.config_text = cfg.canonical_text();
  env.config_hash = sha256_hex(env.config_text);
  env.wall_time_s = step.wall_time_s;
  env.tol_scale = cfg.real("global.tol_scale");
  env.assertions = step.assertions;
  return env;
}

namespace {

class Checks {
 public:
  explicit Checks(double tol_scale) : scale_(tol_scale) {}

  double tol(double t) const { return t * scale_; }

  void at_most(const std::string& name, double value, double bound, std::string note = {}) {
    add(name, value, "<=", bound, value <= bound ? Verdict::Pass : Verdict::Fail, std::move(note));
  }
  void at_least(const std::string& name, double value, double bound, std::string note = {}) {
    add(name, value, ">=", bound, value >= bound ? Verdict::Pass : Verdict::Fail, std::move(note));
  }
  void greater(const std::string& name, double value, double bound, std::string note = {}) {
    add(name, value, ">", bound, value > bound ? Verdict::Pass : Verdict::Fail, std::move(note));
  }
  void less(const std::string& name, double value, double bound, std::string note = {}) {
    add(name, value, "<", bound, value < bound ? Verdict::Pass : Verdict::Fail, std::move(note));
  }
  void between(const std::string& name, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    add(name, value, "in [" + format_number(lo) + ", " + format_number(hi) + "]", hi, ok ? Verdict::Pass : Verdict::Fail,
        {});
  }
  void holds(const std::string& name, bool ok, std::string note = {}) {
    add(name, ok ? 1.0 : 0.0, "==", 1.0, ok ? Verdict::Pass : Verdict::Fail, std::move(note));
  }
  // A guard that makes the result inconclusive rather than failed.
  void guard_at_most(const std::string& name, double value, double bound, std::string note = {}) {
    add(name, value, "<=", bound, value <= bound ? Verdict::Pass : Verdict::Inconclusive, std::move(note));
  }
  void record(const std::string& name, double value, std::string note = {}) {
    add(name, value, "info", 0.0, Verdict::Pass, std::move(note));
  }

  std::vector<Assertion> take() { return std::move(list_); }

 private:
  void add(const std::string& name, double value, std::string relation, double bound, Verdict v, std::string note) {
    list_.push_back({name, value, bound, std::move(relation), v, std::move(note)});
  }

  double scale_;
  std::vector<Assertion> list_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

std::function<double(double, double)> gaussian(double amp, double width2, double cx = 0.0, double cy = 0.0) {
  return [=](double x, double y) { return amp * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / width2); };
}

std::string with_params(const std::string& base, const std::vector<double>& p) {
  std::string out = base + "(";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + format_number(p[i]);
  return out + ")";
}

// ---------------------------------------------------------------- spectral

StepResult step_spectral(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const double L = cfg.real("spectral.L");
  const auto f = [](double x, double y) {
    return std::exp(-((x - 1.0) * (x - 1.0) + (y + 0.5) * (y + 0.5)) / 4.0) * (1.0 + 0.5 * std::sin(x - y));
  };
  // Fourth-order central differences of the closed form.
  const double h = 1e-3;
  const auto fd_x = [&](double x, double y) {
    return (-f(x + 2 * h, y) + 8 * f(x + h, y) - 8 * f(x - h, y) + f(x - 2 * h, y)) / (12 * h);
  };
  const auto fd_y = [&](double x, double y) {
    return (-f(x, y + 2 * h) + 8 * f(x, y + h) - 8 * f(x, y - h) + f(x, y - 2 * h)) / (12 * h);
  };
  CsvTable t{"", {"n", "L [length]", "parseval_rel", "roundtrip_rel", "dx_rel_err", "dy_rel_err"}, {}};
  double worst_parseval = 0.0, worst_roundtrip = 0.0, worst_deriv = 0.0;
  for (int n : cfg.integers("spectral.sizes")) {
    if (n % 2) throw ZklabError("config: spectral.sizes: " + std::to_string(n) + " is odd");
    const Grid2D g = Grid2D::centered(n, L);
    const RealField u = RealField::from_function(g, f);
    const SpectralField s = forward_transform(u);
    const double e = integrate(pointwise_product(u, u));
    const double parseval = rel(coefficient_energy(s), e);
    const double roundtrip = l2_norm(inverse_transform(s) - u) / l2_norm(u);
    const RealField ox = RealField::from_function(g, fd_x);
    const RealField oy = RealField::from_function(g, fd_y);
    const double ex = max_abs_diff(derivative(u, 1, 0), ox) / ox.max_abs();
    const double ey = max_abs_diff(derivative(u, 0, 1), oy) / oy.max_abs();
    worst_parseval = std::max(worst_parseval, parseval);
    worst_roundtrip = std::max(worst_roundtrip, roundtrip);
    worst_deriv = std::max({worst_deriv, ex, ey});
    t.add_row({static_cast<double>(n), L, parseval, roundtrip, ex, ey});
  }
  c.at_most("parseval relative error", worst_parseval, c.tol(1e-10));
  c.at_most("round trip relative error", worst_roundtrip, c.tol(1e-12));
  c.at_most("derivative vs finite differences", worst_deriv, c.tol(1e-6));
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- fundsol

SEvalConfig seval_config(const LabConfig& cfg) {
  SEvalConfig s;
  s.xi_max = cfg.real("fundsol.xi_max");
  s.taper_width = cfg.real("fundsol.taper_width");
  s.n_quad = cfg.integer("fundsol.n_quad");
  s.tol = cfg.real("fundsol.tol");
  s.validate();
  return s;
}

KernelTableConfig kernel_config(const LabConfig& cfg) {
  KernelTableConfig k;
  k.half_width = cfg.real("fundsol.kernel_half_width");
  k.spacing = cfg.real("fundsol.kernel_spacing");
  k.window_taper = cfg.real("fundsol.kernel_taper");
  k.eta_step = cfg.real("fundsol.kernel_eta_step");
  k.validate();
  return k;
}

StepResult step_fundsol(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const SEvalConfig s = seval_config(cfg);
  const auto pts = cfg.reals("fundsol.points");
  if (pts.size() % 2) throw ZklabError("config: fundsol.points needs x y pairs");

  CsvTable points{"points",
                  {"x [length]", "y [length]", "S_direct", "S_reduced", "im_direct", "im_reduced", "abs_diff",
                   "S_reduced_mirror", "refinement_delta"},
                  {}};
  double worst_diff = 0.0, worst_im = 0.0, worst_sym = 0.0;
  int unconverged = 0;
  for (std::size_t k = 0; k < pts.size(); k += 2) {
    const double x = pts[k], y = pts[k + 1];
    const SPoint d = evaluate_S_direct(x, y, s);
    const SReduced red = evaluate_S_reduced(x, y, s);
    const SReduced mirror = evaluate_S_reduced(x, -y, s);
    const double diff = std::abs(d.value.real() - red.value);
    worst_diff = std::max(worst_diff, diff);
    worst_im = std::max({worst_im, std::abs(d.value.imag()), std::abs(red.imag)});
    worst_sym = std::max(worst_sym, std::abs(red.value - mirror.value));
    unconverged += !d.converged + !red.converged + !mirror.converged;
    points.add_row({x, y, d.value.real(), red.value, d.value.imag(), red.imag, diff, mirror.value,
                    std::max(d.refinement_delta, red.refinement_delta)});
  }
  c.at_most("reduced vs direct |S| difference", worst_diff, c.tol(10.0 * s.tol));
  c.at_most("|Im S|", worst_im, c.tol(s.tol));
  c.at_most("S(x,y) - S(x,-y)", worst_sym, c.tol(s.tol));
  c.at_most("unconverged evaluations", unconverged, 0.0);

  const DecayFitReport fit = verify_x_decay(cfg.real("fundsol.fit_lo"), cfg.real("fundsol.fit_hi"),
                                            cfg.integer("fundsol.fit_samples"), s);
  c.holds("decay fit has enough samples above the noise floor", fit.ok);
  c.greater("c0_hat", fit.c0_hat, 0.0, "decay constant of log|S(x,0)| against x^{3/2}");
  c.at_least("decay fit r2", fit.r2, 0.99);
  c.record("decay fit r2 against x", fit.r2_linear, "model comparison, not asserted");
  CsvTable decay{"", {"x [length]", "abs_S", "fitted"}, {}};
  for (const auto& p : fit.samples) decay.add_row({p.x, p.abs_s, p.fitted});

  CsvTable ydecay{"ydecay", {"m", "y [length]", "weighted_abs_S"}, {}};
  for (int m : cfg.integers("fundsol.y_decay_m")) {
    const YDecayReport y = verify_y_decay(m, cfg.real("fundsol.y_decay_x"), cfg.real("fundsol.y_max"), s);
    c.holds("y decay m=" + std::to_string(m) + " maximum is interior and finite",
            y.interior && std::isfinite(y.sup_value));
    for (std::size_t k = 0; k < y.ys.size(); ++k) ydecay.add_row({static_cast<double>(m), y.ys[k], y.weighted[k]});
  }

  const ConvolutionKernel kernel(kernel_config(cfg));
  c.at_most("kernel mass - 1", std::abs(kernel.table_mass() - 1.0), c.tol(1e-6));

  r.tables.push_back(std::move(decay));
  r.tables.push_back(std::move(points));
  r.tables.push_back(std::move(ydecay));
  return r;
}

// ---------------------------------------------------------------- evolve

StepResult step_evolve(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const Grid2D g = Grid2D::centered(cfg.integer("evolve.n"), cfg.real("evolve.L"));
  const RealField u0 = RealField::from_function(g, gaussian(cfg.real("evolve.amplitude"), cfg.real("evolve.width2")));
  const double t_end = cfg.real("evolve.t_end");
  const double s_leg = cfg.real("evolve.group_split") * t_end;
  const double norm0 = l2_norm(u0);

  CsvTable diag{"", {"symbol", "t [time]", "mass", "l2"}, {}};
  CsvTable conv{"convergence", {"symbol", "dt [time]", "diff_to_next", "ratio"}, {}};
  for (const auto& sym : {DispersionSymbol::asymmetric(), DispersionSymbol::symmetric()}) {
    const std::string name = sym.name();
    const RealField ut = linear_propagate(u0, t_end, sym);
    c.at_most(name + " linear propagator unitarity", std::abs(l2_norm(ut) / norm0 - 1.0), c.tol(1e-12));
    const RealField two_legs = linear_propagate(linear_propagate(u0, s_leg, sym), t_end - s_leg, sym);
    c.at_most(name + " group law", l2_norm(two_legs - ut) / norm0, c.tol(1e-12));

    SolverConfig sc;
    sc.dt = cfg.real("evolve.dt");
    sc.t_end = t_end;
    sc.nonlinear_form = matching_form(sym);
    const Trajectory tr = zk_solve(u0, sc, sym);
    c.holds(name + " nonlinear run completed", !tr.aborted, tr.abort_reason);
    const double m0 = tr.diagnostics.front().mass, l0 = tr.diagnostics.front().l2;
    double dm = 0.0, dl = 0.0;
    for (const auto& d : tr.diagnostics) {
      dm = std::max(dm, std::abs(d.mass - m0) / std::abs(m0));
      dl = std::max(dl, std::abs(d.l2 - l0) / l0);
      diag.add_row({name, format_number(d.t), format_number(d.mass), format_number(d.l2)});
    }
    c.at_most(name + " mass drift", dm, c.tol(1e-8));
    c.at_most(name + " L2 drift", dl, c.tol(1e-6));
    if (sym.variant == DispersionSymbol::Variant::Asymmetric)
      r.blobs.push_back({"final", "bin", snapshot_bytes(tr.final_state(), tr.times.back())});

    const double dt0 = cfg.real("evolve.dt_coarse");
    RealField u[3];
    for (int k = 0; k < 3; ++k) {
      sc.dt = dt0 / (1 << k);
      u[k] = zk_solve(u0, sc, sym).final_state();
    }
    const double e01 = l2_norm(u[0] - u[1]), e12 = l2_norm(u[1] - u[2]);
    const double ratio = e01 / e12;
    conv.add_row({name, format_number(dt0), format_number(e01), format_number(ratio)});
    conv.add_row({name, format_number(dt0 / 2), format_number(e12), ""});
    c.between(name + " dt-halving convergence ratio", ratio, 12.0, 20.0);
  }

  const RealField spectral = linear_propagate(u0, t_end, DispersionSymbol::asymmetric());
  const RealField conv_path = linear_solution_via_convolution(u0, t_end, kernel_config(cfg));
  c.at_most("convolution vs spectral path", l2_norm(conv_path - spectral) / l2_norm(spectral), c.tol(1e-3));

  r.tables.push_back(std::move(diag));
  r.tables.push_back(std::move(conv));
  return r;
}

// ---------------------------------------------------------------- equivalence

StepResult step_equivalence(const LabConfig& cfg, Checks& c) {
  StepResult r;
  CsvTable t{"", {"regime", "amplitude", "n", "rel_l2_sampled", "rel_norm_gap", "samples"}, {}};
  const double width2 = cfg.real("equivalence.width2");
  for (const bool linear : {false, true}) {
    EquivalenceConfig e;
    e.n = cfg.integer(linear ? "equivalence.linear_n" : "equivalence.n");
    e.L_original = cfg.real("equivalence.L_original");
    e.L_symmetric = cfg.real("equivalence.L_symmetric");
    e.dt = cfg.real("equivalence.dt");
    e.t_end = cfg.real("equivalence.t_end");
    const double amp = cfg.real(linear ? "equivalence.linear_amplitude" : "equivalence.amplitude");
    const auto rep = solve_equivalence_check(gaussian(amp, width2), e);
    const std::string regime = linear ? "linear" : "nonlinear";
    c.at_most(regime + " frame equivalence", rep.rel_l2_sampled, c.tol(linear ? 1e-6 : 1e-3));
    c.at_most(regime + " transported norm gap", rep.rel_norm_gap, c.tol(1e-6));
    t.add_row({regime, format_number(amp), std::to_string(e.n), format_number(rep.rel_l2_sampled),
               format_number(rep.rel_norm_gap), std::to_string(rep.samples)});
  }

  const CoordinateMap map;
  double worst_rt = 0.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), y = u(rng);
    const auto [xs, ys] = map.to_symmetric(x, y);
    const auto [xb, yb] = map.to_original(xs, ys);
    worst_rt = std::max({worst_rt, std::abs(xb - x), std::abs(yb - y)});
  }
  c.at_most("coordinate map round trip", worst_rt, c.tol(1e-13));

  const double a = cfg.real("equivalence.identity_rate");
  c.at_most("transported rate formula", rel(transport_weight_rate(a), a / std::pow(2.0 * map.mu, 1.5)), c.tol(1e-14));
  const auto id = check_norm_identity([](double x, double y) { return std::exp(-x * x - y * y); }, a,
                                      cfg.real("equivalence.identity_half_width"));
  c.at_most("weight transport identity", id.rel_error, c.tol(1e-6), "Jacobian 1/(2 lambda mu)");
  CsvTable ident{"identity", {"rate", "original", "symmetric", "rel_error", "jacobian"}, {}};
  ident.add_row({a, id.original, id.symmetric, id.rel_error, map.jacobian()});

  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(ident));
  return r;
}

// ---------------------------------------------------------------- weights

StepResult step_weights(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const double a0 = cfg.real("weights.a0");
  const double h = cfg.real("weights.fd_step");

  CsvTable ode{"", {"t [time]", "a", "fd_derivative", "rhs", "rel_mismatch"}, {}};
  double worst_ode = 0.0;
  for (double t : cfg.reals("weights.ode_times")) {
    const double fd = (decay_rate(t + h, a0) - decay_rate(std::max(t - h, 0.0), a0)) / (t + h - std::max(t - h, 0.0));
    const double a = decay_rate(t, a0);
    const double rhs = -6.75 * a * a * a;
    const double m = rel(fd, rhs);
    worst_ode = std::max(worst_ode, m);
    ode.add_row({t, a, fd, rhs, m});
  }
  c.at_most("decay-rate ODE residual", worst_ode, c.tol(1e-6));
  c.at_most("a(2/(27 a0^2)) = a0/sqrt(2)", rel(decay_rate(2.0 / (27.0 * a0 * a0), a0), a0 / std::numbers::sqrt2),
            c.tol(1e-15));

  const ThetaValues t0 = theta_poly(0.0), t1 = theta_poly(1.0);
  const double seam = std::max({std::abs(t1.value - 1.0), std::abs(t1.d1 - 1.5), std::abs(t1.d2 - 0.75),
                                std::abs(t0.value - 0.25), std::abs(t0.d1)});
  c.at_most("theta anchor values at z = 0 and z = 1", seam, c.tol(1e-12));
  CsvTable theta{"theta", {"z", "theta", "theta_d1", "theta_d2", "theta_d2_factored"}, {}};
  double worst_factored = 0.0, min_d2 = kInf;
  for (int k = 0; k <= 1000; ++k) {
    const double z = k / 1000.0;
    const ThetaValues v = theta_poly(z);
    const double f = theta_second_factored(z);
    worst_factored = std::max(worst_factored, std::abs(v.d2 - f));
    min_d2 = std::min(min_d2, v.d2);
    if (k % 10 == 0) theta.add_row({z, v.value, v.d1, v.d2, f});
  }
  c.at_most("theta'' factored form agreement", worst_factored, c.tol(1e-12));
  c.at_least("min theta''", min_d2, 0.0);
  c.record("theta''' jump at z = 1", theta_third(1.0) + 0.375,
           "third derivative of theta minus that of z^{3/2} at the seam");

  double worst_taylor = 0.0;
  for (int n : cfg.integers("weights.ns")) {
    for (double t : cfg.reals("weights.times")) {
      const double a = decay_rate(t, a0);
      const double e = std::exp(a * std::pow(n, 1.5));
      const TaylorValues p = p2_taylor(n, t, n, a0);
      worst_taylor = std::max({worst_taylor, rel(p.value, e), rel(p.d1, 1.5 * a * std::sqrt(n) * e)});
    }
  }
  c.at_most("Taylor piece matches at z = n", worst_taylor, c.tol(1e-12));

  const auto ns = cfg.integers("weights.ns");
  const DominanceReport dom = weight_dominance(ns, a0, cfg.reals("weights.times"), cfg.integer("weights.samples"));
  c.at_most("weight seam continuity", dom.worst_seam_gap, c.tol(1e-10));
  c.at_least("weight monotonicity (worst increment)", dom.worst_monotonicity, 0.0);
  c.at_most("dominance constant over all n", dom.constant, dom.closed_form * (1.0 + 1e-12),
            "bounded by max over [0,1] of exp(a0 (theta(z) - z^{3/2}))");
  CsvTable dtab{"dominance", {"constant", "closed_form", "argmax_z", "argmax_n"}, {}};
  dtab.add_row({dom.constant, dom.closed_form, dom.argmax_z, static_cast<double>(dom.argmax_n)});

  const double beta = cfg.real("weights.kato_beta");
  double worst_kato = 0.0;
  for (int n : ns) {
    const WeightSpec k = WeightSpec::kato(n, beta);
    worst_kato = std::max(worst_kato, rel(eval_weight(k, 0.25 * n, 0.25 * n), std::exp(2.0 * beta * 0.5 * n)));
    worst_kato = std::max(worst_kato, rel(kato_theta(10.0 * n + 3.0, n), kato_theta(20.0 * n, n)));
  }
  c.at_most("Kato weight identity below n and flat beyond 10n", worst_kato, c.tol(1e-12));

  const Grid2D g = Grid2D::centered(256, 16.0);
  const RealField f = RealField::from_function(g, gaussian(1.0, 1.0));
  const double closed = 0.5 * std::numbers::pi * std::exp(1.0);
  c.at_most("weighted norm vs closed form (exp_linear, beta = 1)",
            rel(weighted_norm(f, WeightSpec::exp_linear(1.0)), closed), c.tol(1e-6));

  r.tables.push_back(std::move(ode));
  r.tables.push_back(std::move(theta));
  r.tables.push_back(std::move(dtab));
  return r;
}

// ---------------------------------------------------------------- interp

StepResult step_interp(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const auto corpus = mixture_corpus(cfg.integer("interp.corpus"), cfg.u64("interp.seed"));
  const int n = cfg.integer("interp.n");
  const int refine = cfg.integer("interp.refine");
  const double L = cfg.real("interp.L");
  const Grid2D coarse = Grid2D::centered(n, L);
  const Grid2D fine = Grid2D::centered(n * refine, L);

  struct Case {
    InterpLemma lemma;
    std::string key;
    bool asserted;
  };
  const Case cases[] = {{InterpLemma::L26, "interp.l26", true},
                        {InterpLemma::L27, "interp.l27", true},
                        {InterpLemma::LB1, "interp.lb1", true},
                        {InterpLemma::L26, "interp.l26_extra", false}};
  CsvTable t{"", {"function_id", "lemma", "s", "weight_param", "theta", "ratio", "ratio_fine", "ratio_scaled"}, {}};
  for (const auto& cs : cases) {
    const auto p = cfg.reals(cs.key);
    if (p.size() != 3) throw ZklabError("config: " + cs.key + " expects s, weight parameter and theta");
    double max_c = 0.0, max_f = 0.0, worst_ref = 0.0, worst_hom = 0.0;
    int inconclusive = 0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const auto& m = corpus[k];
      const auto fn = [&](double x, double y) { return m(x, y); };
      const RealField fc = RealField::from_function(coarse, fn);
      const InterpReport rc = interp_check(cs.lemma, fc, p[0], p[1], p[2]);
      const InterpReport rf = interp_check(cs.lemma, RealField::from_function(fine, fn), p[0], p[1], p[2]);
      const InterpReport rs = interp_check(cs.lemma, 7.0 * fc, p[0], p[1], p[2]);
      max_c = std::max(max_c, rc.ratio);
      max_f = std::max(max_f, rf.ratio);
      worst_ref = std::max(worst_ref, std::abs(rf.ratio / rc.ratio - 1.0));
      worst_hom = std::max(worst_hom, std::abs(rs.ratio / rc.ratio - 1.0));
      inconclusive += !rc.conclusive + !rf.conclusive;
      t.add_row({std::to_string(k), interp_lemma_name(cs.lemma), format_number(p[0]), format_number(p[1]),
                 format_number(p[2]), format_number(rc.ratio), format_number(rf.ratio), format_number(rs.ratio)});
    }
    const std::string name = with_params(interp_lemma_name(cs.lemma), p);
    if (cs.asserted) {
      c.at_most(name + " homogeneity", worst_hom, c.tol(1e-10));
      c.at_most(name + " refinement change", worst_ref, cfg.real("interp.stability_tol"));
      c.guard_at_most(name + " boundary-contaminated cases", inconclusive, 0.0);
      c.holds(name + " empirical constant finite", std::isfinite(max_c) && std::isfinite(max_f));
      c.record(name + " empirical constant", max_f, "corpus maximum on the refined grid");
    } else {
      c.record(name + " refinement change", worst_ref,
               "the weight has a kink on x + y = 0, so high orders of J need not be finite here");
      c.record(name + " corpus maximum, refined grid", max_f);
    }
  }

  const RealField f0 = RealField::from_function(coarse, [&](double x, double y) { return corpus[0](x, y); });
  const auto end = interp_check(InterpLemma::LB1, f0, 4.0, 0.5, 1.0);
  c.at_most("LB1 at theta = 1 has ratio 1", std::abs(end.ratio - 1.0), c.tol(1e-10));

  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- carleman

StepResult step_carleman(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const TimeProfile profile = TimeProfile::smoothstep(cfg.real("carleman.ramp"));
  const int order = cfg.integer("carleman.order");
  const int count = cfg.integer("carleman.count");
  const std::uint64_t seed = cfg.u64("global.seed");

  c.at_most("min_alpha(4R)/min_alpha(R) - 8", std::abs(min_alpha(4.0, profile) / min_alpha(1.0, profile) - 8.0),
            c.tol(1e-12));
  c.at_most("min_alpha for a constant profile is R^{3/2}", rel(min_alpha(4.0, TimeProfile::constant(0.0)), 8.0),
            c.tol(1e-15));

  // Lower-order coefficients from two runs of the symmetric equation.
  const Grid2D g = Grid2D::centered(cfg.integer("carleman.coeff_n"), cfg.real("carleman.coeff_L"));
  const double amp = cfg.real("carleman.coeff_amplitude"), w2 = cfg.real("carleman.coeff_width2");
  SolverConfig sc;
  sc.dt = cfg.real("carleman.coeff_dt");
  sc.t_end = 1.0;
  sc.nonlinear_form = NonlinearForm::Symmetric;
  sc.snapshot_interval = cfg.real("carleman.coeff_snapshot");
  const auto sym = DispersionSymbol::symmetric();
  const Trajectory u1 = zk_solve(RealField::from_function(g, gaussian(amp, w2)), sc, sym);
  const Trajectory u2 = zk_solve(RealField::from_function(g, gaussian(amp, w2, cfg.real("carleman.coeff_shift"))), sc, sym);
  c.holds("coefficient runs completed", !u1.aborted && !u2.aborted);
  const LowerOrderCoefficients coeffs = coefficients_from_trajectories(u1, u2);
  const LowerOrderCoefficients zero{[](double, double, double) { return 0.0; },
                                    [](double, double, double) { return 0.0; }};

  struct Row {
    std::uint64_t seed;
    CarlemanReport r18, r24;
  };
  std::vector<Row> rows;
  double worst_split = 0.0, worst_skew = 0.0, worst_sym = 0.0, min_energy = kInf;
  double worst18 = 0.0, worst_eps = 0.0, worst_scale = 0.0, c_emp = 0.0, worst_phi2 = 0.0;
  int not_identical = 0, vacuous = 0;
  for (double R : cfg.reals("carleman.radii")) {
    const double am = min_alpha(R, profile);
    const CarlemanWeight w{R, profile};
    for (int s = 0; s < count; ++s) {
      const TestFunctionG gf = generate_admissible_g(seed + s, R, profile);
      TestFunctionG g2 = gf;
      g2.cx += 0.3 * gf.hx;
      g2.hy *= 0.8;
      g2.amplitude = -1.1;
      TestFunctionG g3 = gf;
      g3.amplitude *= 3.0;
      for (double fac : cfg.reals("carleman.alpha_factors")) {
        const double alpha = fac * am;
        const CarlemanReport r18 = check_inequality_18(gf, R, alpha, profile, order);
        const CarlemanReport r0 = check_inequality_24(gf, R, alpha, profile, zero, order);
        const CarlemanReport r3 = check_inequality_18(g3, R, alpha, profile, order);
        const SplitReport sp = conjugated_apply(gf, g2, alpha, w, order);
        not_identical += std::memcmp(&r18.ratio, &r0.ratio, sizeof(double)) != 0 ||
                         std::memcmp(&r18.rhs, &r0.rhs, sizeof(double)) != 0 ||
                         std::memcmp(&r18.lhs_term1, &r0.lhs_term1, sizeof(double)) != 0 ||
                         std::memcmp(&r18.lhs_term2, &r0.lhs_term2, sizeof(double)) != 0;
        vacuous += r18.vacuous;
        worst_split = std::max(worst_split, sp.split_error);
        worst_skew = std::max(worst_skew, sp.skew_pairing);
        worst_sym = std::max(worst_sym, sp.symmetry_gap);
        min_energy = std::min(min_energy, sp.energy_gap);
        worst18 = std::max(worst18, r18.ratio / (std::sqrt(3.0) * (1.0 + r18.eps_disc)));
        worst_eps = std::max(worst_eps, r18.eps_disc);
        worst_scale = std::max(worst_scale, rel(r3.ratio, r18.ratio));
        worst_phi2 = std::max(worst_phi2, r18.ratio_phi2);
        c_emp = std::max(c_emp, r18.ratio);
        rows.push_back({seed + static_cast<std::uint64_t>(s), r18, {}});
      }
    }
  }
  // The perturbed check needs the measured constant, so it runs second.
  double worst24 = 0.0, worst_pert = 0.0, max24 = 0.0;
  std::size_t k = 0;
  for (double R : cfg.reals("carleman.radii")) {
    for (int s = 0; s < count; ++s) {
      const TestFunctionG gf = generate_admissible_g(seed + s, R, profile);
      for ([[maybe_unused]] double fac : cfg.reals("carleman.alpha_factors")) {
        Row& row = rows[k++];
        row.r24 = check_inequality_24(gf, R, row.r18.alpha, profile, coeffs, order);
        worst_pert = std::max(worst_pert, row.r24.perturbation);
        max24 = std::max(max24, row.r24.ratio);
        const double allowed = c_emp * (1.0 + row.r24.eps_disc) / (1.0 - row.r24.perturbation);
        worst24 = std::max(worst24, row.r24.perturbation < 1.0 ? row.r24.ratio / allowed : kInf);
      }
    }
  }

  c.at_most("split identity Hf = Af + Sf", worst_split, c.tol(1e-8));
  c.at_most("skew pairing <Af, f>", worst_skew, c.tol(1e-8));
  c.at_most("symmetry gap <Sf, h> - <f, Sh>", worst_sym, c.tol(1e-8));
  c.at_least("energy inequality gap", min_energy, -c.tol(1e-6));
  c.at_most("Carleman inequality: ratio / (sqrt(3)(1 + eps_disc))", worst18, 1.0);
  c.at_most("Carleman inequality: eps_disc", worst_eps, cfg.real("carleman.eps_max"));
  c.at_most("vacuous test functions", vacuous, 0.0);
  c.at_most("ratio change when g is scaled by 3", worst_scale, c.tol(1e-12));
  c.at_most("zero coefficients: perturbed inequality differs bitwise", not_identical, 0.0);
  c.record("empirical Carleman constant", c_emp, "corpus maximum");
  c.record("largest ratio with phi^2 in the first term", worst_phi2);
  c.at_most("solver coefficients: perturbation share", worst_pert, 0.5);
  c.at_most("solver coefficients: ratio / (c (1 + eps) / (1 - perturbation))", worst24, 1.0);
  c.record("largest perturbed ratio with solver coefficients", max24);

  CsvTable t{"",
             {"seed", "R", "alpha", "lhs1", "lhs2", "rhs", "ratio", "eps_disc", "ratio_phi2", "ratio_perturbed",
              "perturbation"},
             {}};
  for (const auto& row : rows)
    t.add_row({std::to_string(row.seed), format_number(row.r18.R), format_number(row.r18.alpha),
               format_number(row.r18.lhs_term1), format_number(row.r18.lhs_term2), format_number(row.r18.rhs),
               format_number(row.r18.ratio), format_number(row.r18.eps_disc), format_number(row.r18.ratio_phi2),
               format_number(row.r24.ratio), format_number(row.r24.perturbation)});
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- smoothing

StepResult step_smoothing(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const double lambda = cfg.real("smoothing.lambda"), beta = cfg.real("smoothing.beta");
  std::mt19937_64 rng(cfg.u64("global.seed"));
  std::uniform_real_distribution<double> u(-5.0, 5.0);

  double worst_m0 = 0.0;
  for (int k = 0; k < cfg.integer("smoothing.m0_samples"); ++k) {
    const double xi = u(rng), eta = u(rng), tau = 10.0 * u(rng);
    const M0Value v = m0_eval(xi, eta, tau, lambda, beta);
    if (!v.singular) worst_m0 = std::max(worst_m0, std::abs(v.product_form - v.real_form) / std::abs(v.real_form));
  }
  c.at_most("m0 dual forms", worst_m0, c.tol(1e-12));
  c.at_most("m0(0,0,0) at lambda = beta = 1 equals -1/2", std::abs(m0_eval(0, 0, 0, 1, 1).product_form + 0.5),
            c.tol(1e-15));

  double worst_pf = 0.0;
  int ill = 0;
  for (int k = 0; k < cfg.integer("smoothing.pf_samples"); ++k) {
    const double xi = u(rng), eta = u(rng), tau = 10.0 * u(rng);
    const PartialFractions pf = partial_fractions_m20(eta, tau, lambda, beta);
    if (pf.ill_conditioned) {
      ++ill;
      continue;
    }
    const cplx d = m20_direct(xi, eta, tau, lambda, beta);
    worst_pf = std::max(worst_pf, std::abs(pf.evaluate(xi) - d) / std::abs(d));
  }
  c.at_most("partial-fraction reconstruction", worst_pf, c.tol(1e-10));
  c.record("ill-conditioned partial-fraction samples skipped", ill);

  const double rL = cfg.real("smoothing.roundtrip_L");
  const int rn = cfg.integer("smoothing.roundtrip_n");
  const Grid3D rg{rn, rn, rn, rL, rL, rL};
  const Field3D h = Field3D::from_function(rg, Bump3D{1, 0, 0, 0, 1, 1, 1});
  const T0Result t0 = apply_T0(h, {lambda, beta, 0, 0});
  const Field3D back = apply_H(t0.field, lambda, beta);
  double e = 0.0;
  for (std::size_t k = 0; k < h.data.size(); ++k) e += (back.data[k] - h.data[k]) * (back.data[k] - h.data[k]);
  c.at_most("H T0 round trip", std::sqrt(e * rg.dx() * rg.dy() * rg.dt()) / h.l2_norm(), c.tol(1e-6));

  const int n = cfg.integer("smoothing.n");
  const double L = cfg.real("smoothing.L");
  const Grid3D g{n, n, n, L, L, L};
  const auto symbols = cfg.integers("smoothing.a4_symbols");
  if (symbols.size() % 2) throw ZklabError("config: smoothing.a4_symbols needs k l pairs");
  for (std::size_t k = 0; k < symbols.size(); k += 2)
    if (symbols[k] + symbols[k + 1] > 2) throw ZklabError("config: smoothing.a4_symbols: k + l must be <= 2");
  const auto corpus = smoothing_corpus(cfg.integer("smoothing.count"), cfg.u64("global.seed"), g);

  CsvTable t{"",
             {"case_id", "bound", "k", "l", "lambda", "beta", "ratio", "skipped_nodes", "eps", "eps_domain"},
             {}};
  const double ratio_max = cfg.real("smoothing.ratio_max"), eps_max = cfg.real("smoothing.eps_max");
  auto tally = [&](const std::string& name, const std::vector<BoundReport>& reps) {
    double mr = 0.0, me = 0.0, md = 0.0;
    int fails = 0;
    for (const auto& b : reps) {
      mr = std::max(mr, b.ratio);
      me = std::max(me, b.eps);
      md = std::max(md, b.eps_domain);
      fails += !b.holds;
    }
    c.at_most(name + " max ratio", mr, ratio_max);
    c.at_most(name + " cases with ratio > 1 + eps", fails, 0.0);
    c.guard_at_most(name + " wrap-around estimate", md, eps_max);
    c.at_most(name + " eps", me, eps_max);
  };
  std::vector<BoundReport> b62;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const BoundReport b = check_bound_62(corpus[k], g, lambda, beta);
    t.add_row({std::to_string(k), "uniform_t", "0", "0", format_number(lambda), format_number(beta), format_number(b.ratio),
               std::to_string(b.skipped_nodes), format_number(b.eps), format_number(b.eps_domain)});
    b62.push_back(b);
  }
  tally("uniform-in-time bound", b62);
  for (std::size_t s = 0; s < symbols.size(); s += 2) {
    std::vector<BoundReport> reps;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const BoundReport b = check_bound_A4(corpus[k], g, lambda, beta, symbols[s], symbols[s + 1]);
      t.add_row({std::to_string(k), "mixed", std::to_string(symbols[s]), std::to_string(symbols[s + 1]),
                 format_number(lambda), format_number(beta), format_number(b.ratio), std::to_string(b.skipped_nodes),
                 format_number(b.eps), format_number(b.eps_domain)});
      reps.push_back(b);
    }
    tally("mixed-norm bound m_" + std::to_string(symbols[s]) + std::to_string(symbols[s + 1]), reps);
  }
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- experiments

WeightWindow window_from(const LabConfig& cfg, const std::string& sec) {
  WeightWindow w{cfg.real(sec + ".window_margin"), cfg.real(sec + ".window_ramp"), cfg.real(sec + ".window_z_cap"),
                 cfg.real(sec + ".window_z_ramp")};
  w.validate();
  return w;
}

StepResult step_decay15(const LabConfig& cfg, Checks& c) {
  StepResult r;
  Decay15Config d;
  d.n = cfg.integer("decay15.n");
  d.L = cfg.real("decay15.L");
  d.a0 = cfg.real("decay15.a0");
  d.t_end = cfg.real("decay15.t_end");
  d.samples = cfg.integer("decay15.samples");
  d.datum = GaussianDatum{cfg.real("decay15.amplitude"), cfg.real("decay15.width")};
  d.nonlinear = cfg.flag("decay15.nonlinear");
  d.dt = cfg.real("decay15.dt");
  d.w_cap = cfg.real("decay15.w_cap");
  d.window = window_from(cfg, "decay15");
  const Decay15Report rep = run_decay15(d);

  c.at_most("max W(t)", rep.max_adaptive, d.w_cap, "regression cap");
  c.at_most("a(t_end) against the closed form", rel(rep.a_end, rep.a_end_closed_form), c.tol(1e-15));
  c.guard_at_most("window cap sensitivity", rep.cap_sensitivity, cfg.real("decay15.cap_sensitivity_max"));
  c.record("frozen-rate curve exceeds the adaptive one", rep.frozen_exceeds ? 1.0 : 0.0, "expected, informational");
  c.record("max frozen-rate W(t)", rep.max_frozen);

  CsvTable t{"", {"t [time]", "a_t", "W_adaptive", "W_frozen"}, {}};
  for (const auto& p : rep.curve) t.add_row({p.t, p.a_t, p.w_adaptive, p.w_frozen});
  r.tables.push_back(std::move(t));
  return r;
}

PersistenceConfig persistence_config(const LabConfig& cfg) {
  PersistenceConfig p;
  p.n = cfg.integer("persistence.n");
  p.L = cfg.real("persistence.L");
  p.beta = cfg.real("persistence.beta");
  p.ns = cfg.integers("persistence.ns");
  p.t_end = cfg.real("persistence.t_end");
  p.samples = cfg.integer("persistence.samples");
  p.datum = GaussianDatum{cfg.real("persistence.amplitude"), cfg.real("persistence.width")};
  p.nonlinear = cfg.flag("persistence.nonlinear");
  p.dt = cfg.real("persistence.dt");
  p.spread_tol = cfg.real("persistence.spread_tol");
  p.window = window_from(cfg, "persistence");
  return p;
}

StepResult step_persistence(const LabConfig& cfg, Checks& c) {
  StepResult r;
  const PersistenceConfig p = persistence_config(cfg);
  const PersistenceReport rep = run_persistenceB(p);
  c.holds("fitted exponents finite", rep.finite);
  c.at_most("exponent spread across n", rep.spread, p.spread_tol);
  double worst_mirror = 0.0, worst_env = 0.0;
  for (const auto& cv : rep.curves) {
    worst_mirror = std::max(worst_mirror, cv.mirror_gap);
    for (std::size_t k = 1; k < rep.times.size(); ++k)
      worst_env = std::max(worst_env, cv.growth[k] / std::exp(cv.c_hat * rep.times[k]) - 1.0);
    c.record("fitted exponent n=" + std::to_string(cv.n), cv.c_hat);
  }
  c.at_most("mirrored run gap", worst_mirror, c.tol(cfg.real("persistence.mirror_tol")));
  c.at_most("G_n(t) exceeds exp(C t)", worst_env, c.tol(1e-12));

  PersistenceConfig flat = p;
  flat.beta = 0.0;
  const PersistenceReport rep0 = run_persistenceB(flat);
  double worst0 = 0.0;
  for (const auto& cv : rep0.curves) worst0 = std::max(worst0, std::abs(cv.c_hat));
  c.at_most("exponent at beta = 0", worst0, c.tol(1e-8), "L2 conservation");

  std::vector<std::string> cols{"t [time]"};
  for (const auto& cv : rep.curves) cols.push_back("G_" + std::to_string(cv.n));
  for (const auto& cv : rep.curves) cols.push_back("mirror_" + std::to_string(cv.n));
  CsvTable t{"", cols, {}};
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    std::vector<double> row{rep.times[k]};
    for (const auto& cv : rep.curves) row.push_back(cv.growth[k]);
    for (const auto& cv : rep.curves) row.push_back(cv.mirror_growth[k]);
    t.add_row(row);
  }
  CsvTable e{"exponents", {"n", "c_hat", "c_hat_beta0", "mirror_gap"}, {}};
  for (std::size_t k = 0; k < rep.curves.size(); ++k)
    e.add_row({static_cast<double>(rep.curves[k].n), rep.curves[k].c_hat, rep0.curves[k].c_hat,
               rep.curves[k].mirror_gap});
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(e));
  return r;
}

GaussianDatum datum_from(const LabConfig& cfg, const std::string& key) {
  const auto v = cfg.reals(key);
  if (v.size() != 4) throw ZklabError("config: " + key + " expects amplitude width cx cy");
  GaussianDatum d{v[0], v[1], v[2], v[3]};
  d.validate();
  return d;
}

StepResult step_annulus(const LabConfig& cfg, Checks& c) {
  StepResult r;
  AnnulusConfig a;
  a.n = cfg.integer("annulus.n");
  a.L = cfg.real("annulus.L");
  a.first = datum_from(cfg, "annulus.first");
  a.second = datum_from(cfg, "annulus.second");
  a.dt = cfg.real("annulus.dt");
  a.snapshot_interval = cfg.real("annulus.snapshot_interval");
  a.t_end = cfg.real("annulus.t_end");
  a.radii = cfg.reals("annulus.radii");
  a.edge_margin = cfg.real("annulus.edge_margin");
  a.noise_floor = cfg.real("annulus.noise_floor");
  a.quadrature_n = cfg.integer("annulus.quadrature_n");
  a.refine = true;
  const AnnulusReport rep = run_annulus_trend(a);

  AnnulusConfig same = a;
  same.second = same.first;
  same.refine = false;
  double worst_same = 0.0;
  for (const auto& row : run_annulus_trend(same).rows) worst_same = std::max(worst_same, row.norm);
  c.at_most("A_R for identical trajectories", worst_same, 0.0);
  c.holds("A_R > 0 on every reachable radius", rep.all_positive);
  c.guard_at_most("too few trusted radii for a slope", rep.trusted_count < 2 ? 1.0 : 0.0, 0.0);
  c.less("slope of log A_R against R^{3/2}", rep.slope, 0.0);
  c.at_most("refinement change of log A_R", rep.max_refinement_change, cfg.real("annulus.refinement_tol"));
  c.holds("A_R nonincreasing beyond the support bulk", rep.nonincreasing_tail);

  CsvTable t{"", {"R [length]", "A_R", "log_A_R", "R^1.5", "trusted", "refined_log_A_R", "refinement_change"}, {}};
  for (const auto& row : rep.rows)
    t.add_row({row.R, row.norm, row.log_norm, row.r32, row.trusted ? 1.0 : 0.0, row.refined_log_norm,
               row.refinement_change});
  CsvTable fit{"fit", {"slope", "intercept", "trusted_count"}, {}};
  fit.add_row({rep.slope, rep.intercept, static_cast<double>(rep.trusted_count)});
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(fit));
  return r;
}

using StepFn = StepResult (*)(const LabConfig&, Checks&);

StepFn step_function(const std::string& name) {
  static const std::map<std::string, StepFn> table = {
      {"spectral", step_spectral},   {"fundsol", step_fundsol},         {"evolve", step_evolve},
      {"equivalence", step_equivalence}, {"weights", step_weights},     {"interp", step_interp},
      {"carleman", step_carleman},   {"smoothing", step_smoothing},     {"decay15", step_decay15},
      {"persistence", step_persistence}, {"annulus", step_annulus}};
  const auto it = table.find(name);
  if (it == table.end()) throw ZklabError("unknown step '" + name + "'");
  return it->second;
}

}  // namespace

StepResult run_step(const std::string& name, const LabConfig& cfg) {
  const StepFn fn = step_function(name);
  fft::set_threads(cfg.integer("global.threads"));
  const auto start = std::chrono::steady_clock::now();
  Checks checks(cfg.real("global.tol_scale"));
  StepResult r = fn(cfg, checks);
  r.name = name;
  r.assertions = checks.take();
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace zklab
