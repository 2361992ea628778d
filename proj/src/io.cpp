#include "perpetua/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace perpetua {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string join_diagnostics(const std::string& source, const std::vector<ConfigDiagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += source + ":" + std::to_string(d.line) + ": " + (d.field.empty() ? "/" : d.field) + ": " + d.message;
  }
  return out;
}

// Line of the last key of a JSON pointer, found by locating each key in turn
// in the raw text. Array indices are skipped; a missing key falls back to the
// line of its nearest present ancestor.
int line_of(const std::string& text, const std::string& pointer) {
  auto line_at = [&](std::size_t pos) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  };
  std::size_t pos = 0;
  std::size_t start = 1;
  while (start <= pointer.size()) {
    std::size_t end = pointer.find('/', start);
    if (end == std::string::npos) end = pointer.size();
    const std::string token = pointer.substr(start, end - start);
    start = end + 1;
    if (token.empty() || std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
      continue;
    const std::string quoted = "\"" + token + "\"";
    std::size_t found = pos;
    for (;;) {
      found = text.find(quoted, found);
      if (found == std::string::npos) return line_at(pos);
      std::size_t k = found + quoted.size();
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < text.size() && text[k] == ':') break;
      found += quoted.size();
    }
    pos = found;
  }
  return line_at(pos);
}

// Collects diagnostics while walking a parsed document.
class Reader {
 public:
  explicit Reader(const std::string* text) : text_(text) {}

  void error(const std::string& field, std::string message) {
    diagnostics_.push_back({text_ ? line_of(*text_, field) : 0, field, std::move(message)});
  }
  bool ok() const { return diagnostics_.empty(); }
  std::vector<ConfigDiagnostic>& diagnostics() { return diagnostics_; }

  bool object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      error(ptr, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        error(ptr + "/" + key, "unknown field");
    }
    return true;
  }

  double number(const json& obj, const std::string& ptr, const char* key, double fallback, bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(ptr + "/" + key, "missing required number");
      return fallback;
    }
    if (!it->is_number()) {
      error(ptr + "/" + key, "expected a number");
      return fallback;
    }
    return it->get<double>();
  }

  std::uint64_t unsigned_integer(const json& obj, const std::string& ptr, const char* key, std::uint64_t fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_unsigned()) {
      error(ptr + "/" + key, "expected a non-negative integer");
      return fallback;
    }
    return it->get<std::uint64_t>();
  }

  std::string string(const json& obj, const std::string& ptr, const char* key, std::string fallback,
                     bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(ptr + "/" + key, "missing required string");
      return fallback;
    }
    if (!it->is_string()) {
      error(ptr + "/" + key, "expected a string");
      return fallback;
    }
    return it->get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& ptr, const char* key, std::vector<double> fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_array()) {
      error(ptr + "/" + key, "expected an array of numbers");
      return fallback;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) {
        error(ptr + "/" + key + "/" + std::to_string(i), "expected a number");
        continue;
      }
      out.push_back((*it)[i].get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const json& obj, const std::string& ptr, const char* key) {
    std::vector<std::string> out;
    const auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (!it->is_array()) {
      error(ptr + "/" + key, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) {
        error(ptr + "/" + key + "/" + std::to_string(i), "expected a string");
        continue;
      }
      out.push_back((*it)[i].get<std::string>());
    }
    return out;
  }

  void require(bool cond, const std::string& field, const std::string& message) {
    if (!cond) error(field, message);
  }

 private:
  const std::string* text_;
  std::vector<ConfigDiagnostic> diagnostics_;
};

const json kEmpty = json::object();

const json& member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? kEmpty : *it;
}

int parse_sign(Reader& r, const json& obj, const std::string& ptr) {
  const auto it = obj.find("sign");
  if (it == obj.end()) return +1;
  if (it->is_string()) {
    const auto s = it->get<std::string>();
    if (s == "+") return +1;
    if (s == "-") return -1;
  } else if (it->is_number_integer()) {
    const int v = it->get<int>();
    if (v == 1 || v == -1) return v;
  }
  r.error(ptr + "/sign", "expected \"+\" or \"-\"");
  return +1;
}

JumpLaw parse_jump(Reader& r, const json& j, const std::string& ptr) {
  if (!j.is_object()) {
    r.error(ptr, "expected an object");
    return ConstantJump{};
  }
  const auto law = r.string(j, ptr, "law", "", true);
  if (law == "constant") {
    r.object(j, ptr, {"law", "value"});
    return ConstantJump{r.number(j, ptr, "value", 1.0, true)};
  }
  if (law == "exponential") {
    r.object(j, ptr, {"law", "theta", "sign"});
    return ExponentialJump{r.number(j, ptr, "theta", 1.0, true), parse_sign(r, j, ptr)};
  }
  if (law == "two_sided_exponential") {
    r.object(j, ptr, {"law", "theta_plus", "theta_minus", "p_plus"});
    return TwoSidedExponentialJump{r.number(j, ptr, "theta_plus", 1.0, true),
                                   r.number(j, ptr, "theta_minus", 1.0, true), r.number(j, ptr, "p_plus", 0.5)};
  }
  if (law == "uniform") {
    r.object(j, ptr, {"law", "a", "b"});
    return UniformJump{r.number(j, ptr, "a", 0.0, true), r.number(j, ptr, "b", 1.0, true)};
  }
  if (!law.empty())
    r.error(ptr + "/law", "unknown jump law '" + law + "' (constant, exponential, two_sided_exponential, uniform)");
  return ConstantJump{};
}

LevyMeasure parse_measure(Reader& r, const json& j, const std::string& ptr) {
  if (!r.object(j, ptr, {"family", "params"})) return NoJumps{};
  const auto family = r.string(j, ptr, "family", "none");
  const json& p = member(j, "params");
  const std::string pp = ptr + "/params";
  if (family == "none") {
    r.object(p, pp, {});
    return NoJumps{};
  }
  if (family == "compound_poisson") {
    r.object(p, pp, {"rate", "jump"});
    CompoundPoisson cp;
    cp.rate = r.number(p, pp, "rate", 1.0, true);
    if (p.contains("jump"))
      cp.jump = parse_jump(r, p["jump"], pp + "/jump");
    else
      r.error(pp + "/jump", "missing required object");
    return cp;
  }
  if (family == "stable") {
    r.object(p, pp, {"alpha", "scale", "skew"});
    return StableLike{r.number(p, pp, "alpha", 1.5, true), r.number(p, pp, "scale", 1.0), r.number(p, pp, "skew", 0.0)};
  }
  if (family == "tempered_stable") {
    r.object(p, pp, {"alpha", "scale", "tempering", "skew"});
    return TemperedStable{r.number(p, pp, "alpha", 1.5, true), r.number(p, pp, "scale", 1.0),
                          r.number(p, pp, "tempering", 1.0, true), r.number(p, pp, "skew", 0.0)};
  }
  if (family == "spectrally_negative_stable") {
    r.object(p, pp, {"alpha", "scale"});
    return SpectrallyNegativeStable{r.number(p, pp, "alpha", 1.5, true), r.number(p, pp, "scale", 1.0)};
  }
  r.error(ptr + "/family",
          "unknown family '" + family +
              "' (none, compound_poisson, stable, tempered_stable, spectrally_negative_stable)");
  return NoJumps{};
}

LevyTriplet parse_triplet(Reader& r, const json& j, const std::string& ptr) {
  LevyTriplet t;
  if (!r.object(j, ptr, {"drift", "gaussian", "levy_measure"})) return t;
  t.drift = r.number(j, ptr, "drift", 0.0);
  t.gaussian = r.number(j, ptr, "gaussian", 0.0);
  if (j.contains("levy_measure")) t.levy_measure = parse_measure(r, j["levy_measure"], ptr + "/levy_measure");
  return t;
}

std::string issue_field(const std::string& code) {
  if (code == "NEGATIVE_GAUSSIAN") return "/gaussian";
  if (code == "RATE_RANGE") return "/levy_measure/params/rate";
  if (code == "THETA_RANGE" || code == "UNIFORM_BOUNDS") return "/levy_measure/params/jump";
  if (code == "SIGN_RANGE") return "/levy_measure/params/jump/sign";
  if (code == "PROBABILITY_RANGE") return "/levy_measure/params/jump/p_plus";
  if (code == "ALPHA_RANGE") return "/levy_measure/params/alpha";
  if (code == "SCALE_RANGE") return "/levy_measure/params/scale";
  if (code == "SKEW_RANGE") return "/levy_measure/params/skew";
  if (code == "TEMPERING_RANGE") return "/levy_measure/params/tempering";
  return "";
}

std::optional<TestFunction> parse_test_function(Reader& r, const json& j, const std::string& ptr) {
  if (!r.object(j, ptr, {"family", "params"})) return std::nullopt;
  const auto family = r.string(j, ptr, "family", "", true);
  const json& p = member(j, "params");
  const std::string pp = ptr + "/params";
  const std::size_t before = r.diagnostics().size();
  std::optional<TestFunction::Family> fam;
  if (family == "exp_decay") {
    r.object(p, pp, {"rate", "left"});
    ExpDecay e{r.number(p, pp, "rate", 1.0)};
    const auto left = r.string(p, pp, "left", "flat");
    if (left == "zero")
      e.left = ExpDecay::Left::Zero;
    else if (left != "flat")
      r.error(pp + "/left", "expected \"flat\" or \"zero\"");
    fam = e;
  } else if (family == "power_tail") {
    r.object(p, pp, {"p", "shift"});
    fam = PowerTail{r.number(p, pp, "p", 1.0, true), r.number(p, pp, "shift", 1.0)};
  } else if (family == "log_power") {
    r.object(p, pp, {"p"});
    fam = LogPower{r.number(p, pp, "p", 2.0, true)};
  } else if (family == "indicator") {
    r.object(p, pp, {"a", "b"});
    fam = Indicator{r.number(p, pp, "a", 0.0, true), r.number(p, pp, "b", 1.0, true)};
  } else if (family == "tabulated") {
    r.object(p, pp, {"knots", "values", "tail", "tail_param"});
    Tabulated t;
    t.knots = r.numbers(p, pp, "knots", {});
    t.values = r.numbers(p, pp, "values", {});
    const auto tail = r.string(p, pp, "tail", "zero");
    if (tail == "power")
      t.tail = Tabulated::Tail::Power;
    else if (tail == "exponential")
      t.tail = Tabulated::Tail::Exponential;
    else if (tail != "zero")
      r.error(pp + "/tail", "expected \"zero\", \"power\" or \"exponential\"");
    t.tail_param = r.number(p, pp, "tail_param", 0.0);
    fam = t;
  } else if (family == "scaled") {
    r.object(p, pp, {"factor", "f"});
    const double factor = r.number(p, pp, "factor", 1.0, true);
    if (!p.contains("f")) {
      r.error(pp + "/f", "missing required object");
      return std::nullopt;
    }
    auto inner = parse_test_function(r, p["f"], pp + "/f");
    if (!inner) return std::nullopt;
    fam = Scaled{factor, std::make_shared<const TestFunction>(std::move(*inner))};
  } else if (family == "sum") {
    r.object(p, pp, {"terms"});
    const auto it = p.find("terms");
    if (it == p.end() || !it->is_array()) {
      r.error(pp + "/terms", "expected an array of test functions");
      return std::nullopt;
    }
    Sum s;
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto term = parse_test_function(r, (*it)[i], pp + "/terms/" + std::to_string(i));
      if (term) s.terms.push_back(std::make_shared<const TestFunction>(std::move(*term)));
    }
    fam = s;
  } else {
    if (!family.empty())
      r.error(ptr + "/family",
              "unknown family '" + family + "' (exp_decay, power_tail, log_power, indicator, tabulated, scaled, sum)");
    return std::nullopt;
  }
  if (r.diagnostics().size() != before) return std::nullopt;
  try {
    return TestFunction(std::move(*fam));
  } catch (const Error& e) {
    r.error(pp, e.what());
    return std::nullopt;
  }
}

std::optional<Verdict> parse_verdict_name(const std::string& s) {
  if (s == "AS_FINITE") return Verdict::AsFinite;
  if (s == "AS_INFINITE") return Verdict::AsInfinite;
  if (s == "UNDECIDED") return Verdict::Undecided;
  return std::nullopt;
}

void parse_options(Reader& r, const json& j, const std::string& ptr, ExperimentConfig& c) {
  if (!r.object(j, ptr,
                {"occupation_identity", "overshoot_stationarity", "local_time_invariance", "lln_envelope",
                 "potential_density", "divergence_growth"}))
    return;
  auto count = [&](const json& o, const std::string& p, const char* key, std::size_t fallback) {
    return static_cast<std::size_t>(r.unsigned_integer(o, p, key, fallback));
  };
  if (j.contains("occupation_identity")) {
    const auto& o = j["occupation_identity"];
    const auto p = ptr + "/occupation_identity";
    if (r.object(o, p, {"n_paths", "horizon", "bandwidth", "max_median_gap"})) {
      auto& x = c.occupation;
      x.n_paths = count(o, p, "n_paths", x.n_paths);
      x.horizon = r.number(o, p, "horizon", x.horizon);
      x.bandwidth = r.number(o, p, "bandwidth", x.bandwidth);
      x.max_median_gap = r.number(o, p, "max_median_gap", x.max_median_gap);
      r.require(x.n_paths >= 1, p + "/n_paths", "must be >= 1");
      r.require(x.horizon > 0, p + "/horizon", "must be > 0");
      r.require(x.bandwidth > 0, p + "/bandwidth", "must be > 0");
    }
  }
  if (j.contains("overshoot_stationarity")) {
    const auto& o = j["overshoot_stationarity"];
    const auto p = ptr + "/overshoot_stationarity";
    if (r.object(o, p, {"z1", "z2", "n", "dt"})) {
      auto& x = c.overshoot;
      x.z1 = r.number(o, p, "z1", x.z1);
      x.z2 = r.number(o, p, "z2", x.z2);
      x.n = count(o, p, "n", x.n);
      x.dt = r.number(o, p, "dt", x.dt);
      r.require(x.z1 >= 0, p + "/z1", "must be > 0");
      r.require(x.z2 == 0 || x.z2 > x.z1, p + "/z2", "must exceed z1");
      r.require(x.n >= 2, p + "/n", "must be >= 2");
      r.require(x.dt >= 0, p + "/dt", "must be > 0");
    }
  }
  if (j.contains("local_time_invariance")) {
    const auto& o = j["local_time_invariance"];
    const auto p = ptr + "/local_time_invariance";
    if (r.object(o, p, {"x_list", "n", "bandwidth", "rho_level", "rho_n", "start", "dt", "ks_threshold"})) {
      auto& x = c.invariance;
      x.x_list = r.numbers(o, p, "x_list", x.x_list);
      x.n = count(o, p, "n", x.n);
      x.bandwidth = r.number(o, p, "bandwidth", x.bandwidth);
      x.rho_level = r.number(o, p, "rho_level", x.rho_level);
      x.rho_n = count(o, p, "rho_n", x.rho_n);
      x.dt = r.number(o, p, "dt", x.dt);
      x.ks_threshold = r.number(o, p, "ks_threshold", x.ks_threshold);
      const auto start = r.string(o, p, "start", "rho");
      if (start == "fixed")
        x.start = InvarianceOptions::Start::Fixed;
      else if (start == "rho")
        x.start = InvarianceOptions::Start::Rho;
      else
        r.error(p + "/start", "expected \"rho\" or \"fixed\"");
      r.require(!x.x_list.empty(), p + "/x_list", "must not be empty");
      r.require(x.n >= 2, p + "/n", "must be >= 2");
      r.require(x.bandwidth > 0, p + "/bandwidth", "must be > 0");
      r.require(x.rho_n >= 1, p + "/rho_n", "must be >= 1");
    }
  }
  if (j.contains("lln_envelope")) {
    const auto& o = j["lln_envelope"];
    const auto p = ptr + "/lln_envelope";
    if (r.object(o, p, {"t0", "horizon", "n", "min_fraction"})) {
      auto& x = c.lln;
      x.t0 = r.number(o, p, "t0", x.t0);
      x.horizon = r.number(o, p, "horizon", x.horizon);
      x.n = count(o, p, "n", x.n);
      x.min_fraction = r.number(o, p, "min_fraction", x.min_fraction);
      r.require(x.t0 >= 0, p + "/t0", "must be > 0");
      r.require(x.horizon == 0 || x.horizon > x.t0, p + "/horizon", "must exceed t0");
      r.require(x.n >= 1, p + "/n", "must be >= 1");
      r.require(x.min_fraction > 0 && x.min_fraction <= 1, p + "/min_fraction", "must lie in (0, 1]");
    }
  }
  if (j.contains("potential_density")) {
    const auto& o = j["potential_density"];
    const auto p = ptr + "/potential_density";
    if (r.object(o, p, {"points", "n", "bandwidth", "dt", "max_relative_gap"})) {
      auto& x = c.potential;
      x.points = r.numbers(o, p, "points", x.points);
      x.n = count(o, p, "n", x.n);
      x.bandwidth = r.number(o, p, "bandwidth", x.bandwidth);
      x.dt = r.number(o, p, "dt", x.dt);
      x.max_relative_gap = r.number(o, p, "max_relative_gap", x.max_relative_gap);
      r.require(!x.points.empty(), p + "/points", "must not be empty");
      r.require(x.n >= 1, p + "/n", "must be >= 1");
      r.require(x.bandwidth > 0, p + "/bandwidth", "must be > 0");
      r.require(x.dt > 0, p + "/dt", "must be > 0");
    }
  }
  if (j.contains("divergence_growth")) {
    const auto& o = j["divergence_growth"];
    const auto p = ptr + "/divergence_growth";
    if (r.object(o, p, {"max_relative_gap", "doublings_checked"})) {
      auto& x = c.divergence;
      x.max_relative_gap = r.number(o, p, "max_relative_gap", x.max_relative_gap);
      x.doublings_checked = static_cast<int>(r.unsigned_integer(o, p, "doublings_checked", 2));
      r.require(x.doublings_checked >= 1, p + "/doublings_checked", "must be >= 1");
    }
  }
}

json numbers_json(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

// JSON has no infinities; they are written as strings.
json real_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return x;
}

std::vector<ConfigDiagnostic> by_line(std::vector<ConfigDiagnostic> ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
  return ds;
}

}  // namespace

ConfigError::ConfigError(std::string source, std::vector<ConfigDiagnostic> diagnostics)
    : ConfigError(std::move(source), by_line(std::move(diagnostics)), 0) {}

ConfigError::ConfigError(std::string source, std::vector<ConfigDiagnostic> diagnostics, int)
    : Error(ErrorCode::ConfigError, join_diagnostics(source, diagnostics)),
      source_(std::move(source)),
      diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------

json to_json(const LevyTriplet& t) {
  json m;
  std::visit(overloaded{
                 [&](const NoJumps&) { m = {{"family", "none"}, {"params", json::object()}}; },
                 [&](const CompoundPoisson& cp) {
                   json jump = std::visit(
                       overloaded{
                           [](const ConstantJump& j) { return json{{"law", "constant"}, {"value", j.value}}; },
                           [](const ExponentialJump& j) {
                             return json{{"law", "exponential"}, {"theta", j.theta}, {"sign", j.sign > 0 ? "+" : "-"}};
                           },
                           [](const TwoSidedExponentialJump& j) {
                             return json{{"law", "two_sided_exponential"},
                                         {"theta_plus", j.theta_plus},
                                         {"theta_minus", j.theta_minus},
                                         {"p_plus", j.p_plus}};
                           },
                           [](const UniformJump& j) { return json{{"law", "uniform"}, {"a", j.a}, {"b", j.b}}; },
                       },
                       cp.jump);
                   m = {{"family", "compound_poisson"}, {"params", {{"rate", cp.rate}, {"jump", jump}}}};
                 },
                 [&](const StableLike& s) {
                   m = {{"family", "stable"}, {"params", {{"alpha", s.alpha}, {"scale", s.scale}, {"skew", s.skew}}}};
                 },
                 [&](const TemperedStable& s) {
                   m = {{"family", "tempered_stable"},
                        {"params",
                         {{"alpha", s.alpha}, {"scale", s.scale}, {"tempering", s.tempering}, {"skew", s.skew}}}};
                 },
                 [&](const SpectrallyNegativeStable& s) {
                   m = {{"family", "spectrally_negative_stable"}, {"params", {{"alpha", s.alpha}, {"scale", s.scale}}}};
                 },
             },
             t.levy_measure);
  return {{"drift", t.drift}, {"gaussian", t.gaussian}, {"levy_measure", m}};
}

json to_json(const TestFunction& f) {
  return std::visit(
      overloaded{
          [](const ExpDecay& e) {
            return json{{"family", "exp_decay"},
                        {"params", {{"rate", e.rate}, {"left", e.left == ExpDecay::Left::Zero ? "zero" : "flat"}}}};
          },
          [](const PowerTail& p) {
            return json{{"family", "power_tail"}, {"params", {{"p", p.p}, {"shift", p.shift}}}};
          },
          [](const LogPower& p) { return json{{"family", "log_power"}, {"params", {{"p", p.p}}}}; },
          [](const Indicator& i) { return json{{"family", "indicator"}, {"params", {{"a", i.a}, {"b", i.b}}}}; },
          [](const Tabulated& t) {
            const char* tail = t.tail == Tabulated::Tail::Power         ? "power"
                               : t.tail == Tabulated::Tail::Exponential ? "exponential"
                                                                        : "zero";
            return json{{"family", "tabulated"},
                        {"params",
                         {{"knots", numbers_json(t.knots)},
                          {"values", numbers_json(t.values)},
                          {"tail", tail},
                          {"tail_param", t.tail_param}}}};
          },
          [](const Scaled& s) {
            return json{{"family", "scaled"}, {"params", {{"factor", s.factor}, {"f", to_json(*s.inner)}}}};
          },
          [](const Sum& s) {
            json terms = json::array();
            for (const auto& t : s.terms) terms.push_back(to_json(*t));
            return json{{"family", "sum"}, {"params", {{"terms", terms}}}};
          },
      },
      f.family());
}

json to_json(const ExtendedReal& x) {
  switch (x.kind) {
    case ExtendedReal::Kind::Finite:
      return x.value;
    case ExtendedReal::Kind::PlusInfinity:
      return "+inf";
    case ExtendedReal::Kind::MinusInfinity:
      return "-inf";
    case ExtendedReal::Kind::Undefined:
      return "undefined";
  }
  return "undefined";
}

json to_json(const ClassificationFlags& f) {
  return {{"is_compound_poisson", f.is_compound_poisson},
          {"is_subordinator", f.is_subordinator},
          {"is_spectrally_negative", f.is_spectrally_negative},
          {"mean", to_json(f.mean)},
          {"mean_is_finite_positive", f.mean_is_finite_positive}};
}

json to_json(const LocalTimeReport& r) {
  return {{"decision", to_string(r.decision)},
          {"integral", real_json(r.integral)},
          {"tail_exponent", real_json(r.tail_exponent)}};
}

json to_json(const ConvergenceDecision& d) {
  return {{"verdict", to_string(d.verdict)},
          {"value", real_json(d.value)},
          {"error_estimate", real_json(d.error_estimate)},
          {"blocks_used", d.blocks_used},
          {"rule", d.rule}};
}

json to_json(const VerdictReport& r) {
  json issues = json::array();
  for (const auto& i : r.validation) issues.push_back({{"code", i.code}, {"message", i.message}});
  json out = {{"verdict", to_string(r.verdict)},
              {"reason", r.reason},
              {"failed_preconditions", r.failed_preconditions},
              {"validation", issues},
              {"tail_integral", to_json(r.integral)}};
  if (r.validation.empty()) {
    out["classification"] = to_json(r.flags);
    out["local_times"] = to_json(r.local_times);
  }
  return out;
}

json to_json(const CheckReport& c) {
  std::string status = c.skipped ? "skipped" : !c.error.empty() ? "error" : c.pass ? "pass" : "fail";
  json out = {{"name", c.name},
              {"status", status},
              {"pass", c.pass},
              {"statistic", real_json(c.statistic)},
              {"comparison", c.comparison},
              {"threshold", real_json(c.threshold)},
              {"artifacts", c.artifacts},
              {"note", c.note},
              {"details", c.details}};
  if (!c.error.empty()) out["error"] = c.error;
  return out;
}

json to_json(const ExperimentConfig& c) {
  json out = {
      {"name", c.name},
      {"triplet", to_json(c.triplet)},
      {"f", to_json(c.f)},
      {"n_paths", c.n_paths},
      {"dt", c.dt},
      {"horizon_schedule", {{"t0", c.schedule.t0}, {"doublings", c.schedule.doublings}}},
      {"master_seed", c.master_seed},
      {"thresholds",
       {{"delta_01", c.thresholds.delta_01},
        {"growth_ratio", c.thresholds.growth_ratio},
        {"ks_alpha", c.thresholds.ks_alpha},
        {"tol_abs", c.thresholds.tol_abs},
        {"tol_rel", c.thresholds.tol_rel}}},
      {"checks", c.checks},
      {"expected_fail", c.expected_fail},
      {"options",
       {{"occupation_identity",
         {{"n_paths", c.occupation.n_paths},
          {"horizon", c.occupation.horizon},
          {"bandwidth", c.occupation.bandwidth},
          {"max_median_gap", c.occupation.max_median_gap}}},
        {"overshoot_stationarity",
         {{"z1", c.overshoot.z1}, {"z2", c.overshoot.z2}, {"n", c.overshoot.n}, {"dt", c.overshoot.dt}}},
        {"local_time_invariance",
         {{"x_list", numbers_json(c.invariance.x_list)},
          {"n", c.invariance.n},
          {"bandwidth", c.invariance.bandwidth},
          {"rho_level", c.invariance.rho_level},
          {"rho_n", c.invariance.rho_n},
          {"start", c.invariance.start == InvarianceOptions::Start::Rho ? "rho" : "fixed"},
          {"dt", c.invariance.dt},
          {"ks_threshold", c.invariance.ks_threshold}}},
        {"lln_envelope",
         {{"t0", c.lln.t0}, {"horizon", c.lln.horizon}, {"n", c.lln.n}, {"min_fraction", c.lln.min_fraction}}},
        {"potential_density",
         {{"points", numbers_json(c.potential.points)},
          {"n", c.potential.n},
          {"bandwidth", c.potential.bandwidth},
          {"dt", c.potential.dt},
          {"max_relative_gap", c.potential.max_relative_gap}}},
        {"divergence_growth",
         {{"max_relative_gap", c.divergence.max_relative_gap},
          {"doublings_checked", c.divergence.doublings_checked}}}}},
  };
  if (c.expected_verdict) out["expected_verdict"] = to_string(*c.expected_verdict);
  return out;
}

// ---------------------------------------------------------------------------

LevyTriplet triplet_from_json(const json& j) {
  Reader r(nullptr);
  auto t = parse_triplet(r, j, "");
  if (!r.ok()) throw ConfigError("<triplet>", r.diagnostics());
  return t;
}

TestFunction test_function_from_json(const json& j) {
  Reader r(nullptr);
  auto f = parse_test_function(r, j, "");
  if (!r.ok() || !f) throw ConfigError("<test function>", r.diagnostics());
  return std::move(*f);
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    std::string msg = e.what();
    if (const auto cut = msg.find("parse error"); cut != std::string::npos) msg = msg.substr(cut);
    throw ConfigError(source, {{line, "", msg}});
  }

  Reader r(&text);
  ExperimentConfig c;
  if (!r.object(doc, "",
                {"name", "triplet", "f", "n_paths", "dt", "horizon_schedule", "master_seed", "thresholds", "checks",
                 "expected_fail", "expected_verdict", "options"}))
    throw ConfigError(source, r.diagnostics());

  c.name = r.string(doc, "", "name", c.name);
  if (doc.contains("triplet")) {
    c.triplet = parse_triplet(r, doc["triplet"], "/triplet");
    for (const auto& issue : validate(c.triplet))
      r.error("/triplet" + issue_field(issue.code), issue.code + ": " + issue.message);
  } else {
    r.error("/triplet", "missing required object");
  }
  if (doc.contains("f")) {
    if (auto f = parse_test_function(r, doc["f"], "/f")) c.f = std::move(*f);
  } else {
    r.error("/f", "missing required object");
  }

  c.n_paths = static_cast<std::size_t>(r.unsigned_integer(doc, "", "n_paths", c.n_paths));
  r.require(c.n_paths >= 100, "/n_paths", "must be >= 100");
  c.dt = r.number(doc, "", "dt", c.dt);
  r.require(c.dt > 0.0, "/dt", "must be > 0");
  if (doc.contains("horizon_schedule")) {
    const auto& h = doc["horizon_schedule"];
    if (r.object(h, "/horizon_schedule", {"t0", "doublings"})) {
      c.schedule.t0 = r.number(h, "/horizon_schedule", "t0", c.schedule.t0);
      c.schedule.doublings = static_cast<int>(r.unsigned_integer(h, "/horizon_schedule", "doublings", 7));
      r.require(c.schedule.t0 > 0.0, "/horizon_schedule/t0", "must be > 0");
      r.require(c.schedule.doublings >= 3, "/horizon_schedule/doublings", "must be >= 3");
      r.require(c.schedule.doublings <= 40, "/horizon_schedule/doublings", "must be <= 40");
    }
  }
  if (doc.contains("master_seed")) c.master_seed = r.unsigned_integer(doc, "", "master_seed", 0);
  if (doc.contains("thresholds")) {
    const auto& t = doc["thresholds"];
    const std::string p = "/thresholds";
    if (r.object(t, p, {"delta_01", "growth_ratio", "ks_alpha", "tol_abs", "tol_rel"})) {
      auto& th = c.thresholds;
      th.delta_01 = r.number(t, p, "delta_01", th.delta_01);
      th.growth_ratio = r.number(t, p, "growth_ratio", th.growth_ratio);
      th.ks_alpha = r.number(t, p, "ks_alpha", th.ks_alpha);
      th.tol_abs = r.number(t, p, "tol_abs", th.tol_abs);
      th.tol_rel = r.number(t, p, "tol_rel", th.tol_rel);
      r.require(th.delta_01 > 0 && th.delta_01 < 1, p + "/delta_01", "must lie in (0, 1)");
      r.require(th.growth_ratio > 0 && th.growth_ratio < 1, p + "/growth_ratio", "must lie in (0, 1)");
      r.require(th.ks_alpha > 0 && th.ks_alpha < 1, p + "/ks_alpha", "must lie in (0, 1)");
      r.require(th.tol_abs >= 0, p + "/tol_abs", "must be >= 0");
      r.require(th.tol_rel >= 0, p + "/tol_rel", "must be >= 0");
    }
  }
  const auto& known = check_names();
  auto check_list = [&](const char* key) {
    auto names = r.strings(doc, "", key);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (std::find(known.begin(), known.end(), names[i]) == known.end())
        r.error(std::string("/") + key + "/" + std::to_string(i), "unknown check '" + names[i] + "'");
    return names;
  };
  c.checks = check_list("checks");
  c.expected_fail = check_list("expected_fail");
  if (doc.contains("expected_verdict")) {
    const auto s = r.string(doc, "", "expected_verdict", "");
    c.expected_verdict = parse_verdict_name(s);
    if (!c.expected_verdict) r.error("/expected_verdict", "expected AS_FINITE, AS_INFINITE or UNDECIDED");
  }
  if (doc.contains("options")) parse_options(r, doc["options"], "/options", c);

  if (!r.ok()) throw ConfigError(source, r.diagnostics());
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), {{0, "", "cannot open file"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

}  // namespace perpetua
