// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--only N[,N...]] [--threads N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "perpetua/analysis.hpp"
#include "perpetua/harness.hpp"
#include "perpetua/io.hpp"
#include "perpetua/sampler.hpp"

using namespace perpetua;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes.
constexpr double kP01 = 0.95;             // C2
constexpr double kOccupationGap = 0.05;   // C3
constexpr double kPotentialGap = 0.10;    // C4
constexpr double kKsAlpha = 0.01;         // C6
constexpr double kInvarianceKs = 0.05;    // C7
constexpr double kLlnFraction = 0.99;     // C8
constexpr double kGrowthGap = 0.10;       // C10

const LevyTriplet kBm{1.0, 1.0, NoJumps{}};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

ExperimentConfig bm_config(TestFunction f) {
  ExperimentConfig c;
  c.name = "acceptance";
  c.triplet = kBm;
  c.f = std::move(f);
  c.n_paths = 500;
  c.dt = 0.01;
  c.schedule = {2.0, 7};  // 2 .. 256
  c.master_seed = 20240601;
  return c;
}

unsigned g_threads = 1;

const FinitenessEstimate& harmonic_estimate() {
  static const FinitenessEstimate e = finiteness_probability(bm_config(TestFunction{PowerTail{1.0, 1.0}}), g_threads);
  return e;
}

Outcome c1_verdicts() {
  std::size_t ok = 0, total = 0;
  std::string bad;
  for (const auto& entry : fs::directory_iterator(PERPETUA_CONFIG_DIR "/benchmarks")) {
    if (entry.path().extension() != ".json") continue;
    const auto c = load_config(entry.path());
    if (!c.expected_verdict) continue;
    const auto r = perpetual_verdict(c.triplet, c.f);
    bool good = r.verdict == *c.expected_verdict;
    const auto named = [&](const char* code) {
      return std::find(r.failed_preconditions.begin(), r.failed_preconditions.end(), code) !=
             r.failed_preconditions.end();
    };
    const auto stem = entry.path().stem().string();
    if (stem.rfind("cp_only", 0) == 0) good = good && named("IS_COMPOUND_POISSON");
    if (stem.rfind("stable05", 0) == 0) good = good && named("MEAN_NOT_FINITE_POSITIVE") && named("NO_LOCAL_TIMES");
    ++total;
    if (good)
      ++ok;
    else
      bad += " " + stem + "=" + to_string(r.verdict);
  }
  return {ok == total && total >= 22, std::to_string(ok) + "/" + std::to_string(total) + " configs" + bad};
}

Outcome c2_zero_one() {
  const auto finite = finiteness_probability(bm_config(TestFunction{ExpDecay{1.0}}), g_threads);
  const auto& infinite = harmonic_estimate();
  return {finite.p_hat >= kP01 && infinite.p_hat <= 1.0 - kP01,
          "p_hat(ExpDecay)=" + fmt(finite.p_hat) + " p_hat(PowerTail)=" + fmt(infinite.p_hat) + " inconclusive=" +
              std::to_string(finite.n_inconclusive) + "/" + std::to_string(infinite.n_inconclusive)};
}

Outcome c3_occupation() {
  auto c = bm_config(TestFunction{ExpDecay{1.0}});
  c.occupation = {50, 100.0, 0.05, kOccupationGap};
  const auto r = occupation_identity_check(c, g_threads);
  return {r.pass, "median gap=" + fmt(r.statistic)};
}

Outcome c4_potential() {
  // Closed form for drift mu, variance s2: 1/mu above 0, e^{2 mu x / s2}/mu below.
  auto exact = [](double x) { return x >= 0.0 ? 1.0 : std::exp(2.0 * x); };
  auto c = bm_config(TestFunction{ExpDecay{1.0}});
  c.potential = {{0.0, 1.0, 3.0}, 20000, 0.05, 0.01, kPotentialGap};
  const auto upper = potential_density_check(c, g_threads);
  c.potential = {{-2.0}, 200000, 0.05, 0.02, kPotentialGap};
  const auto lower = potential_density_check(c, g_threads);

  bool pass = upper.pass && lower.pass;
  std::string detail = "MC gap=" + fmt(std::max(upper.statistic, lower.statistic));
  for (const auto* r : {&lower, &upper})
    for (const auto& p : r->details["points"]) {
      const double x = p["x"], u = p["u"];
      if (x >= 1.0) pass = pass && std::abs(u - 1.0) <= kPotentialGap;
      pass = pass && std::abs(u - exact(x)) <= kPotentialGap * exact(x);
      detail += " u(" + fmt(x) + ")=" + fmt(u) + "/" + fmt(p["monte_carlo"].get<double>());
    }
  return {pass, detail};
}

Outcome c5_local_times() {
  bool pass = true;
  std::string detail;
  for (double alpha : {0.5, 0.8, 1.2, 1.5, 1.8}) {
    const auto pure = local_time_criterion({0.0, 0.0, StableLike{alpha, 1.0, 0.0}}).decision;
    const auto gauss = local_time_criterion({0.0, 1.0, StableLike{alpha, 1.0, 0.0}}).decision;
    const auto want = alpha > 1.0 ? LocalTimeDecision::HasLocalTimes : LocalTimeDecision::NoLocalTimes;
    pass = pass && pure == want && gauss == LocalTimeDecision::HasLocalTimes;
    detail += " a=" + fmt(alpha) + ":" + (pure == LocalTimeDecision::HasLocalTimes ? "HAS" : "NO");
  }
  return {pass, detail.substr(1)};
}

Outcome c6_overshoot() {
  auto c = bm_config(TestFunction{ExpDecay{1.0}});
  c.triplet = {0.1, 0.0, CompoundPoisson{1.0, ExponentialJump{2.0, +1}}};
  c.thresholds.ks_alpha = kKsAlpha;
  c.overshoot = {50.0, 100.0, 10000, 0.1};
  const auto cp = overshoot_stationarity_check(c, g_threads);
  const auto bm = overshoot_ensemble(kBm, 50.0, 10000, 5, {0.01, g_threads, 0.0});
  const bool zero = bm.samples().back() == 0.0;
  return {cp.pass && zero, "KS=" + fmt(cp.statistic) + " <= " + fmt(cp.threshold) +
                               " BM max overshoot=" + fmt(bm.samples().back())};
}

Outcome c7_invariance() {
  auto c = bm_config(TestFunction{ExpDecay{1.0}});
  c.invariance.x_list = {1.0, 2.0, 5.0};
  c.invariance.n = 5000;
  c.invariance.ks_threshold = kInvarianceKs;
  c.invariance.start = InvarianceOptions::Start::Rho;
  c.invariance.rho_level = 100.0;
  c.invariance.rho_n = 5000;
  const auto r = local_time_invariance_check(c, g_threads);
  return {r.pass, "max KS=" + fmt(r.statistic) + (r.note.empty() ? "" : " (" + r.note + ")")};
}

Outcome c8_lln() {
  auto c = bm_config(TestFunction{ExpDecay{1.0}});
  c.lln = {50.0, 200.0, 1000, kLlnFraction};
  const auto r = lln_envelope_check(c, g_threads);
  return {r.pass, "fraction=" + fmt(r.statistic)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c9_determinism() {
  const fs::path dir = fs::temp_directory_path() / "perpetua_acceptance";
  fs::remove_all(dir);
  const std::string config = PERPETUA_CONFIG_DIR "/benchmarks/bm_drift__full_suite.json";
  auto run = [&](unsigned threads, const char* sub) {
    const std::string cmd = std::string("\"") + PERPETUA_CLI + "\" verify --config \"" + config + "\" --out \"" +
                            (dir / sub).string() + "\" --threads " + std::to_string(threads) + " > /dev/null";
    return std::system(cmd.c_str());
  };
  const int a = run(1, "t1"), b = run(8, "t8"), again = run(1, "t1b");
  const auto r1 = slurp(dir / "t1" / "report.json");
  const bool same = !r1.empty() && r1 == slurp(dir / "t8" / "report.json") && r1 == slurp(dir / "t1b" / "report.json");
  fs::remove_all(dir);
  return {a == 0 && b == 0 && again == 0 && same,
          std::string("exit ") + std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(again) +
              (same ? ", reports identical" : ", reports differ")};
}

Outcome c10_growth() {
  const auto& e = harmonic_estimate();
  const double target = std::log(2.0);  // (1/mu) log 2 with mu = 1
  bool pass = true;
  std::string detail;
  for (double T : {64.0, 128.0}) {
    const auto it = std::find(e.checkpoints.begin(), e.checkpoints.end(), T);
    const auto j = static_cast<std::size_t>(it - e.checkpoints.begin());
    const double inc = e.growth_curve[j + 1] - e.growth_curve[j];
    pass = pass && std::abs(inc - target) <= kGrowthGap * target;
    detail += " T=" + fmt(T) + ":" + fmt(inc);
  }
  return {pass, "log2=" + fmt(target) + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else if (a == "--threads" && i + 1 < argc) {
      g_threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only N[,N...]] [--threads N]\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "verdict matrix", 60, c1_verdicts},
      {2, "zero-one law", 300, c2_zero_one},
      {3, "occupation identity", 120, c3_occupation},
      {4, "potential density", 300, c4_potential},
      {5, "local-time criterion", 60, c5_local_times},
      {6, "overshoot stationarity", 300, c6_overshoot},
      {7, "local-time invariance", 600, c7_invariance},
      {8, "LLN envelope", 120, c8_lln},
      {9, "determinism", 600, c9_determinism},
      {10, "divergence growth", 300, c10_growth},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("C%-2d %s  %-24s %s [%.1fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
