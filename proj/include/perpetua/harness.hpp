#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perpetua/analysis.hpp"
#include "perpetua/levy.hpp"
#include "perpetua/sampler.hpp"
#include "perpetua/test_function.hpp"

namespace perpetua {

// ---------------------------------------------------------------------------
// Configuration. Zero in a numeric option means "derive the default from the
// triplet"; the resolved value is written into the check details.

struct Thresholds {
  double delta_01 = 0.05;
  double growth_ratio = 0.5;
  double ks_alpha = 0.01;
  double tol_abs = 1e-3;
  double tol_rel = 1e-2;
};

// Checkpoints t0 * 2^k, k = 0..doublings.
struct HorizonSchedule {
  double t0 = 2.0;
  int doublings = 7;
  std::vector<double> checkpoints() const;
};

struct OccupationOptions {
  std::size_t n_paths = 50;
  double horizon = 100.0;
  double bandwidth = 0.05;
  double max_median_gap = 0.05;
};

struct OvershootOptions {
  double z1 = 0.0;  // 0: max(50, 20 l), l = sigma_eff^2 / mu
  double z2 = 0.0;  // 0: 2 z1
  std::size_t n = 10000;
  double dt = 0.0;  // 0: the experiment dt
};

struct InvarianceOptions {
  enum class Start { Rho, Fixed };
  std::vector<double> x_list{1.0, 2.0, 5.0};
  std::size_t n = 5000;
  double bandwidth = 0.1;
  double rho_level = 0.0;  // 0: 100 l
  std::size_t rho_n = 5000;
  Start start = Start::Rho;
  double dt = 0.0;
  double ks_threshold = 0.0;  // 0: asymptotic critical value at ks_alpha
};

struct LlnOptions {
  double t0 = 0.0;       // 0: max(50 sigma_eff^2 / mu^2, 1)
  double horizon = 0.0;  // 0: 4 t0
  std::size_t n = 1000;
  double min_fraction = 0.99;
};

struct PotentialOptions {
  std::vector<double> points{-2.0, 0.0, 1.0, 3.0};
  std::size_t n = 100000;
  double bandwidth = 0.05;
  double dt = 0.02;
  double max_relative_gap = 0.1;
};

struct DivergenceOptions {
  double max_relative_gap = 0.1;
  int doublings_checked = 2;  // last ones in the schedule
};

struct ExperimentConfig {
  std::string name = "experiment";
  LevyTriplet triplet;
  TestFunction f{ExpDecay{}};
  std::size_t n_paths = 500;
  double dt = 0.01;
  HorizonSchedule schedule;
  std::uint64_t master_seed = 0;
  Thresholds thresholds;
  std::vector<std::string> checks;         // empty: every check
  std::vector<std::string> expected_fail;  // negative controls
  std::optional<Verdict> expected_verdict;
  OccupationOptions occupation;
  OvershootOptions overshoot;
  InvarianceOptions invariance;
  LlnOptions lln;
  PotentialOptions potential;
  DivergenceOptions divergence;
};

/// Check names understood by run_experiment, in execution order.
const std::vector<std::string>& check_names();

// ---------------------------------------------------------------------------

enum class PathVerdict { FiniteLike, InfiniteLike, Inconclusive };

std::string to_string(PathVerdict v);

struct FinitenessEstimate {
  double p_hat = 0.0;  // FINITE_LIKE among classified paths
  std::vector<PathVerdict> per_path;
  std::vector<double> checkpoints;
  std::vector<double> growth_curve;               // mean partial integral per checkpoint
  std::vector<std::vector<double>> partials;      // [path][checkpoint]
  std::size_t n_finite = 0, n_infinite = 0, n_inconclusive = 0;
  bool inconclusive_flagged = false;  // more than 10% inconclusive
};

/// Per-path rule on the increments d_j of the partial integral I over the
/// doubling checkpoints, with tol = tol_abs + tol_rel * I_K:
///   FINITE_LIKE    the last two increments are below tol;
///   INFINITE_LIKE  the last three exceed tol and d_{j+1} >= growth_ratio d_j.
PathVerdict classify_partials(std::span<const double> partials, const Thresholds& t);

/// Error(InvalidArgument) on an invalid schedule or n_paths < 1.
FinitenessEstimate finiteness_probability(const ExperimentConfig& config, unsigned threads = 1);

/// Summary without the per-path partials.
nlohmann::json estimate_json(const FinitenessEstimate& estimate);

/// One row per path and checkpoint: path_id,checkpoint,partial_integral.
std::string ensembles_csv(const FinitenessEstimate& estimate);

struct CheckReport {
  std::string name;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison = "<=";  // statistic <comparison> threshold
  std::vector<std::string> artifacts;
  std::string note;
  bool skipped = false;  // not applicable; counts as satisfied
  std::string error;     // set when the check threw; counts as a failure
  nlohmann::json details = nlohmann::json::object();
};

/// pass iff p_hat lies in [0, delta] or [1 - delta, 1]. statistic is
/// min(p_hat, 1 - p_hat). Error(PreconditionViolation) with fewer than 100
/// classified paths.
CheckReport zero_one_check(const FinitenessEstimate& estimate, double delta_01);

/// Skipped unless the verdict is decisive; otherwise pass iff p_hat sits on
/// the matching side of {0, 1}.
CheckReport theorem_consistency_check(const VerdictReport& verdict, const FinitenessEstimate& estimate,
                                      double delta_01);

/// Median over paths of |direct - occupation| / direct at the horizon.
/// Error(PreconditionViolation) unless the local-time criterion says HAS.
CheckReport occupation_identity_check(const ExperimentConfig& config, unsigned threads = 1);

/// Two-sample KS between overshoot ensembles at z1 < z2.
CheckReport overshoot_stationarity_check(const ExperimentConfig& config, unsigned threads = 1,
                                         EmpiricalDistribution* z1_sample = nullptr,
                                         EmpiricalDistribution* z2_sample = nullptr);

/// Largest KS distance of L_inf-proxy samples at each x against x = 1, for
/// paths started from rho_hat (or from 0 for the negative control).
CheckReport local_time_invariance_check(const ExperimentConfig& config, unsigned threads = 1);

/// Fraction of paths with mu t / 2 < xi_t < 2 mu t at every grid time in
/// [t0, horizon]. Error(PreconditionViolation) unless mu is finite positive.
CheckReport lln_envelope_check(const ExperimentConfig& config, unsigned threads = 1);

/// Largest relative gap between the inverted potential density and the mean
/// L_inf proxy at each point.
CheckReport potential_density_check(const ExperimentConfig& config, unsigned threads = 1);

/// For a diverging tail test: mean increments of the partial integral over
/// the last doublings against the LLN value int_T^{2T} f(mu t) dt.
CheckReport divergence_growth_check(const ExperimentConfig& config, const FinitenessEstimate& estimate);

// ---------------------------------------------------------------------------

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;       // overrides config.master_seed
  std::vector<std::string> checks;         // overrides config.checks
};

struct ExperimentResult {
  std::vector<CheckReport> checks;
  VerdictReport verdict;
  bool ok = false;  // every check satisfied, expected failures inverted
  std::filesystem::path report_path;
};

/// Runs the selected checks and writes report.json, metadata.json and the
/// CSV artifacts into out_dir. report.json depends only on the config and
/// seed. Error(ConfigError) for unknown check names.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options = {});

/// Whether a check outcome satisfies the suite, given expected failures.
bool check_satisfied(const CheckReport& report, const ExperimentConfig& config);

}  // namespace perpetua
