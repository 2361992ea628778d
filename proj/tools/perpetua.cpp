// perpetua: command-line front end.
//
//   perpetua verdict  --config FILE
//   perpetua classify --config FILE
//   perpetua simulate --config FILE --out DIR
//   perpetua verify   --config FILE --out DIR [--checks a,b,...]
//
// Exit status: 0 pass, 1 check failure, 2 configuration or usage error.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "perpetua/harness.hpp"
#include "perpetua/io.hpp"

using namespace perpetua;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

struct Args {
  std::string config;
  std::string out;
  std::vector<std::string> checks;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string format = "json";
};

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

ExperimentConfig load(const Args& a) {
  auto c = load_config(a.config);
  if (a.seed) c.master_seed = *a.seed;
  return c;
}

int cmd_verdict(const Args& a) {
  const auto c = load(a);
  const auto r = perpetual_verdict(c.triplet, c.f);
  if (a.format == "csv") {
    std::cout << "verdict,reason,failed_preconditions,tail_integral,local_times\n"
              << to_string(r.verdict) << "," << csv_field(r.reason) << "," << join(r.failed_preconditions, ";") << ","
              << to_string(r.integral.verdict) << "," << to_string(r.local_times.decision) << "\n";
  } else {
    std::cout << to_json(r).dump(2) << "\n";
  }
  if (c.expected_verdict && *c.expected_verdict != r.verdict) {
    std::cerr << "verdict " << to_string(r.verdict) << " differs from expected " << to_string(*c.expected_verdict)
              << "\n";
    return kFail;
  }
  return kPass;
}

int cmd_classify(const Args& a) {
  const auto c = load(a);
  const auto flags = classify(c.triplet);
  const auto lt = local_time_criterion(c.triplet);
  if (a.format == "csv") {
    std::cout << "is_compound_poisson,is_subordinator,is_spectrally_negative,mean,mean_is_finite_positive,local_times\n"
              << std::boolalpha << flags.is_compound_poisson << "," << flags.is_subordinator << ","
              << flags.is_spectrally_negative << "," << to_string(flags.mean) << "," << flags.mean_is_finite_positive << "," << to_string(lt.decision)
              << "\n";
  } else {
    auto j = to_json(flags);
    j["local_times"] = to_json(lt);
    j["effective_variance"] = effective_variance(c.triplet);
    std::cout << j.dump(2) << "\n";
  }
  return kPass;
}

int cmd_simulate(const Args& a) {
  const auto c = load(a);
  const auto est = finiteness_probability(c, a.threads);
  std::filesystem::create_directories(a.out);
  const auto summary = estimate_json(est);
  write_text(std::filesystem::path(a.out) / "ensembles.csv", ensembles_csv(est));
  write_text(std::filesystem::path(a.out) / "summary.json", summary.dump(2) + "\n");
  if (a.format == "csv") {
    std::cout << "checkpoint,mean_partial_integral\n";
    for (std::size_t j = 0; j < est.checkpoints.size(); ++j)
      std::cout << format_number(est.checkpoints[j]) << "," << format_number(est.growth_curve[j]) << "\n";
  } else {
    std::cout << summary.dump(2) << "\n";
  }
  return kPass;
}

int cmd_verify(const Args& a) {
  const auto c = load(a);
  RunOptions opts;
  opts.threads = a.threads;
  opts.checks = a.checks;
  const auto res = run_experiment(c, a.out, opts);
  if (a.format == "csv") std::cout << "check,status,statistic,comparison,threshold,satisfied\n";
  for (const auto& r : res.checks) {
    const std::string status = r.skipped ? "skipped" : !r.error.empty() ? "error" : r.pass ? "pass" : "fail";
    const bool ok = check_satisfied(r, c);
    if (a.format == "csv") {
      std::cout << r.name << "," << status << "," << format_number(r.statistic) << "," << r.comparison << ","
                << format_number(r.threshold) << "," << (ok ? "true" : "false") << "\n";
    } else {
      std::cout << (ok ? "ok   " : "FAIL ") << r.name << ": " << status;
      if (!r.skipped && r.error.empty())
        std::cout << " (" << format_number(r.statistic) << " " << r.comparison << " " << format_number(r.threshold)
                  << ")";
      if (!r.error.empty()) std::cout << " " << r.error;
      if (!r.note.empty()) std::cout << " [" << r.note << "]";
      std::cout << "\n";
    }
  }
  if (a.format != "csv") std::cout << "report: " << res.report_path.string() << "\n";
  return res.ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perpetual integrals of Levy processes: verdicts and Monte Carlo checks"};
  app.require_subcommand(1);
  Args args;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--threads", args.threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--format", args.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* verdict = app.add_subcommand("verdict", "Decide finiteness of the perpetual integral");
  auto* classify_cmd = app.add_subcommand("classify", "Structural flags and local-time decision of the triplet");
  auto* simulate = app.add_subcommand("simulate", "Simulate partial integrals on the horizon schedule");
  auto* verify = app.add_subcommand("verify", "Run statistical checks and write a report");
  for (auto* sub : {verdict, classify_cmd, simulate, verify}) common(sub);
  simulate->add_option("--out", args.out, "Output directory")->required();
  verify->add_option("--out", args.out, "Output directory")->required();
  verify->add_option("--checks", args.checks, "Comma-separated check names (default: config or all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfig;
  }
  for (auto* sub : {verdict, classify_cmd, simulate, verify})
    if (sub->count("--seed") > 0) args.seed = seed;

  try {
    if (*verdict) return cmd_verdict(args);
    if (*classify_cmd) return cmd_classify(args);
    if (*simulate) return cmd_simulate(args);
    return cmd_verify(args);
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics())
      std::cerr << e.source() << ":" << d.line << ": " << (d.field.empty() ? "/" : d.field) << ": " << d.message
                << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kConfig : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
