#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "perpetua/analysis.hpp"
#include "perpetua/errors.hpp"

using namespace perpetua;
using Catch::Approx;

namespace {

const LevyTriplet kDrift{1.0, 0.0, NoJumps{}};
const LevyTriplet kBm{1.0, 1.0, NoJumps{}};
const LevyTriplet kCpDrift{0.1, 0.0, CompoundPoisson{1.0, ExponentialJump{2.0, +1}}};

const TestFunction kExp{ExpDecay{1.0, ExpDecay::Left::Zero}};
const TestFunction kHarmonic{PowerTail{1.0, 1.0}};

}  // namespace

TEST_CASE("local-time criterion on basic processes", "[analysis][local_time]") {
  CHECK(local_time_criterion(kBm).decision == LocalTimeDecision::HasLocalTimes);
  CHECK(local_time_criterion(kDrift).decision == LocalTimeDecision::HasLocalTimes);
  CHECK(local_time_criterion(kCpDrift).decision == LocalTimeDecision::HasLocalTimes);
  const LevyTriplet pure_cp{0.0, 0.0, CompoundPoisson{1.0, ConstantJump{1.0}}};
  CHECK(local_time_criterion(pure_cp).decision == LocalTimeDecision::NoLocalTimes);

  const auto bm = local_time_criterion(kBm);
  CHECK(bm.tail_exponent == Approx(-2.0).margin(0.05));
  // Re 1/(1 + Psi) for drift 1, sigma^2 1 integrates to a finite value; the
  // pure drift case gives int 1/(1 + r^2) = pi.
  CHECK(local_time_criterion(kDrift).integral == Approx(std::numbers::pi).epsilon(1e-5));
}

TEST_CASE("local-time criterion follows the stable index", "[analysis][local_time]") {
  for (double alpha : {0.5, 0.8, 1.2, 1.5, 1.8}) {
    const LevyTriplet t{0.0, 0.0, StableLike{alpha, 1.0, 0.0}};
    const auto r = local_time_criterion(t);
    INFO("alpha=" << alpha << " exponent=" << r.tail_exponent);
    CHECK(r.tail_exponent == Approx(-alpha).margin(0.05));
    CHECK(r.decision == (alpha > 1.0 ? LocalTimeDecision::HasLocalTimes : LocalTimeDecision::NoLocalTimes));
  }
}

TEST_CASE("local-time criterion rejects bad options", "[analysis][local_time]") {
  CHECK_THROWS_AS(local_time_criterion(kBm, {100.0, 0.1}), Error);
  CHECK_THROWS_AS(local_time_criterion(kBm, {1e6, 0.0}), Error);
}

TEST_CASE("tail integral test", "[analysis][tail]") {
  SECTION("exponential decay converges to 1") {
    const auto d = tail_integral_test(kExp);
    CHECK(d.verdict == Convergence::Converges);
    CHECK(d.value == Approx(1.0).epsilon(1e-2));
  }
  SECTION("harmonic tail diverges") {
    const auto d = tail_integral_test(kHarmonic);
    CHECK(d.verdict == Convergence::Diverges);
    CHECK(d.value > 0.0);
  }
  SECTION("log-power tail converges to 1/ln 2") {
    const auto d = tail_integral_test(TestFunction{LogPower{2.0}});
    CHECK(d.verdict == Convergence::Converges);
    // The remainder model is a power law in the block index; the log tail
    // is only asymptotically of that shape.
    CHECK(d.value == Approx(1.0 / std::log(2.0)).epsilon(2e-2));
  }
  SECTION("compact support is exact") {
    const auto d = tail_integral_test(TestFunction{Indicator{0.0, 3.0}});
    CHECK(d.verdict == Convergence::Converges);
    CHECK(d.rule == "support");
    CHECK(d.value == Approx(3.0).epsilon(1e-10));
  }
  SECTION("steep power tail") {
    const auto d = tail_integral_test(TestFunction{PowerTail{2.0, 1.0}});
    CHECK(d.verdict == Convergence::Converges);
    CHECK(d.value == Approx(1.0).epsilon(1e-2));
  }
  SECTION("bad options") {
    CHECK_THROWS_AS(tail_integral_test(kExp, {0.0, 1e6, 1000}), Error);
    CHECK_THROWS_AS(tail_integral_test(kExp, {1e-2, 1e6, 4}), Error);
  }
}

TEST_CASE("tail integral test is scale covariant", "[analysis][tail][property]") {
  for (const auto& f : {kExp, kHarmonic, TestFunction{LogPower{2.0}}, TestFunction{Indicator{0.0, 2.0}}}) {
    const auto base = tail_integral_test(f);
    for (double c : {0.1, 10.0}) {
      const auto d = tail_integral_test(scaled(c, f));
      INFO(f.family_name() << " c=" << c);
      CHECK(d.verdict == base.verdict);
      if (base.verdict == Convergence::Converges) CHECK(d.value == Approx(c * base.value).epsilon(1e-2));
    }
  }
}

TEST_CASE("perpetual verdict", "[analysis][verdict]") {
  SECTION("Brownian motion with drift") {
    CHECK(perpetual_verdict(kBm, kExp).verdict == Verdict::AsFinite);
    CHECK(perpetual_verdict(kBm, kHarmonic).verdict == Verdict::AsInfinite);
    CHECK(perpetual_verdict(kBm, TestFunction{LogPower{2.0}}).verdict == Verdict::AsFinite);
  }
  SECTION("pure drift") {
    const auto r = perpetual_verdict(kDrift, kExp);
    CHECK(r.verdict == Verdict::AsFinite);
    CHECK(r.failed_preconditions.empty());
  }
  SECTION("compound Poisson without drift") {
    const LevyTriplet cp{0.0, 0.0, CompoundPoisson{1.0, ExponentialJump{1.0, +1}}};
    const auto r = perpetual_verdict(cp, kExp);
    CHECK(r.verdict == Verdict::Undecided);
    REQUIRE_FALSE(r.failed_preconditions.empty());
    CHECK(r.failed_preconditions.front() == "IS_COMPOUND_POISSON");
  }
  SECTION("negative mean") {
    const auto r = perpetual_verdict({-1.0, 1.0, NoJumps{}}, kExp);
    CHECK(r.verdict == Verdict::Undecided);
    CHECK(r.failed_preconditions == std::vector<std::string>{"MEAN_NOT_FINITE_POSITIVE"});
  }
  SECTION("symmetric Cauchy-like without drift lists every failure") {
    const auto r = perpetual_verdict({0.0, 0.0, StableLike{0.5, 1.0, 0.0}}, kExp);
    CHECK(r.verdict == Verdict::Undecided);
    CHECK(r.failed_preconditions == std::vector<std::string>{"MEAN_NOT_FINITE_POSITIVE", "NO_LOCAL_TIMES"});
  }
  SECTION("invalid triplet") {
    const auto r = perpetual_verdict({0.0, -1.0, NoJumps{}}, kExp);
    CHECK(r.verdict == Verdict::Undecided);
    CHECK(r.failed_preconditions == std::vector<std::string>{"INVALID_TRIPLET"});
    CHECK(r.validation.size() == 1);
  }
  SECTION("stable with drift") {
    const LevyTriplet t{1.0, 0.0, StableLike{1.5, 1.0, 0.0}};
    CHECK(perpetual_verdict(t, kExp).verdict == Verdict::AsFinite);
    CHECK(perpetual_verdict(t, kHarmonic).verdict == Verdict::AsInfinite);
  }
}

TEST_CASE("potential density of pure drift", "[analysis][potential]") {
  const std::vector<double> grid{-3.0, -1.0, 1.0, 3.0};
  const auto pd = potential_density({2.0, 0.0, NoJumps{}}, grid);
  CHECK(pd.u_values[0] == Approx(0.0).margin(1e-6));
  CHECK(pd.u_values[1] == Approx(0.0).margin(1e-6));
  CHECK(pd.u_values[2] == Approx(0.5).epsilon(1e-5));
  CHECK(pd.u_values[3] == Approx(0.5).epsilon(1e-5));
}

TEST_CASE("potential density of Brownian motion with drift", "[analysis][potential][oracle]") {
  // u(x) = 1/mu for x >= 0 and exp(2 mu x / sigma^2) / mu below.
  const double mu = 1.0, s2 = 1.0;
  const std::vector<double> grid{-3.0, -1.0, -0.25, 0.0, 0.5, 2.0};
  const auto pd = potential_density({mu, s2, NoJumps{}}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double expected = x >= 0.0 ? 1.0 / mu : std::exp(2.0 * mu * x / s2) / mu;
    INFO("x=" << x);
    CHECK(pd.u_values[i] == Approx(expected).epsilon(1e-4).margin(1e-6));
  }
  CHECK(pd.sup_bound == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("potential density of drift plus exponential jumps", "[analysis][potential][oracle]") {
  // Subordinator with Laplace exponent 0.1 q + q / (2 + q); inverting
  // 1 / Phi(q) gives u(x) = 5/3 + (25/3) exp(-12 x) on x > 0.
  const std::vector<double> grid{-1.0, 0.1, 0.3, 1.0, 4.0};
  const auto pd = potential_density(kCpDrift, grid);
  CHECK(pd.u_values[0] == Approx(0.0).margin(2e-3));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double expected = 5.0 / 3.0 + 25.0 / 3.0 * std::exp(-12.0 * grid[i]);
    INFO("x=" << grid[i]);
    CHECK(pd.u_values[i] == Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("potential density preconditions", "[analysis][potential]") {
  const std::vector<double> grid{0.0};
  CHECK_THROWS_AS(potential_density({-1.0, 1.0, NoJumps{}}, grid), Error);
  CHECK_THROWS_AS(potential_density({0.0, 0.0, StableLike{0.5, 1.0, 0.0}}, grid), Error);
}

TEST_CASE("expectation upper bound", "[analysis][potential]") {
  // Exact expectation is int u f = 1 for this pair; sup u = 1.
  CHECK(expectation_upper_bound(kBm, kExp) == Approx(1.0).epsilon(1e-3));
  CHECK(std::isinf(expectation_upper_bound(kBm, TestFunction{ExpDecay{1.0, ExpDecay::Left::Flat}})));
  try {
    (void)expectation_upper_bound(kBm, kHarmonic);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolation);
  }
}
