#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "perpetua/errors.hpp"
#include "perpetua/levy.hpp"
#include "perpetua/quadrature.hpp"

using namespace perpetua;
using namespace std::complex_literals;
using Catch::Approx;

namespace {

LevyTriplet bm(double drift, double sigma2) { return {drift, sigma2, NoJumps{}}; }

// Brute-force Lévy-Khintchine integral of a one-sided density w(x), x > 0:
// int_0^inf (1 - e^{ilx} + ilx 1{x<=1}) w(x) dx, split at 1 so the oscillatory
// tail goes through the Fourier quadrature.
std::complex<double> numeric_half_exponent(const std::function<double(double)>& w, double lambda) {
  quad::Tolerance tol{1e-13, 1e-11, 4000};
  const double re_head =
      quad::integrate_singular([&](double x) { return (1.0 - std::cos(lambda * x)) * w(x); }, 0.0, 1.0, tol).value;
  const double im_head =
      quad::integrate_singular([&](double x) { return (lambda * x - std::sin(lambda * x)) * w(x); }, 0.0, 1.0, tol)
          .value;
  const double mass_tail = quad::integrate_to_infinity(w, 1.0, tol).value;
  const double omega = std::abs(lambda);
  const double cos_tail = quad::integrate_fourier(w, 1.0, omega, quad::Oscillation::Cosine, 1e-12).value;
  const double sin_tail = quad::integrate_fourier(w, 1.0, omega, quad::Oscillation::Sine, 1e-12).value;
  const double sgn = lambda > 0 ? 1.0 : -1.0;
  return {re_head + mass_tail - cos_tail, im_head - sgn * sin_tail};
}

std::complex<double> numeric_stable_exponent(double alpha, double c_plus, double c_minus, double tempering,
                                             double lambda) {
  auto w_plus = [=](double x) { return c_plus * std::pow(x, -1.0 - alpha) * std::exp(-tempering * x); };
  auto w_minus = [=](double x) { return c_minus * std::pow(x, -1.0 - alpha) * std::exp(-tempering * x); };
  std::complex<double> out = 0.0;
  if (c_plus > 0) out += numeric_half_exponent(w_plus, lambda);
  if (c_minus > 0) out += numeric_half_exponent(w_minus, -lambda);
  return out;
}

}  // namespace

TEST_CASE("char_exponent of deterministic drift", "[levy]") {
  const auto psi = char_exponent(bm(1.0, 0.0), 3.0);
  CHECK(psi.real() == 0.0);
  CHECK(psi.imag() == -3.0);
}

TEST_CASE("char_exponent vanishes at zero", "[levy]") {
  const std::vector<LevyTriplet> triplets = {
      bm(1.0, 2.0),
      {0.3, 0.0, CompoundPoisson{2.0, ExponentialJump{3.0, -1}}},
      {1.0, 0.0, StableLike{1.5, 1.0, 0.3}},
      {0.0, 0.5, TemperedStable{0.7, 2.0, 1.5, -0.4}},
      {1.0, 0.0, SpectrallyNegativeStable{1.6, 0.5}},
  };
  for (const auto& t : triplets) CHECK(std::abs(char_exponent(t, 0.0)) == 0.0);
}

TEST_CASE("char_exponent of Brownian motion matches Monte Carlo", "[levy][oracle]") {
  const auto psi = char_exponent(bm(0.0, 1.0), 2.0);
  CHECK(psi.real() == Approx(2.0).margin(1e-15));
  CHECK(psi.imag() == Approx(0.0).margin(1e-15));

  // Oracle: -log of the empirical characteristic function of N(0, 1).
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  const int n = 100000;
  std::complex<double> acc = 0.0;
  double acc_re2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = z(rng);
    acc += std::exp(1i * (2.0 * x));
    acc_re2 += std::cos(2.0 * x) * std::cos(2.0 * x);
  }
  const std::complex<double> ecf = acc / static_cast<double>(n);
  const double stderr_re = std::sqrt((acc_re2 / n - ecf.real() * ecf.real()) / n);
  CHECK(std::abs(std::exp(-psi) - ecf) <= 5.0 * stderr_re * std::sqrt(2.0));
}

TEST_CASE("char_exponent of unit-jump compound Poisson", "[levy][oracle]") {
  const LevyTriplet cp{0.0, 0.0, CompoundPoisson{1.0, ConstantJump{1.0}}};
  for (double lambda : {-2.5, -0.3, 0.7, 1.0, 3.0}) {
    const auto psi = char_exponent(cp, lambda);
    const auto expected = 1.0 - std::exp(1i * lambda);
    CHECK(psi.real() == Approx(expected.real()).margin(1e-14));
    CHECK(psi.imag() == Approx(expected.imag()).margin(1e-14));

    // Oracle: E[exp(i l N)] summed over the Poisson(1) count.
    std::complex<double> direct = 0.0;
    double weight = std::exp(-1.0);
    for (int k = 0; k < 60; ++k) {
      direct += weight * std::exp(1i * (lambda * k));
      weight /= (k + 1);
    }
    CHECK(std::abs(std::exp(-psi) - direct) < 1e-13);
  }
}

TEST_CASE("stable closed forms match the Lévy-Khintchine integral", "[levy][oracle]") {
  struct Case {
    double alpha, scale, skew;
  };
  for (const auto& c : {Case{0.5, 1.0, 0.0}, Case{0.8, 2.0, 0.6}, Case{1.0, 1.0, 0.0}, Case{1.0, 0.7, -0.5},
                        Case{1.5, 1.0, 0.3}, Case{1.8, 0.4, -1.0}}) {
    const double cp = 0.5 * c.scale * (1 + c.skew), cm = 0.5 * c.scale * (1 - c.skew);
    for (double lambda : {-3.0, -0.4, 0.25, 1.0, 5.0}) {
      const auto closed = jump_exponent(StableLike{c.alpha, c.scale, c.skew}, lambda);
      const auto numeric = numeric_stable_exponent(c.alpha, cp, cm, 0.0, lambda);
      INFO("alpha=" << c.alpha << " skew=" << c.skew << " lambda=" << lambda);
      CHECK(closed.real() == Approx(numeric.real()).epsilon(1e-6).margin(1e-8));
      CHECK(closed.imag() == Approx(numeric.imag()).epsilon(1e-6).margin(1e-8));
    }
  }
}

TEST_CASE("tempered stable closed forms match the Lévy-Khintchine integral", "[levy][oracle]") {
  struct Case {
    double alpha, scale, tempering, skew;
  };
  for (const auto& c : {Case{0.5, 1.0, 1.0, 0.0}, Case{1.0, 1.0, 2.0, 0.4}, Case{1.5, 0.8, 0.5, -0.3},
                        Case{1.3, 1.0, 3.0, 1.0}}) {
    const double cp = 0.5 * c.scale * (1 + c.skew), cm = 0.5 * c.scale * (1 - c.skew);
    for (double lambda : {-2.0, 0.5, 4.0}) {
      const auto closed = jump_exponent(TemperedStable{c.alpha, c.scale, c.tempering, c.skew}, lambda);
      const auto numeric = numeric_stable_exponent(c.alpha, cp, cm, c.tempering, lambda);
      INFO("alpha=" << c.alpha << " lambda=" << lambda);
      CHECK(closed.real() == Approx(numeric.real()).epsilon(1e-6).margin(1e-8));
      CHECK(closed.imag() == Approx(numeric.imag()).epsilon(1e-6).margin(1e-8));
    }
  }
}

TEST_CASE("spectrally negative stable equals stable with skew -1", "[levy]") {
  for (double lambda : {-1.0, 0.5, 2.0}) {
    const auto a = jump_exponent(SpectrallyNegativeStable{1.4, 0.9}, lambda);
    const auto b = jump_exponent(StableLike{1.4, 0.9, -1.0}, lambda);
    CHECK(std::abs(a - b) < 1e-14);
  }
}

TEST_CASE("Hermitian symmetry and nonnegative real part", "[levy][property]") {
  const std::vector<LevyTriplet> triplets = {
      bm(1.0, 1.0),
      {0.1, 0.0, CompoundPoisson{1.0, ExponentialJump{2.0, +1}}},
      {0.0, 0.3, CompoundPoisson{2.0, TwoSidedExponentialJump{1.0, 3.0, 0.3}}},
      {0.2, 0.0, CompoundPoisson{0.7, UniformJump{-2.0, 0.5}}},
      {1.0, 0.0, StableLike{1.5, 1.0, 0.0}},
      {0.0, 0.0, StableLike{0.5, 1.0, 0.9}},
      {0.0, 0.0, StableLike{1.0, 1.0, -0.2}},
      {0.5, 0.0, TemperedStable{1.2, 1.0, 0.7, 0.5}},
      {0.5, 0.0, TemperedStable{1.0, 1.0, 0.7, 0.5}},
      {1.0, 0.1, SpectrallyNegativeStable{1.7, 2.0}},
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logmag(-4.0, 4.0);
  for (const auto& t : triplets) {
    for (int i = 0; i < 200; ++i) {
      const double lambda = std::exp(logmag(rng)) * (i % 2 == 0 ? 1.0 : -1.0);
      const auto p = char_exponent(t, lambda);
      const auto q = char_exponent(t, -lambda);
      CHECK(std::abs(q - std::conj(p)) <= 1e-12 * std::max(1.0, std::abs(p)));
      CHECK(p.real() >= -1e-12 * std::max(1.0, std::abs(p)));
    }
  }
}

TEST_CASE("measure quantities match quadrature of the density", "[levy][oracle]") {
  quad::Tolerance tol{1e-14, 1e-11, 4000};
  SECTION("stable") {
    const StableLike s{1.3, 2.0, 0.4};
    const double cp = 1.4, cm = 0.6;
    auto w = [&](double x) { return (x > 0 ? cp : cm) * std::pow(std::abs(x), -1.0 - s.alpha); };
    CHECK(tail_mass(s) == Approx(2 * quad::integrate_to_infinity([&](double x) { return w(x); }, 1.0, tol).value *
                                 (cp + cm) / (2 * cp)));
    const double eps = 0.05;
    const double var = quad::integrate_singular([&](double x) { return x * x * (w(x) + w(-x)); }, 0.0, eps, tol).value;
    CHECK(small_jump_variance(s, eps) == Approx(var).epsilon(1e-9));
    const double first =
        quad::integrate([&](double x) { return x * (w(x) - w(-x)); }, eps, 1.0, tol).value;
    CHECK(truncated_first_moment(s, eps, 1.0) == Approx(first).epsilon(1e-9));
    CHECK(mass_above(s, eps) == Approx(s.scale * std::pow(eps, -s.alpha) / s.alpha));
    const auto tm = tail_mean(s);
    REQUIRE(tm.is_finite());
    CHECK(tm.value ==
          Approx(quad::integrate_to_infinity([&](double x) { return x * (w(x) - w(-x)); }, 1.0, tol).value).epsilon(1e-8));
  }
  SECTION("tempered stable") {
    const TemperedStable s{0.7, 1.5, 0.8, -0.2};
    const double cp = 0.5 * s.scale * (1 + s.skew), cm = 0.5 * s.scale * (1 - s.skew);
    auto w = [&](double x) {
      return (x > 0 ? cp : cm) * std::pow(std::abs(x), -1.0 - s.alpha) * std::exp(-s.tempering * std::abs(x));
    };
    auto both = [&](auto g) {
      return [&, g](double x) { return g(x) * w(x) + g(-x) * w(-x); };
    };
    const double eps = 0.02;
    CHECK(mass_above(s, eps) ==
          Approx(quad::integrate_to_infinity(both([](double) { return 1.0; }), eps, tol).value).epsilon(1e-8));
    CHECK(tail_mean(s).value ==
          Approx(quad::integrate_to_infinity(both([](double x) { return x; }), 1.0, tol).value).epsilon(1e-8));
    CHECK(small_jump_variance(s, eps) ==
          Approx(quad::integrate_singular(both([](double x) { return x * x; }), 0.0, eps, tol).value).epsilon(1e-8));
    CHECK(truncated_first_moment(s, eps, 1.0) ==
          Approx(quad::integrate(both([](double x) { return x; }), eps, 1.0, tol).value).epsilon(1e-8));
    CHECK(truncated_first_moment(s, 0.0, 1.0) ==
          Approx(quad::integrate_singular(both([](double x) { return x; }), 0.0, 1.0, tol).value).epsilon(1e-8));
    CHECK(second_moment(s) ==
          Approx(quad::integrate_to_infinity(both([](double x) { return x * x; }), 0.0, tol).value).epsilon(1e-8));
  }
  SECTION("jump laws") {
    const TwoSidedExponentialJump law{2.0, 0.5, 0.3};
    auto density = [&](double x) {
      return x > 0 ? law.p_plus * law.theta_plus * std::exp(-law.theta_plus * x)
                   : (1 - law.p_plus) * law.theta_minus * std::exp(law.theta_minus * x);
    };
    auto both = [&](auto g) {
      return [&, g](double x) { return g(x) * density(x) + g(-x) * density(-x); };
    };
    CHECK(jump_prob_abs_above(law, 0.7) ==
          Approx(quad::integrate_to_infinity(both([](double) { return 1.0; }), 0.7, tol).value));
    CHECK(jump_truncated_second_moment(law, 0.7) ==
          Approx(quad::integrate(both([](double x) { return x * x; }), 0.0, 0.7, tol).value));
    CHECK(jump_truncated_first_moment(law, 0.2, 1.0) ==
          Approx(quad::integrate(both([](double x) { return x; }), 0.2, 1.0, tol).value));

    const UniformJump u{-0.5, 2.0};
    CHECK(jump_prob_abs_above(u, 1.0) == Approx(1.0 / 2.5));
    CHECK(jump_truncated_second_moment(u, 1.0) == Approx((1.0 + 0.125) / 3.0 / 2.5));
    CHECK(jump_truncated_first_moment(u, 0.0, 1.0) == Approx((0.5 - 0.125) / 2.5));
    CHECK(std::abs(jump_char_function(u, 0.0) - 1.0) < 1e-15);
  }
}

TEST_CASE("mean", "[levy]") {
  CHECK(mean(bm(1.0, 0.0)) == ExtendedReal::finite(1.0));

  const LevyTriplet cp{0.5, 0.0, CompoundPoisson{2.0, ExponentialJump{4.0, +1}}};
  const auto m = mean(cp);
  REQUIRE(m.is_finite());
  CHECK(m.value == Approx(1.0).epsilon(1e-14));

  const LevyTriplet sym{0.7, 0.0, StableLike{1.5, 1.0, 0.0}};
  CHECK(mean(sym).value == Approx(0.7));

  const LevyTriplet skewed{0.0, 0.0, StableLike{1.5, 1.0, 1.0}};
  CHECK(mean(skewed).value == Approx(1.0 / 0.5));

  CHECK(mean({0.0, 0.0, StableLike{0.8, 1.0, 1.0}}).kind == ExtendedReal::Kind::PlusInfinity);
  CHECK(mean({0.0, 0.0, StableLike{0.8, 1.0, -1.0}}).kind == ExtendedReal::Kind::MinusInfinity);
  CHECK(mean({0.0, 0.0, StableLike{1.0, 1.0, 0.0}}).kind == ExtendedReal::Kind::Undefined);
}

TEST_CASE("classify", "[levy]") {
  SECTION("pure compound Poisson") {
    const auto f = classify({0.0, 0.0, CompoundPoisson{1.0, ExponentialJump{2.0, +1}}});
    CHECK(f.is_compound_poisson);
    CHECK(f.is_subordinator);
    CHECK_FALSE(f.is_spectrally_negative);
  }
  SECTION("Brownian motion with drift") {
    const auto f = classify(bm(1.0, 1.0));
    CHECK(f.is_spectrally_negative);
    CHECK_FALSE(f.is_compound_poisson);
    CHECK_FALSE(f.is_subordinator);
    CHECK(f.mean_is_finite_positive);
  }
  SECTION("drift plus positive jumps is a subordinator") {
    const auto f = classify({1.0, 0.0, CompoundPoisson{1.0, ExponentialJump{1.0, +1}}});
    CHECK(f.is_subordinator);
    CHECK_FALSE(f.is_compound_poisson);
    CHECK_FALSE(classify({-0.1, 0.0, CompoundPoisson{1.0, ExponentialJump{1.0, +1}}}).is_subordinator);
  }
  SECTION("one-sided stable below one") {
    // Slope between jumps = drift - scale / (1 - alpha) = 3 - 2.
    CHECK(classify({3.0, 0.0, StableLike{0.5, 1.0, 1.0}}).is_subordinator);
    CHECK_FALSE(classify({1.0, 0.0, StableLike{0.5, 1.0, 1.0}}).is_subordinator);
    CHECK_FALSE(classify({10.0, 0.0, StableLike{1.5, 1.0, 1.0}}).is_subordinator);
  }
  SECTION("classify is pure") {
    const LevyTriplet t{0.2, 0.0, TemperedStable{0.6, 1.0, 1.0, 0.5}};
    CHECK(classify(t) == classify(t));
  }
}

TEST_CASE("validate reports every violated invariant", "[levy]") {
  auto codes = [](const LevyTriplet& t) {
    std::vector<std::string> out;
    for (const auto& i : validate(t)) out.push_back(i.code);
    return out;
  };
  CHECK(codes(bm(0.0, -1.0)) == std::vector<std::string>{"NEGATIVE_GAUSSIAN"});
  CHECK(codes({0.0, 0.0, StableLike{2.5, 1.0, 0.0}}) == std::vector<std::string>{"ALPHA_RANGE"});
  CHECK(codes(bm(1.0, 1.0)).empty());
  CHECK(codes({0.0, -1.0, StableLike{2.5, -1.0, 3.0}}) ==
        std::vector<std::string>{"NEGATIVE_GAUSSIAN", "ALPHA_RANGE", "SCALE_RANGE", "SKEW_RANGE"});
  CHECK(codes({0.0, 0.0, SpectrallyNegativeStable{0.9, 1.0}}) == std::vector<std::string>{"ALPHA_RANGE"});
  CHECK(codes({0.0, 0.0, TemperedStable{1.5, 1.0, 0.0, 0.0}}) == std::vector<std::string>{"TEMPERING_RANGE"});
  CHECK(codes({0.0, 0.0, CompoundPoisson{-1.0, UniformJump{1.0, 0.0}}}) ==
        std::vector<std::string>{"RATE_RANGE", "UNIFORM_BOUNDS"});
  CHECK(codes({std::nan(""), 0.0, NoJumps{}}) == std::vector<std::string>{"NON_FINITE"});

  try {
    (void)char_exponent({0.0, 0.0, StableLike{2.5, 1.0, 0.0}}, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteParameter);
  }
}

TEST_CASE("effective variance", "[levy]") {
  CHECK(effective_variance(bm(1.0, 2.0)) == 2.0);
  CHECK(effective_variance({0.1, 0.0, CompoundPoisson{1.0, ExponentialJump{2.0, +1}}}) == Approx(0.5));
  // Heavy tails: sigma^2 + int min(x^2, 1) nu(dx).
  CHECK(effective_variance({0.0, 0.0, StableLike{1.5, 1.0, 0.0}}) == Approx(1.0 / 0.5 + 1.0 / 1.5));
}
