#include "perpetua/levy.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "perpetua/errors.hpp"

namespace perpetua {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// int_lo^hi x dx and int_lo^hi x^2 dx over [lo, hi] intersected with [a, b].
double overlap_first(double a, double b, double lo, double hi) {
  const double l = std::max(a, lo);
  const double u = std::min(b, hi);
  return u > l ? 0.5 * (u * u - l * l) : 0.0;
}

double overlap_second(double a, double b, double lo, double hi) {
  const double l = std::max(a, lo);
  const double u = std::min(b, hi);
  return u > l ? (u * u * u - l * l * l) / 3.0 : 0.0;
}

double overlap_length(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

// E[X; lo < X <= hi] for X ~ Exp(theta), 0 <= lo < hi <= inf.
double exp_first_moment(double theta, double lo, double hi) {
  auto part = [theta](double x) {
    if (std::isinf(x)) return 0.0;
    return (x + 1.0 / theta) * std::exp(-theta * x);
  };
  return part(lo) - part(hi);
}

// E[X^2; X <= eps] for X ~ Exp(theta).
double exp_truncated_second(double theta, double eps) {
  if (eps <= 0.0) return 0.0;
  return 2.0 / (theta * theta) * gsl_sf_gamma_inc_P(3.0, theta * eps);
}

double upper_gamma(double a, double x) {
  if (x == 0.0) return a > 0.0 ? std::tgamma(a) : kInf;
  if (std::isinf(x)) return 0.0;
  return gsl_sf_gamma_inc(a, x);
}

struct StableWeights {
  double alpha;
  double plus;
  double minus;
};

StableWeights weights(const StableLike& s) {
  return {s.alpha, 0.5 * s.scale * (1.0 + s.skew), 0.5 * s.scale * (1.0 - s.skew)};
}

StableWeights weights(const SpectrallyNegativeStable& s) { return {s.alpha, 0.0, s.scale}; }

StableWeights weights(const TemperedStable& s) {
  return {s.alpha, 0.5 * s.scale * (1.0 + s.skew), 0.5 * s.scale * (1.0 - s.skew)};
}

// int_lo^hi x^{-alpha} dx
double power_integral(double alpha, double lo, double hi) {
  if (alpha == 1.0) return std::log(hi / lo);
  const double e = 1.0 - alpha;
  auto antider = [e](double x) {
    if (x == 0.0) return e > 0.0 ? 0.0 : -kInf;
    if (std::isinf(x)) return e < 0.0 ? 0.0 : kInf;
    return std::pow(x, e) / e;
  };
  return antider(hi) - antider(lo);
}

// int_0^inf (1 - e^{i l x} + i l x 1{x<=1}) x^{-1-alpha} dx
std::complex<double> stable_half_exponent(double alpha, double lambda) {
  using namespace std::complex_literals;
  if (lambda == 0.0) return 0.0;
  const double a = std::abs(lambda);
  if (alpha == 1.0) {
    return std::numbers::pi / 2.0 * a -
           1i * lambda * (1.0 - std::numbers::egamma - std::log(a));
  }
  const double sgn = lambda > 0.0 ? 1.0 : -1.0;
  const std::complex<double> power =
      std::pow(a, alpha) * std::exp(-1i * (std::numbers::pi * alpha * sgn / 2.0));
  return -std::tgamma(-alpha) * power + 1i * lambda / (1.0 - alpha);
}

// int_0^inf (1 - e^{i l x} + i l x 1{x<=1}) e^{-M x} x^{-1-alpha} dx
std::complex<double> tempered_half_exponent(double alpha, double M, double lambda) {
  using namespace std::complex_literals;
  if (lambda == 0.0) return 0.0;
  const std::complex<double> w = M - 1i * lambda;
  std::complex<double> full;  // int (e^{ilx} - 1 - ilx) e^{-Mx} x^{-1-alpha} dx
  if (alpha == 1.0) {
    full = w * std::log(w / M) + 1i * lambda;
  } else {
    full = std::tgamma(-alpha) *
           (std::pow(w, alpha) - std::pow(M, alpha) + 1i * lambda * alpha * std::pow(M, alpha - 1.0));
  }
  const double big_jump_mean = std::pow(M, alpha - 1.0) * upper_gamma(1.0 - alpha, M);
  return -full - 1i * lambda * big_jump_mean;
}

void check_finite(std::vector<ValidationIssue>& out, const char* field, double v) {
  if (!std::isfinite(v)) out.push_back({"NON_FINITE", std::string(field) + " must be finite"});
}

void validate_jump(std::vector<ValidationIssue>& out, const JumpLaw& law) {
  std::visit(overloaded{
                 [&](const ConstantJump& j) { check_finite(out, "jump.value", j.value); },
                 [&](const ExponentialJump& j) {
                   if (!(j.theta > 0.0) || !std::isfinite(j.theta))
                     out.push_back({"THETA_RANGE", "exponential jump theta must be > 0"});
                   if (j.sign != 1 && j.sign != -1)
                     out.push_back({"SIGN_RANGE", "exponential jump sign must be +1 or -1"});
                 },
                 [&](const TwoSidedExponentialJump& j) {
                   if (!(j.theta_plus > 0.0) || !(j.theta_minus > 0.0) || !std::isfinite(j.theta_plus) ||
                       !std::isfinite(j.theta_minus))
                     out.push_back({"THETA_RANGE", "two-sided exponential thetas must be > 0"});
                   if (!(j.p_plus >= 0.0 && j.p_plus <= 1.0))
                     out.push_back({"PROBABILITY_RANGE", "p_plus must lie in [0, 1]"});
                 },
                 [&](const UniformJump& j) {
                   check_finite(out, "jump.a", j.a);
                   check_finite(out, "jump.b", j.b);
                   if (!(j.a < j.b)) out.push_back({"UNIFORM_BOUNDS", "uniform jump needs a < b"});
                 },
             },
             law);
}

void validate_stable_common(std::vector<ValidationIssue>& out, double alpha, double lo, double hi,
                            double scale) {
  if (!(alpha > lo && alpha < hi)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " outside (" << lo << ", " << hi << ")";
    out.push_back({"ALPHA_RANGE", msg.str()});
  }
  if (!(scale > 0.0) || !std::isfinite(scale))
    out.push_back({"SCALE_RANGE", "scale must be finite and > 0"});
}

}  // namespace

// ---------------------------------------------------------------------------
// Jump laws

double jump_mean(const JumpLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantJump& j) { return j.value; },
                        [](const ExponentialJump& j) { return j.sign / j.theta; },
                        [](const TwoSidedExponentialJump& j) {
                          return j.p_plus / j.theta_plus - (1.0 - j.p_plus) / j.theta_minus;
                        },
                        [](const UniformJump& j) { return 0.5 * (j.a + j.b); },
                    },
                    law);
}

double jump_second_moment(const JumpLaw& law) {
  return std::visit(
      overloaded{
          [](const ConstantJump& j) { return j.value * j.value; },
          [](const ExponentialJump& j) { return 2.0 / (j.theta * j.theta); },
          [](const TwoSidedExponentialJump& j) {
            return j.p_plus * 2.0 / (j.theta_plus * j.theta_plus) +
                   (1.0 - j.p_plus) * 2.0 / (j.theta_minus * j.theta_minus);
          },
          [](const UniformJump& j) { return (j.a * j.a + j.a * j.b + j.b * j.b) / 3.0; },
      },
      law);
}

std::complex<double> jump_char_function(const JumpLaw& law, double lambda) {
  using namespace std::complex_literals;
  return std::visit(
      overloaded{
          [&](const ConstantJump& j) { return std::exp(1i * (lambda * j.value)); },
          [&](const ExponentialJump& j) -> std::complex<double> {
            return j.theta / (j.theta - 1i * (j.sign * lambda));
          },
          [&](const TwoSidedExponentialJump& j) -> std::complex<double> {
            return j.p_plus * j.theta_plus / (j.theta_plus - 1i * lambda) +
                   (1.0 - j.p_plus) * j.theta_minus / (j.theta_minus + 1i * lambda);
          },
          [&](const UniformJump& j) -> std::complex<double> {
            const double half = 0.5 * lambda * (j.b - j.a);
            const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
            return std::exp(1i * (0.5 * lambda * (j.a + j.b))) * sinc;
          },
      },
      law);
}

double jump_prob_abs_above(const JumpLaw& law, double eps) {
  return std::visit(
      overloaded{
          [&](const ConstantJump& j) { return std::abs(j.value) > eps ? 1.0 : 0.0; },
          [&](const ExponentialJump& j) { return eps <= 0.0 ? 1.0 : std::exp(-j.theta * eps); },
          [&](const TwoSidedExponentialJump& j) {
            if (eps <= 0.0) return 1.0;
            return j.p_plus * std::exp(-j.theta_plus * eps) +
                   (1.0 - j.p_plus) * std::exp(-j.theta_minus * eps);
          },
          [&](const UniformJump& j) {
            const double inside = overlap_length(j.a, j.b, -eps, eps);
            return 1.0 - inside / (j.b - j.a);
          },
      },
      law);
}

double jump_truncated_second_moment(const JumpLaw& law, double eps) {
  return std::visit(
      overloaded{
          [&](const ConstantJump& j) { return std::abs(j.value) <= eps ? j.value * j.value : 0.0; },
          [&](const ExponentialJump& j) { return exp_truncated_second(j.theta, eps); },
          [&](const TwoSidedExponentialJump& j) {
            return j.p_plus * exp_truncated_second(j.theta_plus, eps) +
                   (1.0 - j.p_plus) * exp_truncated_second(j.theta_minus, eps);
          },
          [&](const UniformJump& j) { return overlap_second(j.a, j.b, -eps, eps) / (j.b - j.a); },
      },
      law);
}

double jump_truncated_first_moment(const JumpLaw& law, double lo, double hi) {
  return std::visit(
      overloaded{
          [&](const ConstantJump& j) {
            const double a = std::abs(j.value);
            return (a > lo && a <= hi) ? j.value : 0.0;
          },
          [&](const ExponentialJump& j) { return j.sign * exp_first_moment(j.theta, lo, hi); },
          [&](const TwoSidedExponentialJump& j) {
            return j.p_plus * exp_first_moment(j.theta_plus, lo, hi) -
                   (1.0 - j.p_plus) * exp_first_moment(j.theta_minus, lo, hi);
          },
          [&](const UniformJump& j) {
            return (overlap_first(j.a, j.b, lo, hi) + overlap_first(j.a, j.b, -hi, -lo)) / (j.b - j.a);
          },
      },
      law);
}

bool jump_has_positive(const JumpLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantJump& j) { return j.value > 0.0; },
                        [](const ExponentialJump& j) { return j.sign > 0; },
                        [](const TwoSidedExponentialJump& j) { return j.p_plus > 0.0; },
                        [](const UniformJump& j) { return j.b > 0.0; },
                    },
                    law);
}

bool jump_has_negative(const JumpLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantJump& j) { return j.value < 0.0; },
                        [](const ExponentialJump& j) { return j.sign < 0; },
                        [](const TwoSidedExponentialJump& j) { return j.p_plus < 1.0; },
                        [](const UniformJump& j) { return j.a < 0.0; },
                    },
                    law);
}

// ---------------------------------------------------------------------------
// Extended reals

ExtendedReal operator+(ExtendedReal lhs, double rhs) {
  if (lhs.is_finite()) lhs.value += rhs;
  return lhs;
}

std::string to_string(const ExtendedReal& x) {
  switch (x.kind) {
    case ExtendedReal::Kind::Finite: {
      std::ostringstream os;
      os.precision(17);
      os << x.value;
      return os.str();
    }
    case ExtendedReal::Kind::PlusInfinity:
      return "+inf";
    case ExtendedReal::Kind::MinusInfinity:
      return "-inf";
    case ExtendedReal::Kind::Undefined:
      return "undefined";
  }
  return "undefined";
}

// ---------------------------------------------------------------------------
// Lévy measures

double tail_mass(const LevyMeasure& m) { return mass_above(m, 1.0); }

double mass_above(const LevyMeasure& m, double eps) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) { return cp.rate * jump_prob_abs_above(cp.jump, eps); },
                        [&](const StableLike& s) { return s.scale * std::pow(eps, -s.alpha) / s.alpha; },
                        [&](const SpectrallyNegativeStable& s) {
                          return s.scale * std::pow(eps, -s.alpha) / s.alpha;
                        },
                        [&](const TemperedStable& s) {
                          return s.scale * std::pow(s.tempering, s.alpha) *
                                 upper_gamma(-s.alpha, s.tempering * eps);
                        },
                    },
                    m);
}

ExtendedReal tail_mean(const LevyMeasure& m) {
  auto stable_tail = [](StableWeights w) {
    if (w.alpha > 1.0) return ExtendedReal::finite((w.plus - w.minus) / (w.alpha - 1.0));
    if (w.plus > 0.0 && w.minus > 0.0) return ExtendedReal::undefined();
    if (w.plus > 0.0) return ExtendedReal::plus_infinity();
    if (w.minus > 0.0) return ExtendedReal::minus_infinity();
    return ExtendedReal::finite(0.0);
  };
  return std::visit(overloaded{
                        [](const NoJumps&) { return ExtendedReal::finite(0.0); },
                        [](const CompoundPoisson& cp) {
                          return ExtendedReal::finite(cp.rate * jump_truncated_first_moment(cp.jump, 1.0, kInf));
                        },
                        [&](const StableLike& s) { return stable_tail(weights(s)); },
                        [&](const SpectrallyNegativeStable& s) { return stable_tail(weights(s)); },
                        [](const TemperedStable& s) {
                          const auto w = weights(s);
                          return ExtendedReal::finite((w.plus - w.minus) * std::pow(s.tempering, s.alpha - 1.0) *
                                                      upper_gamma(1.0 - s.alpha, s.tempering));
                        },
                    },
                    m);
}

double small_jump_variance(const LevyMeasure& m, double eps) {
  if (eps <= 0.0) return 0.0;
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [&](const CompoundPoisson& cp) { return cp.rate * jump_truncated_second_moment(cp.jump, eps); },
          [&](const StableLike& s) { return s.scale * std::pow(eps, 2.0 - s.alpha) / (2.0 - s.alpha); },
          [&](const SpectrallyNegativeStable& s) {
            return s.scale * std::pow(eps, 2.0 - s.alpha) / (2.0 - s.alpha);
          },
          [&](const TemperedStable& s) {
            const double a = 2.0 - s.alpha;
            return s.scale * std::pow(s.tempering, -a) * std::tgamma(a) *
                   gsl_sf_gamma_inc_P(a, s.tempering * eps);
          },
      },
      m);
}

double truncated_first_moment(const LevyMeasure& m, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [&](const CompoundPoisson& cp) { return cp.rate * jump_truncated_first_moment(cp.jump, lo, hi); },
          [&](const StableLike& s) {
            const auto w = weights(s);
            const double diff = w.plus - w.minus;
            return diff == 0.0 ? 0.0 : diff * power_integral(s.alpha, lo, hi);
          },
          [&](const SpectrallyNegativeStable& s) {
            const auto w = weights(s);
            return (w.plus - w.minus) * power_integral(s.alpha, lo, hi);
          },
          [&](const TemperedStable& s) {
            const auto w = weights(s);
            const double diff = w.plus - w.minus;
            if (diff == 0.0) return 0.0;
            const double M = s.tempering;
            const double a = 1.0 - s.alpha;
            if (lo == 0.0 && a <= 0.0) return diff > 0.0 ? kInf : -kInf;
            return diff * std::pow(M, -a) * (upper_gamma(a, M * lo) - upper_gamma(a, M * hi));
          },
      },
      m);
}

double second_moment(const LevyMeasure& m) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const CompoundPoisson& cp) { return cp.rate * jump_second_moment(cp.jump); },
                        [](const StableLike&) { return kInf; },
                        [](const SpectrallyNegativeStable&) { return kInf; },
                        [](const TemperedStable& s) {
                          return s.scale * std::tgamma(2.0 - s.alpha) * std::pow(s.tempering, s.alpha - 2.0);
                        },
                    },
                    m);
}

double truncation_shift(const LevyMeasure& m) {
  if (const auto* cp = std::get_if<CompoundPoisson>(&m)) {
    return cp->rate * jump_truncated_first_moment(cp->jump, 0.0, 1.0);
  }
  return 0.0;
}

bool is_finite_activity(const LevyMeasure& m) {
  return std::holds_alternative<NoJumps>(m) || std::holds_alternative<CompoundPoisson>(m);
}

bool has_positive_jumps(const LevyMeasure& m) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return false; },
                        [](const CompoundPoisson& cp) { return cp.rate > 0.0 && jump_has_positive(cp.jump); },
                        [](const StableLike& s) { return s.skew > -1.0; },
                        [](const SpectrallyNegativeStable&) { return false; },
                        [](const TemperedStable& s) { return s.skew > -1.0; },
                    },
                    m);
}

bool has_negative_jumps(const LevyMeasure& m) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return false; },
                        [](const CompoundPoisson& cp) { return cp.rate > 0.0 && jump_has_negative(cp.jump); },
                        [](const StableLike& s) { return s.skew < 1.0; },
                        [](const SpectrallyNegativeStable&) { return true; },
                        [](const TemperedStable& s) { return s.skew < 1.0; },
                    },
                    m);
}

std::complex<double> jump_exponent(const LevyMeasure& m, double lambda) {
  using namespace std::complex_literals;
  auto stable = [lambda](StableWeights w) {
    std::complex<double> out = 0.0;
    if (w.plus > 0.0) out += w.plus * stable_half_exponent(w.alpha, lambda);
    if (w.minus > 0.0) out += w.minus * stable_half_exponent(w.alpha, -lambda);
    return out;
  };
  return std::visit(
      overloaded{
          [](const NoJumps&) { return std::complex<double>(0.0); },
          [&](const CompoundPoisson& cp) {
            const double small_mean = jump_truncated_first_moment(cp.jump, 0.0, 1.0);
            return cp.rate * (1.0 - jump_char_function(cp.jump, lambda)) + 1i * (lambda * cp.rate * small_mean);
          },
          [&](const StableLike& s) { return stable(weights(s)); },
          [&](const SpectrallyNegativeStable& s) { return stable(weights(s)); },
          [&](const TemperedStable& s) {
            const auto w = weights(s);
            std::complex<double> out = 0.0;
            if (w.plus > 0.0) out += w.plus * tempered_half_exponent(s.alpha, s.tempering, lambda);
            if (w.minus > 0.0) out += w.minus * tempered_half_exponent(s.alpha, s.tempering, -lambda);
            return out;
          },
      },
      m);
}

std::string family_name(const LevyMeasure& m) {
  return std::visit(overloaded{
                        [](const NoJumps&) { return std::string("none"); },
                        [](const CompoundPoisson&) { return std::string("compound_poisson"); },
                        [](const StableLike&) { return std::string("stable"); },
                        [](const SpectrallyNegativeStable&) { return std::string("spectrally_negative_stable"); },
                        [](const TemperedStable&) { return std::string("tempered_stable"); },
                    },
                    m);
}

// ---------------------------------------------------------------------------

std::vector<ValidationIssue> validate(const LevyTriplet& triplet) {
  std::vector<ValidationIssue> out;
  check_finite(out, "drift", triplet.drift);
  check_finite(out, "gaussian", triplet.gaussian);
  if (triplet.gaussian < 0.0) out.push_back({"NEGATIVE_GAUSSIAN", "gaussian coefficient must be >= 0"});
  std::visit(overloaded{
                 [](const NoJumps&) {},
                 [&](const CompoundPoisson& cp) {
                   if (!(cp.rate >= 0.0) || !std::isfinite(cp.rate))
                     out.push_back({"RATE_RANGE", "compound Poisson rate must be finite and >= 0"});
                   validate_jump(out, cp.jump);
                 },
                 [&](const StableLike& s) {
                   validate_stable_common(out, s.alpha, 0.0, 2.0, s.scale);
                   if (!(s.skew >= -1.0 && s.skew <= 1.0))
                     out.push_back({"SKEW_RANGE", "skew must lie in [-1, 1]"});
                 },
                 [&](const TemperedStable& s) {
                   validate_stable_common(out, s.alpha, 0.0, 2.0, s.scale);
                   if (!(s.skew >= -1.0 && s.skew <= 1.0))
                     out.push_back({"SKEW_RANGE", "skew must lie in [-1, 1]"});
                   if (!(s.tempering > 0.0) || !std::isfinite(s.tempering))
                     out.push_back({"TEMPERING_RANGE", "tempering must be finite and > 0"});
                 },
                 [&](const SpectrallyNegativeStable& s) { validate_stable_common(out, s.alpha, 1.0, 2.0, s.scale); },
             },
             triplet.levy_measure);
  return out;
}

void require_valid(const LevyTriplet& triplet) {
  const auto issues = validate(triplet);
  if (issues.empty()) return;
  std::string msg;
  for (const auto& issue : issues) {
    if (!msg.empty()) msg += "; ";
    msg += issue.code + " (" + issue.message + ")";
  }
  throw Error(ErrorCode::NonFiniteParameter, msg);
}

std::complex<double> char_exponent(const LevyTriplet& triplet, double lambda) {
  require_valid(triplet);
  return detail::char_exponent_unchecked(triplet, lambda);
}

std::complex<double> detail::char_exponent_unchecked(const LevyTriplet& triplet, double lambda) {
  using namespace std::complex_literals;
  const double lk_drift = triplet.drift + truncation_shift(triplet.levy_measure);
  return -1i * (lk_drift * lambda) + 0.5 * triplet.gaussian * lambda * lambda +
         jump_exponent(triplet.levy_measure, lambda);
}

ExtendedReal mean(const LevyTriplet& triplet) {
  require_valid(triplet);
  return tail_mean(triplet.levy_measure) + (triplet.drift + truncation_shift(triplet.levy_measure));
}

double effective_variance(const LevyTriplet& triplet) {
  const double m2 = second_moment(triplet.levy_measure);
  if (std::isfinite(m2)) return triplet.gaussian + m2;
  return triplet.gaussian + small_jump_variance(triplet.levy_measure, 1.0) + tail_mass(triplet.levy_measure);
}

ClassificationFlags classify(const LevyTriplet& triplet) {
  require_valid(triplet);
  const auto& m = triplet.levy_measure;
  ClassificationFlags flags;
  flags.is_compound_poisson = triplet.gaussian == 0.0 && triplet.drift == 0.0 && is_finite_activity(m);

  // Nondecreasing paths need no Gaussian part, no negative jumps, bounded
  // variation and a nonnegative slope between jumps.
  bool monotone = triplet.gaussian == 0.0 && !has_negative_jumps(m);
  if (monotone) {
    double slope = triplet.drift;
    const bool bounded_variation = std::visit(
        overloaded{
            [](const NoJumps&) { return true; },
            [](const CompoundPoisson&) { return true; },
            [](const StableLike& s) { return s.alpha < 1.0; },
            [](const SpectrallyNegativeStable&) { return false; },
            [](const TemperedStable& s) { return s.alpha < 1.0; },
        },
        m);
    if (!bounded_variation) {
      monotone = false;
    } else if (!is_finite_activity(m)) {
      slope -= truncated_first_moment(m, 0.0, 1.0);
    }
    monotone = monotone && slope >= 0.0;
  }
  flags.is_subordinator = monotone;
  flags.is_spectrally_negative = !has_positive_jumps(m);
  flags.mean = mean(triplet);
  flags.mean_is_finite_positive = flags.mean.is_finite() && flags.mean.value > 0.0;
  return flags;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::NonFiniteParameter:
      return "NonFiniteParameter";
    case ErrorCode::QuadratureFailure:
      return "QuadratureFailure";
    case ErrorCode::PreconditionViolation:
      return "PreconditionViolation";
    case ErrorCode::InversionUnstable:
      return "InversionUnstable";
    case ErrorCode::EvaluationError:
      return "EvaluationError";
    case ErrorCode::StepTooCoarse:
      return "StepTooCoarse";
    case ErrorCode::BandwidthTooSmall:
      return "BandwidthTooSmall";
    case ErrorCode::NotReached:
      return "NotReached";
    case ErrorCode::ConfigError:
      return "ConfigError";
  }
  return "Unknown";
}

}  // namespace perpetua
