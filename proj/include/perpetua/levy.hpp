#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace perpetua {

// ---------------------------------------------------------------------------
// Jump laws for the finite-activity (compound Poisson) family.

struct ConstantJump {
  double value = 1.0;
  bool operator==(const ConstantJump&) const = default;
};

// sign = +1 for upward jumps, -1 for downward jumps.
struct ExponentialJump {
  double theta = 1.0;
  int sign = +1;
  bool operator==(const ExponentialJump&) const = default;
};

struct TwoSidedExponentialJump {
  double theta_plus = 1.0;
  double theta_minus = 1.0;
  double p_plus = 0.5;
  bool operator==(const TwoSidedExponentialJump&) const = default;
};

struct UniformJump {
  double a = 0.0;
  double b = 1.0;
  bool operator==(const UniformJump&) const = default;
};

using JumpLaw = std::variant<ConstantJump, ExponentialJump, TwoSidedExponentialJump, UniformJump>;

double jump_mean(const JumpLaw& law);
double jump_second_moment(const JumpLaw& law);
std::complex<double> jump_char_function(const JumpLaw& law, double lambda);
double jump_prob_abs_above(const JumpLaw& law, double eps);
/// E[J^2; |J| <= eps]
double jump_truncated_second_moment(const JumpLaw& law, double eps);
/// E[J; lo < |J| <= hi]
double jump_truncated_first_moment(const JumpLaw& law, double lo, double hi);
bool jump_has_positive(const JumpLaw& law);
bool jump_has_negative(const JumpLaw& law);

// ---------------------------------------------------------------------------
// Lévy measures. Only parametric families are supported; each one has closed
// forms (or incomplete-gamma forms) for the quantities the rest of the
// library needs.
//
// Truncation convention: the Lévy-Khintchine exponent is
//
//   Psi(l) = -i b_LK l + sigma^2 l^2 / 2 + int (1 - e^{ilx} + i l x 1{|x|<=1}) nu(dx)
//
// For the infinite-activity families `LevyTriplet::drift` *is* b_LK. For
// CompoundPoisson the compensator is zero: `drift` is the slope of the paths
// between jumps, so b_LK = drift + rate * E[J; |J| <= 1]. See
// truncation_shift().

struct NoJumps {
  bool operator==(const NoJumps&) const = default;
};

struct CompoundPoisson {
  double rate = 1.0;
  JumpLaw jump = ConstantJump{};
  bool operator==(const CompoundPoisson&) const = default;
};

// nu(dx) = scale (1 + skew)/2 x^{-1-alpha} dx on x > 0 and
//          scale (1 - skew)/2 |x|^{-1-alpha} dx on x < 0.
struct StableLike {
  double alpha = 1.5;
  double scale = 1.0;
  double skew = 0.0;
  bool operator==(const StableLike&) const = default;
};

// StableLike density multiplied by exp(-tempering |x|).
struct TemperedStable {
  double alpha = 1.5;
  double scale = 1.0;
  double tempering = 1.0;
  double skew = 0.0;
  bool operator==(const TemperedStable&) const = default;
};

// nu(dx) = scale |x|^{-1-alpha} dx on x < 0, alpha in (1, 2).
struct SpectrallyNegativeStable {
  double alpha = 1.5;
  double scale = 1.0;
  bool operator==(const SpectrallyNegativeStable&) const = default;
};

using LevyMeasure =
    std::variant<NoJumps, CompoundPoisson, StableLike, TemperedStable, SpectrallyNegativeStable>;

struct LevyTriplet {
  double drift = 0.0;
  double gaussian = 0.0;  // sigma^2
  LevyMeasure levy_measure = NoJumps{};
  bool operator==(const LevyTriplet&) const = default;
};

// ---------------------------------------------------------------------------
// Extended reals for the mean: a tail integral that diverges or oscillates is
// an explicit state, never a sentinel float.

struct ExtendedReal {
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };

  Kind kind = Kind::Finite;
  double value = 0.0;  // meaningful only when kind == Finite

  static ExtendedReal finite(double v) { return {Kind::Finite, v}; }
  static ExtendedReal plus_infinity() { return {Kind::PlusInfinity, 0.0}; }
  static ExtendedReal minus_infinity() { return {Kind::MinusInfinity, 0.0}; }
  static ExtendedReal undefined() { return {Kind::Undefined, 0.0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const ExtendedReal&) const = default;
};

ExtendedReal operator+(ExtendedReal lhs, double rhs);
std::string to_string(const ExtendedReal& x);

// ---------------------------------------------------------------------------
// Per-family Lévy measure quantities.

/// nu(|x| > 1)
double tail_mass(const LevyMeasure& m);
/// int_{|x|>1} x nu(dx)
ExtendedReal tail_mean(const LevyMeasure& m);
/// int_{|x|<=eps} x^2 nu(dx)
double small_jump_variance(const LevyMeasure& m, double eps);
/// nu(|x| > eps)
double mass_above(const LevyMeasure& m, double eps);
/// int_{lo<|x|<=hi} x nu(dx), lo < hi
double truncated_first_moment(const LevyMeasure& m, double lo, double hi);
/// int x^2 nu(dx); +inf when the measure has heavy tails
double second_moment(const LevyMeasure& m);
/// Amount added to `drift` to obtain the |x|<=1 Lévy-Khintchine drift.
double truncation_shift(const LevyMeasure& m);
bool is_finite_activity(const LevyMeasure& m);
bool has_positive_jumps(const LevyMeasure& m);
bool has_negative_jumps(const LevyMeasure& m);
/// Psi_nu(lambda) = int (1 - e^{i lambda x} + i lambda x 1{|x|<=1}) nu(dx)
std::complex<double> jump_exponent(const LevyMeasure& m, double lambda);
std::string family_name(const LevyMeasure& m);

// ---------------------------------------------------------------------------

struct ValidationIssue {
  std::string code;
  std::string message;
  bool operator==(const ValidationIssue&) const = default;
};

/// Every violated invariant, empty when the triplet is well formed.
std::vector<ValidationIssue> validate(const LevyTriplet& triplet);

/// Throws Error(NonFiniteParameter) listing the issues when invalid.
void require_valid(const LevyTriplet& triplet);

/// Characteristic exponent, E[exp(i lambda xi_1)] = exp(-Psi(lambda)).
std::complex<double> char_exponent(const LevyTriplet& triplet, double lambda);

namespace detail {
// Skips validation; for hot loops over a triplet validated once upfront.
std::complex<double> char_exponent_unchecked(const LevyTriplet& triplet, double lambda);
}  // namespace detail

/// E[xi_1] as an extended real.
ExtendedReal mean(const LevyTriplet& triplet);

/// Var(xi_1) when finite, otherwise sigma^2 + int min(x^2, 1) nu(dx).
double effective_variance(const LevyTriplet& triplet);

struct ClassificationFlags {
  bool is_compound_poisson = false;
  bool is_subordinator = false;
  bool is_spectrally_negative = false;
  ExtendedReal mean;
  bool mean_is_finite_positive = false;
  bool operator==(const ClassificationFlags&) const = default;
};

ClassificationFlags classify(const LevyTriplet& triplet);

}  // namespace perpetua
