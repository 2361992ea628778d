#pragma once

#include <span>
#include <string>
#include <vector>

#include "perpetua/levy.hpp"
#include "perpetua/test_function.hpp"

namespace perpetua {

// ---------------------------------------------------------------------------
// Local-time existence: integrability of Re(1/(1 + Psi(r))) over the line.

enum class LocalTimeDecision { HasLocalTimes, NoLocalTimes, Undecided };

std::string to_string(LocalTimeDecision d);

struct LocalTimeOptions {
  double r_max = 1048576.0;  // 2^20
  double tol = 0.1;          // margin on the fitted decay exponent
};

struct LocalTimeReport {
  LocalTimeDecision decision = LocalTimeDecision::Undecided;
  double integral = 0.0;        // over [-r_max, r_max]
  double tail_exponent = 0.0;   // fitted e in integrand ~ r^e
  std::vector<double> block_integrals;  // [0,1], then [2^k, 2^{k+1}]
};

/// Throws Error(QuadratureFailure) when Psi is non-finite on the grid and
/// Error(InvalidArgument) when r_max < 1e3 or tol <= 0.
LocalTimeReport local_time_criterion(const LevyTriplet& triplet, const LocalTimeOptions& options = {});

// ---------------------------------------------------------------------------
// Tail integral test for int^inf f(x) dx.

enum class Convergence { Converges, Diverges, Undecided };

std::string to_string(Convergence c);

struct TailTestOptions {
  double tol = 1e-2;
  double divergence_threshold = 1e6;
  int max_blocks = 1000;  // dyadic blocks; 2^1000 is near the top of double range
};

struct ConvergenceDecision {
  Convergence verdict = Convergence::Undecided;
  // Converges: value of int_0^inf f including the modelled remainder.
  // Diverges / Undecided: the computed partial integral, a lower bound.
  double value = 0.0;
  double error_estimate = 0.0;
  int blocks_used = 0;
  std::string rule;                // which rule fired
  std::vector<double> block_sums;  // [0,1], then [2^k, 2^{k+1}]
};

/// Throws Error(EvaluationError) if f is negative or non-finite anywhere it is
/// sampled.
ConvergenceDecision tail_integral_test(const TestFunction& f, const TailTestOptions& options = {});

// ---------------------------------------------------------------------------
// Potential density u(x), U(dx) = int_0^inf P(xi_s in dx) ds.

struct PotentialDensity {
  std::vector<double> grid;
  std::vector<double> u_values;
  std::vector<double> error_estimates;
  double sup_bound = 0.0;
};

/// Fourier inversion with the drift singularity at r = 0 removed in closed
/// form. Requires HAS_LOCAL_TIMES and a finite positive mean
/// (Error(PreconditionViolation)); throws Error(InversionUnstable) when a
/// quadrature error estimate exceeds 5% of the value.
PotentialDensity potential_density(const LevyTriplet& triplet, std::span<const double> grid);

// ---------------------------------------------------------------------------
// Perpetual-integral verdict.

enum class Verdict { AsFinite, AsInfinite, Undecided };

std::string to_string(Verdict v);

struct VerdictOptions {
  LocalTimeOptions local_times;
  TailTestOptions tail;
};

struct VerdictReport {
  Verdict verdict = Verdict::Undecided;
  std::vector<ValidationIssue> validation;  // non-empty => triplet rejected
  ClassificationFlags flags;
  LocalTimeReport local_times;
  ConvergenceDecision integral;
  // Codes: INVALID_TRIPLET, IS_COMPOUND_POISSON, MEAN_NOT_FINITE_POSITIVE,
  // NO_LOCAL_TIMES, LOCAL_TIMES_UNDECIDED.
  std::vector<std::string> failed_preconditions;
  std::string reason;
};

VerdictReport perpetual_verdict(const LevyTriplet& triplet, const TestFunction& f,
                                const VerdictOptions& options = {});

/// sup_x u(x) * int f over the whole line. May be +inf when f has infinite
/// mass on the negative half-line. Error(PreconditionViolation) unless the
/// verdict preconditions hold and the tail test converges.
double expectation_upper_bound(const LevyTriplet& triplet, const TestFunction& f,
                               const VerdictOptions& options = {});

/// Grid used by expectation_upper_bound to locate sup u.
std::vector<double> default_potential_grid(const LevyTriplet& triplet);

}  // namespace perpetua
