#include "perpetua/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

namespace perpetua {

namespace {

using namespace std::complex_literals;

// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Natural length scale of the process: sigma_eff^2 / mu, or 1 when the
// process has no randomness.
double length_scale(const LevyTriplet& triplet, double mu) {
  const double v = effective_variance(triplet);
  return v > 0.0 ? v / mu : 1.0;
}

constexpr int kGeometricWindow = 4;
constexpr int kPowerWindow = 8;
constexpr double kMinPowerExcess = 0.2;
constexpr int kMonotoneWindow = 6;

}  // namespace

std::string to_string(LocalTimeDecision d) {
  switch (d) {
    case LocalTimeDecision::HasLocalTimes:
      return "HAS_LOCAL_TIMES";
    case LocalTimeDecision::NoLocalTimes:
      return "NO_LOCAL_TIMES";
    case LocalTimeDecision::Undecided:
      return "UNDECIDED";
  }
  return "UNDECIDED";
}

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::Converges:
      return "CONVERGES";
    case Convergence::Diverges:
      return "DIVERGES";
    case Convergence::Undecided:
      return "UNDECIDED";
  }
  return "UNDECIDED";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::AsFinite:
      return "AS_FINITE";
    case Verdict::AsInfinite:
      return "AS_INFINITE";
    case Verdict::Undecided:
      return "UNDECIDED";
  }
  return "UNDECIDED";
}

// ---------------------------------------------------------------------------

LocalTimeReport local_time_criterion(const LevyTriplet& triplet, const LocalTimeOptions& options) {
  if (!(options.r_max >= 1e3)) throw Error(ErrorCode::InvalidArgument, "local_time_criterion: r_max must be >= 1e3");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "local_time_criterion: tol must be > 0");
  require_valid(triplet);

  auto integrand = [&triplet](double r) {
    const std::complex<double> psi = detail::char_exponent_unchecked(triplet, r);
    const double g = std::real(1.0 / (1.0 + psi));
    if (!std::isfinite(g)) {
      std::ostringstream msg;
      msg << "Psi is not finite at r = " << r;
      throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    return g;
  };
  const quad::Tolerance tol{0.0, 1e-8, 4000};

  LocalTimeReport report;
  report.block_integrals.push_back(quad::integrate(integrand, 0.0, 1.0, tol).value);
  for (int k = 0; std::ldexp(1.0, k + 1) <= options.r_max; ++k) {
    report.block_integrals.push_back(quad::integrate(integrand, std::ldexp(1.0, k), std::ldexp(1.0, k + 1), tol).value);
  }
  double total = 0.0;
  for (double b : report.block_integrals) total += b;
  report.integral = 2.0 * total;

  // Block k over [2^k, 2^{k+1}] scales like 2^{k(1+e)} when the integrand
  // decays like r^e.
  const std::size_t n = report.block_integrals.size();
  std::vector<double> ks, logs;
  for (std::size_t i = n - 4; i < n; ++i) {
    const double b = report.block_integrals[i];
    if (!(b > 0.0)) {
      report.decision = LocalTimeDecision::Undecided;
      return report;
    }
    ks.push_back(static_cast<double>(i));
    logs.push_back(std::log2(b));
  }
  report.tail_exponent = fit_slope(ks, logs) - 1.0;
  if (report.tail_exponent < -1.0 - options.tol) {
    report.decision = LocalTimeDecision::HasLocalTimes;
  } else if (report.tail_exponent >= -1.0 + options.tol) {
    report.decision = LocalTimeDecision::NoLocalTimes;
  } else {
    report.decision = LocalTimeDecision::Undecided;
  }
  return report;
}

// ---------------------------------------------------------------------------

ConvergenceDecision tail_integral_test(const TestFunction& f, const TailTestOptions& options) {
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "tail test: tol must lie in (0, 1)");
  if (options.max_blocks < kPowerWindow || options.max_blocks > 1020)
    throw Error(ErrorCode::InvalidArgument, "tail test: max_blocks must lie in [8, 1020]");

  auto integrand = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "f(" << x << ") = " << v << " violates positivity";
      throw Error(ErrorCode::EvaluationError, msg.str());
    }
    return v;
  };

  ConvergenceDecision d;
  double quad_error = 0.0;
  auto block = [&](double a, double b) {
    const auto r = quad::integrate(integrand, a, b, {1e-300, 1e-10, 2000});
    quad_error += r.abs_error;
    return r.value;
  };
  auto finish = [&](Convergence verdict, std::string rule, double value, double extra_error) {
    d.verdict = verdict;
    d.rule = std::move(rule);
    d.value = value;
    d.error_estimate = quad_error + extra_error;
    return d;
  };

  const double support = f.support_upper();
  double cumulative = block(0.0, 1.0);
  d.block_sums.push_back(cumulative);
  if (support <= 1.0) return finish(Convergence::Converges, "support", cumulative, 0.0);

  std::vector<double> dyadic;  // s_k over [2^k, 2^{k+1}]
  for (int k = 0; k < options.max_blocks; ++k) {
    const double hi = std::ldexp(1.0, k + 1);
    const double s = block(std::ldexp(1.0, k), hi);
    dyadic.push_back(s);
    d.block_sums.push_back(s);
    cumulative += s;
    d.blocks_used = k + 1;
    const auto n = static_cast<int>(dyadic.size());

    if (hi >= support) return finish(Convergence::Converges, "support", cumulative, 0.0);

    // Geometric decay of block sums.
    if (n > kGeometricWindow) {
      double ratio = 0.0;
      for (int j = n - kGeometricWindow; j < n; ++j) {
        const double prev = dyadic[j - 1];
        const double r = prev > 0.0 ? dyadic[j] / prev : (dyadic[j] > 0.0 ? HUGE_VAL : 0.0);
        ratio = std::max(ratio, r);
      }
      if (ratio < 1.0 - options.tol) {
        const double remainder = s * ratio / (1.0 - ratio);
        if (remainder <= options.tol * (cumulative + remainder))
          return finish(Convergence::Converges, "geometric", cumulative + remainder, remainder);
      }
    }

    // Power-law decay in the block index, s_k ~ C (k+1)^{-q} with q > 1.
    if (n >= kPowerWindow) {
      std::vector<double> xs, ys;
      for (int j = n - kPowerWindow; j < n; ++j) {
        if (!(dyadic[j] > 0.0)) break;
        xs.push_back(std::log(j + 1.0));
        ys.push_back(std::log(dyadic[j]));
      }
      if (static_cast<int>(xs.size()) == kPowerWindow) {
        const double q = -fit_slope(xs, ys);
        if (q - 1.0 > kMinPowerExcess) {
          const double remainder = s * n / (q - 1.0);
          if (remainder <= options.tol * (cumulative + remainder))
            return finish(Convergence::Converges, "power", cumulative + remainder, remainder);
        }
      }
    }

    if (cumulative > options.divergence_threshold) return finish(Convergence::Diverges, "threshold", cumulative, 0.0);
    if (n >= kMonotoneWindow) {
      bool monotone = dyadic[n - kMonotoneWindow] > 0.0;
      for (int j = n - kMonotoneWindow + 1; j < n && monotone; ++j) monotone = dyadic[j] >= dyadic[j - 1];
      if (monotone) return finish(Convergence::Diverges, "nondecreasing", cumulative, 0.0);
    }
  }
  return finish(Convergence::Undecided, "max_blocks", cumulative, 0.0);
}

// ---------------------------------------------------------------------------

PotentialDensity potential_density(const LevyTriplet& triplet, std::span<const double> grid) {
  require_valid(triplet);
  const auto flags = classify(triplet);
  if (!flags.mean_is_finite_positive)
    throw Error(ErrorCode::PreconditionViolation, "potential_density: mean must be finite and positive");
  const auto lt = local_time_criterion(triplet);
  if (lt.decision != LocalTimeDecision::HasLocalTimes)
    throw Error(ErrorCode::PreconditionViolation, "potential_density: local-time criterion is " + to_string(lt.decision));

  const double mu = flags.mean.value;
  const double ell = length_scale(triplet, mu);
  // The drift singularity i/(mu r) of 1/Psi is subtracted with a Gaussian
  // damping exp(-s r^2); its contribution is (1 + erf(x / (2 sqrt s))) / (2 mu)
  // in closed form.
  const double s = ell * ell;
  const double r_low = 1e-9 / ell;
  const double r_split = 4.0 / ell;

  auto h = [&](double r) {
    const std::complex<double> psi = detail::char_exponent_unchecked(triplet, r);
    const std::complex<double> out = 1.0 / psi - 1i * (std::exp(-s * r * r) / (mu * r));
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
      std::ostringstream msg;
      msg << "inversion integrand not finite at r = " << r;
      throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    return out;
  };

  PotentialDensity pd;
  pd.grid.assign(grid.begin(), grid.end());
  const quad::Tolerance tol{1e-12, 1e-10, 4000};
  const double fourier_tol = 1e-10 / mu;
  double sup = 1.0 / mu;  // renewal limit of u at +inf
  for (double x : grid) {
    const double base = (1.0 + std::erf(x / (2.0 * std::sqrt(s)))) / (2.0 * mu);
    double integral = 0.0, error = std::abs(h(r_low)) * r_low;
    if (x == 0.0) {
      const auto head = quad::integrate_singular([&](double r) { return h(r).real(); }, r_low, r_split, tol);
      const auto tail = quad::integrate_to_infinity([&](double r) { return h(r).real(); }, r_split, tol);
      integral = head.value + tail.value;
      error += head.abs_error + tail.abs_error;
    } else {
      const double omega = std::abs(x);
      const auto head = quad::integrate_singular(
          [&](double r) { return std::real(std::exp(-1i * (r * x)) * h(r)); }, r_low, r_split, tol);
      const auto cos_tail = quad::integrate_fourier([&](double r) { return h(r).real(); }, r_split, omega,
                                                    quad::Oscillation::Cosine, fourier_tol);
      const auto sin_tail = quad::integrate_fourier([&](double r) { return h(r).imag(); }, r_split, omega,
                                                    quad::Oscillation::Sine, fourier_tol);
      integral = head.value + cos_tail.value + (x > 0.0 ? 1.0 : -1.0) * sin_tail.value;
      error += head.abs_error + cos_tail.abs_error + sin_tail.abs_error;
    }
    const double u = base + integral / std::numbers::pi;
    error /= std::numbers::pi;
    if (!(error <= 0.05 * std::max(std::abs(u), 1e-3 / mu))) {
      std::ostringstream msg;
      msg << "u(" << x << ") = " << u << " with error estimate " << error;
      throw Error(ErrorCode::InversionUnstable, msg.str());
    }
    pd.u_values.push_back(std::max(u, 0.0));
    pd.error_estimates.push_back(error);
    sup = std::max(sup, pd.u_values.back() + error);
  }
  pd.sup_bound = sup;
  return pd;
}

std::vector<double> default_potential_grid(const LevyTriplet& triplet) {
  const auto m = mean(triplet);
  const double ell = m.is_finite() && m.value > 0.0 ? length_scale(triplet, m.value) : 1.0;
  std::vector<double> grid;
  constexpr int kPoints = 81;
  for (int i = 0; i < kPoints; ++i) grid.push_back(-10.0 * ell + 20.0 * ell * i / (kPoints - 1));
  return grid;
}

// ---------------------------------------------------------------------------

VerdictReport perpetual_verdict(const LevyTriplet& triplet, const TestFunction& f, const VerdictOptions& options) {
  VerdictReport report;
  report.validation = validate(triplet);
  try {
    report.integral = tail_integral_test(f, options.tail);
  } catch (const Error& e) {
    report.integral.verdict = Convergence::Undecided;
    report.integral.rule = std::string("error: ") + e.what();
  }
  if (!report.validation.empty()) {
    report.failed_preconditions.push_back("INVALID_TRIPLET");
    report.reason = "triplet failed validation";
    return report;
  }

  report.flags = classify(triplet);
  if (report.flags.is_compound_poisson) report.failed_preconditions.push_back("IS_COMPOUND_POISSON");
  if (!report.flags.mean_is_finite_positive) report.failed_preconditions.push_back("MEAN_NOT_FINITE_POSITIVE");
  try {
    report.local_times = local_time_criterion(triplet, options.local_times);
    if (report.local_times.decision == LocalTimeDecision::NoLocalTimes)
      report.failed_preconditions.push_back("NO_LOCAL_TIMES");
    else if (report.local_times.decision == LocalTimeDecision::Undecided)
      report.failed_preconditions.push_back("LOCAL_TIMES_UNDECIDED");
  } catch (const Error&) {
    report.local_times.decision = LocalTimeDecision::Undecided;
    report.failed_preconditions.push_back("LOCAL_TIMES_UNDECIDED");
  }

  if (!report.failed_preconditions.empty()) {
    report.reason = "precondition failed: " + report.failed_preconditions.front();
    return report;
  }
  switch (report.integral.verdict) {
    case Convergence::Converges:
      report.verdict = Verdict::AsFinite;
      report.reason = "tail integral converges";
      break;
    case Convergence::Diverges:
      report.verdict = Verdict::AsInfinite;
      report.reason = "tail integral diverges";
      break;
    case Convergence::Undecided:
      report.reason = "tail integral test undecided";
      break;
  }
  return report;
}

double expectation_upper_bound(const LevyTriplet& triplet, const TestFunction& f, const VerdictOptions& options) {
  const auto verdict = perpetual_verdict(triplet, f, options);
  if (!verdict.failed_preconditions.empty())
    throw Error(ErrorCode::PreconditionViolation, "expectation bound: " + verdict.reason);
  if (verdict.integral.verdict != Convergence::Converges)
    throw Error(ErrorCode::PreconditionViolation, "expectation bound: tail integral is " + to_string(verdict.integral.verdict));
  const double mass = f.total_integral();
  if (mass == 0.0) return 0.0;
  const auto grid = default_potential_grid(triplet);
  return potential_density(triplet, grid).sup_bound * mass;
}

}  // namespace perpetua
