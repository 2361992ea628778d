#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "perpetua/levy.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/stats.hpp"
#include "perpetua/test_function.hpp"

namespace perpetua {

struct JumpEvent {
  double time = 0.0;
  double size = 0.0;
  bool operator==(const JumpEvent&) const = default;
};

// ---------------------------------------------------------------------------
// Simulation scheme.
//
// Jumps larger than a cutoff are simulated exactly (exponential waiting
// times, exact sizes). Smaller jumps of infinite-activity measures are
// replaced by a Brownian component with the same variance, and the
// compensator of the jumps in (cutoff, 1] moves into the slope. Between
// jumps the path on a step is the straight line joining the grid values.

class ProcessSimulator {
 public:
  /// Throws Error(StepTooCoarse) when a compound Poisson part has more than
  /// 0.5 expected jumps per step, Error(InvalidArgument) on a bad dt and
  /// Error(NonFiniteParameter) on an invalid triplet.
  ProcessSimulator(const LevyTriplet& triplet, double dt);

  const LevyTriplet& triplet() const { return triplet_; }
  double dt() const { return dt_; }
  double cutoff() const { return cutoff_; }  // 0 for finite activity
  double slope() const { return slope_; }
  double diffusion_sd() const { return sd_; }
  double jump_rate() const { return rate_; }

  /// One simulated jump size.
  double draw_jump(Rng& rng) const;

 private:
  LevyTriplet triplet_;
  double dt_;
  double cutoff_ = 0.0;
  double slope_ = 0.0;
  double sd_ = 0.0;
  double rate_ = 0.0;
  double p_plus_ = 1.0;    // side probability for infinite-activity jumps
  double alpha_ = 1.0;     // stable index
  double tempering_ = 0.0;
};

using SimulatorPtr = std::shared_ptr<const ProcessSimulator>;

// One step of a streamed path: start (t0, v0), duration h, the continuous
// increment over the step and the jumps inside (t0, t0 + h], in time order.
struct PathStep {
  double t0 = 0.0;
  double h = 0.0;
  double v0 = 0.0;
  double continuous = 0.0;
  std::vector<JumpEvent> jumps;

  double end_value() const;
};

/// Calls fn(a, b, va, vb) for each linear piece of the step; jumps sit
/// between consecutive pieces. The last piece is always emitted, even when
/// empty, so a jump at the step end is visible as a piece start. Stops early
/// when fn returns false; returns false in that case.
template <class Fn>
bool for_each_piece(const PathStep& s, Fn&& fn) {
  const double c = s.h > 0.0 ? s.continuous / s.h : 0.0;
  double a = s.t0, v = s.v0;
  for (const auto& j : s.jumps) {
    const double vb = v + c * (j.time - a);
    if (!fn(a, j.time, v, vb)) return false;
    a = j.time;
    v = vb + j.size;
  }
  return fn(a, s.t0 + s.h, v, v + c * (s.t0 + s.h - a));
}

// Stateful path generator. Values are kept as x0 + slope * t + noise so a
// noiseless path is exact at every grid time.
class PathStream {
 public:
  PathStream(SimulatorPtr sim, std::uint64_t seed, double x0);

  double time() const { return t_; }
  double value() const { return value_at(t_); }
  const ProcessSimulator& simulator() const { return *sim_; }
  Rng& rng() { return rng_; }

  /// Advances to t_next (t < t_next <= t + dt, up to rounding) and returns
  /// the step just simulated.
  const PathStep& advance_to(double t_next);
  /// Advances by one grid step of the simulator.
  const PathStep& advance() { return advance_to(t_ + sim_->dt()); }

  /// Moves the origin: time becomes 0 and the value becomes x.
  void reset_origin(double x);

 private:
  double value_at(double t) const { return x0_ + sim_->slope() * t + noise_; }

  SimulatorPtr sim_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  std::exponential_distribution<double> waiting_;
  double x0_;
  double t_ = 0.0;
  double noise_ = 0.0;  // Brownian part plus jumps
  PathStep step_;
};

// ---------------------------------------------------------------------------

struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<JumpEvent> jumps;  // every simulated jump, |size| > cutoff
  std::uint64_t seed = 0;
  std::string triplet_id;

  double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

/// Same decomposition as the streamed version, rebuilt from the grid values
/// and the recorded jumps.
template <class Fn>
bool for_each_piece(const PathSample& path, Fn&& fn) {
  std::size_t j = 0;
  PathStep step;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    step.t0 = path.times[k];
    step.h = path.times[k + 1] - path.times[k];
    step.v0 = path.values[k];
    step.jumps.clear();
    double jump_total = 0.0;
    while (j < path.jumps.size() && path.jumps[j].time <= path.times[k + 1]) {
      step.jumps.push_back(path.jumps[j]);
      jump_total += path.jumps[j].size;
      ++j;
    }
    step.continuous = path.values[k + 1] - path.values[k] - jump_total;
    if (!for_each_piece(step, fn)) return false;
  }
  return true;
}

/// Short stable identifier of a triplet, used to tag samples.
std::string triplet_id(const LevyTriplet& triplet);

// Produces path streams with a given initial law.
class PathSource {
 public:
  virtual ~PathSource() = default;
  /// A stream positioned at time 0 under the source's initial law, with all
  /// randomness drawn from `seed`.
  virtual PathStream start(std::uint64_t seed) const = 0;
  virtual const ProcessSimulator& simulator() const = 0;

  /// Records the stream on the grid k * dt up to `horizon`.
  PathSample sample(std::uint64_t seed, double horizon) const;
};

class FixedStartSource final : public PathSource {
 public:
  FixedStartSource(const LevyTriplet& triplet, double dt, double x0 = 0.0);
  explicit FixedStartSource(SimulatorPtr sim, double x0 = 0.0);
  PathStream start(std::uint64_t seed) const override;
  const ProcessSimulator& simulator() const override { return *sim_; }

 private:
  SimulatorPtr sim_;
  double x0_;
};

// Start at Y ~ rho_hat, run to T_a = inf{t : xi_t >= a}, and restart the
// clock there with the value shifted by -a. Level 0 is a plain rho_hat start.
class RestartedPathSource final : public PathSource {
 public:
  /// Throws Error(InvalidArgument) on an empty rho_hat or a < 0.
  RestartedPathSource(const LevyTriplet& triplet, double dt, EmpiricalDistribution rho_hat, double level,
                      double cap = 0.0);
  PathStream start(std::uint64_t seed) const override;
  const ProcessSimulator& simulator() const override { return *sim_; }

 private:
  SimulatorPtr sim_;
  EmpiricalDistribution rho_hat_;
  double level_;
  double cap_;
};

/// Throws Error(InvalidArgument) unless horizon > 0, dt > 0 and
/// dt <= horizon / 10.
PathSample sample_path(const LevyTriplet& triplet, double horizon, double dt, double x0, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Trapezoid integral of f along the path up to each checkpoint. Throws
/// Error(InvalidArgument) unless checkpoints increase within [0, horizon].
std::vector<double> perpetual_estimate(const PathSample& path, const TestFunction& f,
                                       std::span<const double> checkpoints);

struct LocalTimeField {
  std::vector<double> x_grid;
  double bandwidth = 0.0;
  std::vector<double> values;
  double t = 0.0;          // horizon
  double t_covered = 0.0;  // time spent in [x_grid.front(), x_grid.back()]
};

/// values[i] = time in |xi_s - x_i| < eps over [0, horizon] divided by 2 eps,
/// exact for the piecewise linear path. Error(BandwidthTooSmall) when
/// eps <= 0 or 2 eps is below the widest grid gap.
LocalTimeField local_time_field(const PathSample& path, std::span<const double> x_grid, double eps);

/// Grid with spacing eps / 5 covering the path range plus 2 eps each side.
std::vector<double> occupation_grid(const PathSample& path, double eps);

/// Trapezoid integral of f(x) L(x) over the field's grid.
double occupation_integral(const LocalTimeField& field, const TestFunction& f);

struct FirstPassageSample {
  double level = 0.0;
  std::optional<double> passage_time;  // empty: not reached before the cap
  double overshoot = 0.0;

  bool reached() const { return passage_time.has_value(); }
};

/// Runs the stream until it is at or above z, or until its clock reaches
/// `cap`. A linear piece crossing gives overshoot 0; a jump crossing gives
/// the post-jump excess. The stream is left at the end of the crossing step.
FirstPassageSample first_passage(PathStream& stream, double z, double cap);

/// Error(InvalidArgument) unless z > 0.
FirstPassageSample first_passage(const LevyTriplet& triplet, double z, std::uint64_t seed, double cap,
                                 double dt = 0.01);

struct EnsembleOptions {
  double dt = 0.01;
  unsigned threads = 1;
  double cap = 0.0;  // 0: max(10 z / mu, 100 dt)
};

/// Overshoots of n independent paths, path k seeded by stream_seed(seed, k).
/// Error(PreconditionViolation) unless the mean is finite and positive;
/// Error(NotReached) when a path exhausts the cap.
EmpiricalDistribution overshoot_ensemble(const LevyTriplet& triplet, double z, std::size_t n, std::uint64_t seed,
                                         const EnsembleOptions& options = {});

struct LocalTimeAtInfinity {
  std::vector<double> values;  // one per point
  double time = 0.0;           // clock when the run stopped
  bool escaped = false;        // false: stopped by max_time
};

/// Occupation of (x - eps, x + eps) / (2 eps) at each point, accumulated
/// until the path first sits at or above `escape_level` (or max_time).
LocalTimeAtInfinity local_time_infinity(const PathSource& source, std::span<const double> points, double eps,
                                        std::uint64_t seed, double escape_level, double max_time);

/// Level above which a return to `x_max` (the top of the highest window) has
/// probability about e^{-10} for the Brownian approximation:
/// x_max + 5 sigma_eff^2 / mu. Error(PreconditionViolation) unless the mean
/// is finite and positive.
double escape_level(const LevyTriplet& triplet, double x_max);

}  // namespace perpetua
