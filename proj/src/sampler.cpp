#include "perpetua/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "perpetua/errors.hpp"
#include "perpetua/parallel.hpp"

namespace perpetua {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Discarded small-jump variance relative to sigma_eff^2.
constexpr double kCutoffVarianceFraction = 1e-4;
// Largest expected number of simulated jumps per step.
constexpr double kMaxJumpsPerStep = 0.5;

// Root of an increasing (or decreasing) function of eps by bisection in log
// scale over [1e-14, 1e8].
template <class Fn>
double solve_log(Fn&& g, double target, bool increasing) {
  double lo = std::log(1e-14), hi = std::log(1e8);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool below = g(std::exp(mid)) < target;
    if (below == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double uniform_open(Rng& rng) {
  // (0, 1]
  return 1.0 - std::generate_canonical<double, 53>(rng);
}

double draw_law(const JumpLaw& law, Rng& rng) {
  return std::visit(
      overloaded{
          [](const ConstantJump& j) { return j.value; },
          [&](const ExponentialJump& j) { return j.sign * (-std::log(uniform_open(rng)) / j.theta); },
          [&](const TwoSidedExponentialJump& j) {
            const bool up = std::generate_canonical<double, 53>(rng) < j.p_plus;
            const double e = -std::log(uniform_open(rng));
            return up ? e / j.theta_plus : -e / j.theta_minus;
          },
          [&](const UniformJump& j) { return j.a + (j.b - j.a) * std::generate_canonical<double, 53>(rng); },
      },
      law);
}

// Time spent by the linear piece va -> vb over duration d inside (lo, hi).
double occupation(double d, double va, double vb, double lo, double hi) {
  if (d <= 0.0) return 0.0;
  if (va == vb) return (va > lo && va < hi) ? d : 0.0;
  const double a = std::min(va, vb), b = std::max(va, vb);
  const double overlap = std::min(b, hi) - std::max(a, lo);
  return overlap > 0.0 ? d * overlap / (b - a) : 0.0;
}

void require_checkpoints(std::span<const double> checkpoints, double horizon) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double c = checkpoints[i];
    if (!(c >= 0.0 && c <= horizon)) throw Error(ErrorCode::InvalidArgument, "checkpoints must lie in [0, horizon]");
    if (i > 0 && !(c > checkpoints[i - 1])) throw Error(ErrorCode::InvalidArgument, "checkpoints must increase");
  }
}

double positive_mean(const LevyTriplet& triplet, const char* who) {
  const auto flags = classify(triplet);
  if (!flags.mean_is_finite_positive)
    throw Error(ErrorCode::PreconditionViolation, std::string(who) + ": mean must be finite and positive, got " +
                                                      to_string(flags.mean));
  return flags.mean.value;
}

}  // namespace

// ---------------------------------------------------------------------------

ProcessSimulator::ProcessSimulator(const LevyTriplet& triplet, double dt) : triplet_(triplet), dt_(dt) {
  require_valid(triplet_);
  if (!(dt > 0.0 && std::isfinite(dt))) throw Error(ErrorCode::InvalidArgument, "dt must be positive and finite");

  const auto& m = triplet_.levy_measure;
  double var = triplet_.gaussian;
  slope_ = triplet_.drift;
  if (is_finite_activity(m)) {
    if (const auto* cp = std::get_if<CompoundPoisson>(&m)) rate_ = cp->rate;
    if (rate_ * dt_ > kMaxJumpsPerStep) {
      std::ostringstream msg;
      msg << "rate * dt = " << rate_ * dt_ << " exceeds " << kMaxJumpsPerStep;
      throw Error(ErrorCode::StepTooCoarse, msg.str());
    }
  } else {
    const double target = kCutoffVarianceFraction * effective_variance(triplet_);
    const double eps_var = solve_log([&](double e) { return small_jump_variance(m, e); }, target, true);
    const double eps_rate = solve_log([&](double e) { return mass_above(m, e) * dt_; }, kMaxJumpsPerStep, false);
    cutoff_ = std::max(eps_var, eps_rate);
    rate_ = mass_above(m, cutoff_);
    var += small_jump_variance(m, cutoff_);
    if (cutoff_ < 1.0)
      slope_ -= truncated_first_moment(m, cutoff_, 1.0);
    else if (cutoff_ > 1.0)
      slope_ += truncated_first_moment(m, 1.0, cutoff_);
    std::visit(overloaded{
                   [&](const StableLike& s) {
                     alpha_ = s.alpha;
                     p_plus_ = 0.5 * (1.0 + s.skew);
                   },
                   [&](const TemperedStable& s) {
                     alpha_ = s.alpha;
                     tempering_ = s.tempering;
                     p_plus_ = 0.5 * (1.0 + s.skew);
                   },
                   [&](const SpectrallyNegativeStable& s) {
                     alpha_ = s.alpha;
                     p_plus_ = 0.0;
                   },
                   [](const auto&) {},
               },
               m);
  }
  sd_ = std::sqrt(var);
}

double ProcessSimulator::draw_jump(Rng& rng) const {
  if (const auto* cp = std::get_if<CompoundPoisson>(&triplet_.levy_measure)) return draw_law(cp->jump, rng);
  const double sign = std::generate_canonical<double, 53>(rng) < p_plus_ ? 1.0 : -1.0;
  const double eps = cutoff_;
  if (tempering_ == 0.0) return sign * eps * std::pow(uniform_open(rng), -1.0 / alpha_);
  // Density proportional to x^{-1-alpha} e^{-M x} on (eps, inf): rejection
  // from the Pareto part when eps M is small, from the exponential part
  // otherwise.
  const double M = tempering_;
  for (;;) {
    double x, accept;
    if (eps * M <= 1.0) {
      x = eps * std::pow(uniform_open(rng), -1.0 / alpha_);
      accept = std::exp(-M * (x - eps));
    } else {
      x = eps - std::log(uniform_open(rng)) / M;
      accept = std::pow(x / eps, -1.0 - alpha_);
    }
    if (std::generate_canonical<double, 53>(rng) < accept) return sign * x;
  }
}

// ---------------------------------------------------------------------------

double PathStep::end_value() const {
  double v = v0 + continuous;
  for (const auto& j : jumps) v += j.size;
  return v;
}

PathStream::PathStream(SimulatorPtr sim, std::uint64_t seed, double x0)
    : sim_(std::move(sim)), rng_(make_rng(seed)), x0_(x0) {}

const PathStep& PathStream::advance_to(double t_next) {
  const double h = t_next - t_;
  step_.t0 = t_;
  step_.h = h;
  step_.v0 = value();
  step_.jumps.clear();
  double brownian = 0.0, jump_total = 0.0;
  if (sim_->diffusion_sd() > 0.0) brownian = sim_->diffusion_sd() * std::sqrt(h) * normal_(rng_);
  if (sim_->jump_rate() > 0.0) {
    const double rate = sim_->jump_rate();
    for (double s = waiting_(rng_) / rate; s <= h; s += waiting_(rng_) / rate) {
      const double size = sim_->draw_jump(rng_);
      step_.jumps.push_back({std::min(t_ + s, t_next), size});
      jump_total += size;
    }
  }
  noise_ += brownian + jump_total;
  t_ = t_next;
  step_.continuous = value() - step_.v0 - jump_total;
  return step_;
}

void PathStream::reset_origin(double x) {
  x0_ = x;
  t_ = 0.0;
  noise_ = 0.0;
}

// ---------------------------------------------------------------------------

std::string triplet_id(const LevyTriplet& t) {
  std::ostringstream s;
  s.precision(17);
  s << t.drift << '|' << t.gaussian << '|' << family_name(t.levy_measure);
  std::visit(overloaded{
                 [&](const NoJumps&) {},
                 [&](const CompoundPoisson& c) {
                   s << '|' << c.rate << '|' << c.jump.index();
                   std::visit(overloaded{
                                  [&](const ConstantJump& j) { s << '|' << j.value; },
                                  [&](const ExponentialJump& j) { s << '|' << j.theta << '|' << j.sign; },
                                  [&](const TwoSidedExponentialJump& j) {
                                    s << '|' << j.theta_plus << '|' << j.theta_minus << '|' << j.p_plus;
                                  },
                                  [&](const UniformJump& j) { s << '|' << j.a << '|' << j.b; },
                              },
                              c.jump);
                 },
                 [&](const StableLike& m) { s << '|' << m.alpha << '|' << m.scale << '|' << m.skew; },
                 [&](const TemperedStable& m) {
                   s << '|' << m.alpha << '|' << m.scale << '|' << m.tempering << '|' << m.skew;
                 },
                 [&](const SpectrallyNegativeStable& m) { s << '|' << m.alpha << '|' << m.scale; },
             },
             t.levy_measure);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(s.str().c_str())));
  return family_name(t.levy_measure) + ":" + hex;
}

PathSample PathSource::sample(std::uint64_t seed, double horizon) const {
  const double dt = simulator().dt();
  auto stream = start(seed);
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  PathSample path;
  path.seed = seed;
  path.triplet_id = triplet_id(simulator().triplet());
  path.times.reserve(steps + 1);
  path.values.reserve(steps + 1);
  path.times.push_back(0.0);
  path.values.push_back(stream.value());
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = k == steps ? horizon : static_cast<double>(k) * dt;
    const auto& step = stream.advance_to(t);
    path.jumps.insert(path.jumps.end(), step.jumps.begin(), step.jumps.end());
    path.times.push_back(t);
    path.values.push_back(stream.value());
  }
  return path;
}

FixedStartSource::FixedStartSource(const LevyTriplet& triplet, double dt, double x0)
    : sim_(std::make_shared<const ProcessSimulator>(triplet, dt)), x0_(x0) {}

FixedStartSource::FixedStartSource(SimulatorPtr sim, double x0) : sim_(std::move(sim)), x0_(x0) {}

PathStream FixedStartSource::start(std::uint64_t seed) const { return PathStream(sim_, seed, x0_); }

RestartedPathSource::RestartedPathSource(const LevyTriplet& triplet, double dt, EmpiricalDistribution rho_hat,
                                         double level, double cap)
    : sim_(std::make_shared<const ProcessSimulator>(triplet, dt)),
      rho_hat_(std::move(rho_hat)),
      level_(level),
      cap_(cap) {
  if (rho_hat_.empty()) throw Error(ErrorCode::InvalidArgument, "restart: empty initial law");
  if (!(level_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "restart: level must be >= 0");
  if (level_ > 0.0 && cap_ <= 0.0) cap_ = std::max(10.0 * level_ / positive_mean(triplet, "restart"), 100.0 * dt);
}

PathStream RestartedPathSource::start(std::uint64_t seed) const {
  PathStream stream(sim_, seed, 0.0);
  stream.reset_origin(rho_hat_.draw(stream.rng()));
  if (level_ > 0.0) {
    const auto fp = first_passage(stream, level_, cap_);
    if (!fp.reached()) throw Error(ErrorCode::NotReached, "restart: level not reached before the cap");
    stream.reset_origin(fp.overshoot);
  }
  return stream;
}

PathSample sample_path(const LevyTriplet& triplet, double horizon, double dt, double x0, std::uint64_t seed) {
  if (!(horizon > 0.0 && std::isfinite(horizon))) throw Error(ErrorCode::InvalidArgument, "horizon must be > 0");
  if (!(dt > 0.0 && dt <= horizon / 10.0)) throw Error(ErrorCode::InvalidArgument, "need 0 < dt <= horizon / 10");
  return FixedStartSource(triplet, dt, x0).sample(seed, horizon);
}

// ---------------------------------------------------------------------------

std::vector<double> perpetual_estimate(const PathSample& path, const TestFunction& f,
                                       std::span<const double> checkpoints) {
  require_checkpoints(checkpoints, path.horizon());
  std::vector<double> out(checkpoints.size(), 0.0);
  std::size_t ci = 0;
  double acc = 0.0;
  double cached_v = std::numeric_limits<double>::quiet_NaN(), cached_f = 0.0;
  auto eval = [&](double v) {
    if (v != cached_v) {
      cached_v = v;
      cached_f = f(v);
    }
    return cached_f;
  };
  for_each_piece(path, [&](double a, double b, double va, double vb) {
    const double fa = eval(va);
    while (ci < checkpoints.size() && checkpoints[ci] <= b) {
      const double c = checkpoints[ci];
      const double vc = b > a ? va + (vb - va) * (c - a) / (b - a) : va;
      out[ci++] = acc + 0.5 * (c - a) * (fa + f(vc));
    }
    acc += 0.5 * (b - a) * (fa + eval(vb));
    return true;
  });
  for (; ci < checkpoints.size(); ++ci) out[ci] = acc;
  return out;
}

LocalTimeField local_time_field(const PathSample& path, std::span<const double> x_grid, double eps) {
  if (x_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "local_time_field: need at least two grid points");
  double widest = 0.0;
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "local_time_field: grid must increase");
    widest = std::max(widest, x_grid[i] - x_grid[i - 1]);
  }
  if (!(eps > 0.0) || 2.0 * eps < widest) {
    std::ostringstream msg;
    msg << "bandwidth " << eps << " leaves gaps on a grid with spacing up to " << widest;
    throw Error(ErrorCode::BandwidthTooSmall, msg.str());
  }

  LocalTimeField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.bandwidth = eps;
  field.values.assign(x_grid.size(), 0.0);
  field.t = path.horizon();
  const double g0 = x_grid.front(), g1 = x_grid.back();
  for_each_piece(path, [&](double a, double b, double va, double vb) {
    const double d = b - a;
    if (d <= 0.0) return true;
    const double lo = std::min(va, vb), hi = std::max(va, vb);
    field.t_covered += occupation(d, va, vb, g0 - 1e-300, g1 + 1e-300);
    auto first = std::upper_bound(x_grid.begin(), x_grid.end(), lo - eps);
    for (auto it = first; it != x_grid.end() && *it < hi + eps; ++it) {
      const auto i = static_cast<std::size_t>(it - x_grid.begin());
      field.values[i] += occupation(d, va, vb, *it - eps, *it + eps);
    }
    return true;
  });
  for (double& v : field.values) v /= 2.0 * eps;
  return field;
}

std::vector<double> occupation_grid(const PathSample& path, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BandwidthTooSmall, "occupation_grid: bandwidth must be > 0");
  double lo = path.values.front(), hi = lo;
  for_each_piece(path, [&](double, double, double va, double vb) {
    lo = std::min({lo, va, vb});
    hi = std::max({hi, va, vb});
    return true;
  });
  const double h = eps / 5.0;
  const double start = std::floor((lo - 2.0 * eps) / h);
  const double stop = std::ceil((hi + 2.0 * eps) / h);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(stop - start) + 1);
  for (double k = start; k <= stop; k += 1.0) grid.push_back(k * h);
  return grid;
}

double occupation_integral(const LocalTimeField& field, const TestFunction& f) {
  double acc = 0.0;
  double prev = f(field.x_grid[0]) * field.values[0];
  for (std::size_t i = 1; i < field.x_grid.size(); ++i) {
    const double cur = f(field.x_grid[i]) * field.values[i];
    acc += 0.5 * (field.x_grid[i] - field.x_grid[i - 1]) * (prev + cur);
    prev = cur;
  }
  return acc;
}

// ---------------------------------------------------------------------------

FirstPassageSample first_passage(PathStream& stream, double z, double cap) {
  FirstPassageSample out;
  out.level = z;
  if (stream.value() >= z) {
    out.passage_time = stream.time();
    out.overshoot = stream.value() - z;
    return out;
  }
  const double dt = stream.simulator().dt();
  while (stream.time() < cap) {
    const auto& step = stream.advance_to(std::min(stream.time() + dt, cap));
    for_each_piece(step, [&](double a, double b, double va, double vb) {
      if (va >= z) {  // a jump landed at or above z
        out.passage_time = a;
        out.overshoot = va - z;
        return false;
      }
      if (vb >= z) {
        out.passage_time = a + (b - a) * (z - va) / (vb - va);
        out.overshoot = 0.0;
        return false;
      }
      return true;
    });
    if (out.reached()) return out;
  }
  return out;
}

FirstPassageSample first_passage(const LevyTriplet& triplet, double z, std::uint64_t seed, double cap, double dt) {
  if (!(z > 0.0 && std::isfinite(z))) throw Error(ErrorCode::InvalidArgument, "first_passage: level must be > 0");
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "first_passage: cap must be > 0");
  auto stream = FixedStartSource(triplet, dt).start(seed);
  return first_passage(stream, z, cap);
}

EmpiricalDistribution overshoot_ensemble(const LevyTriplet& triplet, double z, std::size_t n, std::uint64_t seed,
                                         const EnsembleOptions& options) {
  if (!(z > 0.0 && std::isfinite(z))) throw Error(ErrorCode::InvalidArgument, "overshoot_ensemble: level must be > 0");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "overshoot_ensemble: n must be > 0");
  const double mu = positive_mean(triplet, "overshoot_ensemble");
  const double cap = options.cap > 0.0 ? options.cap : std::max(10.0 * z / mu, 100.0 * options.dt);
  const auto sim = std::make_shared<const ProcessSimulator>(triplet, options.dt);
  auto samples = parallel_map(n, options.threads, [&](std::size_t k) {
    PathStream stream(sim, stream_seed(seed, k), 0.0);
    const auto fp = first_passage(stream, z, cap);
    if (!fp.reached()) {
      std::ostringstream msg;
      msg << "path " << k << " did not reach " << z << " before t = " << cap;
      throw Error(ErrorCode::NotReached, msg.str());
    }
    return fp.overshoot;
  });
  return EmpiricalDistribution(std::move(samples));
}

LocalTimeAtInfinity local_time_infinity(const PathSource& source, std::span<const double> points, double eps,
                                        std::uint64_t seed, double escape, double max_time) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BandwidthTooSmall, "local_time_infinity: bandwidth must be > 0");
  LocalTimeAtInfinity out;
  out.values.assign(points.size(), 0.0);
  auto stream = source.start(seed);
  while (stream.value() < escape && stream.time() < max_time) {
    const auto& step = stream.advance();
    for_each_piece(step, [&](double a, double b, double va, double vb) {
      for (std::size_t i = 0; i < points.size(); ++i)
        out.values[i] += occupation(b - a, va, vb, points[i] - eps, points[i] + eps);
      return true;
    });
  }
  out.escaped = stream.value() >= escape;
  out.time = stream.time();
  for (double& v : out.values) v /= 2.0 * eps;
  return out;
}

double escape_level(const LevyTriplet& triplet, double x_max) {
  const double mu = positive_mean(triplet, "escape_level");
  return x_max + 5.0 * effective_variance(triplet) / mu;
}

}  // namespace perpetua
