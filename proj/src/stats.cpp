#include "perpetua/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "perpetua/errors.hpp"

namespace perpetua {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
  for (double x : sorted_)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "empirical distribution: non-finite sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::mean() const {
  if (sorted_.empty()) return 0.0;
  return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::variance() const {
  if (sorted_.size() < 2) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (double x : sorted_) acc += (x - m) * (x - m);
  return acc / static_cast<double>(sorted_.size() - 1);
}

double EmpiricalDistribution::cdf(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::atom(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (sorted_.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile: p must lie in [0, 1]");
  const auto n = sorted_.size();
  auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  return sorted_[k - 1];
}

double EmpiricalDistribution::draw(Rng& rng) const {
  if (sorted_.empty()) throw Error(ErrorCode::InvalidArgument, "draw from an empty sample");
  std::uniform_int_distribution<std::size_t> pick(0, sorted_.size() - 1);
  return sorted_[pick(rng)];
}

double ks_statistic(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.samples();
  const auto& y = b.samples();
  if (x.empty() || y.empty()) throw Error(ErrorCode::InvalidArgument, "ks_statistic: empty sample");
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0) throw Error(ErrorCode::InvalidArgument, "ks_critical_value: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "ks_critical_value: alpha must lie in (0, 1)");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace perpetua
