#pragma once

#include <cstddef>
#include <vector>

#include "perpetua/rng.hpp"

namespace perpetua {

// Sorted sample with the usual empirical-law queries.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  /// Throws Error(InvalidArgument) on non-finite samples.
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& samples() const { return sorted_; }
  std::size_t n() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

  double mean() const;
  double variance() const;
  /// Fraction of samples <= x.
  double cdf(double x) const;
  /// Fraction of samples equal to x.
  double atom(double x) const;
  /// Lower empirical quantile, p in [0, 1].
  double quantile(double p) const;
  /// Uniform draw from the samples.
  double draw(Rng& rng) const;

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)|, exact with ties.
double ks_statistic(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Asymptotic two-sample critical value c(alpha) sqrt((n + m) / (n m)) with
/// c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

}  // namespace perpetua
