#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace parisian::stats {

// Streaming mean/variance (Welford), mergeable in a fixed order (Chan et al.).
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  // Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double binomial_stderr(double p_hat, std::size_t n);

// Two-sided joint standard error of a difference of independent estimates.
double joint_stderr(double se_a, double se_b);

// Sup-distance between the empirical CDF of `sample` and the standard normal.
double ks_distance_normal(std::span<const double> sample);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample KS critical value at level `significance`
// (supported: 0.10, 0.05, 0.01, 0.001).
double ks_two_sample_critical(std::size_t n, std::size_t m, double significance);

// Linear-interpolated empirical quantile, q in [0,1].
double quantile(std::vector<double> sample, double q);

}  // namespace parisian::stats
