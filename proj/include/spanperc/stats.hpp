#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spanperc/rng.hpp"

namespace spanperc {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// z for two-sided 95% and 99.9% normal coverage.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ999 = 3.2905267314918945;

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                                double z = kZ95) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: bad success count");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Two-sided normal-approximation band for a Binomial(n, p) count.
inline Interval binomial_band(std::int64_t n, double p, double z = kZ999) {
  if (n < 0 || p < 0.0 || p > 1.0)
    throw std::invalid_argument("binomial_band: bad parameters");
  double mean = static_cast<double>(n) * p;
  double half = z * std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return {mean - half, mean + half};
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Upper-tail p-value of a chi-square statistic via the Wilson-Hilferty
// cube-root normal approximation (fine for the large dof used here).
inline double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: bad dof");
  if (stat < 0.0) throw std::invalid_argument("chi_square_pvalue: bad stat");
  double k = static_cast<double>(dof);
  double t = std::cbrt(stat / k);
  double mu = 1.0 - 2.0 / (9.0 * k);
  double sigma = std::sqrt(2.0 / (9.0 * k));
  return 1.0 - normal_cdf((t - mu) / sigma);
}

// Pearson correlation; 0 when either series is degenerate.
inline double pearson_correlation(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("pearson_correlation: size mismatch");
  double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Total variation distance between empirical counts and the uniform law.
inline double tv_to_uniform(const std::vector<std::int64_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("tv_to_uniform: empty");
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) throw std::invalid_argument("tv_to_uniform: no mass");
  double uniform = 1.0 / static_cast<double>(counts.size());
  double tv = 0.0;
  for (auto c : counts)
    tv += std::abs(static_cast<double>(c) / static_cast<double>(total) -
                   uniform);
  return 0.5 * tv;
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty");
  std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  double lo =
      *std::max_element(values.begin(),
                        values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

namespace detail {
inline double resample_median(const std::vector<double>& values, Rng& rng,
                              std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i < values.size(); ++i)
    scratch.push_back(values[rng.below(values.size())]);
  return median(scratch);
}
}  // namespace detail

// Percentile bootstrap interval for the median.
inline Interval bootstrap_median_ci(const std::vector<double>& values,
                                    Rng& rng, int resamples = 2000,
                                    double level = 0.90) {
  if (values.empty()) throw std::invalid_argument("bootstrap: empty sample");
  if (resamples < 10) throw std::invalid_argument("bootstrap: too few rounds");
  std::vector<double> medians, scratch;
  medians.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r)
    medians.push_back(detail::resample_median(values, rng, scratch));
  std::sort(medians.begin(), medians.end());
  double tail = (1.0 - level) / 2.0;
  auto pick = [&](double q) {
    double idx = q * static_cast<double>(medians.size() - 1);
    return medians[static_cast<std::size_t>(std::llround(idx))];
  };
  return {pick(tail), pick(1.0 - tail)};
}

// Percentile bootstrap interval for median(a) - median(b), resampling the two
// samples independently.
inline Interval bootstrap_median_diff_ci(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         Rng& rng, int resamples = 2000,
                                         double level = 0.90) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("bootstrap: empty sample");
  std::vector<double> diffs, scratch;
  diffs.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    double ma = detail::resample_median(a, rng, scratch);
    double mb = detail::resample_median(b, rng, scratch);
    diffs.push_back(ma - mb);
  }
  std::sort(diffs.begin(), diffs.end());
  double tail = (1.0 - level) / 2.0;
  auto pick = [&](double q) {
    double idx = q * static_cast<double>(diffs.size() - 1);
    return diffs[static_cast<std::size_t>(std::llround(idx))];
  };
  return {pick(tail), pick(1.0 - tail)};
}

}  // namespace spanperc
