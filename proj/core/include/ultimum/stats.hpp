#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace ultimum {

/// Sample mean with its standard error (sample sd / sqrt(n)).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Two-pass mean and standard error, summed in index order. Requires n >= 2.
McEstimate summarize(std::span<const double> values, std::uint64_t seed = 0);

/// Standard error of the difference of two independent estimates.
double combined_std_error(const McEstimate& a, const McEstimate& b);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test of an ascending sample against `cdf`.
/// p-value from the asymptotic law with Stephens' small-sample correction.
KsResult ks_test(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);

/// Median of an ascending sample.
double sorted_median(std::span<const double> sorted_sample);

/// Bootstrap standard error of the sample median with `resamples` draws.
double bootstrap_median_std_error(std::span<const double> sample, std::size_t resamples, std::uint64_t seed);

}  // namespace ultimum
