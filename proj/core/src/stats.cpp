#include "ultimum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ultimum/error.hpp"
#include "ultimum/rng.hpp"

#include <random>

namespace ultimum {

McEstimate summarize(std::span<const double> values, std::uint64_t seed) {
    if (values.size() < 2) throw DomainError("summarize: need at least two samples");
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd / std::sqrt(n), values.size(), seed};
}

double combined_std_error(const McEstimate& a, const McEstimate& b) {
    return std::hypot(a.std_error, b.std_error);
}

double kolmogorov_survival(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
    if (sorted_sample.empty()) throw DomainError("ks_test: empty sample");
    const double n = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double f = cdf(sorted_sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

double sorted_median(std::span<const double> s) {
    if (s.empty()) throw DomainError("sorted_median: empty sample");
    const std::size_t mid = s.size() / 2;
    return s.size() % 2 == 1 ? s[mid] : 0.5 * (s[mid - 1] + s[mid]);
}

double bootstrap_median_std_error(std::span<const double> sample, std::size_t resamples, std::uint64_t seed) {
    if (sample.size() < 2 || resamples < 2) throw DomainError("bootstrap_median_std_error: sample too small");
    Engine engine = make_engine(seed, 0x6d656469616eULL);
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    std::vector<double> draw(sample.size());
    std::vector<double> medians;
    medians.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& v : draw) v = sample[pick(engine)];
        const std::size_t mid = draw.size() / 2;
        std::nth_element(draw.begin(), draw.begin() + static_cast<std::ptrdiff_t>(mid), draw.end());
        double med = draw[mid];
        if (draw.size() % 2 == 0) {
            med = 0.5 * (med + *std::max_element(draw.begin(), draw.begin() + static_cast<std::ptrdiff_t>(mid)));
        }
        medians.push_back(med);
    }
    const auto est = summarize(medians);
    return est.std_error * std::sqrt(static_cast<double>(resamples));
}

}  // namespace ultimum
