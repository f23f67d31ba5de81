// Ensemble statistics for the Monte-Carlo bound checks: means, sample
// deviations, normal-approximation confidence intervals and binomial bounds.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace degnet {

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// Half-width of a z-score interval for the mean of xs.
inline double ci_halfwidth(const std::vector<double>& xs, double z) {
    if (xs.empty()) return 0.0;
    return z * sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

// z for two-sided 99% coverage.
inline constexpr double kZ99 = 2.5758293035489004;

// Normal-approximation lower confidence bound for a binomial proportion.
inline double binomial_lower_bound(size_t successes, size_t trials, double z) {
    if (trials == 0) return 0.0;
    double p = static_cast<double>(successes) / static_cast<double>(trials);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return p - z * se;
}

// |freq - p| tolerance for a known-p binomial at the given sigma multiple.
// Degenerate p in {0,1} demands exact agreement.
inline double binomial_band(double p, size_t trials, double sigmas) {
    if (trials == 0) return 0.0;
    return sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace degnet
