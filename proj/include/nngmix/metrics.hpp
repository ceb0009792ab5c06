#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nngmix {

/**
 * Exact AUCROC by the Mann-Whitney rank statistic: a single sort with
 * midranks for tie groups, so tied score pairs are credited 0.5.
 * Labels must contain both classes; 1 marks anomalies.
 */
double auc_roc(std::span<const double> scores, std::span<const int> labels);

struct EvalResult {
    double auc = 0.0;
    std::string fingerprint;
    std::uint64_t seed = 0;
};

struct Aggregate {
    double mean_auc = 0.0;
    double std_auc = 0.0; // sample std, n-1 denominator; 0 for a single seed
    std::size_t n_seeds = 0;
    std::string fingerprint;
};

/// Mean and sample standard deviation over seeds. All results must share
/// one config fingerprint.
Aggregate aggregate(const std::vector<EvalResult>& results);

} // namespace nngmix
