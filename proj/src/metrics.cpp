#include "nngmix/metrics.hpp"

#include "nngmix/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nngmix {

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw DataError("auc_roc: scores and labels differ in length (" +
                        std::to_string(scores.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
    }
    if (scores.empty()) {
        throw DataError("auc_roc: empty input");
    }

    std::size_t positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw NumericError("auc_roc: non-finite score at index " + std::to_string(i));
        }
        if (labels[i] != 0 && labels[i] != 1) {
            throw DataError("auc_roc: label at index " + std::to_string(i) +
                            " is not 0/1");
        }
        positives += static_cast<std::size_t>(labels[i]);
    }
    const std::size_t negatives = scores.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw DataError("auc_roc: both classes must be present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        // midrank of the tie group [i, j], 1-based
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (labels[order[t]] == 1) {
                positive_rank_sum += rank;
            }
        }
        i = j + 1;
    }

    const double p = static_cast<double>(positives);
    const double n = static_cast<double>(negatives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * n);
}

Aggregate aggregate(const std::vector<EvalResult>& results) {
    if (results.empty()) {
        throw DataError("aggregate: no results");
    }
    const std::string& fp = results.front().fingerprint;
    for (const auto& r : results) {
        if (r.fingerprint != fp) {
            throw ConfigError("aggregate: mixed fingerprints (" + fp + " vs " +
                              r.fingerprint + ")");
        }
    }
    double mean = 0.0;
    for (const auto& r : results) {
        mean += r.auc;
    }
    mean /= static_cast<double>(results.size());

    double sd = 0.0;
    if (results.size() > 1) {
        double ss = 0.0;
        for (const auto& r : results) {
            const double d = r.auc - mean;
            ss += d * d;
        }
        sd = std::sqrt(ss / static_cast<double>(results.size() - 1));
    }
    return Aggregate{mean, sd, results.size(), fp};
}

} // namespace nngmix
