#include "nngmix/knn.hpp"

#include "nngmix/common.hpp"

#include <algorithm>
#include <cmath>

namespace nngmix {

NeighborIndex::NeighborIndex(Matrix points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw DataError("NeighborIndex: cannot build over an empty matrix");
    }
    if (!points_.all_finite()) {
        throw DataError("NeighborIndex: points must be finite");
    }
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> q, std::size_t k,
                                           bool exclude_exact_match) const {
    if (q.size() != points_.cols()) {
        throw DataError("NeighborIndex::query: dimension mismatch (query " +
                        std::to_string(q.size()) + ", index " +
                        std::to_string(points_.cols()) + ")");
    }
    if (k == 0) {
        throw ConfigError("NeighborIndex::query: k must be positive");
    }

    struct Candidate {
        double d2;
        std::size_t index;
        bool operator<(const Candidate& other) const {
            if (d2 != other.d2) return d2 < other.d2;
            return index < other.index;
        }
    };

    std::vector<Candidate> candidates;
    candidates.reserve(points_.rows());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        const double d2 = squared_distance(q, points_.row(i));
        if (exclude_exact_match && d2 == 0.0) continue;
        candidates.push_back({d2, i});
    }

    const std::size_t take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end());

    std::vector<Neighbor> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back({candidates[i].index, std::sqrt(candidates[i].d2)});
    }
    return out;
}

double NeighborIndex::kth_distance(std::span<const double> q, std::size_t k) const {
    if (q.size() != points_.cols()) {
        throw DataError("NeighborIndex::kth_distance: dimension mismatch");
    }
    if (k == 0 || k > points_.rows()) {
        throw DataError("NeighborIndex::kth_distance: k=" + std::to_string(k) +
                        " out of range for " + std::to_string(points_.rows()) +
                        " stored rows");
    }
    std::vector<double> d2(points_.rows());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        d2[i] = squared_distance(q, points_.row(i));
    }
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    return std::sqrt(d2[k - 1]);
}

} // namespace nngmix
