#pragma once

#include "nngmix/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nngmix {

struct Neighbor {
    std::size_t index;
    double distance;

    bool operator==(const Neighbor&) const = default;
};

/**
 * Exact k-nearest-neighbor index over row vectors with Euclidean distance.
 * Brute-force scan; immutable after construction, safe for concurrent
 * queries.
 */
class NeighborIndex {
public:
    /// Takes ownership of the points. Throws DataError if the matrix is
    /// empty or contains non-finite values.
    explicit NeighborIndex(Matrix points);

    static NeighborIndex build(const Matrix& points) { return NeighborIndex(points); }

    /**
     * Returns the min(k, available) nearest rows sorted by nondecreasing
     * distance, ties broken by ascending row index. With
     * `exclude_exact_match` set, rows at distance exactly zero from the
     * query are skipped (used when the query itself is a stored row).
     */
    std::vector<Neighbor> query(std::span<const double> q, std::size_t k,
                                bool exclude_exact_match = false) const;

    /// Distance from q to its k-th nearest stored row (k must not exceed
    /// the index size).
    double kth_distance(std::span<const double> q, std::size_t k) const;

    std::size_t size() const { return points_.rows(); }
    std::size_t dim() const { return points_.cols(); }
    const Matrix& points() const { return points_; }

private:
    Matrix points_;
};

} // namespace nngmix
