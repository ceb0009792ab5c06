#pragma once

#include "nngmix/matrix.hpp"
#include "nngmix/rng.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace nngmix {

enum class GeneratorKind {
    none,      // baseline: no pseudo-anomalies
    mixup,     // convex pair combinations within A
    cutout,    // contiguous zero-run mask on one anomaly
    cutmix,    // contiguous run spliced from a second anomaly
    gaussian,  // additive Gaussian noise on one anomaly
    nng_mix,   // nearest-neighbor Gaussian mixup across A and H
    mixup_all, // ablation: mixup between A and all of A ∪ H, no kNN, no noise
    nng_no_gn, // ablation: nng_mix with sigma forced to 0
};

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

struct GeneratorConfig {
    GeneratorKind kind = GeneratorKind::nng_mix;
    double alpha = 0.2;           // Beta(alpha, alpha) mixing weight
    std::size_t k = 10;           // neighbor pool size
    double sigma = 0.01;          // Gaussian noise std, per standardized unit
    double mask_ratio_low = 0.1;  // cutout/cutmix masked fraction range
    double mask_ratio_high = 0.3;
    std::size_t mask_runs = 1;    // number of contiguous zero-runs
    int multiplier = 10;          // M: pseudo-anomalies per labeled anomaly

    void validate() const; // throws ConfigError
};

/// Which neighbor pool supplied the second parent of an nng_mix row.
enum class NeighborPool {
    none,               // generator does not use neighbor pools
    anomalies,          // kNN within A
    unlabeled,          // kNN within H
    unlabeled_fallback, // A-pool was selected but empty, fell back to H
};

std::string to_string(NeighborPool pool);

struct RowProvenance {
    GeneratorKind kind = GeneratorKind::none;
    std::size_t parent1 = 0;   // row in A
    std::ptrdiff_t parent2 = -1; // second parent row, -1 when unused; for
                                 // mixup_all this indexes the stacked [A; H]
    double lambda = std::numeric_limits<double>::quiet_NaN();
    NeighborPool pool = NeighborPool::none;
    std::size_t mask_start = 0; // first zero-run (cutout/cutmix)
    std::size_t mask_len = 0;
};

/// Generated pseudo-anomalies. Every row carries label 1.
struct PseudoAnomalySet {
    Matrix samples;
    std::vector<RowProvenance> provenance;

    std::size_t size() const { return samples.rows(); }
    std::vector<int> labels() const { return std::vector<int>(samples.rows(), 1); }
};

/// d = lambda * a + (1 - lambda) * b
std::vector<double> mix_rows(std::span<const double> a, std::span<const double> b,
                             double lambda);

PseudoAnomalySet gen_mixup(const Matrix& anomalies, const GeneratorConfig& config,
                           std::size_t n, RngStream& rng);
PseudoAnomalySet gen_cutout(const Matrix& anomalies, const GeneratorConfig& config,
                            std::size_t n, RngStream& rng);
PseudoAnomalySet gen_cutmix(const Matrix& anomalies, const GeneratorConfig& config,
                            std::size_t n, RngStream& rng);
PseudoAnomalySet gen_gaussian(const Matrix& anomalies, const GeneratorConfig& config,
                              std::size_t n, RngStream& rng);

/**
 * Nearest Neighbor Gaussian Mixup. Per row: draw a1 from A; flip a fair
 * coin (uniform > 0.5 selects the A pool, exact duplicates of a1
 * excluded, otherwise the H pool); draw a2 uniformly from the k nearest
 * neighbors of a1 in the chosen pool; perturb both parents with
 * N(0, sigma^2 I); mix with lambda ~ Beta(alpha, alpha). When the A pool
 * is selected but empty (|A| = 1 or all duplicates) the row falls back to
 * the H pool and the provenance records it.
 */
PseudoAnomalySet gen_nng_mix(const Matrix& anomalies, const Matrix& unlabeled,
                             const GeneratorConfig& config, std::size_t n,
                             RngStream& rng);

/// Ablation with the neighbor search removed: a2 is drawn uniformly from
/// the stacked [A; H] and no noise is added.
PseudoAnomalySet gen_mixup_all(const Matrix& anomalies, const Matrix& unlabeled,
                               const GeneratorConfig& config, std::size_t n,
                               RngStream& rng);

/// Dispatch on config.kind; nng_no_gn runs gen_nng_mix with sigma = 0 and
/// kind none returns an empty set regardless of n.
PseudoAnomalySet generate(const Matrix& anomalies, const Matrix& unlabeled,
                          const GeneratorConfig& config, std::size_t n,
                          RngStream& rng);

} // namespace nngmix
