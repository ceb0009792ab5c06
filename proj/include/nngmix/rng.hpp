#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nngmix {

/**
 * Seeded random stream with named substreams.
 *
 * The generator is xoshiro256++ seeded through splitmix64 from
 * (seed, fnv1a64(label)), so a stream is a pure function of its seed and
 * label: identical (seed, label, call sequence) gives identical output on
 * every platform. Substreams are derived from the parent's seed and a new
 * label, independent of how far the parent has advanced.
 *
 * Streams are cheap value types but must not be shared between threads;
 * each parallel task derives its own substream.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::string_view label = "root");

    /// Derives an independent stream from this stream's seed and `label`.
    RngStream substream(std::string_view label) const;

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_uniform();

    /// Uniform index in {0, ..., n-1}; unbiased (Lemire rejection).
    std::size_t next_index(std::size_t n);

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_gaussian();

    /// Fills `out` with i.i.d. N(0, sigma^2) draws. sigma = 0 yields an
    /// exact zero vector; the underlying draws are consumed either way so
    /// the stream position does not depend on sigma.
    void fill_gaussian(std::span<double> out, double sigma);

    std::vector<double> gaussian_vec(std::size_t dim, double sigma);

    /// Gamma(shape, 1) via Marsaglia-Tsang; shapes below 1 use the
    /// shape+1 boost with a uniform power correction.
    double next_gamma(double shape);

    /// Symmetric Beta(alpha, alpha) as G1/(G1+G2) with Gi ~ Gamma(alpha, 1).
    double next_beta(double alpha);

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    std::string label_;
};

/// FNV-1a 64-bit hash; used for substream labels and config fingerprints.
std::uint64_t fnv1a64(std::string_view text);

} // namespace nngmix
