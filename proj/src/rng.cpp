#include "nngmix/rng.hpp"

#include "nngmix/common.hpp"

#include <cmath>
#include <numbers>

namespace nngmix {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label) {
    std::uint64_t x = seed ^ fnv1a64(label);
    for (auto& s : state_) {
        s = splitmix64(x);
    }
}

RngStream RngStream::substream(std::string_view label) const {
    std::uint64_t x = seed_ ^ fnv1a64(label_);
    std::uint64_t y = splitmix64(x) ^ fnv1a64(label);
    const std::uint64_t child_seed = splitmix64(y);
    return RngStream(child_seed, label);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::next_index(std::size_t n) {
    if (n == 0) {
        throw NumericError("next_index: n must be positive");
    }
    const std::uint64_t range = n;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * range;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (lo < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * range;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

double RngStream::next_gaussian() {
    const double u1 = 1.0 - next_uniform(); // (0, 1], keeps log finite
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

void RngStream::fill_gaussian(std::span<double> out, double sigma) {
    if (sigma < 0.0) {
        throw ConfigError("fill_gaussian: sigma must be nonnegative");
    }
    for (std::size_t i = 0; i < out.size(); i += 2) {
        const double u1 = 1.0 - next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = sigma * (r * std::cos(2.0 * std::numbers::pi * u2));
        if (i + 1 < out.size()) {
            out[i + 1] = sigma * (r * std::sin(2.0 * std::numbers::pi * u2));
        }
    }
}

std::vector<double> RngStream::gaussian_vec(std::size_t dim, double sigma) {
    std::vector<double> out(dim);
    fill_gaussian(out, sigma);
    return out;
}

double RngStream::next_gamma(double shape) {
    if (shape <= 0.0) {
        throw ConfigError("next_gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // boost: G(a) = G(a+1) * U^(1/a), with U in (0, 1]
        const double g = next_gamma(shape + 1.0);
        const double u = 1.0 - next_uniform();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = next_gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RngStream::next_beta(double alpha) {
    if (alpha <= 0.0) {
        throw ConfigError("next_beta: alpha must be positive");
    }
    const double g1 = next_gamma(alpha);
    const double g2 = next_gamma(alpha);
    return g1 / (g1 + g2);
}

} // namespace nngmix
