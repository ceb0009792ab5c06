#include "nngmix/augment.hpp"

#include "nngmix/common.hpp"
#include "nngmix/knn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nngmix {

namespace {

void require_anomalies(const Matrix& anomalies) {
    if (anomalies.empty()) {
        throw DataError("generator: labeled anomaly set is empty");
    }
}

struct MaskRun {
    std::size_t start;
    std::size_t len;
};

/// Contiguous zero-runs: total masked fraction r ~ Uniform(low, high),
/// split evenly across runs, each with a uniform start and no wraparound.
std::vector<MaskRun> draw_mask(const GeneratorConfig& config, std::size_t dim,
                               RngStream& rng) {
    const double r = config.mask_ratio_low +
                     rng.next_uniform() * (config.mask_ratio_high - config.mask_ratio_low);
    std::vector<MaskRun> runs;
    runs.reserve(config.mask_runs);
    for (std::size_t i = 0; i < config.mask_runs; ++i) {
        const double share = r * static_cast<double>(dim) /
                             static_cast<double>(config.mask_runs);
        const auto len = std::min<std::size_t>(
            dim, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share))));
        const std::size_t start = rng.next_index(dim - len + 1);
        runs.push_back({start, len});
    }
    return runs;
}

} // namespace

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::none: return "none";
        case GeneratorKind::mixup: return "mixup";
        case GeneratorKind::cutout: return "cutout";
        case GeneratorKind::cutmix: return "cutmix";
        case GeneratorKind::gaussian: return "gaussian";
        case GeneratorKind::nng_mix: return "nng_mix";
        case GeneratorKind::mixup_all: return "mixup_all";
        case GeneratorKind::nng_no_gn: return "nng_no_gn";
    }
    return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
    for (const auto kind : {GeneratorKind::none, GeneratorKind::mixup,
                            GeneratorKind::cutout, GeneratorKind::cutmix,
                            GeneratorKind::gaussian, GeneratorKind::nng_mix,
                            GeneratorKind::mixup_all, GeneratorKind::nng_no_gn}) {
        if (to_string(kind) == name) return kind;
    }
    throw ConfigError("unknown generator kind: '" + name + "'");
}

std::string to_string(NeighborPool pool) {
    switch (pool) {
        case NeighborPool::none: return "none";
        case NeighborPool::anomalies: return "anomalies";
        case NeighborPool::unlabeled: return "unlabeled";
        case NeighborPool::unlabeled_fallback: return "unlabeled_fallback";
    }
    return "unknown";
}

void GeneratorConfig::validate() const {
    if (alpha <= 0.0) throw ConfigError("generator: alpha must be positive");
    if (k == 0) throw ConfigError("generator: k must be positive");
    if (sigma < 0.0) throw ConfigError("generator: sigma must be nonnegative");
    if (!(mask_ratio_low > 0.0 && mask_ratio_high < 1.0 &&
          mask_ratio_low < mask_ratio_high)) {
        throw ConfigError("generator: mask ratio range must satisfy 0 < low < high < 1");
    }
    if (mask_runs == 0) throw ConfigError("generator: mask_runs must be positive");
    if (multiplier < 0) throw ConfigError("generator: multiplier must be nonnegative");
}

std::vector<double> mix_rows(std::span<const double> a, std::span<const double> b,
                             double lambda) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = lambda * a[i] + (1.0 - lambda) * b[i];
    }
    return out;
}

PseudoAnomalySet gen_mixup(const Matrix& anomalies, const GeneratorConfig& config,
                           std::size_t n, RngStream& rng) {
    require_anomalies(anomalies);
    PseudoAnomalySet out;
    out.samples = Matrix(0, anomalies.cols());
    out.provenance.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const std::size_t p2 = rng.next_index(anomalies.rows());
        const double lambda = rng.next_beta(config.alpha);
        out.samples.append_row(mix_rows(anomalies.row(p1), anomalies.row(p2), lambda));
        RowProvenance prov;
        prov.kind = GeneratorKind::mixup;
        prov.parent1 = p1;
        prov.parent2 = static_cast<std::ptrdiff_t>(p2);
        prov.lambda = lambda;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet gen_cutout(const Matrix& anomalies, const GeneratorConfig& config,
                            std::size_t n, RngStream& rng) {
    require_anomalies(anomalies);
    const std::size_t d = anomalies.cols();
    PseudoAnomalySet out;
    out.samples = Matrix(0, d);
    out.provenance.reserve(n);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const auto src = anomalies.row(p1);
        std::copy(src.begin(), src.end(), row.begin());
        const auto runs = draw_mask(config, d, rng);
        for (const auto& run : runs) {
            std::fill(row.begin() + run.start, row.begin() + run.start + run.len, 0.0);
        }
        out.samples.append_row(row);
        RowProvenance prov;
        prov.kind = GeneratorKind::cutout;
        prov.parent1 = p1;
        prov.mask_start = runs.front().start;
        prov.mask_len = runs.front().len;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet gen_cutmix(const Matrix& anomalies, const GeneratorConfig& config,
                            std::size_t n, RngStream& rng) {
    require_anomalies(anomalies);
    const std::size_t d = anomalies.cols();
    PseudoAnomalySet out;
    out.samples = Matrix(0, d);
    out.provenance.reserve(n);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const std::size_t p2 = rng.next_index(anomalies.rows());
        const auto a1 = anomalies.row(p1);
        const auto a2 = anomalies.row(p2);
        std::copy(a1.begin(), a1.end(), row.begin());
        const auto runs = draw_mask(config, d, rng);
        for (const auto& run : runs) {
            std::copy(a2.begin() + run.start, a2.begin() + run.start + run.len,
                      row.begin() + run.start);
        }
        out.samples.append_row(row);
        RowProvenance prov;
        prov.kind = GeneratorKind::cutmix;
        prov.parent1 = p1;
        prov.parent2 = static_cast<std::ptrdiff_t>(p2);
        prov.mask_start = runs.front().start;
        prov.mask_len = runs.front().len;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet gen_gaussian(const Matrix& anomalies, const GeneratorConfig& config,
                              std::size_t n, RngStream& rng) {
    require_anomalies(anomalies);
    const std::size_t d = anomalies.cols();
    PseudoAnomalySet out;
    out.samples = Matrix(0, d);
    out.provenance.reserve(n);
    std::vector<double> row(d);
    std::vector<double> noise(d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const auto src = anomalies.row(p1);
        rng.fill_gaussian(noise, config.sigma);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = src[j] + noise[j];
        }
        out.samples.append_row(row);
        RowProvenance prov;
        prov.kind = GeneratorKind::gaussian;
        prov.parent1 = p1;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet gen_nng_mix(const Matrix& anomalies, const Matrix& unlabeled,
                             const GeneratorConfig& config, std::size_t n,
                             RngStream& rng) {
    require_anomalies(anomalies);
    if (unlabeled.empty()) {
        throw DataError("gen_nng_mix: unlabeled pool is empty");
    }
    if (anomalies.cols() != unlabeled.cols()) {
        throw DataError("gen_nng_mix: A and H differ in dimension");
    }
    const std::size_t d = anomalies.cols();
    const NeighborIndex index_a(anomalies);
    const NeighborIndex index_h(unlabeled);

    // Pools depend only on the parent row; cache per parent.
    std::vector<std::optional<std::vector<Neighbor>>> pools_a(anomalies.rows());
    std::vector<std::optional<std::vector<Neighbor>>> pools_h(anomalies.rows());

    PseudoAnomalySet out;
    out.samples = Matrix(0, d);
    out.provenance.reserve(n);
    std::vector<double> e1(d);
    std::vector<double> e2(d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const double coin = rng.next_uniform();

        NeighborPool pool_kind;
        const std::vector<Neighbor>* pool;
        if (coin > 0.5) {
            if (!pools_a[p1]) {
                pools_a[p1] = index_a.query(anomalies.row(p1), config.k, true);
            }
            if (pools_a[p1]->empty()) {
                // |A| = 1 or every anomaly duplicates the parent
                if (!pools_h[p1]) {
                    pools_h[p1] = index_h.query(anomalies.row(p1), config.k, false);
                }
                pool = &*pools_h[p1];
                pool_kind = NeighborPool::unlabeled_fallback;
            } else {
                pool = &*pools_a[p1];
                pool_kind = NeighborPool::anomalies;
            }
        } else {
            if (!pools_h[p1]) {
                pools_h[p1] = index_h.query(anomalies.row(p1), config.k, false);
            }
            pool = &*pools_h[p1];
            pool_kind = NeighborPool::unlabeled;
        }

        const Neighbor chosen = (*pool)[rng.next_index(pool->size())];
        const bool from_anomalies = pool_kind == NeighborPool::anomalies;
        const auto a2 =
            from_anomalies ? anomalies.row(chosen.index) : unlabeled.row(chosen.index);
        const auto a1 = anomalies.row(p1);

        rng.fill_gaussian(e1, config.sigma);
        rng.fill_gaussian(e2, config.sigma);
        const double lambda = rng.next_beta(config.alpha);

        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = lambda * (a1[j] + e1[j]) + (1.0 - lambda) * (a2[j] + e2[j]);
        }
        out.samples.append_row(row);

        RowProvenance prov;
        prov.kind = config.kind == GeneratorKind::nng_no_gn ? GeneratorKind::nng_no_gn
                                                            : GeneratorKind::nng_mix;
        prov.parent1 = p1;
        prov.parent2 = static_cast<std::ptrdiff_t>(chosen.index);
        prov.lambda = lambda;
        prov.pool = pool_kind;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet gen_mixup_all(const Matrix& anomalies, const Matrix& unlabeled,
                               const GeneratorConfig& config, std::size_t n,
                               RngStream& rng) {
    require_anomalies(anomalies);
    if (unlabeled.empty()) {
        throw DataError("gen_mixup_all: unlabeled pool is empty");
    }
    if (anomalies.cols() != unlabeled.cols()) {
        throw DataError("gen_mixup_all: A and H differ in dimension");
    }
    const std::size_t total = anomalies.rows() + unlabeled.rows();
    PseudoAnomalySet out;
    out.samples = Matrix(0, anomalies.cols());
    out.provenance.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p1 = rng.next_index(anomalies.rows());
        const std::size_t p2 = rng.next_index(total);
        const auto a2 = p2 < anomalies.rows()
                            ? anomalies.row(p2)
                            : unlabeled.row(p2 - anomalies.rows());
        const double lambda = rng.next_beta(config.alpha);
        out.samples.append_row(mix_rows(anomalies.row(p1), a2, lambda));
        RowProvenance prov;
        prov.kind = GeneratorKind::mixup_all;
        prov.parent1 = p1;
        prov.parent2 = static_cast<std::ptrdiff_t>(p2);
        prov.lambda = lambda;
        out.provenance.push_back(prov);
    }
    return out;
}

PseudoAnomalySet generate(const Matrix& anomalies, const Matrix& unlabeled,
                          const GeneratorConfig& config, std::size_t n,
                          RngStream& rng) {
    config.validate();
    switch (config.kind) {
        case GeneratorKind::none: {
            PseudoAnomalySet out;
            out.samples = Matrix(0, anomalies.cols());
            return out;
        }
        case GeneratorKind::mixup:
            return gen_mixup(anomalies, config, n, rng);
        case GeneratorKind::cutout:
            return gen_cutout(anomalies, config, n, rng);
        case GeneratorKind::cutmix:
            return gen_cutmix(anomalies, config, n, rng);
        case GeneratorKind::gaussian:
            return gen_gaussian(anomalies, config, n, rng);
        case GeneratorKind::nng_mix:
            return gen_nng_mix(anomalies, unlabeled, config, n, rng);
        case GeneratorKind::mixup_all:
            return gen_mixup_all(anomalies, unlabeled, config, n, rng);
        case GeneratorKind::nng_no_gn: {
            GeneratorConfig quiet = config;
            quiet.sigma = 0.0;
            return gen_nng_mix(anomalies, unlabeled, quiet, n, rng);
        }
    }
    throw ConfigError("generate: unhandled generator kind");
}

} // namespace nngmix
