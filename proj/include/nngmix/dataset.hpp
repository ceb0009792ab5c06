#pragma once

#include "nngmix/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nngmix {

/// Tabular dataset: n rows of d features with binary anomaly labels
/// (1 = anomaly, 0 = normal).
struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    Matrix features;
    std::vector<int> labels;

    std::size_t n() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
    std::size_t count_label(int label) const;
};

/**
 * Loads a CSV file: UTF-8, comma separated, one header line, the named
 * label column holding only 0/1 and every other column a decimal float.
 * Row order is preserved. Errors name the offending file line and column.
 */
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column = "label");

/// Writes a dataset in the same CSV schema load_csv reads.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Per-feature affine transform fitted on a training split. `scale` is the
/// sample standard deviation (n-1 denominator); columns whose std falls
/// below 1e-12 are flagged degenerate and only centered.
struct StandardizeRecord {
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<bool> degenerate;
};

/// Standardizes every feature column to mean 0 and sample std 1 and
/// returns the transform so test data can reuse the train statistics.
std::pair<Dataset, StandardizeRecord> standardize(const Dataset& dataset);

Matrix apply_standardize(const StandardizeRecord& record, const Matrix& features);

struct ClusterSpec {
    std::vector<double> center;
    double stddev = 1.0;
    std::size_t count = 1;
    int label = 0;
};

/// Isotropic Gaussian blobs, rows shuffled; deterministic per seed
/// (streams "make_synthetic_clusters/draw" and ".../shuffle").
Dataset make_synthetic_clusters(const std::vector<ClusterSpec>& spec,
                                std::uint64_t seed);

/// Stratified train/test split: each class is shuffled separately
/// (stream "split_train_test") and cut so per-class counts stay within
/// one sample of the requested fraction. Every class needs at least two
/// members.
std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset,
                                             double train_fraction,
                                             std::uint64_t seed);

/**
 * The carved training structure: labeled anomalies A, unlabeled pool H
 * (all training normals plus a gamma-fraction of the residual anomalies),
 * and the test block, which carve_split leaves empty for the caller to
 * fill. Row index vectors refer to the source training dataset.
 */
struct SplitPlan {
    Matrix labeled_anomalies;
    Matrix unlabeled_pool;
    Matrix test_features;
    std::vector<int> test_labels;
    double labeled_ratio = 0.0;
    double pollution_ratio = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> anomaly_rows;
    std::vector<std::size_t> pool_rows;
    std::vector<std::size_t> discarded_rows;
};

/**
 * Carves a training set into A and H. |A| = ceil(rho * anomaly count),
 * at least 1; round(gamma * residual) residual anomalies are injected
 * into H as unlabeled data and the rest are discarded. Streams
 * "carve_split/anomalies" and "carve_split/pollution".
 */
SplitPlan carve_split(const Dataset& train, double rho, double gamma,
                      std::uint64_t seed);

} // namespace nngmix
