#pragma once

#include "nngmix/augment.hpp"
#include "nngmix/dataset.hpp"
#include "nngmix/detect.hpp"
#include "nngmix/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace nngmix {

/// Where a dataset comes from: a CSV file or an inline synthetic spec.
/// Synthetic datasets are redrawn per run seed; CSV data is fixed.
struct DatasetSource {
    std::string name;
    std::string csv_path;
    std::string label_column = "label";
    std::vector<ClusterSpec> synthetic;

    bool is_csv() const { return !csv_path.empty(); }
};

Dataset realize_dataset(const DatasetSource& source, std::uint64_t seed);

/// One grid cell: everything except the seed.
struct CellConfig {
    DatasetSource dataset;
    double train_fraction = 0.7;
    double rho = 0.01;
    double gamma = 1.0;
    GeneratorConfig generator;
    DetectorConfig detector;
};

/// Canonical JSON for a cell. Generators with multiplier 0 collapse to
/// kind "none" so a baseline is one cell no matter how it was written.
nlohmann::json cell_to_json(const CellConfig& cell);

/// Stable 16-hex-digit FNV-1a hash of the canonical cell JSON.
std::string cell_fingerprint(const CellConfig& cell);

/// Full pipeline for one (cell, seed): realize -> split -> standardize ->
/// carve -> generate -> fit -> score -> AUCROC. Streams: the dataset ops
/// use the labels documented in dataset.hpp; generation uses substream
/// "generate" and detector fitting "detect".
EvalResult run_cell(const CellConfig& cell, std::uint64_t seed);

/// run_cell plus every intermediate product, for inspection and exports.
struct PipelineArtifacts {
    Dataset train;
    StandardizeRecord standardizer;
    SplitPlan plan;
    PseudoAnomalySet pseudo;
    std::unique_ptr<AnomalyScorer> model;
    std::vector<double> test_scores;
    EvalResult result;
};

PipelineArtifacts run_cell_detailed(const CellConfig& cell, std::uint64_t seed);

struct ExperimentConfig {
    DatasetSource dataset;
    double train_fraction = 0.7;
    std::vector<double> rho{0.01};
    std::vector<double> gamma{1.0};
    std::vector<int> multipliers{10};
    std::vector<GeneratorConfig> generators;
    std::vector<DetectorConfig> detectors;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::filesystem::path out_dir;
    int jobs = 1;

    void validate() const;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Requires every grid axis to hold exactly one value, then runs it.
EvalResult run_experiment(const ExperimentConfig& config);

struct SweepOutcome {
    std::vector<EvalResult> results;    // canonical order, all rows incl. resumed
    std::vector<Aggregate> aggregates;  // one per cell
    std::size_t cells = 0;
    std::size_t evaluated = 0; // rows computed this run
    std::size_t skipped = 0;   // rows found already present
};

/**
 * Cartesian sweep over generators x detectors x rho x gamma x M x seeds,
 * deduplicated by fingerprint. Appends to <out>/results.jsonl as cells
 * finish (so an interrupted sweep resumes, skipping finished rows), then
 * rewrites results.jsonl, results.csv, and aggregates.json in canonical
 * order on success. With jobs > 1 cells run in parallel; per-cell streams
 * make the final table independent of scheduling.
 */
SweepOutcome run_sweep(const ExperimentConfig& config);

struct RegionSpec {
    enum class Kind { ball, knn_quantile };
    Kind kind = Kind::ball;
    std::vector<double> center; // ball
    double radius = 2.0;        // ball
    double tau = 0.95;          // knn_quantile
    std::size_t k = 10;         // knn_quantile

    void validate() const;
};

struct GeneratorIntrusion {
    GeneratorConfig generator;
    std::vector<double> per_seed; // fraction inside the region, one per seed
    double mean = 0.0;
};

struct IntrusionReport {
    std::vector<GeneratorIntrusion> generators;
    std::vector<std::uint64_t> seeds;
    std::size_t samples_per_seed = 0;

    nlohmann::json to_json() const;
};

/**
 * Draws the synthetic dataset per seed (raw coordinates, no
 * standardization, so the region spec lives in data units), takes A =
 * anomaly rows and H = normal rows, generates `n_samples` rows per
 * generator, and reports the fraction landing inside the normal region.
 */
IntrusionReport measure_intrusion(const std::vector<GeneratorConfig>& generators,
                                  const std::vector<ClusterSpec>& synthetic,
                                  const RegionSpec& region, std::size_t n_samples,
                                  const std::vector<std::uint64_t>& seeds);

struct GridBounds {
    double x_min = -1.0, x_max = 1.0;
    double y_min = -1.0, y_max = 1.0;
};

/// Scores a regular nx-by-ny mesh with a 2-D model and writes x,y,score
/// CSV rows for external plotting.
void export_score_grid(const AnomalyScorer& model, const GridBounds& bounds,
                       std::size_t nx, std::size_t ny,
                       const std::filesystem::path& path);

struct ProjectionResult {
    Matrix projected;                // n x 2
    std::vector<double> eigenvalues; // all covariance eigenvalues, descending
    Matrix components;               // 2 x d principal directions
};

/// Top-2 principal components of the covariance (n-1 denominator); the
/// sign convention makes each component's largest-magnitude entry
/// positive. One-dimensional input gets a zero second component.
ProjectionResult project_top2(const Matrix& points);

void export_projection(const Matrix& points, const std::vector<int>& labels,
                       const std::filesystem::path& path);

} // namespace nngmix
