#pragma once

#include "nngmix/knn.hpp"
#include "nngmix/matrix.hpp"
#include "nngmix/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nngmix {

enum class DetectorKind {
    knn_score, // unsupervised reference: distance to the k-th neighbor in H
    logistic,  // supervised linear logit, full-batch gradient descent
    sadlite,   // linear embedding pulled toward a frozen center, anomalies
               // pushed away through an inverse-distance term
};

std::string to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(const std::string& name);

struct DetectorConfig {
    DetectorKind kind = DetectorKind::logistic;
    std::size_t k_score = 10;   // knn_score
    double learning_rate = 0.1; // logistic, sadlite
    int epochs = 300;
    double l2 = 1e-4;           // logistic weight penalty
    double eta = 1.0;           // sadlite anomaly-term weight
    double eps = 1e-3;          // sadlite inverse-distance guard

    static DetectorConfig defaults(DetectorKind kind);
    void validate() const; // throws ConfigError
};

/// Common scorer interface: one score per row, larger = more anomalous.
class AnomalyScorer {
public:
    virtual ~AnomalyScorer() = default;
    virtual std::vector<double> score(const Matrix& points) const = 0;
    virtual std::size_t dim() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

class KnnScoreModel final : public AnomalyScorer {
public:
    KnnScoreModel(Matrix reference, std::size_t k_score);
    std::vector<double> score(const Matrix& points) const override;
    double score_point(std::span<const double> x) const;
    std::size_t dim() const override { return index_.dim(); }
    nlohmann::json to_json() const override;

private:
    NeighborIndex index_;
    std::size_t k_;
};

class LogisticModel final : public AnomalyScorer {
public:
    LogisticModel(std::vector<double> weights, double bias);
    std::vector<double> score(const Matrix& points) const override; // logit value
    std::size_t dim() const override { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    nlohmann::json to_json() const override;

private:
    std::vector<double> weights_;
    double bias_;
};

class SadLiteModel final : public AnomalyScorer {
public:
    SadLiteModel(Matrix weight, std::vector<double> center, double eps);
    std::vector<double> score(const Matrix& points) const override; // ||Wx - c||^2
    double score_point(std::span<const double> x) const;
    std::size_t dim() const override { return center_.size(); }
    const Matrix& weight() const { return weight_; }
    const std::vector<double>& center() const { return center_; }
    nlohmann::json to_json() const override;

private:
    Matrix weight_;
    std::vector<double> center_;
    double eps_;
};

/// Cross-entropy with 0.5 * l2 * ||w||^2; used by training and the
/// finite-difference tests.
double logistic_loss(const Matrix& x, std::span<const int> y,
                     std::span<const double> w, double b, double l2);
void logistic_gradient(const Matrix& x, std::span<const int> y,
                       std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b);

/// mean_H ||Wx - c||^2 + eta * mean_A 1 / (||Wx - c||^2 + eps); the
/// anomaly term is zero when there are no anomaly rows.
double sadlite_loss(const Matrix& normals, const Matrix& anomalies, const Matrix& w,
                    std::span<const double> center, double eta, double eps);
Matrix sadlite_gradient(const Matrix& normals, const Matrix& anomalies,
                        const Matrix& w, std::span<const double> center, double eta,
                        double eps);

/// Unsupervised baseline over the unlabeled pool; anomalies and
/// pseudo-anomalies are ignored by construction.
KnnScoreModel fit_knn_score(const Matrix& unlabeled, std::size_t k_score);

/// Full-batch gradient descent from zero weights on positives = A ∪ D,
/// negatives = H. `loss_trace`, when given, receives the per-epoch loss.
LogisticModel fit_logistic(const Matrix& anomalies, const Matrix& pseudo,
                           const Matrix& unlabeled, const DetectorConfig& config,
                           RngStream& rng, std::vector<double>* loss_trace = nullptr);

/// Identity-initialized linear embedding; the center is the mean of H
/// under the initial embedding and stays frozen. Throws NumericError with
/// the epoch number if the loss leaves the finite range.
SadLiteModel fit_sadlite(const Matrix& anomalies, const Matrix& pseudo,
                         const Matrix& unlabeled, const DetectorConfig& config,
                         RngStream& rng, std::vector<double>* loss_trace = nullptr);

std::unique_ptr<AnomalyScorer> fit_detector(const DetectorConfig& config,
                                            const Matrix& anomalies,
                                            const Matrix& pseudo,
                                            const Matrix& unlabeled, RngStream& rng);

} // namespace nngmix
