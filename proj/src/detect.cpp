#include "nngmix/detect.hpp"

#include "nngmix/common.hpp"

#include <algorithm>
#include <cmath>

namespace nngmix {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Matrix stack_training(const Matrix& anomalies, const Matrix& pseudo,
                      const Matrix& unlabeled, std::vector<int>& labels) {
    Matrix positives = vstack(anomalies, pseudo);
    if (positives.empty()) {
        throw DataError("detector: no positive (anomaly) examples");
    }
    if (unlabeled.empty()) {
        throw DataError("detector: no negative (unlabeled) examples");
    }
    labels.assign(positives.rows(), 1);
    labels.resize(positives.rows() + unlabeled.rows(), 0);
    return vstack(positives, unlabeled);
}

} // namespace

std::string to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::knn_score: return "knn_score";
        case DetectorKind::logistic: return "logistic";
        case DetectorKind::sadlite: return "sadlite";
    }
    return "unknown";
}

DetectorKind detector_kind_from_string(const std::string& name) {
    for (const auto kind : {DetectorKind::knn_score, DetectorKind::logistic,
                            DetectorKind::sadlite}) {
        if (to_string(kind) == name) return kind;
    }
    throw ConfigError("unknown detector kind: '" + name + "'");
}

DetectorConfig DetectorConfig::defaults(DetectorKind kind) {
    DetectorConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case DetectorKind::knn_score:
            break;
        case DetectorKind::logistic:
            cfg.learning_rate = 0.1;
            cfg.epochs = 300;
            cfg.l2 = 1e-4;
            break;
        case DetectorKind::sadlite:
            cfg.learning_rate = 0.01;
            cfg.epochs = 100;
            break;
    }
    return cfg;
}

void DetectorConfig::validate() const {
    if (kind == DetectorKind::knn_score) {
        if (k_score == 0) throw ConfigError("detector: k_score must be positive");
        return;
    }
    if (epochs < 1) throw ConfigError("detector: epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("detector: learning_rate must be positive");
    if (l2 < 0.0) throw ConfigError("detector: l2 must be nonnegative");
    if (kind == DetectorKind::sadlite && !(eps > 0.0)) {
        throw ConfigError("detector: eps must be positive");
    }
}

KnnScoreModel::KnnScoreModel(Matrix reference, std::size_t k_score)
    : index_(std::move(reference)), k_(k_score) {
    if (k_ == 0 || k_ > index_.size()) {
        throw DataError("knn_score: reference pool has " +
                        std::to_string(index_.size()) + " rows, need at least k_score=" +
                        std::to_string(k_));
    }
}

double KnnScoreModel::score_point(std::span<const double> x) const {
    return index_.kth_distance(x, k_);
}

std::vector<double> KnnScoreModel::score(const Matrix& points) const {
    std::vector<double> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        out[i] = score_point(points.row(i));
    }
    return out;
}

nlohmann::json KnnScoreModel::to_json() const {
    return {{"kind", "knn_score"}, {"k_score", k_}, {"reference_rows", index_.size()}};
}

LogisticModel::LogisticModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {}

std::vector<double> LogisticModel::score(const Matrix& points) const {
    if (points.cols() != weights_.size()) {
        throw DataError("logistic: dimension mismatch");
    }
    std::vector<double> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        out[i] = dot(points.row(i), weights_) + bias_;
    }
    return out;
}

nlohmann::json LogisticModel::to_json() const {
    return {{"kind", "logistic"}, {"weights", weights_}, {"bias", bias_}};
}

SadLiteModel::SadLiteModel(Matrix weight, std::vector<double> center, double eps)
    : weight_(std::move(weight)), center_(std::move(center)), eps_(eps) {}

double SadLiteModel::score_point(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weight_.rows(); ++i) {
        const double zi = dot(weight_.row(i), x) - center_[i];
        s += zi * zi;
    }
    return s;
}

std::vector<double> SadLiteModel::score(const Matrix& points) const {
    if (points.cols() != center_.size()) {
        throw DataError("sadlite: dimension mismatch");
    }
    std::vector<double> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        out[i] = score_point(points.row(i));
    }
    return out;
}

nlohmann::json SadLiteModel::to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (std::size_t i = 0; i < weight_.rows(); ++i) {
        const auto row = weight_.row(i);
        w.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"kind", "sadlite"}, {"weight", w}, {"center", center_}, {"eps", eps_}};
}

double logistic_loss(const Matrix& x, std::span<const int> y,
                     std::span<const double> w, double b, double l2) {
    const auto n = static_cast<double>(x.rows());
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double p = sigmoid(dot(x.row(i), w) + b);
        const double clamped = std::clamp(p, 1e-12, 1.0 - 1e-12);
        loss += y[i] == 1 ? -std::log(clamped) : -std::log(1.0 - clamped);
    }
    loss /= n;
    double penalty = 0.0;
    for (const double wi : w) penalty += wi * wi;
    return loss + 0.5 * l2 * penalty;
}

void logistic_gradient(const Matrix& x, std::span<const int> y,
                       std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b) {
    const auto n = static_cast<double>(x.rows());
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        const double err = sigmoid(dot(row, w) + b) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < row.size(); ++j) {
            grad_w[j] += err * row[j];
        }
        grad_b += err;
    }
    for (std::size_t j = 0; j < grad_w.size(); ++j) {
        grad_w[j] = grad_w[j] / n + l2 * w[j];
    }
    grad_b /= n;
}

double sadlite_loss(const Matrix& normals, const Matrix& anomalies, const Matrix& w,
                    std::span<const double> center, double eta, double eps) {
    const std::size_t d = center.size();
    auto embed_sq = [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double zi = dot(w.row(i), x) - center[i];
            s += zi * zi;
        }
        return s;
    };
    double loss = 0.0;
    for (std::size_t i = 0; i < normals.rows(); ++i) {
        loss += embed_sq(normals.row(i));
    }
    loss /= static_cast<double>(normals.rows());
    if (!anomalies.empty()) {
        double inv = 0.0;
        for (std::size_t i = 0; i < anomalies.rows(); ++i) {
            inv += 1.0 / (embed_sq(anomalies.row(i)) + eps);
        }
        loss += eta * inv / static_cast<double>(anomalies.rows());
    }
    return loss;
}

Matrix sadlite_gradient(const Matrix& normals, const Matrix& anomalies,
                        const Matrix& w, std::span<const double> center, double eta,
                        double eps) {
    const std::size_t d = center.size();
    Matrix grad(d, d, 0.0);
    std::vector<double> z(d);

    const double nh = static_cast<double>(normals.rows());
    for (std::size_t i = 0; i < normals.rows(); ++i) {
        const auto x = normals.row(i);
        for (std::size_t r = 0; r < d; ++r) {
            z[r] = dot(w.row(r), x) - center[r];
        }
        for (std::size_t r = 0; r < d; ++r) {
            const double coef = 2.0 * z[r] / nh;
            for (std::size_t c = 0; c < d; ++c) {
                grad(r, c) += coef * x[c];
            }
        }
    }

    if (!anomalies.empty()) {
        const double na = static_cast<double>(anomalies.rows());
        for (std::size_t i = 0; i < anomalies.rows(); ++i) {
            const auto x = anomalies.row(i);
            double sq = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                z[r] = dot(w.row(r), x) - center[r];
                sq += z[r] * z[r];
            }
            const double denom = (sq + eps) * (sq + eps);
            for (std::size_t r = 0; r < d; ++r) {
                const double coef = -eta * 2.0 * z[r] / (denom * na);
                for (std::size_t c = 0; c < d; ++c) {
                    grad(r, c) += coef * x[c];
                }
            }
        }
    }
    return grad;
}

KnnScoreModel fit_knn_score(const Matrix& unlabeled, std::size_t k_score) {
    if (unlabeled.empty()) {
        throw DataError("fit_knn_score: unlabeled pool is empty");
    }
    return KnnScoreModel(unlabeled, k_score);
}

LogisticModel fit_logistic(const Matrix& anomalies, const Matrix& pseudo,
                           const Matrix& unlabeled, const DetectorConfig& config,
                           RngStream& rng, std::vector<double>* loss_trace) {
    (void)rng; // deterministic zero initialization; kept for interface symmetry
    config.validate();
    std::vector<int> y;
    const Matrix x = stack_training(anomalies, pseudo, unlabeled, y);
    const std::size_t d = x.cols();

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> grad_w(d);
    double grad_b = 0.0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (loss_trace) {
            loss_trace->push_back(logistic_loss(x, y, w, b, config.l2));
        }
        logistic_gradient(x, y, w, b, config.l2, grad_w, grad_b);
        for (std::size_t j = 0; j < d; ++j) {
            w[j] -= config.learning_rate * grad_w[j];
        }
        b -= config.learning_rate * grad_b;
    }
    if (loss_trace) {
        loss_trace->push_back(logistic_loss(x, y, w, b, config.l2));
    }
    return LogisticModel(std::move(w), b);
}

SadLiteModel fit_sadlite(const Matrix& anomalies, const Matrix& pseudo,
                         const Matrix& unlabeled, const DetectorConfig& config,
                         RngStream& rng, std::vector<double>* loss_trace) {
    (void)rng; // deterministic identity initialization
    config.validate();
    if (unlabeled.rows() < 2) {
        throw DataError("fit_sadlite: need at least 2 unlabeled rows");
    }
    const Matrix anomaly_block = vstack(anomalies, pseudo);
    const std::size_t d = unlabeled.cols();

    Matrix w = Matrix::identity(d);
    const std::vector<double> center = column_means(unlabeled); // frozen

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss =
            sadlite_loss(unlabeled, anomaly_block, w, center, config.eta, config.eps);
        if (!std::isfinite(loss)) {
            throw NumericError("fit_sadlite: non-finite loss at epoch " +
                               std::to_string(epoch));
        }
        if (loss_trace) {
            loss_trace->push_back(loss);
        }
        const Matrix grad =
            sadlite_gradient(unlabeled, anomaly_block, w, center, config.eta, config.eps);
        for (std::size_t i = 0; i < w.data().size(); ++i) {
            w.data()[i] -= config.learning_rate * grad.data()[i];
        }
    }
    const double final_loss =
        sadlite_loss(unlabeled, anomaly_block, w, center, config.eta, config.eps);
    if (!std::isfinite(final_loss)) {
        throw NumericError("fit_sadlite: non-finite loss at epoch " +
                           std::to_string(config.epochs));
    }
    if (loss_trace) {
        loss_trace->push_back(final_loss);
    }
    return SadLiteModel(std::move(w), center, config.eps);
}

std::unique_ptr<AnomalyScorer> fit_detector(const DetectorConfig& config,
                                            const Matrix& anomalies,
                                            const Matrix& pseudo,
                                            const Matrix& unlabeled, RngStream& rng) {
    config.validate();
    switch (config.kind) {
        case DetectorKind::knn_score:
            return std::make_unique<KnnScoreModel>(fit_knn_score(unlabeled, config.k_score));
        case DetectorKind::logistic:
            return std::make_unique<LogisticModel>(
                fit_logistic(anomalies, pseudo, unlabeled, config, rng));
        case DetectorKind::sadlite:
            return std::make_unique<SadLiteModel>(
                fit_sadlite(anomalies, pseudo, unlabeled, config, rng));
    }
    throw ConfigError("fit_detector: unhandled detector kind");
}

} // namespace nngmix
