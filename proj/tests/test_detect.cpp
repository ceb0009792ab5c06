#include "nngmix/detect.hpp"

#include "nngmix/common.hpp"
#include "nngmix/dataset.hpp"
#include "nngmix/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace nngmix;

namespace {

Matrix grid_points() {
    Matrix m(0, 2);
    for (int x = 0; x < 5; ++x) {
        for (int y = 0; y < 5; ++y) {
            const double row[2] = {static_cast<double>(x), static_cast<double>(y)};
            m.append_row(row);
        }
    }
    return m;
}

Matrix gaussian_blob(std::size_t n, std::size_t d, double cx, double stddev,
                     RngStream& rng) {
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = m.row(i);
        rng.fill_gaussian(row, stddev);
        row[0] += cx;
    }
    return m;
}

} // namespace

TEST_SUITE("detect") {

TEST_CASE("knn score is monotone in distance from the pool") {
    const Matrix h = grid_points();
    const KnnScoreModel model = fit_knn_score(h, 3);
    const Matrix queries = Matrix::from_rows({{2.0, 2.0}, {50.0, 50.0}});
    const auto scores = model.score(queries);
    CHECK(scores[1] > scores[0]);
    // a far point outscores every in-grid point
    const auto in_grid = model.score(h);
    for (const double s : in_grid) {
        CHECK(scores[1] > s);
    }
}

TEST_CASE("knn score of a stored point with k = 1 is zero") {
    const Matrix h = grid_points();
    const KnnScoreModel model = fit_knn_score(h, 1);
    const Matrix query = Matrix::from_rows({{1.0, 3.0}});
    CHECK(model.score(query)[0] == 0.0);
}

TEST_CASE("knn score matches the exhaustive oracle") {
    RngStream rng(31, "knn-score");
    const Matrix h = gaussian_blob(100, 4, 0.0, 1.0, rng);
    const KnnScoreModel model = fit_knn_score(h, 10);
    for (int q = 0; q < 20; ++q) {
        std::vector<double> query(4);
        for (auto& v : query) {
            v = rng.next_gaussian();
        }
        const auto want = oracle::full_scan_knn(h, query, 10, false);
        CHECK(model.score_point(query) == doctest::Approx(want.back().second));
    }
}

TEST_CASE("knn score rejects a pool smaller than k_score") {
    const Matrix h = Matrix::from_rows({{0.0}, {1.0}});
    CHECK_THROWS_AS(fit_knn_score(h, 3), DataError);
}

TEST_CASE("logistic reaches AUC 1 on separable classes") {
    RngStream rng(32, "logistic-sep");
    const Matrix pos = gaussian_blob(30, 2, 6.0, 0.5, rng);
    const Matrix neg = gaussian_blob(60, 2, 0.0, 0.5, rng);
    RngStream fit_rng(1, "fit");
    const LogisticModel model = fit_logistic(pos, Matrix{}, neg,
                                             DetectorConfig::defaults(DetectorKind::logistic),
                                             fit_rng);
    const Matrix all = vstack(pos, neg);
    std::vector<int> labels(pos.rows(), 1);
    labels.resize(all.rows(), 0);
    CHECK(auc_roc(model.score(all), labels) == doctest::Approx(1.0));
}

TEST_CASE("logistic rejects zero epochs and single-class input") {
    RngStream rng(33, "logistic-bad");
    const Matrix pos = gaussian_blob(5, 2, 1.0, 0.5, rng);
    const Matrix neg = gaussian_blob(5, 2, 0.0, 0.5, rng);
    DetectorConfig cfg = DetectorConfig::defaults(DetectorKind::logistic);
    cfg.epochs = 0;
    RngStream fit_rng(1, "fit");
    CHECK_THROWS_AS(fit_logistic(pos, Matrix{}, neg, cfg, fit_rng), ConfigError);
    cfg = DetectorConfig::defaults(DetectorKind::logistic);
    CHECK_THROWS_AS(fit_logistic(Matrix{}, Matrix{}, neg, cfg, fit_rng), DataError);
    CHECK_THROWS_AS(fit_logistic(pos, Matrix{}, Matrix{}, cfg, fit_rng), DataError);
}

TEST_CASE("logistic loss is non-increasing at the default learning rate") {
    RngStream rng(34, "logistic-loss");
    const Matrix pos = gaussian_blob(20, 3, 2.0, 1.0, rng);
    const Matrix neg = gaussian_blob(40, 3, 0.0, 1.0, rng);
    std::vector<double> trace;
    RngStream fit_rng(1, "fit");
    fit_logistic(pos, Matrix{}, neg, DetectorConfig::defaults(DetectorKind::logistic),
                 fit_rng, &trace);
    REQUIRE(trace.size() > 2);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
}

TEST_CASE("logistic analytic gradient matches finite differences") {
    RngStream rng(35, "logistic-grad");
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 1 + rng.next_index(4);
        const std::size_t n = 6 + rng.next_index(10);
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                x(i, j) = rng.next_gaussian();
            }
            y[i] = static_cast<int>(rng.next_index(2));
        }
        std::vector<double> params(d + 1);
        for (auto& p : params) {
            p = 0.5 * rng.next_gaussian();
        }
        const double l2 = 0.1;

        std::vector<double> grad_w(d);
        double grad_b = 0.0;
        logistic_gradient(x, y, std::span<const double>(params).first(d),
                          params[d], l2, grad_w, grad_b);
        std::vector<double> analytic = grad_w;
        analytic.push_back(grad_b);

        const auto fd = oracle::finite_difference(
            [&](const std::vector<double>& p) {
                return logistic_loss(x, y, std::span<const double>(p).first(d), p[d], l2);
            },
            params);
        CHECK(oracle::relative_error(analytic, fd) < 1e-5);
    }
}

TEST_CASE("sadlite identity model scores by distance from the center") {
    // anomalies at distance 10, normals within 1: ordering holds before
    // any training
    const SadLiteModel model(Matrix::identity(2), {0.0, 0.0}, 1e-3);
    const Matrix anomalies = Matrix::from_rows({{10.0, 0.0}, {0.0, -10.0}});
    const Matrix normals = Matrix::from_rows({{0.5, 0.2}, {-0.7, 0.1}, {0.0, 0.9}});
    const auto anomaly_scores = model.score(anomalies);
    const auto normal_scores = model.score(normals);
    for (const double a : anomaly_scores) {
        for (const double n : normal_scores) {
            CHECK(a > n);
        }
    }
}

TEST_CASE("sadlite with eta zero compacts the unlabeled pool") {
    RngStream rng(36, "sadlite-compact");
    const Matrix h = gaussian_blob(60, 3, 1.0, 1.0, rng);
    DetectorConfig cfg = DetectorConfig::defaults(DetectorKind::sadlite);
    cfg.eta = 0.0;
    RngStream fit_rng(1, "fit");
    const SadLiteModel model = fit_sadlite(Matrix{}, Matrix{}, h, cfg, fit_rng);
    const SadLiteModel initial(Matrix::identity(3), column_means(h), cfg.eps);
    const auto after = model.score(h);
    const auto before = initial.score(h);
    CHECK(oracle::mean(after) < oracle::mean(before));
}

TEST_CASE("sadlite loss is non-increasing at the default learning rate") {
    RngStream rng(37, "sadlite-loss");
    const Matrix h = gaussian_blob(50, 2, 0.0, 1.0, rng);
    const Matrix a = gaussian_blob(5, 2, 4.0, 0.5, rng);
    std::vector<double> trace;
    RngStream fit_rng(1, "fit");
    fit_sadlite(a, Matrix{}, h, DetectorConfig::defaults(DetectorKind::sadlite),
                fit_rng, &trace);
    REQUIRE(trace.size() > 2);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
}

TEST_CASE("sadlite analytic gradient matches finite differences") {
    RngStream rng(38, "sadlite-grad");
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 2 + rng.next_index(2);
        Matrix h(8, d);
        Matrix a(3, d);
        for (auto& v : h.data()) v = rng.next_gaussian();
        for (auto& v : a.data()) v = 2.0 + rng.next_gaussian();
        std::vector<double> center(d);
        for (auto& c : center) c = 0.2 * rng.next_gaussian();
        const double eta = 1.0;
        const double eps = 1e-2;

        std::vector<double> params(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                params[i * d + j] = (i == j ? 1.0 : 0.0) + 0.3 * rng.next_gaussian();
            }
        }
        auto unpack = [&](const std::vector<double>& p) {
            Matrix w(d, d);
            w.data() = p;
            return w;
        };

        const Matrix analytic_m =
            sadlite_gradient(h, a, unpack(params), center, eta, eps);
        const auto fd = oracle::finite_difference(
            [&](const std::vector<double>& p) {
                return sadlite_loss(h, a, unpack(p), center, eta, eps);
            },
            params);
        CHECK(oracle::relative_error(analytic_m.data(), fd) < 1e-5);
    }
}

TEST_CASE("sadlite reports the epoch when the loss diverges") {
    RngStream rng(39, "sadlite-diverge");
    const Matrix h = gaussian_blob(20, 2, 0.0, 1.0, rng);
    const Matrix a = gaussian_blob(5, 2, 3.0, 0.5, rng);
    DetectorConfig cfg = DetectorConfig::defaults(DetectorKind::sadlite);
    cfg.learning_rate = 1e9; // guaranteed blow-up
    cfg.epochs = 50;
    RngStream fit_rng(1, "fit");
    CHECK_THROWS_WITH_AS(fit_sadlite(a, Matrix{}, h, cfg, fit_rng),
                         doctest::Contains("epoch"), NumericError);
}

TEST_CASE("score orientation on a planted outlier for every detector") {
    RngStream rng(40, "orientation");
    const Matrix h = gaussian_blob(80, 2, 0.0, 1.0, rng);
    const Matrix a = gaussian_blob(6, 2, 5.0, 0.3, rng);
    const Matrix test = Matrix::from_rows({{0.1, -0.2}, {5.0, 0.0}});
    for (const auto kind :
         {DetectorKind::knn_score, DetectorKind::logistic, DetectorKind::sadlite}) {
        RngStream fit_rng(1, "fit");
        const auto model =
            fit_detector(DetectorConfig::defaults(kind), a, Matrix{}, h, fit_rng);
        const auto scores = model->score(test);
        CHECK(scores[1] > scores[0]); // outlier outscores the inlier
    }
}

TEST_CASE("AUC of detector scores is invariant under exp") {
    RngStream rng(41, "exp-invariance");
    const Matrix h = gaussian_blob(50, 2, 0.0, 1.0, rng);
    const Matrix a = gaussian_blob(5, 2, 4.0, 0.5, rng);
    const Matrix test = vstack(gaussian_blob(20, 2, 0.0, 1.0, rng),
                               gaussian_blob(10, 2, 4.0, 0.5, rng));
    std::vector<int> labels(20, 0);
    labels.resize(30, 1);
    RngStream fit_rng(1, "fit");
    const auto model = fit_detector(DetectorConfig::defaults(DetectorKind::logistic),
                                    a, Matrix{}, h, fit_rng);
    auto scores = model->score(test);
    const double base = auc_roc(scores, labels);
    for (auto& s : scores) {
        s = std::exp(s);
    }
    CHECK(auc_roc(scores, labels) == doctest::Approx(base));
}

TEST_CASE("model parameters serialize to JSON") {
    RngStream rng(42, "json");
    const Matrix h = gaussian_blob(30, 2, 0.0, 1.0, rng);
    const Matrix a = gaussian_blob(4, 2, 3.0, 0.5, rng);
    RngStream fit_rng(1, "fit");
    for (const auto kind :
         {DetectorKind::knn_score, DetectorKind::logistic, DetectorKind::sadlite}) {
        const auto model =
            fit_detector(DetectorConfig::defaults(kind), a, Matrix{}, h, fit_rng);
        const auto j = model->to_json();
        CHECK(j.contains("kind"));
        CHECK(j.at("kind").get<std::string>() == to_string(kind));
    }
}

} // TEST_SUITE
