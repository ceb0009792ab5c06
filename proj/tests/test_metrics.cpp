#include "nngmix/metrics.hpp"

#include "nngmix/common.hpp"
#include "nngmix/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace nngmix;

TEST_SUITE("metrics") {

TEST_CASE("hand case") {
    const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> labels{0, 0, 1, 1};
    CHECK(auc_roc(scores, labels) == doctest::Approx(0.75));
}

TEST_CASE("perfect separation and inversion") {
    const std::vector<double> scores{1.0, 2.0, 3.0, 4.0};
    const std::vector<int> labels{0, 0, 1, 1};
    CHECK(auc_roc(scores, labels) == doctest::Approx(1.0));
    const std::vector<int> inverted{1, 1, 0, 0};
    CHECK(auc_roc(scores, inverted) == doctest::Approx(0.0));
}

TEST_CASE("all scores tied gives one half") {
    const std::vector<double> scores{0.5, 0.5, 0.5, 0.5};
    const std::vector<int> labels{0, 1, 0, 1};
    CHECK(auc_roc(scores, labels) == doctest::Approx(0.5));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(auc_roc(std::vector<double>{1.0}, std::vector<int>{1, 0}), DataError);
    CHECK_THROWS_AS(auc_roc(std::vector<double>{1.0, 2.0}, std::vector<int>{1, 1}),
                    DataError);
    CHECK_THROWS_AS(
        auc_roc(std::vector<double>{1.0, std::nan("")}, std::vector<int>{1, 0}),
        NumericError);
}

TEST_CASE("complement identity for tie-free scores") {
    RngStream rng(5, "auc-complement");
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 10 + rng.next_index(50);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = rng.next_uniform(); // distinct with probability 1
            labels[i] = static_cast<int>(rng.next_index(2));
        }
        labels[0] = 0;
        labels[1] = 1;
        std::vector<double> negated(n);
        for (std::size_t i = 0; i < n; ++i) {
            negated[i] = -scores[i];
        }
        CHECK(auc_roc(scores, labels) + auc_roc(negated, labels) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("invariant under strictly increasing transforms") {
    RngStream rng(6, "auc-monotone");
    std::vector<double> scores(40);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = rng.next_gaussian();
        labels[i] = static_cast<int>(rng.next_index(2));
    }
    labels[0] = 0;
    labels[1] = 1;
    std::vector<double> transformed(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        transformed[i] = std::exp(scores[i]);
    }
    CHECK(auc_roc(scores, labels) == doctest::Approx(auc_roc(transformed, labels)));
}

TEST_CASE("matches pairwise oracle on random instances with ties") {
    RngStream rng(7, "auc-oracle");
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 4 + rng.next_index(80);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            // small discrete support forces plenty of ties
            scores[i] = static_cast<double>(rng.next_index(6)) / 4.0;
            labels[i] = static_cast<int>(rng.next_index(2));
        }
        labels[0] = 0;
        labels[1] = 1;
        const double got = auc_roc(scores, labels);
        const double want = oracle::pairwise_auc(scores, labels);
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("aggregate basics") {
    const Aggregate one = aggregate({EvalResult{0.8, "fp", 1}});
    CHECK(one.mean_auc == doctest::Approx(0.8));
    CHECK(one.std_auc == 0.0);
    CHECK(one.n_seeds == 1);

    const Aggregate two =
        aggregate({EvalResult{0.7, "fp", 1}, EvalResult{0.9, "fp", 2}});
    CHECK(two.mean_auc == doctest::Approx(0.8));
    CHECK(two.std_auc == doctest::Approx(0.1414213562).epsilon(1e-6));

    std::vector<EvalResult> same;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        same.push_back({0.6, "fp", s});
    }
    CHECK(aggregate(same).std_auc == doctest::Approx(0.0));
}

TEST_CASE("aggregate rejects mixed fingerprints") {
    CHECK_THROWS_AS(aggregate({EvalResult{0.7, "a", 1}, EvalResult{0.9, "b", 2}}),
                    ConfigError);
    CHECK_THROWS_AS(aggregate({}), DataError);
}

} // TEST_SUITE
