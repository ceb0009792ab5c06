#include "nngmix/dataset.hpp"

#include "nngmix/common.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

using namespace nngmix;

namespace {

std::filesystem::path temp_csv(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::vector<ClusterSpec> twin_cluster_spec() {
    return {{{0.0, 0.0}, 1.0, 500, 0},
            {{-10.0, 0.0}, 0.5, 25, 1},
            {{10.0, 0.0}, 0.5, 25, 1}};
}

} // namespace

TEST_SUITE("dataset") {

TEST_CASE("load_csv echoes a trivial file") {
    const auto path = temp_csv("nngmix_trivial.csv",
                               "f1,f2,label\n0,0,0\n1,1,1\n2,2,0\n");
    const Dataset ds = load_csv(path);
    CHECK(ds.n() == 3);
    CHECK(ds.dim() == 2);
    CHECK(ds.labels == std::vector<int>{0, 1, 0});
    CHECK(ds.features(1, 0) == 1.0);
    CHECK(ds.feature_names == std::vector<std::string>{"f1", "f2"});
}

TEST_CASE("load_csv rejects a label outside {0,1} and names the row") {
    const auto path = temp_csv("nngmix_badlabel.csv",
                               "f1,label\n0.5,0\n0.7,2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(load_csv(path)),
                         doctest::Contains("line 3"), DataError);
}

TEST_CASE("load_csv reports non-numeric cells by row and column") {
    const auto path = temp_csv("nngmix_badcell.csv",
                               "f1,f2,label\n0.5,oops,0\n");
    try {
        load_csv(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("f2") != std::string::npos);
    }
}

TEST_CASE("load_csv errors: missing file, no features") {
    CHECK_THROWS_AS(static_cast<void>(load_csv("/nonexistent/nngmix.csv")), DataError);
    const auto path = temp_csv("nngmix_nofeat.csv", "label\n0\n1\n");
    CHECK_THROWS_AS(static_cast<void>(load_csv(path)), DataError);
}

TEST_CASE("wide export keeps d = columns minus one") {
    std::string header;
    std::string row;
    for (int i = 1; i <= 46; ++i) {
        header += "c" + std::to_string(i) + ",";
        row += std::to_string(i) + ",";
    }
    header += "label\n";
    const auto path = temp_csv("nngmix_wide.csv",
                               header + row + "0\n" + row + "1\n");
    const Dataset ds = load_csv(path);
    CHECK(ds.dim() == 46);
    CHECK(ds.n() == 2);
}

TEST_CASE("csv round trip") {
    Dataset ds;
    ds.name = "roundtrip";
    ds.feature_names = {"a", "b"};
    ds.features = Matrix::from_rows({{0.123456789012345, -3.5}, {1e-7, 42.0}});
    ds.labels = {1, 0};
    const auto path = std::filesystem::temp_directory_path() / "nngmix_rt.csv";
    write_csv(ds, path);
    const Dataset back = load_csv(path);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
}

TEST_CASE("standardize uses the n-1 denominator") {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.features = Matrix::from_rows({{1.0}, {3.0}});
    ds.labels = {0, 1};
    const auto [out, rec] = standardize(ds);
    CHECK(rec.mean[0] == doctest::Approx(2.0));
    CHECK(rec.scale[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(out.features(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(out.features(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("constant columns are centered to zero") {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.features = Matrix::from_rows({{5.0}, {5.0}, {5.0}});
    ds.labels = {0, 1, 0};
    const auto [out, rec] = standardize(ds);
    CHECK(rec.degenerate[0]);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(out.features(i, 0) == 0.0);
    }
}

TEST_CASE("standardize twice is the identity") {
    Dataset ds;
    ds.feature_names = {"x", "y"};
    ds.features = Matrix::from_rows({{1.0, 10.0}, {2.0, 30.0}, {4.0, -5.0}, {8.0, 2.0}});
    ds.labels = {0, 1, 0, 1};
    const auto [once, rec1] = standardize(ds);
    const auto [twice, rec2] = standardize(once);
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            CHECK(std::abs(twice.features(i, j) - once.features(i, j)) < 1e-10);
        }
    }
}

TEST_CASE("test data reuses train statistics") {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.features = Matrix::from_rows({{0.0}, {10.0}});
    ds.labels = {0, 1};
    const auto [unused, rec] = standardize(ds);
    (void)unused;
    const Matrix test = Matrix::from_rows({{5.0}});
    const Matrix mapped = apply_standardize(rec, test);
    CHECK(mapped(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("synthetic zero-variance cluster gives identical rows") {
    const Dataset ds = make_synthetic_clusters({{{1.0, 2.0}, 0.0, 3, 0}}, 9);
    CHECK(ds.n() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ds.features(i, 0) == 1.0);
        CHECK(ds.features(i, 1) == 2.0);
    }
}

TEST_CASE("twin-anomaly-cluster layout has the declared shape") {
    const Dataset ds = make_synthetic_clusters(twin_cluster_spec(), 4);
    CHECK(ds.n() == 550);
    CHECK(ds.count_label(1) == 50);
    CHECK(ds.dim() == 2);
}

TEST_CASE("synthetic generation is deterministic per seed") {
    const Dataset a = make_synthetic_clusters(twin_cluster_spec(), 123);
    const Dataset b = make_synthetic_clusters(twin_cluster_spec(), 123);
    const Dataset c = make_synthetic_clusters(twin_cluster_spec(), 124);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.features != c.features);
}

TEST_CASE("synthetic spec validation") {
    CHECK_THROWS_AS(make_synthetic_clusters({}, 1), DataError);
    CHECK_THROWS_AS(make_synthetic_clusters({{{1.0}, -0.1, 3, 0}}, 1), DataError);
    CHECK_THROWS_AS(make_synthetic_clusters({{{1.0}, 1.0, 0, 0}}, 1), DataError);
}

TEST_CASE("stratified split on the 8/2 example") {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.features = Matrix(10, 1, 0.0);
    for (std::size_t i = 0; i < 10; ++i) {
        ds.features(i, 0) = static_cast<double>(i);
    }
    ds.labels = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
    const auto [train, test] = split_train_test(ds, 0.7, 5);
    CHECK(train.n() == 7);
    CHECK(test.n() == 3);
    CHECK(train.count_label(1) == 1);
    CHECK(test.count_label(1) == 1);
}

TEST_CASE("split is deterministic per seed and differs across seeds") {
    const Dataset ds = make_synthetic_clusters(twin_cluster_spec(), 2);
    const auto [tr1, te1] = split_train_test(ds, 0.7, 11);
    const auto [tr2, te2] = split_train_test(ds, 0.7, 11);
    const auto [tr3, te3] = split_train_test(ds, 0.7, 12);
    CHECK(tr1.features == tr2.features);
    CHECK(tr1.features != tr3.features);
    CHECK(tr3.count_label(1) == tr1.count_label(1));
    CHECK(tr1.n() + te1.n() == ds.n());
}

TEST_CASE("70/30 proportions on a larger dataset") {
    const Dataset ds = make_synthetic_clusters(twin_cluster_spec(), 3);
    const auto [train, test] = split_train_test(ds, 0.7, 1);
    CHECK(train.n() == 385);
    CHECK(test.n() == 165);
    CHECK(train.count_label(1) == 35);
    CHECK(test.count_label(1) == 15);
}

TEST_CASE("a class below two members cannot be stratified") {
    Dataset ds;
    ds.feature_names = {"x"};
    ds.features = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
    ds.labels = {0, 0, 1};
    CHECK_THROWS_AS(split_train_test(ds, 0.7, 1), DataError);
}

TEST_CASE("carve on the 100/900 example") {
    Dataset train;
    train.feature_names = {"x"};
    train.features = Matrix(1000, 1, 0.0);
    train.labels.assign(1000, 0);
    for (std::size_t i = 0; i < 100; ++i) {
        train.labels[i] = 1;
        train.features(i, 0) = 100.0 + static_cast<double>(i);
    }
    SUBCASE("gamma 1 keeps every residual anomaly in the pool") {
        const SplitPlan plan = carve_split(train, 0.01, 1.0, 7);
        CHECK(plan.labeled_anomalies.rows() == 1);
        CHECK(plan.unlabeled_pool.rows() == 999);
        CHECK(plan.discarded_rows.empty());
    }
    SUBCASE("gamma 0 discards every residual anomaly") {
        const SplitPlan plan = carve_split(train, 0.01, 0.0, 7);
        CHECK(plan.labeled_anomalies.rows() == 1);
        CHECK(plan.unlabeled_pool.rows() == 900);
        CHECK(plan.discarded_rows.size() == 99);
    }
    SUBCASE("rho 1 labels everything") {
        const SplitPlan plan = carve_split(train, 1.0, 0.3, 7);
        CHECK(plan.labeled_anomalies.rows() == 100);
        CHECK(plan.unlabeled_pool.rows() == 900);
    }
    SUBCASE("intermediate gamma injects round(gamma * residual)") {
        const SplitPlan plan = carve_split(train, 0.01, 0.2, 7);
        CHECK(plan.unlabeled_pool.rows() == 900 + 20); // round(0.2 * 99) = 20
    }
}

TEST_CASE("carve rounds the labeled count up") {
    Dataset train;
    train.feature_names = {"x"};
    train.features = Matrix(40, 1, 0.0);
    train.labels.assign(40, 0);
    for (std::size_t i = 0; i < 7; ++i) {
        train.labels[i] = 1;
    }
    const SplitPlan plan = carve_split(train, 0.01, 1.0, 3);
    CHECK(plan.labeled_anomalies.rows() == 1); // ceil(0.07) with a floor of 1
    const SplitPlan plan2 = carve_split(train, 0.3, 1.0, 3);
    CHECK(plan2.labeled_anomalies.rows() == 3); // ceil(2.1)
}

TEST_CASE("carve partitions the training rows") {
    const Dataset ds = make_synthetic_clusters(twin_cluster_spec(), 6);
    const auto [train, test] = split_train_test(ds, 0.7, 6);
    const SplitPlan plan = carve_split(train, 0.1, 0.4, 6);
    std::set<std::size_t> seen;
    for (const auto& rows :
         {plan.anomaly_rows, plan.pool_rows, plan.discarded_rows}) {
        for (const auto r : rows) {
            CHECK(seen.insert(r).second); // no row appears twice
        }
    }
    CHECK(seen.size() == train.n());
}

TEST_CASE("carve rejects invalid arguments") {
    Dataset train;
    train.feature_names = {"x"};
    train.features = Matrix::from_rows({{0.0}, {1.0}});
    train.labels = {0, 0};
    CHECK_THROWS_AS(carve_split(train, 0.1, 1.0, 1), DataError); // no anomalies
    train.labels = {0, 1};
    CHECK_THROWS_AS(carve_split(train, 0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(carve_split(train, 0.5, 1.5, 1), ConfigError);
}

} // TEST_SUITE
