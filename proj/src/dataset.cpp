#include "nngmix/dataset.hpp"

#include "nngmix/common.hpp"
#include "nngmix/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nngmix {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

double parse_double_cell(const std::string& cell, std::size_t file_line,
                         const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || cell.empty() || !std::isfinite(value)) {
        throw DataError("non-numeric cell '" + cell + "' at line " +
                        std::to_string(file_line) + ", column '" + column + "'");
    }
    return value;
}

/// Fisher-Yates shuffle driven by a dedicated stream.
template <typename T>
void shuffle_indices(std::vector<T>& items, RngStream& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = rng.next_index(i);
        std::swap(items[i - 1], items[j]);
    }
}

Dataset take_rows(const Dataset& source, const std::vector<std::size_t>& rows,
                  const std::string& name) {
    Dataset out;
    out.name = name;
    out.feature_names = source.feature_names;
    out.features = Matrix(0, 0);
    out.labels.reserve(rows.size());
    for (const auto r : rows) {
        out.features.append_row(source.features.row(r));
        out.labels.push_back(source.labels[r]);
    }
    return out;
}

} // namespace

std::size_t Dataset::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), label));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty file: " + path.string());
    }
    const auto header = split_line(line);

    std::size_t label_idx = header.size();
    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) {
            label_idx = i;
        } else {
            feature_names.push_back(header[i]);
        }
    }
    if (label_idx == header.size()) {
        throw DataError("label column '" + label_column + "' not found in " +
                        path.string());
    }
    if (feature_names.empty()) {
        throw DataError("no feature columns in " + path.string());
    }

    Dataset ds;
    ds.name = path.stem().string();
    ds.feature_names = feature_names;
    ds.features = Matrix(0, 0);

    std::vector<double> row(feature_names.size());
    std::size_t file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(file_line) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        std::size_t f = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) continue;
            row[f++] = parse_double_cell(cells[i], file_line, header[i]);
        }
        const double label_value =
            parse_double_cell(cells[label_idx], file_line, label_column);
        if (label_value != 0.0 && label_value != 1.0) {
            throw DataError("label value '" + cells[label_idx] + "' at line " +
                            std::to_string(file_line) + " is outside {0, 1}");
        }
        ds.features.append_row(row);
        ds.labels.push_back(label_value == 1.0 ? 1 : 0);
    }
    if (ds.n() == 0) {
        throw DataError("no data rows in " + path.string());
    }
    return ds;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    for (const auto& name : dataset.feature_names) {
        out << name << ',';
    }
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < dataset.n(); ++i) {
        const auto row = dataset.features.row(i);
        for (const double v : row) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << dataset.labels[i] << '\n';
    }
}

std::pair<Dataset, StandardizeRecord> standardize(const Dataset& dataset) {
    const std::size_t n = dataset.n();
    const std::size_t d = dataset.dim();
    if (n < 2) {
        throw DataError("standardize: need at least 2 rows");
    }

    StandardizeRecord rec;
    rec.mean.assign(d, 0.0);
    rec.scale.assign(d, 1.0);
    rec.degenerate.assign(d, false);

    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            m += dataset.features(i, j);
        }
        m /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = dataset.features(i, j) - m;
            ss += dv * dv;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        rec.mean[j] = m;
        if (sd < 1e-12) {
            rec.degenerate[j] = true;
            rec.scale[j] = 1.0;
        } else {
            rec.scale[j] = sd;
        }
    }

    Dataset out = dataset;
    out.features = apply_standardize(rec, dataset.features);
    return {std::move(out), std::move(rec)};
}

Matrix apply_standardize(const StandardizeRecord& record, const Matrix& features) {
    if (features.cols() != record.mean.size()) {
        throw DataError("apply_standardize: dimension mismatch");
    }
    Matrix out = features;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] = (row[j] - record.mean[j]) / record.scale[j];
        }
    }
    return out;
}

Dataset make_synthetic_clusters(const std::vector<ClusterSpec>& spec,
                                std::uint64_t seed) {
    if (spec.empty()) {
        throw DataError("make_synthetic_clusters: empty spec");
    }
    const std::size_t d = spec.front().center.size();
    if (d == 0) {
        throw DataError("make_synthetic_clusters: zero-dimensional centers");
    }
    for (const auto& c : spec) {
        if (c.center.size() != d) {
            throw DataError("make_synthetic_clusters: centers differ in dimension");
        }
        if (c.count == 0) {
            throw DataError("make_synthetic_clusters: cluster count must be >= 1");
        }
        if (c.stddev < 0.0) {
            throw DataError("make_synthetic_clusters: negative stddev");
        }
        if (c.label != 0 && c.label != 1) {
            throw DataError("make_synthetic_clusters: label must be 0 or 1");
        }
    }

    RngStream draw(seed, "make_synthetic_clusters/draw");
    Dataset ds;
    ds.name = "synthetic";
    for (std::size_t j = 0; j < d; ++j) {
        ds.feature_names.push_back("f" + std::to_string(j + 1));
    }
    ds.features = Matrix(0, 0);

    std::vector<double> row(d);
    for (const auto& cluster : spec) {
        for (std::size_t i = 0; i < cluster.count; ++i) {
            draw.fill_gaussian(row, cluster.stddev);
            for (std::size_t j = 0; j < d; ++j) {
                row[j] += cluster.center[j];
            }
            ds.features.append_row(row);
            ds.labels.push_back(cluster.label);
        }
    }

    std::vector<std::size_t> perm(ds.n());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    RngStream shuffle(seed, "make_synthetic_clusters/shuffle");
    shuffle_indices(perm, shuffle);
    return take_rows(ds, perm, ds.name);
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset,
                                             double train_fraction,
                                             std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("split_train_test: train_fraction must be in (0, 1)");
    }

    RngStream rng(seed, "split_train_test");
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (const int cls : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < dataset.n(); ++i) {
            if (dataset.labels[i] == cls) idx.push_back(i);
        }
        if (idx.size() < 2) {
            throw DataError("split_train_test: class " + std::to_string(cls) +
                            " has fewer than 2 members and cannot be stratified");
        }
        shuffle_indices(idx, rng);
        const auto want = static_cast<std::size_t>(std::clamp<long long>(
            std::llround(train_fraction * static_cast<double>(idx.size())), 1,
            static_cast<long long>(idx.size()) - 1));
        train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + want);
        test_rows.insert(test_rows.end(), idx.begin() + want, idx.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {take_rows(dataset, train_rows, dataset.name + "/train"),
            take_rows(dataset, test_rows, dataset.name + "/test")};
}

SplitPlan carve_split(const Dataset& train, double rho, double gamma,
                      std::uint64_t seed) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw ConfigError("carve_split: rho must be in (0, 1]");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("carve_split: gamma must be in [0, 1]");
    }

    std::vector<std::size_t> anomalies;
    std::vector<std::size_t> normals;
    for (std::size_t i = 0; i < train.n(); ++i) {
        (train.labels[i] == 1 ? anomalies : normals).push_back(i);
    }
    if (anomalies.empty()) {
        throw DataError("carve_split: training set has no anomalies");
    }

    // ceil with a tolerance so rho * count that is an integer up to fp
    // noise (e.g. 0.01 * 100) does not round up an extra sample
    const auto n_labeled = std::min<std::size_t>(
        anomalies.size(),
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
            rho * static_cast<double>(anomalies.size()) - 1e-9))));

    RngStream pick(seed, "carve_split/anomalies");
    shuffle_indices(anomalies, pick);
    std::vector<std::size_t> labeled(anomalies.begin(), anomalies.begin() + n_labeled);
    std::vector<std::size_t> residual(anomalies.begin() + n_labeled, anomalies.end());

    RngStream pollute(seed, "carve_split/pollution");
    shuffle_indices(residual, pollute);
    const auto n_injected = static_cast<std::size_t>(
        std::llround(gamma * static_cast<double>(residual.size())));
    std::vector<std::size_t> pool = normals;
    pool.insert(pool.end(), residual.begin(), residual.begin() + n_injected);
    std::vector<std::size_t> discarded(residual.begin() + n_injected, residual.end());

    std::sort(labeled.begin(), labeled.end());
    std::sort(pool.begin(), pool.end());
    std::sort(discarded.begin(), discarded.end());

    SplitPlan plan;
    plan.labeled_ratio = rho;
    plan.pollution_ratio = gamma;
    plan.seed = seed;
    plan.anomaly_rows = labeled;
    plan.pool_rows = pool;
    plan.discarded_rows = discarded;
    plan.labeled_anomalies = Matrix(0, 0);
    for (const auto r : labeled) plan.labeled_anomalies.append_row(train.features.row(r));
    plan.unlabeled_pool = Matrix(0, 0);
    for (const auto r : pool) plan.unlabeled_pool.append_row(train.features.row(r));
    return plan;
}

} // namespace nngmix
