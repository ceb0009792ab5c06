#include "nngmix/harness.hpp"

#include "nngmix/common.hpp"
#include "nngmix/knn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace nngmix {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json generator_to_json(const GeneratorConfig& g) {
    json j;
    j["kind"] = to_string(g.kind);
    if (g.kind == GeneratorKind::none) {
        return j;
    }
    j["alpha"] = g.alpha;
    j["k"] = g.k;
    j["sigma"] = g.sigma;
    j["mask_ratio"] = {g.mask_ratio_low, g.mask_ratio_high};
    j["mask_runs"] = g.mask_runs;
    j["M"] = g.multiplier;
    return j;
}

GeneratorConfig generator_from_json(const json& j) {
    GeneratorConfig g;
    if (!j.contains("kind")) {
        throw ConfigError("generator config needs a 'kind'");
    }
    g.kind = generator_kind_from_string(j.at("kind").get<std::string>());
    g.alpha = j.value("alpha", g.alpha);
    g.k = j.value("k", g.k);
    g.sigma = j.value("sigma", g.sigma);
    if (j.contains("mask_ratio")) {
        const auto& mr = j.at("mask_ratio");
        if (!mr.is_array() || mr.size() != 2) {
            throw ConfigError("generator: mask_ratio must be [low, high]");
        }
        g.mask_ratio_low = mr[0].get<double>();
        g.mask_ratio_high = mr[1].get<double>();
    }
    g.mask_runs = j.value("mask_runs", g.mask_runs);
    g.multiplier = j.value("M", g.multiplier);
    g.validate();
    return g;
}

json detector_to_json(const DetectorConfig& d) {
    json j;
    j["kind"] = to_string(d.kind);
    switch (d.kind) {
        case DetectorKind::knn_score:
            j["k_score"] = d.k_score;
            break;
        case DetectorKind::logistic:
            j["learning_rate"] = d.learning_rate;
            j["epochs"] = d.epochs;
            j["l2"] = d.l2;
            break;
        case DetectorKind::sadlite:
            j["learning_rate"] = d.learning_rate;
            j["epochs"] = d.epochs;
            j["eta"] = d.eta;
            j["eps"] = d.eps;
            break;
    }
    return j;
}

DetectorConfig detector_from_json(const json& j) {
    if (!j.contains("kind")) {
        throw ConfigError("detector config needs a 'kind'");
    }
    const auto kind = detector_kind_from_string(j.at("kind").get<std::string>());
    DetectorConfig d = DetectorConfig::defaults(kind);
    d.k_score = j.value("k_score", d.k_score);
    d.learning_rate = j.value("learning_rate", d.learning_rate);
    d.epochs = j.value("epochs", d.epochs);
    d.l2 = j.value("l2", d.l2);
    d.eta = j.value("eta", d.eta);
    d.eps = j.value("eps", d.eps);
    d.validate();
    return d;
}

std::vector<ClusterSpec> clusters_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("synthetic spec must be a non-empty array of clusters");
    }
    std::vector<ClusterSpec> spec;
    for (const auto& c : j) {
        ClusterSpec cs;
        if (!c.contains("center") || !c.at("center").is_array()) {
            throw ConfigError("cluster needs a 'center' array");
        }
        cs.center = c.at("center").get<std::vector<double>>();
        cs.stddev = c.value("std", 1.0);
        cs.count = c.value("count", std::size_t{1});
        cs.label = c.value("label", 0);
        spec.push_back(std::move(cs));
    }
    return spec;
}

json clusters_to_json(const std::vector<ClusterSpec>& spec) {
    json out = json::array();
    for (const auto& c : spec) {
        out.push_back({{"center", c.center},
                       {"std", c.stddev},
                       {"count", c.count},
                       {"label", c.label}});
    }
    return out;
}

DatasetSource dataset_source_from_json(const json& j) {
    DatasetSource src;
    if (j.contains("csv")) {
        src.csv_path = j.at("csv").get<std::string>();
        src.label_column = j.value("label_column", std::string("label"));
        src.name = j.value("name",
                           std::filesystem::path(src.csv_path).stem().string());
    } else if (j.contains("synthetic")) {
        src.synthetic = clusters_from_json(j.at("synthetic"));
        src.name = j.value("name", std::string("synthetic"));
    } else {
        throw ConfigError("dataset needs either 'csv' or 'synthetic'");
    }
    return src;
}

json dataset_source_to_json(const DatasetSource& src) {
    json j;
    j["name"] = src.name;
    if (src.is_csv()) {
        j["label_column"] = src.label_column;
    } else {
        j["synthetic"] = clusters_to_json(src.synthetic);
    }
    return j;
}

struct CellRow {
    CellConfig cell;
    std::string fingerprint;
};

/// Grid expansion in a fixed order, deduplicated by fingerprint.
std::vector<CellRow> expand_grid(const ExperimentConfig& config) {
    std::vector<CellRow> rows;
    std::set<std::string> seen;
    for (const auto& gen : config.generators) {
        for (const auto& det : config.detectors) {
            for (const double rho : config.rho) {
                for (const double gamma : config.gamma) {
                    for (const int m : config.multipliers) {
                        CellConfig cell;
                        cell.dataset = config.dataset;
                        cell.train_fraction = config.train_fraction;
                        cell.rho = rho;
                        cell.gamma = gamma;
                        cell.generator = gen;
                        cell.generator.multiplier =
                            gen.kind == GeneratorKind::none ? 0 : m;
                        cell.detector = det;
                        auto fp = cell_fingerprint(cell);
                        if (seen.insert(fp).second) {
                            rows.push_back({std::move(cell), std::move(fp)});
                        }
                    }
                }
            }
        }
    }
    return rows;
}

json result_to_json(const EvalResult& r, const CellConfig& cell) {
    json j;
    j["fingerprint"] = r.fingerprint;
    j["seed"] = r.seed;
    j["auc"] = r.auc;
    j["cell"] = cell_to_json(cell);
    return j;
}

void write_results_files(const std::filesystem::path& out_dir,
                         const std::vector<CellRow>& rows,
                         const std::map<std::pair<std::string, std::uint64_t>, double>& table,
                         const std::vector<std::uint64_t>& seeds,
                         std::vector<EvalResult>& results_out,
                         std::vector<Aggregate>& aggregates_out) {
    std::ofstream jsonl(out_dir / "results.jsonl", std::ios::trunc);
    std::ofstream csv(out_dir / "results.csv", std::ios::trunc);
    if (!jsonl || !csv) {
        throw DataError("cannot write results under " + out_dir.string());
    }
    csv << "dataset,generator,detector,rho,gamma,M,seed,auc\n";

    json aggregates = json::array();
    for (const auto& row : rows) {
        std::vector<EvalResult> cell_results;
        for (const auto seed : seeds) {
            const auto it = table.find({row.fingerprint, seed});
            if (it == table.end()) continue;
            EvalResult r{it->second, row.fingerprint, seed};
            cell_results.push_back(r);
            results_out.push_back(r);
            jsonl << result_to_json(r, row.cell).dump() << '\n';
            csv << row.cell.dataset.name << ',' << to_string(row.cell.generator.kind)
                << ',' << to_string(row.cell.detector.kind) << ','
                << format_double(row.cell.rho) << ',' << format_double(row.cell.gamma)
                << ',' << row.cell.generator.multiplier << ',' << seed << ','
                << format_double(r.auc) << '\n';
        }
        if (!cell_results.empty()) {
            const Aggregate agg = aggregate(cell_results);
            aggregates_out.push_back(agg);
            aggregates.push_back({{"fingerprint", agg.fingerprint},
                                  {"mean_auc", agg.mean_auc},
                                  {"std_auc", agg.std_auc},
                                  {"n_seeds", agg.n_seeds},
                                  {"cell", cell_to_json(row.cell)}});
        }
    }
    std::ofstream agg_file(out_dir / "aggregates.json", std::ios::trunc);
    agg_file << aggregates.dump(2) << '\n';
}

} // namespace

Dataset realize_dataset(const DatasetSource& source, std::uint64_t seed) {
    if (source.is_csv()) {
        Dataset ds = load_csv(source.csv_path, source.label_column);
        ds.name = source.name;
        return ds;
    }
    Dataset ds = make_synthetic_clusters(source.synthetic, seed);
    ds.name = source.name.empty() ? ds.name : source.name;
    return ds;
}

json cell_to_json(const CellConfig& cell) {
    GeneratorConfig gen = cell.generator;
    if (gen.multiplier == 0) {
        gen = GeneratorConfig{};
        gen.kind = GeneratorKind::none;
        gen.multiplier = 0;
    }
    json j;
    j["dataset"] = dataset_source_to_json(cell.dataset);
    j["train_fraction"] = cell.train_fraction;
    j["rho"] = cell.rho;
    j["gamma"] = cell.gamma;
    j["generator"] = generator_to_json(gen);
    j["detector"] = detector_to_json(cell.detector);
    return j;
}

std::string cell_fingerprint(const CellConfig& cell) {
    const std::uint64_t h = fnv1a64(cell_to_json(cell).dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PipelineArtifacts run_cell_detailed(const CellConfig& cell, std::uint64_t seed) {
    cell.generator.validate();
    cell.detector.validate();

    const Dataset ds = realize_dataset(cell.dataset, seed);
    auto [train, test] = split_train_test(ds, cell.train_fraction, seed);

    PipelineArtifacts art;
    auto [train_std, record] = standardize(train);
    art.standardizer = record;
    art.train = std::move(train_std);

    art.plan = carve_split(art.train, cell.rho, cell.gamma, seed);
    art.plan.test_features = apply_standardize(record, test.features);
    art.plan.test_labels = test.labels;

    const std::size_t n_pseudo =
        cell.generator.kind == GeneratorKind::none
            ? 0
            : static_cast<std::size_t>(cell.generator.multiplier) *
                  art.plan.labeled_anomalies.rows();
    RngStream root(seed);
    RngStream gen_rng = root.substream("generate");
    art.pseudo = generate(art.plan.labeled_anomalies, art.plan.unlabeled_pool,
                          cell.generator, n_pseudo, gen_rng);

    RngStream det_rng = root.substream("detect");
    art.model = fit_detector(cell.detector, art.plan.labeled_anomalies,
                             art.pseudo.samples, art.plan.unlabeled_pool, det_rng);

    art.test_scores = art.model->score(art.plan.test_features);
    art.result = EvalResult{auc_roc(art.test_scores, art.plan.test_labels),
                            cell_fingerprint(cell), seed};
    return art;
}

EvalResult run_cell(const CellConfig& cell, std::uint64_t seed) {
    return run_cell_detailed(cell, seed).result;
}

void ExperimentConfig::validate() const {
    if (generators.empty()) throw ConfigError("config: no generators");
    if (rho.empty()) throw ConfigError("config: no rho values");
    if (gamma.empty()) throw ConfigError("config: no gamma values");
    if (multipliers.empty()) throw ConfigError("config: no multipliers");
    if (seeds.empty()) throw ConfigError("config: no seeds");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("config: train_fraction must be in (0, 1)");
    }
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    for (const auto& g : generators) g.validate();
    for (const auto& d : detectors) d.validate();
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    if (!j.contains("dataset")) {
        throw ConfigError("config needs a 'dataset'");
    }
    cfg.dataset = dataset_source_from_json(j.at("dataset"));
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    if (j.contains("rho")) cfg.rho = j.at("rho").get<std::vector<double>>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<std::vector<double>>();
    if (j.contains("M")) cfg.multipliers = j.at("M").get<std::vector<int>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("generators")) {
        for (const auto& g : j.at("generators")) {
            cfg.generators.push_back(generator_from_json(g));
        }
    }
    if (j.contains("detectors")) {
        for (const auto& d : j.at("detectors")) {
            cfg.detectors.push_back(detector_from_json(d));
        }
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return experiment_from_json(j);
}

EvalResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.detectors.empty()) {
        throw ConfigError("config: no detectors");
    }
    if (config.generators.size() != 1 || config.detectors.size() != 1 ||
        config.rho.size() != 1 || config.gamma.size() != 1 ||
        config.multipliers.size() != 1 || config.seeds.size() != 1) {
        throw ConfigError("run_experiment: every grid axis must hold exactly one value");
    }
    const auto rows = expand_grid(config);
    return run_cell(rows.front().cell, config.seeds.front());
}

SweepOutcome run_sweep(const ExperimentConfig& config) {
    config.validate();
    if (config.detectors.empty()) {
        throw ConfigError("config: no detectors");
    }
    if (config.out_dir.empty()) {
        throw ConfigError("run_sweep: output directory not set");
    }
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    const auto jsonl_path = config.out_dir / "results.jsonl";

    // resume: collect rows already on disk
    std::map<std::pair<std::string, std::uint64_t>, double> table;
    if (std::filesystem::exists(jsonl_path)) {
        std::ifstream in(jsonl_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
                table[{j.at("fingerprint").get<std::string>(),
                       j.at("seed").get<std::uint64_t>()}] = j.at("auc").get<double>();
            } catch (const json::exception& e) {
                throw DataError("corrupt results line " + std::to_string(line_no) +
                                " in " + jsonl_path.string() + ": " + e.what());
            }
        }
    }

    const auto rows = expand_grid(config);

    struct Job {
        const CellRow* row;
        std::uint64_t seed;
    };
    std::vector<Job> pending;
    std::size_t skipped = 0;
    for (const auto& row : rows) {
        for (const auto seed : config.seeds) {
            if (table.contains({row.fingerprint, seed})) {
                ++skipped;
            } else {
                pending.push_back({&row, seed});
            }
        }
    }

    {
        std::ofstream append(jsonl_path, std::ios::app);
        if (!append) {
            throw DataError("cannot write " + jsonl_path.string());
        }
        std::mutex write_mutex;
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;

        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= pending.size()) return;
                const auto& job = pending[i];
                try {
                    const EvalResult r = run_cell(job.row->cell, job.seed);
                    std::lock_guard<std::mutex> lock(write_mutex);
                    table[{r.fingerprint, r.seed}] = r.auc;
                    append << result_to_json(r, job.row->cell).dump() << '\n';
                    append.flush();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(write_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(pending.size());
                    return;
                }
            }
        };

        const auto n_workers = std::min<std::size_t>(
            std::max(1, config.jobs), std::max<std::size_t>(1, pending.size()));
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (std::size_t t = 0; t < n_workers; ++t) {
                threads.emplace_back(worker);
            }
            for (auto& t : threads) t.join();
        }
        if (failure) std::rethrow_exception(failure);
    }

    SweepOutcome outcome;
    outcome.cells = rows.size();
    outcome.evaluated = pending.size();
    outcome.skipped = skipped;
    write_results_files(config.out_dir, rows, table, config.seeds, outcome.results,
                        outcome.aggregates);
    return outcome;
}

void RegionSpec::validate() const {
    if (kind == Kind::ball) {
        if (center.empty()) throw ConfigError("region: ball needs a center");
        if (!(radius > 0.0)) throw ConfigError("region: radius must be positive");
    } else {
        if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("region: tau must be in (0, 1]");
        if (k == 0) throw ConfigError("region: k must be positive");
    }
}

IntrusionReport measure_intrusion(const std::vector<GeneratorConfig>& generators,
                                  const std::vector<ClusterSpec>& synthetic,
                                  const RegionSpec& region, std::size_t n_samples,
                                  const std::vector<std::uint64_t>& seeds) {
    region.validate();
    if (generators.empty()) throw ConfigError("measure_intrusion: no generators");
    if (seeds.empty()) throw ConfigError("measure_intrusion: no seeds");
    if (n_samples == 0) throw ConfigError("measure_intrusion: n_samples must be positive");

    IntrusionReport report;
    report.seeds = seeds;
    report.samples_per_seed = n_samples;
    report.generators.reserve(generators.size());
    for (const auto& g : generators) {
        report.generators.push_back({g, {}, 0.0});
    }

    for (const auto seed : seeds) {
        const Dataset ds = make_synthetic_clusters(synthetic, seed);
        Matrix anomalies(0, ds.dim());
        Matrix normals(0, ds.dim());
        for (std::size_t i = 0; i < ds.n(); ++i) {
            (ds.labels[i] == 1 ? anomalies : normals).append_row(ds.features.row(i));
        }
        if (anomalies.empty() || normals.empty()) {
            throw DataError("measure_intrusion: spec needs both anomaly and normal clusters");
        }

        // region membership test for this seed's data
        const NeighborIndex pool_index(normals);
        double threshold = 0.0;
        if (region.kind == RegionSpec::Kind::knn_quantile) {
            std::vector<double> kd(normals.rows());
            for (std::size_t i = 0; i < normals.rows(); ++i) {
                const auto nb = pool_index.query(normals.row(i), region.k, true);
                if (nb.empty()) {
                    throw DataError("measure_intrusion: degenerate normal pool");
                }
                kd[i] = nb.back().distance;
            }
            std::sort(kd.begin(), kd.end());
            const auto rank = std::min<std::size_t>(
                kd.size() - 1,
                static_cast<std::size_t>(
                    std::ceil(region.tau * static_cast<double>(kd.size()))) - 1);
            threshold = kd[rank];
        }
        auto inside = [&](std::span<const double> x) {
            if (region.kind == RegionSpec::Kind::ball) {
                if (x.size() != region.center.size()) {
                    throw DataError("measure_intrusion: region center dimension mismatch");
                }
                return euclidean_distance(x, region.center) <= region.radius;
            }
            const auto nb = pool_index.query(x, region.k, false);
            return nb.back().distance <= threshold;
        };

        RngStream root(seed);
        for (auto& entry : report.generators) {
            RngStream rng = root.substream("intrusion/" + to_string(entry.generator.kind));
            const PseudoAnomalySet set =
                generate(anomalies, normals, entry.generator, n_samples, rng);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < set.size(); ++i) {
                if (inside(set.samples.row(i))) ++hits;
            }
            entry.per_seed.push_back(static_cast<double>(hits) /
                                     static_cast<double>(n_samples));
        }
    }

    for (auto& entry : report.generators) {
        double sum = 0.0;
        for (const double f : entry.per_seed) sum += f;
        entry.mean = sum / static_cast<double>(entry.per_seed.size());
    }
    return report;
}

nlohmann::json IntrusionReport::to_json() const {
    json out;
    out["seeds"] = seeds;
    out["samples_per_seed"] = samples_per_seed;
    out["generators"] = json::array();
    for (const auto& g : generators) {
        out["generators"].push_back({{"generator", generator_to_json(g.generator)},
                                     {"per_seed", g.per_seed},
                                     {"mean", g.mean}});
    }
    return out;
}

void export_score_grid(const AnomalyScorer& model, const GridBounds& bounds,
                       std::size_t nx, std::size_t ny,
                       const std::filesystem::path& path) {
    if (model.dim() != 2) {
        throw ConfigError("export_score_grid: model must be 2-D, got dim " +
                          std::to_string(model.dim()));
    }
    if (nx < 2 || ny < 2) {
        throw ConfigError("export_score_grid: resolution must be at least 2x2");
    }
    if (!(bounds.x_max > bounds.x_min && bounds.y_max > bounds.y_min)) {
        throw ConfigError("export_score_grid: degenerate bounds");
    }

    Matrix mesh(0, 2);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = bounds.y_min + (bounds.y_max - bounds.y_min) *
                                            static_cast<double>(iy) /
                                            static_cast<double>(ny - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = bounds.x_min + (bounds.x_max - bounds.x_min) *
                                                static_cast<double>(ix) /
                                                static_cast<double>(nx - 1);
            const double row[2] = {x, y};
            mesh.append_row(row);
        }
    }
    const auto scores = model.score(mesh);
    for (const double s : scores) {
        if (!std::isfinite(s)) {
            throw NumericError("export_score_grid: non-finite score");
        }
    }

    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "x,y,score\n";
    for (std::size_t i = 0; i < mesh.rows(); ++i) {
        out << format_double(mesh(i, 0)) << ',' << format_double(mesh(i, 1)) << ','
            << format_double(scores[i]) << '\n';
    }
}

ProjectionResult project_top2(const Matrix& points) {
    if (points.rows() < 2) {
        throw DataError("project_top2: need at least 2 rows");
    }
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const auto mean = column_means(points);

    Matrix centered = points;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = centered.row(i);
        for (std::size_t j = 0; j < d; ++j) row[j] -= mean[j];
    }

    ProjectionResult res;
    res.projected = Matrix(n, 2, 0.0);
    res.components = Matrix(2, d, 0.0);

    if (d == 1) {
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += centered(i, 0) * centered(i, 0);
        res.eigenvalues = {var / static_cast<double>(n - 1)};
        res.components(0, 0) = 1.0;
        for (std::size_t i = 0; i < n; ++i) res.projected(i, 0) = centered(i, 0);
        return res;
    }

    Matrix cov(d, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = centered.row(i);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) += row[a] * row[b];
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= static_cast<double>(n - 1);
            cov(b, a) = cov(a, b);
        }
    }

    const SymmetricEigen eig = symmetric_eigen(cov);
    res.eigenvalues = eig.values;
    for (std::size_t pc = 0; pc < 2; ++pc) {
        std::vector<double> v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = eig.vectors(j, pc);
        std::size_t argmax = 0;
        for (std::size_t j = 1; j < d; ++j) {
            if (std::abs(v[j]) > std::abs(v[argmax])) argmax = j;
        }
        if (v[argmax] < 0.0) {
            for (auto& x : v) x = -x;
        }
        for (std::size_t j = 0; j < d; ++j) res.components(pc, j) = v[j];
        for (std::size_t i = 0; i < n; ++i) {
            res.projected(i, pc) = dot(centered.row(i), v);
        }
    }
    return res;
}

void export_projection(const Matrix& points, const std::vector<int>& labels,
                       const std::filesystem::path& path) {
    if (labels.size() != points.rows()) {
        throw DataError("export_projection: labels length mismatch");
    }
    const ProjectionResult res = project_top2(points);
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << "pc1,pc2,label\n";
    for (std::size_t i = 0; i < res.projected.rows(); ++i) {
        out << format_double(res.projected(i, 0)) << ','
            << format_double(res.projected(i, 1)) << ',' << labels[i] << '\n';
    }
}

} // namespace nngmix
