// Command-line front end: synthesize datasets, generate pseudo-anomalies,
// evaluate single cells, sweep grids, measure intrusion, and export score
// grids / projections. Exit codes: 0 ok, 1 config error, 2 data error,
// 3 numeric failure.
#include "nngmix/common.hpp"
#include "nngmix/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

using namespace nngmix;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
}

std::vector<ClusterSpec> clusters_from_config(const json& j) {
    const json& spec = j.is_array() ? j : j.at("synthetic");
    std::vector<ClusterSpec> clusters;
    for (const auto& c : spec) {
        ClusterSpec cs;
        cs.center = c.at("center").get<std::vector<double>>();
        cs.stddev = c.value("std", 1.0);
        cs.count = c.value("count", std::size_t{1});
        cs.label = c.value("label", 0);
        clusters.push_back(std::move(cs));
    }
    return clusters;
}

ExperimentConfig experiment_from_file(const std::string& path,
                                      std::optional<std::uint64_t> seed,
                                      const std::string& out_override, int jobs) {
    ExperimentConfig cfg = load_experiment_config(path);
    if (seed) {
        cfg.seeds = {*seed};
    }
    if (!out_override.empty()) {
        cfg.out_dir = out_override;
    }
    if (jobs > 0) {
        cfg.jobs = jobs;
    }
    return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path.string());
    }
    out << text;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"pseudo-anomaly generation and detection benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string in_path;
    std::string label_column = "label";
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    int jobs = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        if (needs_config) {
            cmd->add_option("--config", config_path, "JSON config file")->required();
        }
        cmd->add_option("--out", out_path, "output file or directory");
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t s) { seed_flag = s; seed_set = true; },
               "override the config seed list with one seed");
    };

    auto* synth = app.add_subcommand("synth", "emit a synthetic dataset as CSV");
    add_common(synth);
    synth->callback([&] {
        const json j = load_json(config_path);
        const auto clusters = clusters_from_config(j);
        const std::uint64_t seed = seed_set ? seed_flag : j.value("seed", 1);
        Dataset ds = make_synthetic_clusters(clusters, seed);
        if (j.is_object() && j.contains("name")) {
            ds.name = j.at("name").get<std::string>();
        }
        if (out_path.empty()) {
            throw ConfigError("synth: --out is required");
        }
        write_csv(ds, out_path);
        std::cout << "wrote " << ds.n() << " rows (" << ds.count_label(1)
                  << " anomalies) to " << out_path << "\n";
    });

    auto* generate_cmd =
        app.add_subcommand("generate", "emit pseudo-anomalies plus provenance");
    add_common(generate_cmd);
    generate_cmd->callback([&] {
        const ExperimentConfig cfg = experiment_from_file(
            config_path, seed_set ? std::optional(seed_flag) : std::nullopt, "", 0);
        if (cfg.generators.size() != 1 || cfg.rho.size() != 1 ||
            cfg.gamma.size() != 1 || cfg.multipliers.size() != 1 ||
            cfg.seeds.size() != 1) {
            throw ConfigError("generate: config must pin one generator, rho, gamma, M, seed");
        }
        if (out_path.empty()) {
            throw ConfigError("generate: --out directory is required");
        }
        CellConfig cell;
        cell.dataset = cfg.dataset;
        cell.train_fraction = cfg.train_fraction;
        cell.rho = cfg.rho.front();
        cell.gamma = cfg.gamma.front();
        cell.generator = cfg.generators.front();
        cell.generator.multiplier = cfg.multipliers.front();
        cell.detector = cfg.detectors.empty()
                            ? DetectorConfig::defaults(DetectorKind::knn_score)
                            : cfg.detectors.front();
        const auto art = run_cell_detailed(cell, cfg.seeds.front());

        std::filesystem::create_directories(out_path);
        Dataset pseudo;
        pseudo.name = "pseudo_anomalies";
        pseudo.feature_names = art.train.feature_names;
        pseudo.features = art.pseudo.samples;
        pseudo.labels = art.pseudo.labels();
        write_csv(pseudo, std::filesystem::path(out_path) / "pseudo_anomalies.csv");

        json prov = json::array();
        for (const auto& p : art.pseudo.provenance) {
            json row;
            row["kind"] = to_string(p.kind);
            row["parent1"] = p.parent1;
            if (p.parent2 >= 0) row["parent2"] = p.parent2;
            if (!std::isnan(p.lambda)) row["lambda"] = p.lambda;
            if (p.pool != NeighborPool::none) row["pool"] = to_string(p.pool);
            if (p.mask_len > 0) {
                row["mask_start"] = p.mask_start;
                row["mask_len"] = p.mask_len;
            }
            prov.push_back(std::move(row));
        }
        json sidecar;
        sidecar["cell"] = cell_to_json(cell);
        sidecar["seed"] = cfg.seeds.front();
        sidecar["rows"] = std::move(prov);
        write_text(std::filesystem::path(out_path) / "provenance.json",
                   sidecar.dump(2) + "\n");
        std::cout << "wrote " << art.pseudo.size() << " pseudo-anomalies to "
                  << out_path << "\n";
    });

    auto* evaluate = app.add_subcommand("evaluate", "run one grid cell");
    add_common(evaluate);
    std::string scores_path;
    std::string model_path;
    evaluate->add_option("--scores", scores_path,
                         "also write per-test-row scores as CSV");
    evaluate->add_option("--model", model_path,
                         "also write the fitted model parameters as JSON");
    evaluate->callback([&] {
        ExperimentConfig cfg = experiment_from_file(
            config_path, seed_set ? std::optional(seed_flag) : std::nullopt, "", 0);
        if (cfg.generators.size() != 1 || cfg.detectors.size() != 1 ||
            cfg.rho.size() != 1 || cfg.gamma.size() != 1 ||
            cfg.multipliers.size() != 1 || cfg.seeds.size() != 1) {
            throw ConfigError("evaluate: every grid axis must hold exactly one value");
        }
        CellConfig cell;
        cell.dataset = cfg.dataset;
        cell.train_fraction = cfg.train_fraction;
        cell.rho = cfg.rho.front();
        cell.gamma = cfg.gamma.front();
        cell.generator = cfg.generators.front();
        cell.generator.multiplier = cfg.multipliers.front();
        cell.detector = cfg.detectors.front();
        const auto art = run_cell_detailed(cell, cfg.seeds.front());
        json out;
        out["auc"] = art.result.auc;
        out["fingerprint"] = art.result.fingerprint;
        out["seed"] = art.result.seed;
        const std::string text = out.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            write_text(out_path, text);
        }
        if (!scores_path.empty()) {
            std::ofstream scores(scores_path);
            if (!scores) {
                throw DataError("cannot write file: " + scores_path);
            }
            scores << "row,score,label\n";
            for (std::size_t i = 0; i < art.test_scores.size(); ++i) {
                scores << i << ',' << art.test_scores[i] << ','
                       << art.plan.test_labels[i] << '\n';
            }
        }
        if (!model_path.empty()) {
            write_text(model_path, art.model->to_json().dump(2) + "\n");
        }
    });

    auto* sweep = app.add_subcommand("sweep", "run the full grid");
    add_common(sweep);
    sweep->add_option("--jobs", jobs, "parallel workers over grid cells");
    sweep->callback([&] {
        const ExperimentConfig cfg = experiment_from_file(
            config_path, seed_set ? std::optional(seed_flag) : std::nullopt,
            out_path, jobs);
        const SweepOutcome outcome = run_sweep(cfg);
        std::cout << "cells: " << outcome.cells << ", rows: "
                  << outcome.results.size() << ", evaluated: " << outcome.evaluated
                  << ", skipped: " << outcome.skipped << "\n"
                  << "results under " << cfg.out_dir.string() << "\n";
    });

    auto* intrusion = app.add_subcommand(
        "intrusion", "fraction of pseudo-anomalies inside the normal region");
    add_common(intrusion);
    intrusion->callback([&] {
        const json j = load_json(config_path);
        const auto clusters = clusters_from_config(j.at("synthetic"));
        RegionSpec region;
        if (j.contains("region")) {
            const json& r = j.at("region");
            if (r.contains("ball")) {
                region.kind = RegionSpec::Kind::ball;
                region.center = r.at("ball").at("center").get<std::vector<double>>();
                region.radius = r.at("ball").value("radius", 2.0);
            } else if (r.contains("knn_quantile")) {
                region.kind = RegionSpec::Kind::knn_quantile;
                region.tau = r.at("knn_quantile").value("tau", 0.95);
                region.k = r.at("knn_quantile").value("k", std::size_t{10});
            } else {
                throw ConfigError("region must hold 'ball' or 'knn_quantile'");
            }
        } else {
            throw ConfigError("intrusion: config needs a 'region'");
        }
        std::vector<GeneratorConfig> gens;
        for (const auto& g : j.at("generators")) {
            GeneratorConfig gc;
            gc.kind = generator_kind_from_string(g.at("kind").get<std::string>());
            gc.alpha = g.value("alpha", gc.alpha);
            gc.k = g.value("k", gc.k);
            gc.sigma = g.value("sigma", gc.sigma);
            gens.push_back(gc);
        }
        const auto samples = j.value("samples", std::size_t{10000});
        std::vector<std::uint64_t> seeds =
            j.value("seeds", std::vector<std::uint64_t>{1, 2, 3, 4, 5});
        if (seed_set) {
            seeds = {seed_flag};
        }
        const IntrusionReport report =
            measure_intrusion(gens, clusters, region, samples, seeds);
        const std::string text = report.to_json().dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            write_text(out_path, text);
        }
    });

    auto* grid = app.add_subcommand("grid", "export a score grid for a 2-D cell");
    add_common(grid);
    grid->callback([&] {
        const json j = load_json(config_path);
        ExperimentConfig cfg = experiment_from_json(j);
        if (seed_set) {
            cfg.seeds = {seed_flag};
        }
        if (cfg.generators.size() != 1 || cfg.detectors.size() != 1 ||
            cfg.rho.size() != 1 || cfg.gamma.size() != 1 ||
            cfg.multipliers.size() != 1 || cfg.seeds.size() != 1) {
            throw ConfigError("grid: config must pin every axis to one value");
        }
        CellConfig cell;
        cell.dataset = cfg.dataset;
        cell.train_fraction = cfg.train_fraction;
        cell.rho = cfg.rho.front();
        cell.gamma = cfg.gamma.front();
        cell.generator = cfg.generators.front();
        cell.generator.multiplier = cfg.multipliers.front();
        cell.detector = cfg.detectors.front();
        const auto art = run_cell_detailed(cell, cfg.seeds.front());

        GridBounds bounds;
        std::size_t nx = 64;
        std::size_t ny = 64;
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            bounds.x_min = g.value("x_min", -4.0);
            bounds.x_max = g.value("x_max", 4.0);
            bounds.y_min = g.value("y_min", -4.0);
            bounds.y_max = g.value("y_max", 4.0);
            nx = g.value("nx", nx);
            ny = g.value("ny", ny);
        }
        if (out_path.empty()) {
            throw ConfigError("grid: --out is required");
        }
        export_score_grid(*art.model, bounds, nx, ny, out_path);
        std::cout << "wrote " << nx * ny << " grid scores to " << out_path << "\n";
    });

    auto* project = app.add_subcommand("project", "top-2 PCA projection of a CSV");
    project->add_option("--in", in_path, "input CSV")->required();
    project->add_option("--label-column", label_column, "label column name");
    project->add_option("--out", out_path, "output CSV")->required();
    project->callback([&] {
        const Dataset ds = load_csv(in_path, label_column);
        export_projection(ds.features, ds.labels, out_path);
        std::cout << "wrote projection of " << ds.n() << " rows to " << out_path
                  << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage problems are config errors
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
