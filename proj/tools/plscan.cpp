#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "plscan/csv_io.hpp"
#include "plscan/pipeline.hpp"

#ifdef PLSCAN_WITH_ORACLE
#include "plscan/verify.hpp"
#endif

namespace fs = std::filesystem;
using namespace plscan;

namespace {

struct Config {
    std::string input;
    std::string kind = "auto";
    std::string metric = "euclidean";
    std::string tree = "kd";
    index_t k = 4;
    std::optional<double> min_size;
    std::string measure = "size";
    index_t layers = 5;
    std::string weights;
    index_t num_points = 0;
    int threads = 0;
    std::string out;
};

void add_input_options(CLI::App& cmd, Config& cfg) {
    cmd.add_option("-i,--input", cfg.input, "Points CSV or forest CSV (header u,v,weight)")->required()->check(CLI::ExistingFile);
    cmd.add_option("--kind", cfg.kind, "Input kind")->check(CLI::IsMember({"auto", "points", "forest"}));
    cmd.add_option("--metric", cfg.metric, "Distance metric for points")->check(CLI::IsMember({"euclidean", "cosine"}));
    cmd.add_option("--tree", cfg.tree, "Space tree for points")->check(CLI::IsMember({"kd", "ball"}));
    cmd.add_option("-k", cfg.k, "Neighbour count for core distances");
    cmd.add_option("--min-size", cfg.min_size, "Initial minimum cluster size (default max(k, 2))");
    cmd.add_option("--measure", cfg.measure, "Persistence measure")
        ->check(CLI::IsMember({"size", "distance", "density", "size_distance", "size_density"}));
    cmd.add_option("--layers", cfg.layers, "Number of cluster layers to report");
    cmd.add_option("--weights", cfg.weights, "Sample weights, one per line")->check(CLI::ExistingFile);
    cmd.add_option("--num-points", cfg.num_points, "Point count for forest input (default max id + 1)");
    cmd.add_option("--threads", cfg.threads, "Worker cap (default: all)");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

Options options_of(const Config& cfg) {
    Options options;
    options.k = cfg.k;
    options.min_cluster_size = cfg.min_size;
    options.measure = parse_measure(cfg.measure);
    options.num_layers = cfg.layers;
    options.tree = parse_tree_kind(cfg.tree);
    return options;
}

bool is_forest(const Config& cfg) {
    if (cfg.kind != "auto") return cfg.kind == "forest";
    auto in = open_input(cfg.input);
    return io::detect_kind(in) == io::InputKind::forest;
}

std::vector<double> load_weights(const Config& cfg) {
    if (cfg.weights.empty()) return {};
    auto in = open_input(cfg.weights);
    return io::read_weights(in);
}

FitResult run(const Config& cfg, bool& forest_input) {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    const Options options = options_of(cfg);
    auto in = open_input(cfg.input);
    forest_input = is_forest(cfg);
    if (forest_input) return fit_forest(io::read_forest(in, cfg.num_points), options, load_weights(cfg));
    io::PointsTable table = io::read_points(in);
    const PointSet points(std::move(table.coords), table.dim, parse_metric(cfg.metric));
    if (options.k >= points.size()) {
        throw InputError("k = " + std::to_string(options.k) + " must be smaller than the number of points (" +
                         std::to_string(points.size()) + ")");
    }
    return fit(points, options, load_weights(cfg));
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    writer(out);
}

template <typename Writer>
void write_target(const std::string& target, Writer&& writer) {
    if (target.empty() || target == "-") {
        writer(std::cout);
    } else {
        write_file(target, writer);
    }
}

void warn_missing_leaves(const FitResult& result, bool forest_input) {
    if (!forest_input) return;
    const index_t missing = components_without_leaves(result);
    if (missing > 0) {
        std::fprintf(stderr,
                     "warning: %zu forest component(s) never split into leaf clusters; they need at least two "
                     "clusters each to be labelled\n",
                     missing);
    }
}

void print_summary(const Clustering& clustering) {
    index_t noise = 0;
    for (label_t l : clustering.labels) noise += l == kNoise;
    const double fraction = clustering.labels.empty() ? 0.0 : static_cast<double>(noise) / clustering.labels.size();
    std::printf("clusters: %zu\nnoise fraction: %s\ncut: %s\n", clustering.num_clusters(),
                io::format_real(fraction).c_str(), io::format_real(clustering.cut).c_str());
}

int cmd_fit(const Config& cfg, bool write_condensed) {
    bool forest_input = false;
    const FitResult result = run(cfg, forest_input);
    warn_missing_leaves(result, forest_input);
    const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
    fs::create_directories(dir);
    write_file(dir / "labels.csv", [&](std::ostream& o) { io::write_labels(o, result.clustering); });
    write_file(dir / "trace.csv", [&](std::ostream& o) { io::write_trace(o, result.trace); });
    write_file(dir / "layers.csv", [&](std::ostream& o) { io::write_layers(o, result.layers); });
    write_file(dir / "leaf_tree.csv", [&](std::ostream& o) { io::write_leaf_tree(o, result.leaf_tree); });
    for (index_t r = 0; r < result.layer_clusterings.size(); ++r) {
        write_file(dir / ("layer_" + std::to_string(r) + ".csv"),
                   [&](std::ostream& o) { io::write_labels(o, result.layer_clusterings[r]); });
    }
    if (write_condensed) {
        write_file(dir / "condensed.csv", [&](std::ostream& o) { io::write_condensed(o, result.condensed); });
    }
    print_summary(result.clustering);
    return 0;
}

int cmd_layer(const Config& cfg, double cut) {
    bool forest_input = false;
    const FitResult result = run(cfg, forest_input);
    warn_missing_leaves(result, forest_input);
    const Clustering clustering = extract_layer(cut, result.leaf_tree, result.condensed);
    write_target(cfg.out, [&](std::ostream& o) { io::write_labels(o, clustering); });
    if (!cfg.out.empty() && cfg.out != "-") print_summary(clustering);
    return 0;
}

int cmd_export(const Config& cfg, const std::string& condensed_path) {
    bool forest_input = false;
    const FitResult result = run(cfg, forest_input);
    write_target(cfg.out, [&](std::ostream& o) { io::write_leaf_tree(o, result.leaf_tree); });
    if (!condensed_path.empty()) {
        write_target(condensed_path, [&](std::ostream& o) { io::write_condensed(o, result.condensed); });
    }
    return 0;
}

#ifdef PLSCAN_WITH_ORACLE
bool report(const std::string& label, const std::vector<verify::Check>& checks) {
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%s %s: %s\n", c.passed ? "ok  " : "FAIL", label.c_str(), c.name.c_str());
        if (!c.passed) std::printf("     %s\n", c.detail.c_str());
        ok = ok && c.passed;
    }
    return ok;
}

int cmd_verify(const Config& cfg, const std::string& expected_path, index_t random, std::uint64_t seed) {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    bool ok = true;
    if (!cfg.input.empty()) {
        bool forest_input = false;
        const FitResult result = run(cfg, forest_input);
        const double m_c = resolve_min_cluster_size(options_of(cfg));
        if (!expected_path.empty()) {
            auto in = open_input(expected_path);
            const std::string diff = verify::diff_leaf_trees(io::read_leaf_tree(in), result.leaf_tree);
            std::printf("%s %s: leaf tree matches %s\n", diff.empty() ? "ok  " : "FAIL", cfg.input.c_str(),
                        expected_path.c_str());
            if (!diff.empty()) std::printf("     %s\n", diff.c_str());
            ok = ok && diff.empty();
        }
        if (forest_input) {
            ok = report(cfg.input, verify::cross_check_forest(result.forest, load_weights(cfg), m_c)) && ok;
        } else {
            auto in = open_input(cfg.input);
            io::PointsTable table = io::read_points(in);
            const PointSet points(std::move(table.coords), table.dim, parse_metric(cfg.metric));
            ok = report(cfg.input, verify::cross_check_points(points, cfg.k, m_c, parse_tree_kind(cfg.tree))) && ok;
        }
    }
    for (index_t r = 0; r < random; ++r) {
        verify::BlobSpec spec;
        spec.seed = seed + r;
        spec.points = 50 + (spec.seed * 37) % 151;
        spec.centers = 2 + spec.seed % 4;
        const verify::Blobs blobs = verify::make_blobs(spec);
        const PointSet points(blobs.coords, blobs.dim);
        const double m_c = resolve_min_cluster_size(options_of(cfg));
        ok = report("seed " + std::to_string(spec.seed), verify::cross_check_points(points, cfg.k, m_c)) && ok;
    }
    std::printf("%s\n", ok ? "verification passed" : "verification FAILED");
    return ok ? 0 : 1;
}
#endif

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leaf-cluster hierarchy over all minimum cluster sizes, with persistence-based selection"};
    app.require_subcommand(1);

    Config cfg;
    bool write_condensed = false;
    auto* fit_cmd = app.add_subcommand("fit", "Cluster a dataset and write labels, trace, layers and leaf tree");
    add_input_options(*fit_cmd, cfg);
    fit_cmd->add_option("-o,--out", cfg.out, "Output directory (default: current directory)");
    fit_cmd->add_flag("--condensed", write_condensed, "Also write condensed.csv");

    double cut = 0.0;
    auto* layer_cmd = app.add_subcommand("layer", "Labels at a given minimum-cluster-size cut");
    add_input_options(*layer_cmd, cfg);
    layer_cmd->add_option("--cut", cut, "Minimum cluster size threshold")->required();
    layer_cmd->add_option("-o,--out", cfg.out, "Labels file (default: stdout)");

    std::string condensed_path;
    auto* export_cmd = app.add_subcommand("export-leaf-tree", "Write the leaf tree as CSV");
    add_input_options(*export_cmd, cfg);
    export_cmd->add_option("-o,--out", cfg.out, "Leaf tree file (default: stdout)");
    export_cmd->add_option("--condensed", condensed_path, "Also write the condensed tree here");

#ifdef PLSCAN_WITH_ORACLE
    std::string expected_path;
    index_t random = 0;
    std::uint64_t seed = 1;
    auto* verify_cmd = app.add_subcommand("verify", "Cross-check the pipeline against brute-force references");
    verify_cmd->add_option("-i,--input", cfg.input, "Points or forest CSV to check")->check(CLI::ExistingFile);
    verify_cmd->add_option("--kind", cfg.kind, "Input kind")->check(CLI::IsMember({"auto", "points", "forest"}));
    verify_cmd->add_option("--metric", cfg.metric, "Distance metric")->check(CLI::IsMember({"euclidean", "cosine"}));
    verify_cmd->add_option("--tree", cfg.tree, "Space tree")->check(CLI::IsMember({"kd", "ball"}));
    verify_cmd->add_option("-k", cfg.k, "Neighbour count");
    verify_cmd->add_option("--min-size", cfg.min_size, "Initial minimum cluster size");
    verify_cmd->add_option("--weights", cfg.weights, "Sample weights")->check(CLI::ExistingFile);
    verify_cmd->add_option("--num-points", cfg.num_points, "Point count for forest input");
    verify_cmd->add_option("--threads", cfg.threads, "Worker cap");
    verify_cmd->add_option("--expect-leaf-tree", expected_path, "Expected leaf_tree.csv")->check(CLI::ExistingFile);
    verify_cmd->add_option("--random", random, "Also check this many random blob datasets");
    verify_cmd->add_option("--seed", seed, "First seed for --random");
#endif

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit_cmd->parsed()) return cmd_fit(cfg, write_condensed);
        if (layer_cmd->parsed()) return cmd_layer(cfg, cut);
        if (export_cmd->parsed()) return cmd_export(cfg, condensed_path);
#ifdef PLSCAN_WITH_ORACLE
        if (verify_cmd->parsed()) {
            if (cfg.input.empty() && random == 0) {
                std::fprintf(stderr, "error: verify needs --input or --random\n");
                return 2;
            }
            return cmd_verify(cfg, expected_path, random, seed);
        }
#endif
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
