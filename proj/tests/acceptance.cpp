// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "plscan/mst.hpp"
#include "plscan/oracle.hpp"
#include "plscan/pipeline.hpp"
#include "plscan/verify.hpp"
#include "support/datasets.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace plscan;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void fail(const std::string& why) {
        if (passed) detail = why;
        passed = false;
    }
};

int failures = 0;

void report(const char* name, const Outcome& o) {
    std::printf("%s %s%s%s\n", o.passed ? "PASS" : "FAIL", name, o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.passed;
}

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buffer[160];
    std::snprintf(buffer, sizeof buffer, format, a, b, c);
    return buffer;
}

Outcome first_failure(const std::string& where, const std::vector<verify::Check>& checks, Outcome o) {
    for (const auto& c : checks) {
        if (!c.passed) o.fail(where + ", " + c.name + ": " + c.detail);
    }
    return o;
}

Outcome two_merge() {
    Outcome o;
    const double start = now();
    Options options;
    options.min_cluster_size = 5.0;
    const FitResult r = fit_forest(testing_data::two_merge_forest(), options);
    const double elapsed = now() - start;
    const std::string diff = verify::diff_leaf_trees(testing_data::two_merge_leaf_tree(), r.leaf_tree, 1e-9);
    if (!diff.empty()) o.fail(diff);
    if (elapsed >= 1.0) o.fail(fmt("took %.3f s", elapsed));
    if (o.passed) o.detail = fmt("6 segments, %.4f s", elapsed);
    return o;
}

Outcome sweep_equivalence() {
    Outcome o;
    const double start = now();
    const index_t ks[] = {2, 4, 10};
    for (std::uint64_t i = 0; i < 20; ++i) {
        verify::BlobSpec spec;
        spec.seed = 1000 + i;
        spec.points = 50 + (i * 97) % 451;
        spec.dim = 2 + i % 3;
        spec.centers = 2 + i % 5;
        spec.spread = 1.0 + 0.25 * (i % 4);
        spec.box = 8.0;
        const auto blobs = verify::make_blobs(spec);
        const PointSet points(blobs.coords, blobs.dim);
        const index_t k = ks[i % 3];
        o = first_failure("seed " + std::to_string(spec.seed),
                          verify::cross_check_points(points, k, static_cast<double>(std::max<index_t>(k, 2))), o);
    }
    const double elapsed = now() - start;
    if (elapsed >= 120.0) o.fail(fmt("took %.1f s", elapsed));
    if (o.passed) o.detail = fmt("20 datasets, %.1f s", elapsed);
    return o;
}

Outcome barcode_equivalence() {
    Outcome o;
    index_t compared = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const index_t n = 10 + i;
        const index_t k = 1 + i % 3;
        const double m_c = 2.0 + static_cast<double>(i % 3);
        const PointSet points = i % 2 ? testing_data::blobs(n, 2, 3, 2000 + i, 1.5) : testing_data::uniform(n, 2, 2000 + i);
        const auto checks = verify::cross_check_points(points, k, m_c);
        compared += std::any_of(checks.begin(), checks.end(),
                                [](const verify::Check& c) { return c.name.find("barcode") != std::string::npos; });
        o = first_failure("dataset " + std::to_string(i), checks, o);
    }
    if (compared != 20) o.fail("barcode compared on " + std::to_string(compared) + " of 20 datasets");
    if (o.passed) o.detail = "20 datasets, n 10-29";
    return o;
}

Outcome mst_correctness() {
    Outcome o;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const index_t n = 20 + (i * 53) % 281;
        const index_t dim = 2 + i % 9;
        const index_t k = 1 + i % 6;
        const PointSet points = i % 3 == 0 ? testing_data::uniform(n, dim, 3000 + i)
                                           : testing_data::blobs(n, dim, 2 + i % 4, 3000 + i);
        const TreeKind tree = i % 2 ? TreeKind::ball : TreeKind::kd;
        const SpatialIndex index(points, tree);
        const SpanningForest forest = build_mst(index, core_distances(index, k));
        const SpanningForest reference = oracle::prim_mst(points, oracle::core_distances(points, k));
        const double got = oracle::total_weight(forest), want = oracle::total_weight(reference);
        if (forest.edges.size() != n - 1 || got != want) {
            o.fail("instance " + std::to_string(i) + fmt(": total %.17g, Prim %.17g", got, want));
        }
    }
    if (o.passed) o.detail = "50 instances, 2-10 dimensions";
    return o;
}

Outcome condensation_equivalence() {
    Outcome o;
    const double sizes[] = {2.0, 5.0, 25.0};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const double m_c = sizes[i % 3];
        const index_t n = 40 + (i * 31) % 260;
        SpanningForest forest;
        if (i % 2) {
            forest = testing_data::random_forest(n, 1 + i % 3, 4000 + i);
        } else {
            const PointSet points = testing_data::blobs(n, 2, 2 + i % 5, 4000 + i);
            forest = oracle::prim_mst(points, oracle::core_distances(points, 4));
        }
        std::vector<double> weights = unit_weights(n);
        if (i % 5 == 4) {
            for (index_t p = 0; p < n; ++p) weights[p] = 0.5 + 0.25 * static_cast<double>(p % 4);
        }
        const LinkageTree linkage = single_linkage(forest, weights);
        const auto want = oracle::canonical_rows(oracle::bfs_condense(linkage, weights, m_c));
        const auto got = oracle::canonical_rows(condense_tree(linkage, weights, m_c));
        if (want != got) o.fail("instance " + std::to_string(i) + fmt(" (m_c %g)", m_c));
    }
    if (o.passed) o.detail = "50 instances, m_c in {2, 5, 25}";
    return o;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "plscan_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const PointSet points = testing_data::blobs(6000, 2, 6, 5000, 1.2);
    {
        std::ofstream out(dir / "points.csv");
        out << "x,y\n";
        char line[80];
        for (index_t i = 0; i < points.size(); ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g\n", points.point(i)[0], points.point(i)[1]);
            out << line;
        }
    }
    const int many = std::max(4, omp_get_max_threads());
    const char* files[] = {"labels.csv", "trace.csv", "leaf_tree.csv", "layers.csv"};
    for (const char* measure : {"size", "size_density"}) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const int threads = run == 0 ? 1 : many;
            const fs::path out = dir / (std::string(measure) + "_" + std::to_string(threads));
            const std::string cmd = std::string("\"") + PLSCAN_CLI + "\" fit -i \"" + (dir / "points.csv").string() +
                                    "\" --measure " + measure + " --threads " + std::to_string(threads) + " -o \"" +
                                    out.string() + "\" > \"" + (dir / "log.txt").string() + "\"";
            if (std::system(cmd.c_str()) != 0) {
                o.fail(std::string("cli failed: ") + cmd);
                return o;
            }
            for (const char* f : files) outputs[run] += slurp(out / f) + '\x1f';
        }
        if (outputs[0].size() < 6000 * 6) o.fail("outputs look truncated");
        if (outputs[0] != outputs[1]) o.fail(std::string(measure) + ": outputs differ between 1 and " + std::to_string(many) + " workers");
    }
    fs::remove_all(dir);
    if (o.passed) o.detail = "n 6000, workers 1 and " + std::to_string(many) + ", 2 measures";
    return o;
}

double best_fit_seconds(const PointSet& points) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        const double start = now();
        fit(points, Options{});
        best = std::min(best, now() - start);
    }
    return best;
}

Outcome scaling() {
    Outcome o;
    const PointSet small = testing_data::blobs(20000, 2, 10, 6000);
    const PointSet large = testing_data::blobs(80000, 2, 10, 6001);
    const double t_small = best_fit_seconds(small);
    const double t_large = best_fit_seconds(large);
    const double ratio = t_large / t_small;
    o.detail = fmt("20k %.3f s, 80k %.3f s, ratio %.2f", t_small, t_large, ratio);
    o.passed = ratio < 8.0;
    return o;
}

// Five blobs of 190 points in a [-20, 20]^2 box, spread 1, centres at least
// 6 apart, plus 10 uniform background points (5%).
Outcome ari_recovery() {
    Outcome o;
    index_t good = 0;
    double worst = 1.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        verify::BlobSpec spec;
        spec.points = 950;
        spec.centers = 5;
        spec.noise_fraction = 0.05;
        spec.min_separation = 6.0;
        spec.seed = 7000 + seed;
        const auto blobs = verify::make_blobs(spec);
        const PointSet points(blobs.coords, blobs.dim);
        const FitResult r = fit(points, Options{});
        const double ari = verify::adjusted_rand_index(blobs.truth, r.labels());
        worst = std::min(worst, ari);
        good += ari >= 0.95;
        const auto sweep = oracle::leaf_lifetimes_by_sweep(r.linkage, unit_weights(points.size()), 4.0);
        if (oracle::canonical_labels(oracle::best_cut_labels(sweep, 4.0, points.size())) !=
            oracle::canonical_labels(r.labels())) {
            o.fail("seed " + std::to_string(spec.seed) + ": labels differ from the sweep's best cut");
        }
    }
    if (good < 18) o.fail(std::to_string(good) + " of 20 seeds reach ARI 0.95");
    if (o.passed) o.detail = std::to_string(good) + " of 20 seeds reach ARI 0.95" + fmt(", lowest %.4f", worst);
    return o;
}

}  // namespace

int main() {
    report("two-merge leaf tree", two_merge());
    report("sweep oracle equivalence", sweep_equivalence());
    report("pruning barcode equivalence", barcode_equivalence());
    report("mst total weight", mst_correctness());
    report("condensation equivalence", condensation_equivalence());
    report("determinism across worker caps", determinism());
    report("scaling 20k to 80k", scaling());
    report("ari on noisy blobs", ari_recovery());
    return failures == 0 ? 0 : 1;
}
