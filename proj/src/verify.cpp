#include "plscan/verify.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "plscan/mst.hpp"
#include "plscan/oracle.hpp"
#include "plscan/pipeline.hpp"

namespace plscan::verify {

namespace {

std::string num(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string points_text(const std::vector<index_t>& points) {
    std::string out = "{";
    for (index_t i = 0; i < points.size() && i < 8; ++i) out += (i ? "," : "") + std::to_string(points[i]);
    if (points.size() > 8) out += ",... (" + std::to_string(points.size()) + " points)";
    return out + "}";
}

template <typename T, typename Describe>
std::string first_difference(const std::vector<T>& expected, const std::vector<T>& actual, Describe describe) {
    if (expected == actual) return {};
    for (index_t i = 0; i < std::min(expected.size(), actual.size()); ++i) {
        if (!(expected[i] == actual[i])) {
            return "entry " + std::to_string(i) + ": expected " + describe(expected[i]) + ", got " + describe(actual[i]);
        }
    }
    return "expected " + std::to_string(expected.size()) + " entries, got " + std::to_string(actual.size());
}

std::string describe_interval(const oracle::LeafInterval& leaf) {
    return "(" + num(leaf.birth) + ", " + num(leaf.death) + "] " + points_text(leaf.points);
}

std::string describe_bar(const oracle::Bar& bar) { return "(" + num(bar.birth) + ", " + num(bar.death) + "]"; }

std::string describe_row(const oracle::CanonicalRow& row) {
    return "parent " + (row.parent.empty() ? std::string("root") : points_text(row.parent)) + " child " +
           points_text(row.child) + " at " + num(row.distance) + " size " + num(row.size);
}

bool unit(const std::vector<double>& weights) {
    for (double w : weights) {
        if (w != 1.0) return false;
    }
    return true;
}

void hierarchy_checks(const FitResult& fit, const std::vector<double>& weights, double m_c, std::vector<Check>& out) {
    const index_t n = fit.forest.num_points;

    Check condense{"condensed tree matches breadth-first condensation", true, {}};
    condense.detail = first_difference(oracle::canonical_rows(oracle::bfs_condense(fit.linkage, weights, m_c)),
                                       oracle::canonical_rows(fit.condensed), describe_row);
    condense.passed = condense.detail.empty();
    out.push_back(condense);

    if (!unit(weights)) return;  // the threshold sweep steps by whole points

    const auto sweep = oracle::leaf_lifetimes_by_sweep(fit.linkage, weights, m_c);
    Check leaves{"leaf intervals match per-threshold sweep", true, {}};
    leaves.detail = first_difference(sweep, oracle::leaf_tree_intervals(fit.leaf_tree, fit.condensed), describe_interval);
    leaves.passed = leaves.detail.empty();
    out.push_back(leaves);

    Check trace{"size trace matches per-threshold totals", true, {}};
    const PersistenceTrace size_trace =
        fit.trace.measure == Measure::size ? fit.trace : persistence_trace(fit.leaf_tree, fit.condensed, Measure::size);
    const auto totals = oracle::size_trace_by_sweep(sweep, m_c, n);
    for (index_t i = 0; i < totals.size() && trace.passed; ++i) {
        const double m = m_c + 1.0 + static_cast<double>(i);
        const double got = trace_value_at(size_trace, m);
        if (got != totals[i]) {
            trace.passed = false;
            trace.detail = "at m = " + num(m) + ": expected " + num(totals[i]) + ", got " + num(got);
        }
    }
    out.push_back(trace);

    if (fit.trace.measure == Measure::size) {
        Check labels{"best-cut labels match per-threshold selection", true, {}};
        const auto expected = oracle::canonical_labels(oracle::best_cut_labels(sweep, m_c, n));
        const auto actual = oracle::canonical_labels(fit.labels());
        labels.detail = first_difference(expected, actual, [](label_t l) { return std::to_string(l); });
        labels.passed = labels.detail.empty();
        out.push_back(labels);
    }

    if (n <= 30) {
        Check barcode{"leaf intervals match pruning-metric barcode", true, {}};
        try {
            const auto space = oracle::build_pruning_space(fit.linkage, weights, m_c);
            barcode.detail = first_difference(oracle::pruning_barcode(space), oracle::leaf_tree_bars(fit.leaf_tree),
                                              describe_bar);
        } catch (const std::exception& e) {
            barcode.detail = e.what();
        }
        barcode.passed = barcode.detail.empty();
        out.push_back(barcode);
    }
}

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

Blobs make_blobs(const BlobSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uniform(-spec.box, spec.box);
    std::normal_distribution<double> normal(0.0, spec.spread);

    std::vector<double> centres(spec.centers * spec.dim);
    for (index_t c = 0; c < spec.centers; ++c) {
        double* centre = centres.data() + c * spec.dim;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            for (index_t d = 0; d < spec.dim; ++d) centre[d] = uniform(rng);
            bool apart = true;
            for (index_t o = 0; o < c && apart; ++o) {
                double sq = 0.0;
                for (index_t d = 0; d < spec.dim; ++d) sq += (centre[d] - centres[o * spec.dim + d]) * (centre[d] - centres[o * spec.dim + d]);
                apart = std::sqrt(sq) >= spec.min_separation;
            }
            if (apart) break;
        }
    }

    Blobs blobs;
    blobs.dim = spec.dim;
    for (index_t i = 0; i < spec.points; ++i) {
        const index_t blob = i % spec.centers;
        for (index_t d = 0; d < spec.dim; ++d) blobs.coords.push_back(centres[blob * spec.dim + d] + normal(rng));
        blobs.truth.push_back(static_cast<label_t>(blob));
    }
    const auto noise = static_cast<index_t>(
        std::llround(static_cast<double>(spec.points) * spec.noise_fraction / (1.0 - spec.noise_fraction)));
    for (index_t i = 0; i < noise; ++i) {
        for (index_t d = 0; d < spec.dim; ++d) blobs.coords.push_back(uniform(rng));
        blobs.truth.push_back(kNoise);
    }
    return blobs;
}

std::vector<Check> cross_check_points(const PointSet& points, index_t k, double min_cluster_size, TreeKind tree) {
    std::vector<Check> out;
    const SpatialIndex index(points, tree);
    const CoreDistances core = core_distances(index, k);

    Check neighbours{"core distances match full scan", true, {}};
    const auto expected_core = oracle::core_distances(points, k);
    neighbours.detail = first_difference(expected_core, core.values, num);
    neighbours.passed = neighbours.detail.empty();
    out.push_back(neighbours);

    Options options;
    options.k = k;
    options.min_cluster_size = min_cluster_size;
    options.tree = tree;
    const FitResult fit = plscan::fit(points, options);

    Check mst{"spanning tree weights match Prim", true, {}};
    mst.detail = first_difference(oracle::weight_multiset(oracle::prim_mst(points, expected_core)),
                                  oracle::weight_multiset(fit.forest), num);
    mst.passed = mst.detail.empty();
    out.push_back(mst);

    hierarchy_checks(fit, unit_weights(points.size()), min_cluster_size, out);
    return out;
}

std::vector<Check> cross_check_forest(const SpanningForest& forest, const std::vector<double>& weights,
                                      double min_cluster_size) {
    Options options;
    options.min_cluster_size = min_cluster_size;
    const FitResult fit = fit_forest(forest, options, weights);
    std::vector<Check> out;
    hierarchy_checks(fit, weights.empty() ? unit_weights(forest.num_points) : weights, min_cluster_size, out);
    return out;
}

std::string diff_leaf_trees(const LeafTree& expected, const LeafTree& actual, double tolerance) {
    if (expected.size() != actual.size()) {
        return "expected " + std::to_string(expected.size()) + " segments, got " + std::to_string(actual.size());
    }
    for (index_t s = 0; s < expected.size(); ++s) {
        const Segment& e = expected.segments[s];
        const Segment& a = actual.segments[s];
        const std::string where = "segment " + std::to_string(s) + ": ";
        if (e.parent != a.parent) {
            return where + "parent expected " + std::to_string(e.parent) + ", got " + std::to_string(a.parent);
        }
        const struct {
            const char* name;
            double want, got;
            bool exact;
        } fields[] = {{"d_min", e.d_min, a.d_min, false},
                      {"d_max", e.d_max, a.d_max, false},
                      {"s_min", e.s_min, a.s_min, true},
                      {"s_max", e.s_max, a.s_max, true}};
        for (const auto& f : fields) {
            const bool same = f.exact ? f.want == f.got : std::fabs(f.want - f.got) <= tolerance;
            if (!same) return where + f.name + " expected " + num(f.want) + ", got " + num(f.got);
        }
    }
    return {};
}

double adjusted_rand_index(const std::vector<label_t>& a, const std::vector<label_t>& b) {
    if (a.size() != b.size()) throw InputError("labelings differ in length");
    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    std::map<std::pair<label_t, label_t>, double> table;
    std::map<label_t, double> rows, cols;
    for (index_t i = 0; i < a.size(); ++i) {
        table[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [key, count] : table) index += pairs(count);
    for (const auto& [key, count] : rows) sum_rows += pairs(count);
    for (const auto& [key, count] : cols) sum_cols += pairs(count);
    const double expected = sum_rows * sum_cols / pairs(static_cast<double>(a.size()));
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

}  // namespace plscan::verify
