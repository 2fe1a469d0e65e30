#include "plscan/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string_view>

#include "plscan/mst.hpp"

namespace plscan::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view field, double& value) {
    if (field.empty()) return false;
    const std::string copy(field);  // strtod needs a terminated string
    char* end = nullptr;
    value = std::strtod(copy.c_str(), &end);
    return end == copy.c_str() + copy.size();
}

bool parse_index(std::string_view field, index_t& value) {
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc() && ptr == field.data() + field.size() && !field.empty();
}

[[noreturn]] void fail(index_t line, const std::string& message) {
    throw InputError("line " + std::to_string(line) + ": " + message);
}

bool numeric_row(const std::vector<std::string_view>& fields) {
    double ignored = 0.0;
    for (auto f : fields) {
        if (!parse_double(f, ignored)) return false;
    }
    return true;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

InputKind detect_kind(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        const auto fields = split(line);
        return fields.size() == 3 && fields[0] == "u" && fields[1] == "v" && fields[2] == "weight" ? InputKind::forest
                                                                                                  : InputKind::points;
    }
    return InputKind::points;
}

PointsTable read_points(std::istream& in) {
    PointsTable table;
    std::string line;
    index_t number = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++number;
        if (is_blank(line)) continue;
        const auto fields = split(line);
        if (first && !numeric_row(fields)) {
            first = false;
            continue;  // header
        }
        first = false;
        if (table.dim == 0) table.dim = fields.size();
        if (fields.size() != table.dim) {
            fail(number, "expected " + std::to_string(table.dim) + " columns, found " + std::to_string(fields.size()));
        }
        for (index_t c = 0; c < fields.size(); ++c) {
            double value = 0.0;
            if (!parse_double(fields[c], value)) {
                fail(number, "column " + std::to_string(c + 1) + " is not a number: '" + std::string(fields[c]) + "'");
            }
            table.coords.push_back(value);
        }
        ++table.rows;
    }
    if (table.rows == 0) throw InputError("no data rows in points input");
    return table;
}

SpanningForest read_forest(std::istream& in, index_t num_points) {
    std::string line;
    index_t number = 0;
    bool header = false;
    std::vector<Edge> edges;
    index_t max_id = 0;
    while (std::getline(in, line)) {
        ++number;
        if (is_blank(line)) continue;
        const auto fields = split(line);
        if (!header) {
            if (fields.size() != 3 || fields[0] != "u" || fields[1] != "v" || fields[2] != "weight") {
                fail(number, "forest input must start with the header u,v,weight");
            }
            header = true;
            continue;
        }
        if (fields.size() != 3) fail(number, "expected 3 columns u,v,weight, found " + std::to_string(fields.size()));
        Edge e;
        if (!parse_index(fields[0], e.u)) fail(number, "u is not a point index: '" + std::string(fields[0]) + "'");
        if (!parse_index(fields[1], e.v)) fail(number, "v is not a point index: '" + std::string(fields[1]) + "'");
        if (!parse_double(fields[2], e.weight)) fail(number, "weight is not a number: '" + std::string(fields[2]) + "'");
        max_id = std::max({max_id, e.u, e.v});
        edges.push_back(e);
    }
    if (!header) throw InputError("forest input is empty");
    if (num_points == 0) num_points = edges.empty() ? 0 : max_id + 1;
    return from_precomputed(std::move(edges), num_points);
}

std::vector<double> read_weights(std::istream& in) {
    std::vector<double> weights;
    std::string line;
    index_t number = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++number;
        if (is_blank(line)) continue;
        const auto field = trim(line);
        double value = 0.0;
        if (!parse_double(field, value)) {
            if (first) {
                first = false;
                continue;
            }
            fail(number, "weight is not a number: '" + std::string(field) + "'");
        }
        first = false;
        weights.push_back(value);
    }
    return weights;
}

std::string format_real(double value) {
    static const int precision = [] {
        const char* env = std::getenv("PLSCAN_PRECISION");
        if (env == nullptr) return 9;
        const int p = std::atoi(env);
        return p >= 1 && p <= 17 ? p : 9;
    }();
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    return buffer;
}

void write_labels(std::ostream& out, const Clustering& clustering) {
    out << "point,label,probability\n";
    for (index_t i = 0; i < clustering.labels.size(); ++i) {
        out << i << ',' << clustering.labels[i] << ',' << format_real(clustering.probabilities[i]) << '\n';
    }
}

void write_trace(std::ostream& out, const PersistenceTrace& trace) {
    out << "min_size,total_persistence\n";
    for (index_t i = 0; i < trace.min_size.size(); ++i) {
        out << format_real(trace.min_size[i]) << ',' << format_real(trace.total[i]) << '\n';
    }
}

void write_layers(std::ostream& out, const std::vector<Layer>& layers) {
    out << "rank,cut,total_persistence\n";
    for (index_t i = 0; i < layers.size(); ++i) {
        out << i << ',' << format_real(layers[i].cut) << ',' << format_real(layers[i].total) << '\n';
    }
}

void write_leaf_tree(std::ostream& out, const LeafTree& tree) {
    out << "segment,parent,d_min,d_max,s_min,s_max\n";
    for (index_t i = 0; i < tree.size(); ++i) {
        const Segment& s = tree.segments[i];
        out << i << ',' << s.parent << ',' << format_real(s.d_min) << ',' << format_real(s.d_max) << ','
            << format_real(s.s_min) << ',' << format_real(s.s_max) << '\n';
    }
}

void write_condensed(std::ostream& out, const CondensedTree& tree) {
    out << "parent,child,distance,size\n";
    for (const auto& row : tree.rows) {
        out << row.parent << ',' << row.child << ',' << format_real(row.distance) << ',' << format_real(row.size)
            << '\n';
    }
}

LeafTree read_leaf_tree(std::istream& in) {
    LeafTree tree;
    std::string line;
    index_t number = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        if (is_blank(line)) continue;
        const auto fields = split(line);
        if (!header) {
            header = true;
            if (!numeric_row(fields)) continue;
        }
        if (fields.size() != 6) fail(number, "expected 6 leaf-tree columns, found " + std::to_string(fields.size()));
        index_t segment = 0;
        Segment s;
        if (!parse_index(fields[0], segment) || segment != tree.segments.size()) {
            fail(number, "segment ids must count up from 0");
        }
        if (!parse_index(fields[1], s.parent)) fail(number, "parent is not a segment index");
        double* targets[4] = {&s.d_min, &s.d_max, &s.s_min, &s.s_max};
        for (int c = 0; c < 4; ++c) {
            if (!parse_double(fields[2 + c], *targets[c])) fail(number, "column " + std::to_string(3 + c) + " is not a number");
        }
        tree.segments.push_back(s);
    }
    return tree;
}

}  // namespace plscan::io
