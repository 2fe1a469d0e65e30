#include "plscan/types.hpp"

#include <cmath>

namespace plscan {

namespace {

struct MeasureName {
    Measure measure;
    std::string_view name;
};

constexpr MeasureName kMeasureNames[] = {
    {Measure::size, "size"},
    {Measure::distance, "distance"},
    {Measure::density, "density"},
    {Measure::size_distance, "size_distance"},
    {Measure::size_density, "size_density"},
};

}  // namespace

Measure parse_measure(std::string_view name) {
    for (const auto& entry : kMeasureNames) {
        if (entry.name == name) return entry.measure;
    }
    throw InputError("unknown persistence measure '" + std::string(name) +
                     "' (expected size, distance, density, size_distance or size_density)");
}

std::string_view to_string(Measure measure) {
    for (const auto& entry : kMeasureNames) {
        if (entry.measure == measure) return entry.name;
    }
    return "unknown";
}

void validate_sample_weights(const std::vector<double>& weights, index_t n) {
    if (weights.size() != n) {
        throw InputError("expected " + std::to_string(n) + " sample weights, got " + std::to_string(weights.size()));
    }
    for (index_t i = 0; i < n; ++i) {
        if (!std::isfinite(weights[i]) || !(weights[i] > 0.0)) {
            throw InputError("sample weight " + std::to_string(i) + " must be finite and positive");
        }
    }
}

}  // namespace plscan
