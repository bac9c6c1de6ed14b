#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsclust/core_data.hpp"
#include "tsclust/distances.hpp"

namespace tsclust {

/// The three aligned views of one preprocessed collection. `original` keeps
/// the assembled values (NaN where absent) for profiling in source units.
struct PreparedData {
    SeriesCollection original;
    SeriesCollection scaled;
    SymbolicCollection symbolic;
    std::vector<ProvenanceStep> provenance;
};

struct OutlierOptions {
    bool enabled = true;
    Metric metric = Metric::mpbd;
    MetricParams params;
    double percentile = 95.0;
    std::size_t threads = 1;
};

/// Linear-interpolated percentile (0..100) of `values`.
double percentile_of(std::vector<double> values, double percentile);

/// Ids whose nearest-neighbour distance exceeds the given percentile of all
/// nearest-neighbour distances in the matrix.
std::vector<std::string> find_outliers(const DistanceMatrix& matrix, double percentile);

/// Removes nearest-neighbour outliers from all three views. The metric reads
/// the symbolic view for levenshtein and symbolic mpbd, the scaled view otherwise.
PreparedData filter_outliers(const PreparedData& data, const OutlierOptions& options);

struct PreprocessOptions {
    Mode mode = Mode::price;
    std::optional<DateRange> range;
    double max_missing_fraction = 0.8;
    std::optional<FillStrategy> fill;  // default: forward for price, mean for sales
    double scale_lo = 0.1;
    double scale_hi = 1.0;
    DiscretizationThresholds thresholds;
    OutlierOptions outliers;
};

/// assemble -> drop_sparse -> fill -> minmax_scale -> discretize -> filter_outliers.
PreparedData preprocess(const std::vector<RawObservation>& observations, const PreprocessOptions& options);

}  // namespace tsclust
