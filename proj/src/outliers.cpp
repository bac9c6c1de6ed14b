#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tsclust/error.hpp"
#include "tsclust/preprocess.hpp"

namespace tsclust {

double percentile_of(std::vector<double> values, double percentile) {
    if (values.empty()) throw UsageError("percentile_of: empty input");
    std::sort(values.begin(), values.end());
    const double pos = percentile / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return values[lo];
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<std::string> find_outliers(const DistanceMatrix& matrix, double percentile) {
    if (!(percentile > 0.0 && percentile <= 100.0))
        throw UsageError("filter_outliers: percentile must lie in (0, 100]");
    const std::size_t n = matrix.size();
    if (n < 2) throw DataError("filter_outliers: collection needs at least two series");
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) nearest[i] = std::min(nearest[i], matrix(i, j));
    const double cutoff = percentile_of(nearest, percentile);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        if (nearest[i] > cutoff) out.push_back(matrix.ids()[i]);
    return out;
}

namespace {

template <typename Collection>
Collection without(const Collection& c, const std::set<std::string>& drop) {
    Collection out = c;
    out.series.clear();
    for (const auto& s : c.series)
        if (!drop.count(s.series_id)) out.series.push_back(s);
    return out;
}

}  // namespace

PreparedData filter_outliers(const PreparedData& data, const OutlierOptions& options) {
    const bool symbolic = options.metric == Metric::levenshtein ||
                          (options.metric == Metric::mpbd &&
                           options.params.mpbd_representation == Representation::symbolic);
    const DistanceMatrix matrix =
        symbolic ? distance_matrix(data.symbolic, options.metric, options.params, options.threads)
                 : distance_matrix(data.scaled, options.metric, options.params, options.threads);
    const auto removed = find_outliers(matrix, options.percentile);
    const std::set<std::string> drop(removed.begin(), removed.end());

    PreparedData out{without(data.original, drop), without(data.scaled, drop), without(data.symbolic, drop),
                     data.provenance};
    ProvenanceStep step{"filter_outliers", {}, removed};
    step.params["metric"] = std::string(to_string(options.metric));
    if (options.metric == Metric::mpbd) {
        step.params["omega"] = options.params.omega;
        step.params["representation"] = std::string(to_string(options.params.mpbd_representation));
    }
    if (options.metric == Metric::dtw && options.params.dtw_window)
        step.params["dtw_window"] = *options.params.dtw_window;
    step.params["percentile"] = options.percentile;
    out.provenance.push_back(std::move(step));
    return out;
}

PreparedData preprocess(const std::vector<RawObservation>& observations, const PreprocessOptions& options) {
    const SeriesCollection assembled = assemble_series(observations, options.mode, options.range);
    const SeriesCollection kept = drop_sparse(assembled, options.max_missing_fraction);
    const FillStrategy strategy =
        options.fill.value_or(options.mode == Mode::price ? FillStrategy::forward : FillStrategy::mean);
    const SeriesCollection filled = fill_missing(kept, strategy);
    const SeriesCollection scaled = minmax_scale(filled, options.scale_lo, options.scale_hi);
    const SymbolicCollection symbolic = discretize(scaled, options.thresholds);

    PreparedData data{kept, scaled, symbolic, symbolic.provenance};
    if (options.outliers.enabled && data.scaled.size() >= 2) data = filter_outliers(data, options.outliers);
    return data;
}

}  // namespace tsclust
