#include <algorithm>
#include <cmath>

#include "tsclust/distances.hpp"
#include "tsclust/error.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust {

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids, Metric metric, MetricParams params,
                               std::size_t series_length)
    : ids_(std::move(ids)),
      entries_(ids_.size() * ids_.size(), 0.0),
      metric_(metric),
      params_(params),
      series_length_(series_length) {}

double DistanceMatrix::max_entry() const {
    return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

namespace {

// Fills the upper triangle from `pair_distance(i, j)`; pairs are enumerated
// row-major and split into contiguous ranges, one writer per cell.
template <typename PairFn>
void fill_pairs(DistanceMatrix& m, std::size_t threads, PairFn&& pair_distance) {
    const std::size_t n = m.size();
    const std::size_t pairs = n * (n - 1) / 2;
    parallel_for(pairs, threads, [&](std::size_t begin, std::size_t end) {
        if (begin >= end) return;
        // Locate the (i, j) of pair index `begin`.
        std::size_t i = 0, row_start = 0;
        while (row_start + (n - 1 - i) <= begin) {
            row_start += n - 1 - i;
            ++i;
        }
        std::size_t j = i + 1 + (begin - row_start);
        for (std::size_t p = begin; p < end; ++p) {
            m.set(i, j, pair_distance(i, j));
            if (++j == n) {
                ++i;
                j = i + 1;
            }
        }
    });
}

void check_size(std::size_t n) {
    if (n < 2) throw DataError("distance_matrix: collection needs at least two series");
}

}  // namespace

DistanceMatrix distance_matrix(const SeriesCollection& collection, Metric metric, const MetricParams& params,
                               std::size_t threads) {
    check_size(collection.size());
    if (metric == Metric::levenshtein)
        throw DataError("representation mismatch: levenshtein requires a discretized collection");
    for (const auto& s : collection.series)
        if (!s.complete()) throw DataError("distance_matrix: series " + s.series_id + " has missing values");
    MetricParams used = params;
    if (metric == Metric::mpbd) used.mpbd_representation = Representation::numeric;
    if (metric != Metric::dtw) {
        for (const auto& s : collection.series)
            if (s.size() != collection.length())
                throw DataError("distance_matrix: unequal series lengths for " + std::string(to_string(metric)));
    }
    DistanceMatrix m(collection.ids(), metric, used, collection.length());
    const auto& series = collection.series;
    fill_pairs(m, threads, [&](std::size_t i, std::size_t j) {
        const std::span<const double> a = series[i].values, b = series[j].values;
        switch (metric) {
            case Metric::euclidean: return euclidean(a, b);
            case Metric::dtw: return dtw(a, b, used.dtw_window);
            case Metric::mpbd: return mpbd(a, b, used.omega);
            case Metric::levenshtein: break;
        }
        return 0.0;
    });
    return m;
}

DistanceMatrix distance_matrix(const SymbolicCollection& collection, Metric metric, const MetricParams& params,
                               std::size_t threads) {
    check_size(collection.size());
    if (metric != Metric::levenshtein && metric != Metric::mpbd)
        throw DataError("representation mismatch: " + std::string(to_string(metric)) +
                        " requires a numeric collection");
    if (metric == Metric::mpbd) {
        for (const auto& s : collection.series)
            if (s.size() != collection.length()) throw DataError("distance_matrix: unequal series lengths for mpbd");
    }
    MetricParams used = params;
    if (metric == Metric::mpbd) used.mpbd_representation = Representation::symbolic;
    DistanceMatrix m(collection.ids(), metric, used, collection.length());
    const auto& series = collection.series;
    fill_pairs(m, threads, [&](std::size_t i, std::size_t j) {
        const std::span<const std::uint8_t> a = series[i].levels, b = series[j].levels;
        if (metric == Metric::levenshtein) return static_cast<double>(levenshtein(a, b));
        return mpbd(a, b, used.omega);
    });
    return m;
}

double table1_denominator(Metric metric, const MetricParams& params, std::size_t series_length) {
    const auto n = static_cast<double>(series_length);
    switch (metric) {
        case Metric::mpbd: return params.omega * n;
        case Metric::levenshtein: return n;
        case Metric::euclidean: return std::sqrt(n) * (params.scale_hi - params.scale_lo);
        case Metric::dtw: break;
    }
    throw UsageError("table1 normalization of dtw uses the matrix maximum, not a per-pair denominator");
}

DistanceMatrix normalize_matrix(const DistanceMatrix& matrix, Normalization mode) {
    if (mode == Normalization::none) return matrix;
    if (matrix.normalization() != Normalization::none)
        throw UsageError("normalize_matrix: matrix is already normalized");
    DistanceMatrix out = matrix;
    out.set_normalization(mode);

    double denom = 0.0;
    if (mode == Normalization::matrix_max || matrix.metric() == Metric::dtw)
        denom = matrix.max_entry();
    else
        denom = table1_denominator(matrix.metric(), matrix.params(), matrix.series_length());
    if (denom <= 0.0) return out;

    const std::size_t n = matrix.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, matrix(i, j) / denom);
    return out;
}

}  // namespace tsclust
