#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/core_data.hpp"

namespace tsclust {

enum class Metric { euclidean, levenshtein, dtw, mpbd };
enum class Normalization { none, matrix_max, table1 };
/// Which form of a series MPBD reads: discretized levels or scaled values.
enum class Representation { symbolic, numeric };

std::string_view to_string(Metric metric);
std::string_view to_string(Normalization normalization);
std::string_view to_string(Representation representation);
Metric parse_metric(std::string_view text);
Normalization parse_normalization(std::string_view text);
Representation parse_representation(std::string_view text);

struct MetricParams {
    double omega = 2.0;
    std::optional<std::size_t> dtw_window;
    Representation mpbd_representation = Representation::symbolic;
    // Scaling bounds of the inputs; only the table1 Euclidean normalization reads them.
    double scale_lo = 0.1;
    double scale_hi = 1.0;
};

double euclidean(std::span<const double> p, std::span<const double> q);

/// Unit-cost edit distance (insert, delete, substitute).
std::size_t levenshtein(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q);

/// levenshtein / max(|p|, |q|); 0 when both are empty.
double normalized_levenshtein(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q);

/// Dynamic time warping with squared local cost and a final square root.
/// `window` is the Sakoe-Chiba half-width; it must cover the length difference.
double dtw(std::span<const double> p, std::span<const double> q, std::optional<std::size_t> window = std::nullopt);

/// Cost of one aligned step given the two deltas: 0 when equal, |a-b| for a
/// same-sign move, omega*|a-b| whenever the signs differ (sign(0) = 0).
double mpbd_step_cost(double delta_p, double delta_q, double omega);

/// Movement-pattern distance over the delta sequences d[t] = x[t] - x[t+1].
double mpbd(std::span<const double> p, std::span<const double> q, double omega = 2.0);
double mpbd(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q, double omega = 2.0);

/// Dense symmetric matrix stored row-major with the full mirror.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::vector<std::string> ids, Metric metric, MetricParams params, std::size_t series_length);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    Metric metric() const { return metric_; }
    Normalization normalization() const { return normalization_; }
    const MetricParams& params() const { return params_; }
    std::size_t series_length() const { return series_length_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * size(), size()}; }
    const std::vector<double>& entries() const { return entries_; }

    /// Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) {
        entries_[i * size() + j] = value;
        entries_[j * size() + i] = value;
    }
    void set_normalization(Normalization n) { normalization_ = n; }
    double max_entry() const;

private:
    std::vector<std::string> ids_;
    std::vector<double> entries_;
    Metric metric_ = Metric::euclidean;
    Normalization normalization_ = Normalization::none;
    MetricParams params_;
    std::size_t series_length_ = 0;
};

/// Builds the matrix from scaled numeric series (euclidean, dtw, numeric mpbd).
/// Every unordered pair is computed once; the output does not depend on `threads`.
DistanceMatrix distance_matrix(const SeriesCollection& collection, Metric metric, const MetricParams& params = {},
                               std::size_t threads = 1);

/// Builds the matrix from discretized series (levenshtein, symbolic mpbd).
DistanceMatrix distance_matrix(const SymbolicCollection& collection, Metric metric, const MetricParams& params = {},
                               std::size_t threads = 1);

/// matrix_max divides by the largest entry (identity when it is 0).
/// table1 applies the per-metric denominators: mpbd omega*n, levenshtein n,
/// euclidean sqrt(n)*(hi-lo), dtw the matrix maximum.
DistanceMatrix normalize_matrix(const DistanceMatrix& matrix, Normalization mode);

/// Scalar table1 denominator for one pair of length-n series.
double table1_denominator(Metric metric, const MetricParams& params, std::size_t series_length);

}  // namespace tsclust
