#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tsclust {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

enum class Mode { price, sales };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct RawObservation {
    std::string series_id;
    Date date{};
    double value = 0.0;
    std::optional<std::string> category;
    std::optional<std::string> store;
};

/// Header names of the long-format input. series_id, date and value are
/// required; category and store are picked up when present.
struct ColumnMapping {
    std::string series_id = "series_id";
    std::string date = "date";
    std::string value = "value";
    std::string category = "category";
    std::string store = "store";
};

struct Reject {
    std::size_t line_number = 0;
    std::string raw_row;
    std::string reason;
};

struct LoadResult {
    std::vector<RawObservation> observations;
    std::vector<Reject> rejects;
};

/// Loads long-format observations. Unparseable rows go to `rejects`;
/// a duplicate (series_id, store, date) key is a DataError.
LoadResult load_long_csv(const std::filesystem::path& path, const ColumnMapping& schema = {});

/// Loads the wide layout: `series_id,<date_1>,...,<date_m>`; empty cell = missing.
LoadResult load_wide_csv(const std::filesystem::path& path);

std::string rejects_to_csv(const std::vector<Reject>& rejects);

/// One entity's history on the collection's shared daily index. Missing
/// positions hold NaN until imputation; `missing_mask` keeps recording which
/// positions were absent in the input.
struct TimeSeries {
    std::string series_id;
    std::string item_id;  // series_id without the store suffix in sales mode
    std::vector<double> values;
    std::vector<bool> missing_mask;
    std::optional<std::string> category;
    std::optional<std::string> store;

    std::size_t size() const { return values.size(); }
    std::size_t missing_count() const;
    /// True when no value is NaN.
    bool complete() const;
};

/// Discretized levels 1..5 (A..E).
struct SymbolicSeries {
    std::string series_id;
    std::vector<std::uint8_t> levels;

    std::size_t size() const { return levels.size(); }
    std::string to_letters() const;
};

struct ProvenanceStep {
    std::string step;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::vector<std::string> dropped_ids;
};

nlohmann::ordered_json provenance_to_json(const std::vector<ProvenanceStep>& steps);

struct SeriesCollection {
    std::vector<TimeSeries> series;
    Mode mode = Mode::price;
    Date start{};
    std::vector<ProvenanceStep> provenance;

    std::size_t size() const { return series.size(); }
    std::size_t length() const { return series.empty() ? 0 : series.front().size(); }
    std::vector<std::string> ids() const;
};

struct SymbolicCollection {
    std::vector<SymbolicSeries> series;
    Mode mode = Mode::price;
    Date start{};
    std::vector<ProvenanceStep> provenance;

    std::size_t size() const { return series.size(); }
    std::size_t length() const { return series.empty() ? 0 : series.front().size(); }
    std::vector<std::string> ids() const;
};

struct DateRange {
    Date start{};
    Date end{};
};

/// Builds one series per key over the shared daily range. In sales mode the
/// key is (series_id, store) and the series id becomes "<item>@<store>".
/// Without an explicit range, [min date, max date] of the observations is used.
SeriesCollection assemble_series(const std::vector<RawObservation>& observations, Mode mode,
                                 std::optional<DateRange> range = std::nullopt);

/// Keeps series whose missing fraction is at most `max_missing_fraction`.
SeriesCollection drop_sparse(const SeriesCollection& collection, double max_missing_fraction = 0.8);

/// Last observation carried forward; a missing head takes the first present value.
TimeSeries fill_forward(const TimeSeries& series);

/// Missing positions take the mean of the present values.
TimeSeries fill_mean(const TimeSeries& series);

enum class FillStrategy { forward, mean };

/// Applies the fill strategy to every series and records the step.
SeriesCollection fill_missing(const SeriesCollection& collection, FillStrategy strategy);

/// Per-series min-max scaling onto [lo, hi]; a constant series maps to lo.
TimeSeries minmax_scale(const TimeSeries& series, double lo = 0.1, double hi = 1.0);
SeriesCollection minmax_scale(const SeriesCollection& collection, double lo = 0.1, double hi = 1.0);

/// Upper-exclusive cut points between A|B, B|C, C|D and D|E.
struct DiscretizationThresholds {
    std::array<double, 4> cuts{0.29, 0.47, 0.65, 0.83};

    void validate() const;
};

std::uint8_t level_of(double value, const DiscretizationThresholds& thresholds = {});

/// Maps every scaled value to its level. Values outside [0, 1] mean scaling
/// was skipped and raise DataError.
SymbolicSeries discretize(const TimeSeries& series, const DiscretizationThresholds& thresholds = {});
SymbolicCollection discretize(const SeriesCollection& collection,
                              const DiscretizationThresholds& thresholds = {});

}  // namespace tsclust
