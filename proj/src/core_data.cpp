#include "tsclust/core_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return std::string(s);
}

std::optional<std::string> optional_field(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    const std::string t = trim(text);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    if (!parse_int(std::string_view(t).substr(0, 4), y) || !parse_int(std::string_view(t).substr(5, 2), m) ||
        !parse_int(std::string_view(t).substr(8, 2), d))
        return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string_view to_string(Mode mode) { return mode == Mode::price ? "price" : "sales"; }

Mode parse_mode(std::string_view text) {
    if (text == "price") return Mode::price;
    if (text == "sales") return Mode::sales;
    throw UsageError("unknown mode '" + std::string(text) + "' (expected price|sales)");
}

LoadResult load_long_csv(const std::filesystem::path& path, const ColumnMapping& schema) {
    if (!std::filesystem::exists(path)) throw DataError("input file not found: " + path.string());
    const auto records = csv::read_file(path);
    if (records.empty()) throw DataError(path.string() + ": missing header row");

    const auto& header = records.front().fields;
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return i;
        return std::nullopt;
    };
    auto required = [&](const std::string& name) {
        auto c = column(name);
        if (!c) throw DataError(path.string() + ": mapped column '" + name + "' not present in header");
        return *c;
    };
    const std::size_t c_id = required(schema.series_id);
    const std::size_t c_date = required(schema.date);
    const std::size_t c_value = required(schema.value);
    const auto c_category = column(schema.category);
    const auto c_store = column(schema.store);

    LoadResult result;
    std::map<std::tuple<std::string, std::string, Date>, std::size_t> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        auto reject = [&](std::string reason) {
            result.rejects.push_back({rec.line_number, rec.raw, std::move(reason)});
        };
        const std::size_t needed = std::max({c_id, c_date, c_value}) + 1;
        if (rec.fields.size() < needed) {
            reject("too few fields");
            continue;
        }
        RawObservation obs;
        obs.series_id = trim(rec.fields[c_id]);
        if (obs.series_id.empty()) {
            reject("empty series_id");
            continue;
        }
        const auto date = parse_date(rec.fields[c_date]);
        if (!date) {
            reject("unparseable date");
            continue;
        }
        obs.date = *date;
        const auto value = csv::parse_real(rec.fields[c_value]);
        if (!value) {
            reject("unparseable value");
            continue;
        }
        obs.value = *value;
        if (c_category && *c_category < rec.fields.size()) obs.category = optional_field(trim(rec.fields[*c_category]));
        if (c_store && *c_store < rec.fields.size()) obs.store = optional_field(trim(rec.fields[*c_store]));

        const auto key = std::make_tuple(obs.series_id, obs.store.value_or(""), obs.date);
        if (auto [it, inserted] = seen.emplace(key, rec.line_number); !inserted) {
            throw DataError(path.string() + ":" + std::to_string(rec.line_number) + ": duplicate observation for (" +
                            obs.series_id + ", " + format_date(obs.date) + "), first seen on line " +
                            std::to_string(it->second));
        }
        result.observations.push_back(std::move(obs));
    }
    return result;
}

LoadResult load_wide_csv(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DataError("input file not found: " + path.string());
    const auto records = csv::read_file(path);
    if (records.empty()) throw DataError(path.string() + ": missing header row");
    const auto& header = records.front().fields;
    if (header.size() < 2) throw DataError(path.string() + ": wide header needs series_id and at least one date");
    std::vector<Date> dates;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto d = parse_date(header[c]);
        if (!d) throw DataError(path.string() + ": header column '" + header[c] + "' is not an ISO date");
        dates.push_back(*d);
    }

    LoadResult result;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            result.rejects.push_back({rec.line_number, rec.raw, "field count does not match header"});
            continue;
        }
        const std::string id = trim(rec.fields[0]);
        if (id.empty()) {
            result.rejects.push_back({rec.line_number, rec.raw, "empty series_id"});
            continue;
        }
        if (!seen.insert(id).second)
            throw DataError(path.string() + ":" + std::to_string(rec.line_number) + ": duplicate series_id " + id);
        std::vector<RawObservation> row;
        bool bad = false;
        for (std::size_t c = 1; c < rec.fields.size(); ++c) {
            if (trim(rec.fields[c]).empty()) continue;
            const auto v = csv::parse_real(rec.fields[c]);
            if (!v) {
                bad = true;
                break;
            }
            row.push_back({id, dates[c - 1], *v, std::nullopt, std::nullopt});
        }
        if (bad) {
            result.rejects.push_back({rec.line_number, rec.raw, "unparseable value"});
            continue;
        }
        for (auto& o : row) result.observations.push_back(std::move(o));
    }
    return result;
}

std::string rejects_to_csv(const std::vector<Reject>& rejects) {
    std::string out = "line_number,raw_row,reason\n";
    for (const auto& r : rejects) out += csv::join({std::to_string(r.line_number), r.raw_row, r.reason}) + "\n";
    return out;
}

std::size_t TimeSeries::missing_count() const {
    return static_cast<std::size_t>(std::count(missing_mask.begin(), missing_mask.end(), true));
}

bool TimeSeries::complete() const {
    return std::none_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

std::string SymbolicSeries::to_letters() const {
    std::string s;
    s.reserve(levels.size());
    for (auto l : levels) s.push_back(static_cast<char>('A' + l - 1));
    return s;
}

nlohmann::ordered_json provenance_to_json(const std::vector<ProvenanceStep>& steps) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
        nlohmann::ordered_json j;
        j["step"] = s.step;
        j["params"] = s.params;
        j["dropped_ids"] = s.dropped_ids;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<std::string> SeriesCollection::ids() const {
    std::vector<std::string> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.series_id);
    return out;
}

std::vector<std::string> SymbolicCollection::ids() const {
    std::vector<std::string> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.series_id);
    return out;
}

SeriesCollection assemble_series(const std::vector<RawObservation>& observations, Mode mode,
                                 std::optional<DateRange> range) {
    if (observations.empty()) throw DataError("assemble_series: empty observation list");
    if (!range) {
        auto [lo, hi] = std::minmax_element(observations.begin(), observations.end(),
                                            [](const auto& a, const auto& b) { return a.date < b.date; });
        range = DateRange{lo->date, hi->date};
    }
    if (range->start > range->end) throw UsageError("assemble_series: start date after end date");
    const auto length = static_cast<std::size_t>((range->end - range->start).count()) + 1;

    std::map<std::string, TimeSeries> by_key;
    std::size_t out_of_range = 0;
    for (const auto& obs : observations) {
        if (obs.date < range->start || obs.date > range->end) {
            ++out_of_range;
            continue;
        }
        std::string key = obs.series_id;
        if (mode == Mode::sales && obs.store) key += "@" + *obs.store;
        auto [it, fresh] = by_key.try_emplace(key);
        TimeSeries& ts = it->second;
        if (fresh) {
            ts.series_id = key;
            ts.item_id = obs.series_id;
            ts.values.assign(length, kNaN);
            ts.missing_mask.assign(length, true);
            if (mode == Mode::sales) ts.store = obs.store;
        }
        if (!ts.category && obs.category) ts.category = obs.category;
        const auto t = static_cast<std::size_t>((obs.date - range->start).count());
        if (!ts.missing_mask[t])
            throw DataError("duplicate observation for " + key + " on " + format_date(obs.date));
        ts.values[t] = obs.value;
        ts.missing_mask[t] = false;
    }
    if (by_key.empty()) throw DataError("assemble_series: no observation falls inside the date range");

    SeriesCollection out;
    out.mode = mode;
    out.start = range->start;
    for (auto& [key, ts] : by_key) out.series.push_back(std::move(ts));
    ProvenanceStep step{"assemble", {}, {}};
    step.params["mode"] = std::string(to_string(mode));
    step.params["start"] = format_date(range->start);
    step.params["end"] = format_date(range->end);
    step.params["length"] = length;
    step.params["series"] = out.series.size();
    step.params["out_of_range_observations"] = out_of_range;
    out.provenance.push_back(std::move(step));
    return out;
}

SeriesCollection drop_sparse(const SeriesCollection& collection, double max_missing_fraction) {
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0))
        throw UsageError("drop_sparse: max_missing_fraction must lie in [0, 1]");
    SeriesCollection out;
    out.mode = collection.mode;
    out.start = collection.start;
    out.provenance = collection.provenance;
    ProvenanceStep step{"drop_sparse", {}, {}};
    step.params["max_missing_fraction"] = max_missing_fraction;
    for (const auto& s : collection.series) {
        const double fraction =
            s.size() == 0 ? 1.0 : static_cast<double>(s.missing_count()) / static_cast<double>(s.size());
        if (fraction <= max_missing_fraction)
            out.series.push_back(s);
        else
            step.dropped_ids.push_back(s.series_id);
    }
    out.provenance.push_back(std::move(step));
    return out;
}

TimeSeries fill_forward(const TimeSeries& series) {
    const auto first = std::find(series.missing_mask.begin(), series.missing_mask.end(), false);
    if (first == series.missing_mask.end())
        throw DataError("fill_forward: series " + series.series_id + " has no present value");
    TimeSeries out = series;
    double last = series.values[static_cast<std::size_t>(first - series.missing_mask.begin())];
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (series.missing_mask[t])
            out.values[t] = last;
        else
            last = series.values[t];
    }
    return out;
}

TimeSeries fill_mean(const TimeSeries& series) {
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (!series.missing_mask[t]) {
            sum += series.values[t];
            ++present;
        }
    }
    if (present == 0) throw DataError("fill_mean: series " + series.series_id + " has no present value");
    const double mean = sum / static_cast<double>(present);
    TimeSeries out = series;
    for (std::size_t t = 0; t < out.size(); ++t)
        if (series.missing_mask[t]) out.values[t] = mean;
    return out;
}

SeriesCollection fill_missing(const SeriesCollection& collection, FillStrategy strategy) {
    SeriesCollection out = collection;
    for (auto& s : out.series) s = strategy == FillStrategy::forward ? fill_forward(s) : fill_mean(s);
    ProvenanceStep step{strategy == FillStrategy::forward ? "fill_forward" : "fill_mean", {}, {}};
    std::size_t filled = 0;
    for (const auto& s : collection.series) filled += s.missing_count();
    step.params["filled_positions"] = filled;
    out.provenance.push_back(std::move(step));
    return out;
}

TimeSeries minmax_scale(const TimeSeries& series, double lo, double hi) {
    if (!(lo < hi)) throw UsageError("minmax_scale: lo must be below hi");
    if (!series.complete()) throw DataError("minmax_scale: series " + series.series_id + " has missing values");
    TimeSeries out = series;
    if (series.values.empty()) return out;
    const auto [mn_it, mx_it] = std::minmax_element(series.values.begin(), series.values.end());
    const double mn = *mn_it, mx = *mx_it;
    for (auto& v : out.values) {
        if (mn == mx || v == mn)
            v = lo;
        else if (v == mx)
            v = hi;
        else
            v = lo + (hi - lo) * (v - mn) / (mx - mn);
    }
    return out;
}

SeriesCollection minmax_scale(const SeriesCollection& collection, double lo, double hi) {
    SeriesCollection out = collection;
    for (auto& s : out.series) s = minmax_scale(s, lo, hi);
    ProvenanceStep step{"minmax_scale", {}, {}};
    step.params["lo"] = lo;
    step.params["hi"] = hi;
    out.provenance.push_back(std::move(step));
    return out;
}

void DiscretizationThresholds::validate() const {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!std::isfinite(cuts[i])) throw UsageError("discretization thresholds must be finite");
        if (i > 0 && !(cuts[i - 1] < cuts[i]))
            throw UsageError("discretization thresholds must be strictly increasing");
    }
}

std::uint8_t level_of(double value, const DiscretizationThresholds& thresholds) {
    std::uint8_t level = 1;
    for (double cut : thresholds.cuts)
        if (value >= cut) ++level;
    return level;
}

SymbolicSeries discretize(const TimeSeries& series, const DiscretizationThresholds& thresholds) {
    SymbolicSeries out{series.series_id, {}};
    out.levels.reserve(series.size());
    for (double v : series.values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DataError("discretize: series " + series.series_id +
                            " has a value outside [0, 1]; scale before discretizing");
        out.levels.push_back(level_of(v, thresholds));
    }
    return out;
}

SymbolicCollection discretize(const SeriesCollection& collection, const DiscretizationThresholds& thresholds) {
    thresholds.validate();
    SymbolicCollection out;
    out.mode = collection.mode;
    out.start = collection.start;
    out.provenance = collection.provenance;
    for (const auto& s : collection.series) out.series.push_back(discretize(s, thresholds));
    ProvenanceStep step{"discretize", {}, {}};
    step.params["thresholds"] = thresholds.cuts;
    out.provenance.push_back(std::move(step));
    return out;
}

}  // namespace tsclust
