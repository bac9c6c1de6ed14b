#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "tsclust/core_data.hpp"
#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"
#include "tsclust/preprocess.hpp"

using namespace tsclust;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

Date day(int d) { return *parse_date("2021-01-01") + std::chrono::days(d - 1); }

TimeSeries make_series(const std::string& id, std::vector<double> values) {
    TimeSeries s;
    s.series_id = id;
    s.item_id = id;
    s.missing_mask.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) s.missing_mask[i] = std::isnan(values[i]);
    s.values = std::move(values);
    return s;
}

RawObservation obs(const std::string& id, int d, double v, std::optional<std::string> store = std::nullopt) {
    RawObservation o;
    o.series_id = id;
    o.date = day(d);
    o.value = v;
    o.store = std::move(store);
    return o;
}

SeriesCollection collection_of(std::vector<TimeSeries> series) {
    SeriesCollection c;
    c.series = std::move(series);
    c.start = day(1);
    return c;
}

}  // namespace

TEST_CASE("parse_date accepts only strict calendar dates") {
    CHECK(parse_date("2021-02-28").has_value());
    CHECK_FALSE(parse_date("2021-02-29").has_value());
    CHECK_FALSE(parse_date("2021-2-01").has_value());
    CHECK_FALSE(parse_date("2021-01-01x").has_value());
    CHECK(format_date(*parse_date("2020-02-29")) == "2020-02-29");
}

TEST_CASE("load_long_csv maps fields of a row") {
    testutil::TempDir dir("load");
    testutil::write(dir / "in.csv", "series_id,date,value,category,store\nP1,2021-01-01,4.50,Snacks,\n");
    const auto result = load_long_csv(dir / "in.csv");
    REQUIRE(result.observations.size() == 1);
    const auto& o = result.observations[0];
    CHECK(o.series_id == "P1");
    CHECK(o.date == day(1));
    CHECK(o.value == 4.5);
    CHECK(o.category == std::optional<std::string>("Snacks"));
    CHECK_FALSE(o.store.has_value());
    CHECK(result.rejects.empty());
}

TEST_CASE("load_long_csv rejects duplicate keys") {
    testutil::TempDir dir("load");
    testutil::write(dir / "in.csv", "series_id,date,value\nP1,2021-01-01,1\nP1,2021-01-01,2\n");
    CHECK_THROWS_AS(load_long_csv(dir / "in.csv"), DataError);
}

TEST_CASE("load_long_csv routes malformed rows to rejects") {
    testutil::TempDir dir("load");
    testutil::write(dir / "in.csv",
                    "series_id,date,value\nP1,2021-01-01,1\nP1,2021-01-02,abc\nP1,2021-13-03,3\nP2,2021-01-01,2\n");
    const auto result = load_long_csv(dir / "in.csv");
    CHECK(result.observations.size() == 2);
    REQUIRE(result.rejects.size() == 2);
    CHECK(result.rejects[0].line_number == 3);
    CHECK(result.rejects[0].raw_row == "P1,2021-01-02,abc");
    CHECK(result.rejects[1].line_number == 4);
    const auto report = rejects_to_csv(result.rejects);
    CHECK(report.rfind("line_number,raw_row,reason\n", 0) == 0);
}

TEST_CASE("load_long_csv errors on missing file or column") {
    testutil::TempDir dir("load");
    CHECK_THROWS_AS(load_long_csv(dir / "absent.csv"), DataError);
    testutil::write(dir / "in.csv", "id,date,value\nP1,2021-01-01,1\n");
    CHECK_THROWS_AS(load_long_csv(dir / "in.csv"), DataError);
    ColumnMapping mapping;
    mapping.series_id = "id";
    CHECK(load_long_csv(dir / "in.csv", mapping).observations.size() == 1);
}

TEST_CASE("load_wide_csv treats empty cells as missing") {
    testutil::TempDir dir("wide");
    testutil::write(dir / "in.csv", "series_id,2021-01-01,2021-01-02,2021-01-03\nA,1,,3\nB,4,5,6\n");
    const auto result = load_wide_csv(dir / "in.csv");
    CHECK(result.observations.size() == 5);
    const auto c = assemble_series(result.observations, Mode::price);
    REQUIRE(c.size() == 2);
    CHECK(c.series[0].missing_mask == std::vector<bool>{false, true, false});
}

TEST_CASE("assemble_series") {
    SUBCASE("full coverage") {
        std::vector<RawObservation> o;
        for (const char* id : {"A", "B"})
            for (int d = 1; d <= 3; ++d) o.push_back(obs(id, d, d));
        const auto c = assemble_series(o, Mode::price);
        REQUIRE(c.size() == 2);
        CHECK(c.length() == 3);
        for (const auto& s : c.series) CHECK(s.missing_count() == 0);
    }
    SUBCASE("gap in the middle") {
        const auto c = assemble_series({obs("A", 1, 1), obs("A", 3, 3)}, Mode::price);
        CHECK(c.series[0].missing_mask == std::vector<bool>{false, true, false});
        CHECK(std::isnan(c.series[0].values[1]));
    }
    SUBCASE("sales mode keys on item and store") {
        const auto c = assemble_series({obs("I1", 1, 1, "S1"), obs("I1", 1, 2, "S2")}, Mode::sales);
        REQUIRE(c.size() == 2);
        CHECK(c.series[0].series_id == "I1@S1");
        CHECK(c.series[1].series_id == "I1@S2");
        CHECK(c.series[0].item_id == "I1");
    }
    SUBCASE("explicit range pads and clips") {
        const auto c = assemble_series({obs("A", 2, 1), obs("A", 9, 3)}, Mode::price, DateRange{day(1), day(4)});
        CHECK(c.length() == 4);
        CHECK(c.series[0].missing_count() == 3);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(assemble_series({}, Mode::price), DataError);
        CHECK_THROWS_AS(assemble_series({obs("A", 1, 1)}, Mode::price, DateRange{day(3), day(1)}), UsageError);
    }
    SUBCASE("provenance step recorded") {
        const auto c = assemble_series({obs("A", 1, 1)}, Mode::price);
        REQUIRE(c.provenance.size() == 1);
        CHECK(c.provenance[0].step == "assemble");
    }
}

TEST_CASE("drop_sparse") {
    auto with_missing = [](const std::string& id, std::size_t n, std::size_t missing) {
        std::vector<double> v(n, 1.0);
        for (std::size_t i = 0; i < missing; ++i) v[i] = nan_v;
        return make_series(id, v);
    };
    const auto c = collection_of({with_missing("over", 100, 81), with_missing("none", 100, 0),
                                  with_missing("edge", 10, 8)});
    const auto kept = drop_sparse(c, 0.8);
    CHECK(kept.ids() == std::vector<std::string>{"none", "edge"});
    REQUIRE_FALSE(kept.provenance.empty());
    CHECK(kept.provenance.back().step == "drop_sparse");
    CHECK(kept.provenance.back().dropped_ids == std::vector<std::string>{"over"});
    CHECK(drop_sparse(kept, 0.8).ids() == kept.ids());
    CHECK_THROWS_AS(drop_sparse(c, 1.5), UsageError);
    CHECK(drop_sparse(c, 0.0).ids() == std::vector<std::string>{"none"});
}

TEST_CASE("fill_forward") {
    CHECK(fill_forward(make_series("a", {5, nan_v, nan_v, 7})).values == std::vector<double>{5, 5, 5, 7});
    CHECK(fill_forward(make_series("a", {nan_v, 3, nan_v})).values == std::vector<double>{3, 3, 3});
    CHECK(fill_forward(make_series("a", {4, 4, 4})).values == std::vector<double>{4, 4, 4});
    CHECK_THROWS_AS(fill_forward(make_series("a", {nan_v, nan_v})), DataError);
    const auto filled = fill_forward(make_series("a", {nan_v, 3, nan_v}));
    CHECK(filled.missing_mask == std::vector<bool>{true, false, true});
}

TEST_CASE("fill_mean") {
    CHECK(fill_mean(make_series("a", {2, nan_v, 4})).values == std::vector<double>{2, 3, 4});
    CHECK(fill_mean(make_series("a", {nan_v, nan_v, 5})).values == std::vector<double>{5, 5, 5});
    CHECK(fill_mean(make_series("a", {1, 2, 6})).values == std::vector<double>{1, 2, 6});
    CHECK_THROWS_AS(fill_mean(make_series("a", {nan_v})), DataError);
}

TEST_CASE("fills never modify present positions") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<double> v(n);
        for (auto& x : v) x = (rng() % 3 == 0) ? nan_v : testutil::uniform(rng, -5, 5);
        v[rng() % n] = 1.0;
        const auto s = make_series("r", v);
        for (const auto& f : {fill_forward(s), fill_mean(s)}) {
            REQUIRE(f.complete());
            for (std::size_t i = 0; i < n; ++i)
                if (!s.missing_mask[i]) REQUIRE(f.values[i] == v[i]);
        }
    }
}

TEST_CASE("minmax_scale") {
    auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
    };
    close(minmax_scale(make_series("a", {10, 55, 100})).values, {0.1, 0.55, 1.0});
    CHECK(minmax_scale(make_series("a", {7, 7, 7})).values == std::vector<double>{0.1, 0.1, 0.1});
    CHECK(minmax_scale(make_series("a", {0, 1})).values == std::vector<double>{0.1, 1.0});
    CHECK_THROWS_AS(minmax_scale(make_series("a", {1, nan_v})), DataError);
    CHECK_THROWS_AS(minmax_scale(make_series("a", {1, 2}), 1.0, 0.1), UsageError);
}

TEST_CASE("minmax_scale hits both bounds exactly") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> v(2 + rng() % 30);
        for (auto& x : v) x = testutil::uniform(rng, -1e3, 1e3);
        const auto s = minmax_scale(make_series("r", v));
        CHECK(*std::min_element(s.values.begin(), s.values.end()) == 0.1);
        CHECK(*std::max_element(s.values.begin(), s.values.end()) == 1.0);
    }
}

TEST_CASE("discretize") {
    const auto levels = discretize(make_series("a", {0.1, 0.29, 0.47, 0.65, 0.83}));
    CHECK(levels.levels == std::vector<std::uint8_t>{1, 2, 3, 4, 5});
    CHECK(levels.to_letters() == "ABCDE");
    CHECK(discretize(make_series("a", {0.2899})).to_letters() == "A");
    CHECK(discretize(make_series("a", {1.0})).to_letters() == "E");
    CHECK_THROWS_AS(discretize(make_series("a", {4.5})), DataError);
    CHECK_THROWS_AS(discretize(make_series("a", {-0.1})), DataError);
    DiscretizationThresholds bad;
    bad.cuts = {0.5, 0.4, 0.6, 0.7};
    CHECK_THROWS_AS(bad.validate(), UsageError);
}

namespace {

// Midpoints of the five default bands.
double level_value(int level) { return std::array<double, 5>{0.2, 0.38, 0.56, 0.74, 0.92}[level - 1]; }

PreparedData prepared_from_levels(const std::vector<std::pair<std::string, std::vector<int>>>& rows) {
    std::vector<TimeSeries> series;
    for (const auto& [id, levels] : rows) {
        std::vector<double> v;
        for (int l : levels) v.push_back(level_value(l));
        series.push_back(make_series(id, v));
    }
    PreparedData data;
    data.original = collection_of(series);
    data.scaled = data.original;
    data.symbolic = discretize(data.scaled);
    return data;
}

}  // namespace

TEST_CASE("filter_outliers") {
    const std::vector<int> base{1, 2, 3, 3, 2, 2, 3, 4, 4, 3};
    OutlierOptions options;
    SUBCASE("identical series are kept") {
        const auto data = prepared_from_levels({{"a", base}, {"b", base}, {"c", base}});
        for (double p : {5.0, 50.0, 95.0}) {
            options.percentile = p;
            CHECK(filter_outliers(data, options).scaled.size() == 3);
        }
    }
    SUBCASE("far series removed among near duplicates") {
        std::vector<std::pair<std::string, std::vector<int>>> rows;
        for (int i = 0; i < 10; ++i) {
            auto v = base;
            v[static_cast<std::size_t>(1 + (i / 2) % 8)] += 1;
            rows.push_back({"n" + std::to_string(i), v});
        }
        rows.push_back({"far", {5, 1, 5, 1, 5, 1, 5, 1, 5, 1}});

        // Oracle: nearest-neighbour MPBD via the recursive definition, then rank.
        std::vector<std::vector<std::uint8_t>> lv;
        for (const auto& r : rows) lv.emplace_back(r.second.begin(), r.second.end());
        std::vector<double> nn(rows.size(), std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (i != j) nn[i] = std::min(nn[i], oracle::mpbd(lv[i], lv[j], 2.0));
        const auto worst = std::max_element(nn.begin(), nn.end()) - nn.begin();
        REQUIRE(rows[static_cast<std::size_t>(worst)].first == "far");

        options.percentile = 90;
        const auto out = filter_outliers(prepared_from_levels(rows), options);
        CHECK(out.scaled.size() == 10);
        for (const auto& id : out.scaled.ids()) CHECK(id != "far");
        REQUIRE_FALSE(out.provenance.empty());
        CHECK(out.provenance.back().step == "filter_outliers");
        CHECK(out.provenance.back().dropped_ids == std::vector<std::string>{"far"});
        CHECK(out.symbolic.ids() == out.scaled.ids());
        CHECK(out.original.ids() == out.scaled.ids());

        options.percentile = 100;
        CHECK(filter_outliers(prepared_from_levels(rows), options).scaled.size() == 11);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(filter_outliers(prepared_from_levels({{"a", base}}), options), DataError);
        options.percentile = 0;
        CHECK_THROWS_AS(filter_outliers(prepared_from_levels({{"a", base}, {"b", base}}), options), UsageError);
    }
}

TEST_CASE("percentile_of interpolates linearly") {
    CHECK(percentile_of({1, 2, 3, 4, 5}, 50) == 3.0);
    CHECK(percentile_of({0, 10}, 25) == 2.5);
    CHECK(percentile_of({7}, 95) == 7.0);
    CHECK(percentile_of({3, 1, 2}, 100) == 3.0);
}

TEST_CASE("preprocess records the fixed step order") {
    std::vector<RawObservation> o;
    std::mt19937_64 rng(3);
    for (int s = 0; s < 6; ++s)
        for (int d = 1; d <= 20; ++d)
            if (rng() % 5 != 0 || d == 1) o.push_back(obs("S" + std::to_string(s), d, std::round(testutil::uniform(rng, 1, 5))));
    PreprocessOptions options;
    const auto a = preprocess(o, options);
    std::vector<std::string> steps;
    for (const auto& p : a.provenance) steps.push_back(p.step);
    CHECK(steps == std::vector<std::string>{"assemble", "drop_sparse", "fill_forward", "minmax_scale", "discretize",
                                            "filter_outliers"});
    const auto b = preprocess(o, options);
    CHECK(provenance_to_json(a.provenance).dump() == provenance_to_json(b.provenance).dump());
    CHECK(a.scaled.ids() == b.scaled.ids());
    for (std::size_t i = 0; i < a.scaled.size(); ++i) CHECK(a.scaled.series[i].values == b.scaled.series[i].values);

    options.mode = Mode::sales;
    const auto sales = preprocess(o, options);
    CHECK(sales.provenance[2].step == "fill_mean");
}

TEST_CASE("csv helpers") {
    CHECK(csv::split_line("a,\"b,c\",\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "d\"e"});
    CHECK(csv::escape("x,y") == "\"x,y\"");
    CHECK(csv::format_real(0.1) == "0.1");
    CHECK(csv::format_real(-0.0) == "0");
    CHECK_FALSE(csv::parse_real("abc").has_value());
    CHECK_FALSE(csv::parse_real("inf").has_value());
    CHECK(csv::parse_real("4.50") == std::optional<double>(4.5));
}
