#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "tsclust/error.hpp"
#include "tsclust/evaluation.hpp"

using namespace tsclust;

namespace {

std::vector<std::string> make_ids(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(100 + i));
    return ids;
}

ClusterAssignment assignment_of(const std::vector<int>& labels) {
    ClusterAssignment a;
    a.ids = make_ids(labels.size());
    a.labels = labels;
    a.k = *std::max_element(labels.begin(), labels.end());
    return a;
}

PointSet points_of(const oracle::Points& rows) { return PointSet::from_rows(make_ids(rows.size()), rows); }

SymbolicCollection symbolic_of(const std::vector<std::vector<std::uint8_t>>& rows) {
    SymbolicCollection c;
    const auto ids = make_ids(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) c.series.push_back({ids[i], rows[i]});
    return c;
}

// Random labelling of n points into exactly k non-empty clusters.
std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) + 1 : 1 + static_cast<int>(rng() % k);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

oracle::Points random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    oracle::Points pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& x : p) x = testutil::uniform(rng, -3, 3);
    return pts;
}

oracle::Points blobs(std::mt19937_64& rng, const std::vector<double>& centres, std::size_t per, double spread) {
    oracle::Points pts;
    for (double c : centres)
        for (std::size_t i = 0; i < per; ++i) pts.push_back({c + testutil::uniform(rng, -spread, spread), testutil::uniform(rng, -spread, spread)});
    return pts;
}

}  // namespace

TEST_CASE("wcss") {
    CHECK(wcss(points_of({{0}, {5}, {9}}), assignment_of({1, 2, 3})) == 0.0);
    CHECK(wcss(points_of({{0}, {2}}), assignment_of({1, 1})) == 2.0);
    ClusterAssignment gap = assignment_of({1, 1});
    gap.k = 2;
    CHECK_THROWS_AS(wcss(points_of({{0}, {2}}), gap), DataError);
}

TEST_CASE("bcss") {
    CHECK(bcss(points_of({{0}, {2}}), assignment_of({1, 1}), BcssVariant::paper) == 0.0);
    CHECK(bcss(points_of({{0}, {2}}), assignment_of({1, 2}), BcssVariant::paper) == 2.0);
    CHECK(bcss(points_of({{0}, {2}}), assignment_of({1, 2}), BcssVariant::weighted) == 2.0);
    CHECK(bcss(points_of({{0}, {0}, {3}}), assignment_of({1, 1, 2}), BcssVariant::weighted) ==
          doctest::Approx(2 * 1.0 + 1 * 4.0));
}

TEST_CASE("ch_index") {
    std::mt19937_64 rng(31);
    const auto tight = blobs(rng, {0, 100}, 5, 0.01);
    const std::vector<int> split{1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
    CHECK(ch_index(points_of(tight), assignment_of(split), ChVariant::standard) > 1e6);
    CHECK(ch_index(points_of(tight), assignment_of(split), ChVariant::paper) < 1e-6);

    // 1-D {0,1,2} and {10,11,12}: WCSS 4, weighted BCSS 2*3*25 = 150, n=6, k=2.
    const oracle::Points six{{0}, {1}, {2}, {10}, {11}, {12}};
    const std::vector<int> halves{1, 1, 1, 2, 2, 2};
    CHECK(ch_index(points_of(six), assignment_of(halves)) == doctest::Approx((150.0 / 1) / (4.0 / 4)));
    CHECK(oracle::ch_standard(six, halves, 2) == doctest::Approx(150.0));

    CHECK_THROWS_AS(ch_index(points_of({{0}, {0}, {3}, {3}}), assignment_of({1, 1, 2, 2})), DegenerateError);
    CHECK_THROWS_AS(ch_index(points_of({{1}, {1}, {1}}), assignment_of({1, 1, 2}), ChVariant::paper), DegenerateError);
}

TEST_CASE("db_index") {
    CHECK(db_index(points_of({{0}, {4}}), assignment_of({1, 2})) == 0.0);
    CHECK(db_index(points_of({{0}, {2}, {10}, {12}}), assignment_of({1, 1, 2, 2})) == doctest::Approx(0.2));
    CHECK_THROWS_AS(db_index(points_of({{0}, {2}, {1}, {1}}), assignment_of({1, 1, 2, 2})), DegenerateError);
    double previous = std::numeric_limits<double>::infinity();
    for (double gap : {5.0, 10.0, 20.0, 40.0}) {
        const double v = db_index(points_of({{0}, {2}, {gap}, {gap + 2}}), assignment_of({1, 1, 2, 2}));
        CHECK(v < previous);
        previous = v;
    }
}

TEST_CASE("mpbi") {
    CHECK(mpbi(symbolic_of({{1, 2, 3}, {3, 2, 1}, {1, 1, 1}}), assignment_of({1, 2, 3})) == 0.0);
    const std::vector<std::uint8_t> p{3, 3, 3, 3, 2, 2, 2, 3, 3, 3};
    const std::vector<std::uint8_t> q{3, 3, 3, 3, 1, 1, 1, 3, 3, 3};
    CHECK(mpbi(symbolic_of({p, q}), assignment_of({1, 1})) == 1.0);
}

TEST_CASE("indices agree with naive oracles") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng() % 8;
        const int k = 2 + static_cast<int>(rng() % (n - 2));
        const auto pts = random_points(rng, n, 1 + rng() % 4);
        const auto labels = random_labels(rng, n, k);
        const auto a = assignment_of(labels);
        const auto ps = points_of(pts);
        REQUIRE(oracle::rel_err(wcss(ps, a), oracle::wcss(pts, labels, k)) < 1e-9);
        REQUIRE(oracle::rel_err(bcss(ps, a, BcssVariant::paper), oracle::bcss(pts, labels, k, false)) < 1e-9);
        REQUIRE(oracle::rel_err(bcss(ps, a, BcssVariant::weighted), oracle::bcss(pts, labels, k, true)) < 1e-9);
        REQUIRE(oracle::rel_err(ch_index(ps, a), oracle::ch_standard(pts, labels, k)) < 1e-9);
        REQUIRE(oracle::rel_err(ch_index(ps, a, ChVariant::paper),
                                oracle::wcss(pts, labels, k) / oracle::bcss(pts, labels, k, false)) < 1e-9);
        REQUIRE(oracle::rel_err(db_index(ps, a), oracle::db(pts, labels, k)) < 1e-9);

        std::vector<std::vector<std::uint8_t>> sym(n);
        const std::size_t len = 2 + rng() % 12;
        for (auto& s : sym)
            for (std::size_t t = 0; t < len; ++t) s.push_back(static_cast<std::uint8_t>(1 + rng() % 5));
        REQUIRE(oracle::rel_err(mpbi(symbolic_of(sym), a), oracle::mpbi(sym, labels, k, 2.0)) < 1e-9);
    }
}

TEST_CASE("indices are invariant to translation, relabelling and reordering") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng() % 10;
        const int k = 2 + static_cast<int>(rng() % 3);
        auto pts = random_points(rng, n, 3);
        const auto labels = random_labels(rng, n, k);
        const auto a = assignment_of(labels);
        const double ch = ch_index(points_of(pts), a), chp = ch_index(points_of(pts), a, ChVariant::paper);
        const double db = db_index(points_of(pts), a);

        auto moved = pts;
        for (auto& p : moved)
            for (auto& x : p) x += 17.5;
        REQUIRE(oracle::rel_err(ch_index(points_of(moved), a), ch) < 1e-9);
        REQUIRE(oracle::rel_err(db_index(points_of(moved), a), db) < 1e-9);

        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabelled = labels;
        for (auto& l : relabelled) l = perm[static_cast<std::size_t>(l - 1)];
        const auto r = assignment_of(relabelled);
        REQUIRE(oracle::rel_err(ch_index(points_of(pts), r), ch) < 1e-9);
        REQUIRE(oracle::rel_err(ch_index(points_of(pts), r, ChVariant::paper), chp) < 1e-9);
        REQUIRE(oracle::rel_err(db_index(points_of(pts), r), db) < 1e-9);

        std::vector<std::vector<std::uint8_t>> sym(n);
        for (auto& s : sym)
            for (int t = 0; t < 8; ++t) s.push_back(static_cast<std::uint8_t>(1 + rng() % 5));
        const double m = mpbi(symbolic_of(sym), a);
        REQUIRE(oracle::rel_err(mpbi(symbolic_of(sym), r), m) < 1e-12);
        // series order in the symbolic collection differs from the assignment's
        auto reversed = symbolic_of(sym);
        std::reverse(reversed.series.begin(), reversed.series.end());
        REQUIRE(oracle::rel_err(mpbi(reversed, a), m) < 1e-12);
    }
}

TEST_CASE("the two CH variants rank balanced assignments in opposite order") {
    std::mt19937_64 rng(34);
    auto balanced = [&](std::size_t n, int k) {
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = 1 + static_cast<int>(i % static_cast<std::size_t>(k));
        std::shuffle(labels.begin(), labels.end(), rng);
        return labels;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 3);
        const std::size_t n = static_cast<std::size_t>(k) * (2 + rng() % 3);
        const auto pts = points_of(random_points(rng, n, 2));
        const auto a = assignment_of(balanced(n, k)), b = assignment_of(balanced(n, k));
        const double sa = ch_index(pts, a), sb = ch_index(pts, b);
        const double pa = ch_index(pts, a, ChVariant::paper), pb = ch_index(pts, b, ChVariant::paper);
        if (std::abs(sa - sb) < 1e-9 * std::max(sa, sb)) continue;
        REQUIRE((sa > sb) == (pa < pb));
    }
}

TEST_CASE("evaluate records failures per index") {
    const auto pts = points_of({{0}, {0}, {3}, {3}});
    const auto report = evaluate(&pts, nullptr, assignment_of({1, 1, 2, 2}));
    CHECK_FALSE(report.ch.ok());
    CHECK_FALSE(report.ch.condition.empty());
    REQUIRE(report.db.ok());
    CHECK(*report.db.value == 0.0);
    CHECK_FALSE(report.mpbi.ok());
}

TEST_CASE("sweep_k") {
    std::mt19937_64 rng(35);
    const auto pts = points_of(blobs(rng, {0, 10, 20}, 6, 1.0));
    std::vector<std::vector<double>> d(pts.size(), std::vector<double>(pts.size()));
    DistanceMatrix matrix(pts.ids, Metric::euclidean, {}, 2);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) matrix.set(i, j, euclidean(pts.row(i), pts.row(j)));

    SweepInputs inputs;
    inputs.points = &pts;
    inputs.matrix = &matrix;
    for (auto kind : {AlgorithmKind::hierarchical, AlgorithmKind::kmeans, AlgorithmKind::kmedoids}) {
        AlgorithmSpec spec;
        spec.kind = kind;
        spec.seed = 9;
        spec.threads = 3;
        const auto table = sweep_k(inputs, spec, 2, 4);
        REQUIRE(table.rows.size() == 3);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(table.rows[i].k == static_cast<int>(i) + 2);
            CHECK(table.rows[i].ch.ok());
            CHECK(table.rows[i].db.ok());
        }
        const auto best = std::max_element(table.rows.begin(), table.rows.end(),
                                           [](const auto& a, const auto& b) { return *a.ch.value < *b.ch.value; });
        CHECK(best->k == 3);
        spec.threads = 1;
        const auto again = sweep_k(inputs, spec, 2, 4);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(*again.rows[i].ch.value == *table.rows[i].ch.value);
            CHECK(*again.rows[i].db.value == *table.rows[i].db.value);
        }
    }
    AlgorithmSpec spec;
    CHECK_THROWS_AS(sweep_k(inputs, spec, 1, 4), UsageError);
    CHECK_THROWS_AS(sweep_k(inputs, spec, 4, 3), UsageError);
    CHECK_THROWS_AS(sweep_k(inputs, spec, 2, static_cast<int>(pts.size())), UsageError);
}
