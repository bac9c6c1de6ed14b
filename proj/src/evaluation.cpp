#include "tsclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsclust/error.hpp"

namespace tsclust {

std::string_view to_string(ChVariant variant) { return variant == ChVariant::paper ? "paper" : "standard"; }

ChVariant parse_ch_variant(std::string_view text) {
    if (text == "paper") return ChVariant::paper;
    if (text == "standard") return ChVariant::standard;
    throw UsageError("unknown CH variant '" + std::string(text) + "' (expected paper|standard)");
}

namespace {

struct ClusterGeometry {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<int> labels;            // aligned with the points
    std::vector<std::size_t> sizes;     // per cluster
    std::vector<double> centroids;      // k x dim
    std::vector<double> grand_mean;     // dim
};

ClusterGeometry geometry(const PointSet& points, const ClusterAssignment& assignment) {
    assignment.validate();
    ClusterGeometry g;
    g.k = static_cast<std::size_t>(assignment.k);
    g.dim = points.dim;
    g.labels = assignment.labels_for(points.ids);
    g.sizes.assign(g.k, 0);
    g.centroids.assign(g.k * g.dim, 0.0);
    g.grand_mean.assign(g.dim, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(g.labels[i] - 1);
        ++g.sizes[c];
        const auto row = points.row(i);
        for (std::size_t d = 0; d < g.dim; ++d) {
            g.centroids[c * g.dim + d] += row[d];
            g.grand_mean[d] += row[d];
        }
    }
    for (std::size_t c = 0; c < g.k; ++c) {
        if (g.sizes[c] == 0) throw DataError("empty cluster " + std::to_string(c + 1));
        for (std::size_t d = 0; d < g.dim; ++d) g.centroids[c * g.dim + d] /= static_cast<double>(g.sizes[c]);
    }
    for (auto& v : g.grand_mean) v /= static_cast<double>(points.size());
    return g;
}

// Per-cluster sum of squared deviations from the centroid.
std::vector<double> cluster_sse(const PointSet& points, const ClusterGeometry& g) {
    std::vector<double> sse(g.k, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(g.labels[i] - 1);
        const auto row = points.row(i);
        for (std::size_t d = 0; d < g.dim; ++d) {
            const double diff = row[d] - g.centroids[c * g.dim + d];
            sse[c] += diff * diff;
        }
    }
    return sse;
}

double total(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double bcss_of(const ClusterGeometry& g, BcssVariant variant) {
    double sum = 0.0;
    for (std::size_t c = 0; c < g.k; ++c) {
        double sq = 0.0;
        for (std::size_t d = 0; d < g.dim; ++d) {
            const double diff = g.centroids[c * g.dim + d] - g.grand_mean[d];
            sq += diff * diff;
        }
        sum += variant == BcssVariant::weighted ? static_cast<double>(g.sizes[c]) * sq : sq;
    }
    return sum;
}

}  // namespace

double wcss(const PointSet& points, const ClusterAssignment& assignment) {
    const auto g = geometry(points, assignment);
    return total(cluster_sse(points, g));
}

double bcss(const PointSet& points, const ClusterAssignment& assignment, BcssVariant variant) {
    return bcss_of(geometry(points, assignment), variant);
}

double ch_index(const PointSet& points, const ClusterAssignment& assignment, ChVariant variant) {
    const auto g = geometry(points, assignment);
    const std::size_t n = points.size();
    if (g.k < 2 || g.k >= n) throw UsageError("ch_index: requires 2 <= k < n");
    const double within = total(cluster_sse(points, g));
    if (variant == ChVariant::paper) {
        const double between = bcss_of(g, BcssVariant::paper);
        if (between == 0.0) throw DegenerateError("ch_index: BCSS is zero (all centroids at the grand mean)");
        return within / between;
    }
    const double between = bcss_of(g, BcssVariant::weighted);
    if (within == 0.0) throw DegenerateError("ch_index: WCSS is zero (every cluster is a single point)");
    return (between / static_cast<double>(g.k - 1)) / (within / static_cast<double>(n - g.k));
}

double db_index(const PointSet& points, const ClusterAssignment& assignment) {
    const auto g = geometry(points, assignment);
    if (g.k < 2) throw UsageError("db_index: requires k >= 2");
    const auto sse = cluster_sse(points, g);
    std::vector<double> spread(g.k);
    for (std::size_t c = 0; c < g.k; ++c) spread[c] = std::sqrt(sse[c] / static_cast<double>(g.sizes[c]));

    double sum = 0.0;
    for (std::size_t i = 0; i < g.k; ++i) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.k; ++j) {
            if (i == j) continue;
            double sq = 0.0;
            for (std::size_t d = 0; d < g.dim; ++d) {
                const double diff = g.centroids[i * g.dim + d] - g.centroids[j * g.dim + d];
                sq += diff * diff;
            }
            const double separation = std::sqrt(sq);
            if (separation == 0.0)
                throw DegenerateError("db_index: clusters " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                      " have coincident centroids");
            worst = std::max(worst, (spread[i] + spread[j]) / separation);
        }
        sum += worst;
    }
    return sum / static_cast<double>(g.k);
}

double mpbi(const SymbolicCollection& symbolic, const ClusterAssignment& assignment, double omega) {
    assignment.validate();
    const auto labels = assignment.labels_for(symbolic.ids());
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(assignment.k));
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    double sum = 0.0;
    for (const auto& m : members) {
        if (m.size() < 2) continue;
        double pairwise = 0.0;
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = a + 1; b < m.size(); ++b)
                pairwise += mpbd(std::span<const std::uint8_t>(symbolic.series[m[a]].levels),
                                 std::span<const std::uint8_t>(symbolic.series[m[b]].levels), omega);
        sum += pairwise / static_cast<double>(m.size());
    }
    return sum / static_cast<double>(assignment.k);
}

namespace {

template <typename Fn>
IndexValue guarded(Fn&& fn) {
    try {
        return {fn(), {}};
    } catch (const Error& e) {
        return {std::nullopt, e.what()};
    }
}

}  // namespace

ValidityReport evaluate(const PointSet* points, const SymbolicCollection* symbolic, const ClusterAssignment& assignment,
                        ChVariant ch_variant, double omega) {
    ValidityReport r;
    r.k = assignment.k;
    r.ch_variant = ch_variant;
    if (points) {
        r.ch = guarded([&] { return ch_index(*points, assignment, ch_variant); });
        r.db = guarded([&] { return db_index(*points, assignment); });
    } else {
        r.ch.condition = r.db.condition = "no numeric vectors available";
    }
    if (symbolic)
        r.mpbi = guarded([&] { return mpbi(*symbolic, assignment, omega); });
    else
        r.mpbi.condition = "no symbolic series available";
    return r;
}

}  // namespace tsclust
