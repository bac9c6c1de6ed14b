#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "tsclust/clustering.hpp"
#include "tsclust/error.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust {

PointSet PointSet::from_collection(const SeriesCollection& collection) {
    PointSet ps;
    ps.dim = collection.length();
    ps.ids = collection.ids();
    ps.coords.reserve(ps.ids.size() * ps.dim);
    for (const auto& s : collection.series) {
        if (s.size() != ps.dim) throw DataError("PointSet: series lengths differ");
        if (!s.complete()) throw DataError("PointSet: series " + s.series_id + " has missing values");
        ps.coords.insert(ps.coords.end(), s.values.begin(), s.values.end());
    }
    return ps;
}

PointSet PointSet::from_rows(std::vector<std::string> ids, const std::vector<std::vector<double>>& rows) {
    if (ids.size() != rows.size()) throw DataError("PointSet: id count differs from row count");
    PointSet ps;
    ps.ids = std::move(ids);
    ps.dim = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != ps.dim) throw DataError("PointSet: ragged rows");
        ps.coords.insert(ps.coords.end(), r.begin(), r.end());
    }
    return ps;
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    return out;
}

void ClusterAssignment::validate() const {
    if (k < 1) throw DataError("assignment: k must be positive");
    if (ids.size() != labels.size()) throw DataError("assignment: ids and labels differ in length");
    std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
        if (l < 1 || l > k) throw DataError("assignment: label " + std::to_string(l) + " outside [1, k]");
        ++count[static_cast<std::size_t>(l - 1)];
    }
    for (std::size_t c = 0; c < count.size(); ++c)
        if (count[c] == 0) throw DataError("assignment: cluster " + std::to_string(c + 1) + " is empty");
}

std::vector<int> ClusterAssignment::labels_for(const std::vector<std::string>& order) const {
    if (order == ids) return labels;
    std::unordered_map<std::string, int> lookup;
    for (std::size_t i = 0; i < ids.size(); ++i) lookup.emplace(ids[i], labels[i]);
    if (lookup.size() != order.size()) throw DataError("assignment: id set does not match the data");
    std::vector<int> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        auto it = lookup.find(id);
        if (it == lookup.end()) throw DataError("assignment: no label for series " + id);
        out.push_back(it->second);
    }
    return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct Lloyd {
    const PointSet& points;
    std::size_t k;
    std::size_t threads;
    std::vector<double> centroids;
    std::vector<std::size_t> labels;

    std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * points.dim, points.dim}; }

    void assign() {
        parallel_for(points.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < k; ++c) {
                    const double d = squared_distance(points.row(i), centroid(c));
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                labels[i] = best;
            }
        });
    }

    void update_means() {
        std::vector<double> sums(k * points.dim, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto row = points.row(i);
            double* dst = sums.data() + labels[i] * points.dim;
            for (std::size_t d = 0; d < points.dim; ++d) dst[d] += row[d];
            ++counts[labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t d = 0; d < points.dim; ++d)
                centroids[c * points.dim + d] = sums[c * points.dim + d] / static_cast<double>(counts[c]);
        }
    }

    // Moves the point farthest from its centroid (taken from a cluster with
    // more than one member) into each empty cluster.
    void repair_empty() {
        for (;;) {
            std::vector<std::size_t> counts(k, 0);
            for (auto l : labels) ++counts[l];
            const auto empty = std::find(counts.begin(), counts.end(), std::size_t{0});
            if (empty == counts.end()) return;
            std::size_t far = points.size();
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (counts[labels[i]] < 2) continue;
                const double d = squared_distance(points.row(i), centroid(labels[i]));
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            const auto c = static_cast<std::size_t>(empty - counts.begin());
            labels[far] = c;
            std::copy_n(points.row(far).begin(), points.dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * points.dim));
            update_means();
        }
    }

    double wcss() const {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) total += squared_distance(points.row(i), centroid(labels[i]));
        return total;
    }
};

}  // namespace

KMeansResult kmeans(const PointSet& points, const KMeansOptions& options) {
    const std::size_t n = points.size();
    if (options.k < 2) throw UsageError("kmeans: k must be at least 2");
    if (static_cast<std::size_t>(options.k) > n) throw UsageError("kmeans: k exceeds the number of series");
    const auto k = static_cast<std::size_t>(options.k);

    Lloyd lloyd{points, k, options.threads, std::vector<double>(k * points.dim), std::vector<std::size_t>(n, 0)};

    // Farthest-point spreading from a seeded first centre.
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng() % n)};
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < k) {
        const auto last = points.row(chosen.back());
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], squared_distance(points.row(i), last));
        std::size_t pick = 0;
        double pick_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (nearest[i] > pick_d && std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
                pick_d = nearest[i];
                pick = i;
            }
        }
        chosen.push_back(pick);
    }
    for (std::size_t c = 0; c < k; ++c)
        std::copy_n(points.row(chosen[c]).begin(), points.dim,
                    lloyd.centroids.begin() + static_cast<std::ptrdiff_t>(c * points.dim));

    KMeansResult result;
    lloyd.assign();
    lloyd.update_means();
    lloyd.repair_empty();
    double current = lloyd.wcss();
    result.wcss_history.push_back(current);

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        result.iterations = iter;
        const auto before = lloyd.labels;
        lloyd.assign();
        lloyd.update_means();
        lloyd.repair_empty();
        if (lloyd.labels == before) break;
        const double next = lloyd.wcss();
        if (next > current + 1e-12 * std::max(1.0, current))
            throw std::logic_error("kmeans: WCSS increased between iterations");
        result.wcss_history.push_back(next);
        const double gain = current - next;
        current = next;
        if (gain < options.tol) break;
    }

    auto& a = result.assignment;
    a.ids = points.ids;
    a.k = options.k;
    a.seed = options.seed;
    a.algorithm = "kmeans";
    a.objective = current;
    a.labels.reserve(n);
    for (auto l : lloyd.labels) a.labels.push_back(static_cast<int>(l) + 1);
    a.validate();
    result.centroids = std::move(lloyd.centroids);
    return result;
}

}  // namespace tsclust
