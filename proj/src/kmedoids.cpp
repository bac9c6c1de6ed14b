#include <algorithm>
#include <limits>
#include <numeric>

#include "tsclust/clustering.hpp"
#include "tsclust/error.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index (into `medoids`) of the nearest medoid; a medoid always owns itself.
std::size_t nearest_medoid(const DistanceMatrix& d, const std::vector<std::size_t>& medoids, std::size_t i) {
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
        if (medoids[c] == i) return c;
        const double v = d(i, medoids[c]);
        if (v < best_d) {
            best_d = v;
            best = c;
        }
    }
    return best;
}

double total_cost(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
    double cost = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) cost += d(i, medoids[nearest_medoid(d, medoids, i)]);
    return cost;
}

std::vector<std::size_t> greedy_build(const DistanceMatrix& d, std::size_t k) {
    const std::size_t n = d.size();
    std::vector<std::size_t> medoids;
    std::vector<double> current(n, kInf);
    std::vector<bool> used(n, false);
    while (medoids.size() < k) {
        std::size_t pick = n;
        double best_gain = -kInf;
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            // Gain = reduction of total cost; with no medoid yet, minus the total.
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double dj = d(c, j);
                gain += medoids.empty() ? -dj : std::max(0.0, current[j] - dj);
            }
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        used[pick] = true;
        for (std::size_t j = 0; j < n; ++j) current[j] = std::min(current[j], d(pick, j));
    }
    return medoids;
}

// Number of k-subsets of n, saturating at `cap`.
std::size_t subsets_capped(std::size_t n, std::size_t k, std::size_t cap) {
    std::size_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return c;
}

// Lexicographic enumeration of every medoid set; the first minimum wins.
std::vector<std::size_t> exhaustive_medoids(const DistanceMatrix& d, std::size_t k) {
    const std::size_t n = d.size();
    std::vector<std::size_t> pick(k), best;
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    double best_cost = kInf;
    while (true) {
        const double c = total_cost(d, pick);
        if (c < best_cost) {
            best_cost = c;
            best = pick;
        }
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

constexpr std::size_t kExhaustiveLimit = 4096;

}  // namespace

KMedoidsResult kmedoids(const DistanceMatrix& matrix, const KMedoidsOptions& options) {
    const std::size_t n = matrix.size();
    if (options.k < 2) throw UsageError("kmedoids: k must be at least 2");
    if (static_cast<std::size_t>(options.k) > n) throw UsageError("kmedoids: k exceeds the number of series");
    const auto k = static_cast<std::size_t>(options.k);

    const bool exhaustive = subsets_capped(n, k, kExhaustiveLimit) <= kExhaustiveLimit;
    std::vector<std::size_t> medoids = exhaustive ? exhaustive_medoids(matrix, k) : greedy_build(matrix, k);
    std::vector<std::size_t> labels(n);
    auto assign = [&] {
        parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) labels[i] = nearest_medoid(matrix, medoids, i);
        });
    };

    KMedoidsResult result;
    int iter = 0;
    const int max_iter = exhaustive ? 0 : options.max_iter;
    // Alternate: assign, then move each medoid to its cluster's cost minimiser.
    for (; iter < max_iter; ++iter) {
        assign();
        bool changed = false;
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t best = medoids[c];
            double best_cost = kInf;
            for (std::size_t cand = 0; cand < n; ++cand) {
                if (labels[cand] != c) continue;
                double cost = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (labels[j] == c) cost += matrix(cand, j);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = cand;
                }
            }
            if (best != medoids[c]) {
                medoids[c] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Best-improvement swaps, costed from each point's nearest and
    // second-nearest medoid distances.
    double cost = total_cost(matrix, medoids);
    std::vector<double> first(n), second(n);
    std::vector<std::size_t> owner(n);
    for (; iter < max_iter; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            first[j] = second[j] = kInf;
            for (std::size_t c = 0; c < k; ++c) {
                const double v = matrix(j, medoids[c]);
                if (v < first[j]) {
                    second[j] = first[j];
                    first[j] = v;
                    owner[j] = c;
                } else if (v < second[j]) {
                    second[j] = v;
                }
            }
        }
        std::vector<bool> is_medoid(n, false);
        for (auto m : medoids) is_medoid[m] = true;

        double best_delta = 0.0;
        std::size_t best_c = k, best_o = n;
        for (std::size_t o = 0; o < n; ++o) {
            if (is_medoid[o]) continue;
            for (std::size_t c = 0; c < k; ++c) {
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dj = matrix(o, j);
                    delta += owner[j] == c ? std::min(dj, second[j]) - first[j] : std::min(dj, first[j]) - first[j];
                }
                if (delta < best_delta - 1e-12 * std::max(1.0, cost)) {
                    best_delta = delta;
                    best_c = c;
                    best_o = o;
                }
            }
        }
        if (best_c == k) break;
        medoids[best_c] = best_o;
        cost = total_cost(matrix, medoids);
    }

    // Clusters numbered by ascending medoid index.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return medoids[a] < medoids[b]; });
    std::vector<std::size_t> sorted;
    for (auto c : order) sorted.push_back(medoids[c]);
    medoids = std::move(sorted);
    assign();

    result.medoids = medoids;
    result.iterations = iter;
    auto& a = result.assignment;
    a.ids = matrix.ids();
    a.k = options.k;
    a.seed = options.seed;
    a.algorithm = "kmedoids";
    a.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a.labels.push_back(static_cast<int>(labels[i]) + 1);
        *a.objective += matrix(i, medoids[labels[i]]);
    }
    a.validate();
    return result;
}

}  // namespace tsclust
