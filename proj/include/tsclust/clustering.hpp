#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/core_data.hpp"
#include "tsclust/distances.hpp"

namespace tsclust {

/// Equal-length real vectors, row-major.
struct PointSet {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<double> coords;

    std::size_t size() const { return ids.size(); }
    std::span<const double> row(std::size_t i) const { return {coords.data() + i * dim, dim}; }

    static PointSet from_collection(const SeriesCollection& collection);
    static PointSet from_rows(std::vector<std::string> ids, const std::vector<std::vector<double>>& rows);
};

/// Labels are 1..k, aligned with `ids`.
struct ClusterAssignment {
    std::vector<std::string> ids;
    std::vector<int> labels;
    int k = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    std::optional<double> objective;

    /// Member indices of cluster c (1-based) at position c-1.
    std::vector<std::vector<std::size_t>> members() const;
    /// Throws DataError unless every label is in [1, k] and no cluster is empty.
    void validate() const;
    /// Labels reordered to follow `order` (ids); throws DataError on a mismatch.
    std::vector<int> labels_for(const std::vector<std::string>& order) const;
};

struct KMeansOptions {
    int k = 2;
    std::uint64_t seed = 0;
    int max_iter = 300;
    double tol = 1e-6;
    std::size_t threads = 1;
};

struct KMeansResult {
    ClusterAssignment assignment;
    std::vector<double> centroids;     // k x dim, row-major
    std::vector<double> wcss_history;  // after the initial assignment and every iteration
    int iterations = 0;
};

/// Lloyd's algorithm with seeded farthest-point initialisation.
KMeansResult kmeans(const PointSet& points, const KMeansOptions& options);

struct KMedoidsOptions {
    int k = 2;
    std::uint64_t seed = 0;
    int max_iter = 100;
    std::size_t threads = 1;
};

struct KMedoidsResult {
    ClusterAssignment assignment;
    std::vector<std::size_t> medoids;  // point index per cluster
    int iterations = 0;
};

/// k-medoids on a precomputed dissimilarity matrix: greedy build, alternating
/// assign/update, then best-improvement swaps until none lowers the cost.
/// When there are at most 4096 candidate medoid sets they are all scored and
/// the cheapest (first in lexicographic order) is taken.
KMedoidsResult kmedoids(const DistanceMatrix& matrix, const KMedoidsOptions& options);

enum class Linkage { ward, average, complete, single };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view text);

/// Leaves are nodes 0..n-1 (input order); merge s creates node n+s.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;
    Linkage linkage = Linkage::ward;
};

/// Agglomerative clustering with Lance-Williams updates. Equal linkage
/// distances are broken by the lexicographically smallest pair of cluster
/// representatives, where a cluster is represented by its smallest series id.
Dendrogram agglomerative(const DistanceMatrix& matrix, Linkage linkage);

/// Undoes the last k-1 merges. Labels are ordered by decreasing cluster size,
/// ties by smallest member id.
ClusterAssignment cut_dendrogram(const Dendrogram& dendrogram, int k);

}  // namespace tsclust
