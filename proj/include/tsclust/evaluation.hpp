#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/clustering.hpp"
#include "tsclust/core_data.hpp"
#include "tsclust/distances.hpp"

namespace tsclust {

enum class ChVariant { paper, standard };
enum class BcssVariant { paper, weighted };

std::string_view to_string(ChVariant variant);
ChVariant parse_ch_variant(std::string_view text);

/// Sum over clusters of squared deviations from the cluster mean.
double wcss(const PointSet& points, const ClusterAssignment& assignment);

/// paper: sum of squared centroid-to-grand-mean distances;
/// weighted: each term multiplied by the cluster size.
double bcss(const PointSet& points, const ClusterAssignment& assignment, BcssVariant variant);

/// paper: WCSS / BCSS (lower is better);
/// standard: (BCSS_weighted / (k-1)) / (WCSS / (n-k)) (higher is better).
/// A zero denominator raises DegenerateError.
double ch_index(const PointSet& points, const ClusterAssignment& assignment, ChVariant variant = ChVariant::standard);

/// Davies-Bouldin with S_i the RMS distance to the centroid and M_ij the
/// Euclidean centroid distance. Coincident centroids raise DegenerateError.
double db_index(const PointSet& points, const ClusterAssignment& assignment);

/// Mean over clusters of (sum of within-cluster pairwise raw MPBD) / cluster size.
double mpbi(const SymbolicCollection& symbolic, const ClusterAssignment& assignment, double omega = 2.0);

/// One index value or the reason it could not be computed.
struct IndexValue {
    std::optional<double> value;
    std::string condition;

    bool ok() const { return value.has_value(); }
};

struct ValidityReport {
    int k = 0;
    IndexValue ch;
    ChVariant ch_variant = ChVariant::standard;
    IndexValue db;
    IndexValue mpbi;
};

/// Computes every index that the inputs allow; failures are recorded per index.
ValidityReport evaluate(const PointSet* points, const SymbolicCollection* symbolic, const ClusterAssignment& assignment,
                        ChVariant ch_variant = ChVariant::standard, double omega = 2.0);

enum class AlgorithmKind { hierarchical, kmeans, kmedoids };

std::string_view to_string(AlgorithmKind kind);
AlgorithmKind parse_algorithm(std::string_view text);

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::hierarchical;
    Linkage linkage = Linkage::ward;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Data the sweep can draw on. kmeans clusters `cluster_points` (falling back
/// to `points`); hierarchical and kmedoids cluster `matrix`. Indices use
/// `points` (CH, DB) and `symbolic` (MPBI).
struct SweepInputs {
    const PointSet* points = nullptr;
    const PointSet* cluster_points = nullptr;
    const SymbolicCollection* symbolic = nullptr;
    const DistanceMatrix* matrix = nullptr;
};

struct SweepRow {
    int k = 0;
    IndexValue ch;
    IndexValue db;
    IndexValue mpbi;
    std::string note;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    ChVariant ch_variant = ChVariant::standard;
};

/// Runs the algorithm for each k in [k_min, k_max]. A hierarchical run builds
/// one dendrogram and cuts it per k. Per-k failures become row notes.
SweepTable sweep_k(const SweepInputs& inputs, const AlgorithmSpec& algorithm, int k_min, int k_max,
                   ChVariant ch_variant = ChVariant::standard, double omega = 2.0);

}  // namespace tsclust
