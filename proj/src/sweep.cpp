#include "tsclust/error.hpp"
#include "tsclust/evaluation.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust {

std::string_view to_string(AlgorithmKind kind) {
    switch (kind) {
        case AlgorithmKind::hierarchical: return "hierarchical";
        case AlgorithmKind::kmeans: return "kmeans";
        case AlgorithmKind::kmedoids: return "kmedoids";
    }
    return "?";
}

AlgorithmKind parse_algorithm(std::string_view text) {
    if (text == "hierarchical") return AlgorithmKind::hierarchical;
    if (text == "kmeans") return AlgorithmKind::kmeans;
    if (text == "kmedoids") return AlgorithmKind::kmedoids;
    throw UsageError("unknown algorithm '" + std::string(text) + "' (expected hierarchical|kmeans|kmedoids)");
}

SweepTable sweep_k(const SweepInputs& inputs, const AlgorithmSpec& algorithm, int k_min, int k_max,
                   ChVariant ch_variant, double omega) {
    std::size_t n = 0;
    const PointSet* vectors = inputs.cluster_points ? inputs.cluster_points : inputs.points;
    if (algorithm.kind == AlgorithmKind::kmeans) {
        if (!vectors) throw UsageError("sweep_k: kmeans needs numeric vectors");
        n = vectors->size();
    } else {
        if (!inputs.matrix) throw UsageError("sweep_k: " + std::string(to_string(algorithm.kind)) + " needs a distance matrix");
        n = inputs.matrix->size();
    }
    if (k_min < 2 || k_min > k_max || static_cast<std::size_t>(k_max) + 1 > n)
        throw UsageError("sweep_k: k range must satisfy 2 <= k_min <= k_max <= n-1 (n = " + std::to_string(n) + ")");

    std::optional<Dendrogram> tree;
    if (algorithm.kind == AlgorithmKind::hierarchical) tree = agglomerative(*inputs.matrix, algorithm.linkage);

    SweepTable table;
    table.ch_variant = ch_variant;
    table.rows.resize(static_cast<std::size_t>(k_max - k_min + 1));
    const std::size_t inner_threads = 1;  // rows already run in parallel
    parallel_for(table.rows.size(), algorithm.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            SweepRow& row = table.rows[r];
            row.k = k_min + static_cast<int>(r);
            try {
                ClusterAssignment a;
                switch (algorithm.kind) {
                    case AlgorithmKind::hierarchical: a = cut_dendrogram(*tree, row.k); break;
                    case AlgorithmKind::kmeans:
                        a = kmeans(*vectors, {row.k, algorithm.seed, 300, 1e-6, inner_threads}).assignment;
                        break;
                    case AlgorithmKind::kmedoids:
                        a = kmedoids(*inputs.matrix, {row.k, algorithm.seed, 100, inner_threads}).assignment;
                        break;
                }
                const auto report = evaluate(inputs.points, inputs.symbolic, a, ch_variant, omega);
                row.ch = report.ch;
                row.db = report.db;
                row.mpbi = report.mpbi;
            } catch (const Error& e) {
                row.note = e.what();
            }
        }
    });
    return table;
}

}  // namespace tsclust
