#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "tsclust/clustering.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::ward: return "ward";
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
        case Linkage::single: return "single";
    }
    return "?";
}

Linkage parse_linkage(std::string_view text) {
    if (text == "ward") return Linkage::ward;
    if (text == "average") return Linkage::average;
    if (text == "complete") return Linkage::complete;
    if (text == "single") return Linkage::single;
    throw UsageError("unknown linkage '" + std::string(text) + "' (expected ward|average|complete|single)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance from k to the union of i and j.
double lance_williams(Linkage linkage, double d_ik, double d_jk, double d_ij, double n_i, double n_j, double n_k) {
    switch (linkage) {
        case Linkage::single: return std::min(d_ik, d_jk);
        case Linkage::complete: return std::max(d_ik, d_jk);
        case Linkage::average: return (n_i * d_ik + n_j * d_jk) / (n_i + n_j);
        case Linkage::ward: {
            // Update on squared dissimilarities; heights stay in distance units.
            const double sq = ((n_i + n_k) * d_ik * d_ik + (n_j + n_k) * d_jk * d_jk - n_k * d_ij * d_ij) /
                              (n_i + n_j + n_k);
            return std::sqrt(std::max(0.0, sq));
        }
    }
    return kInf;
}

struct Candidate {
    double distance = kInf;
    std::size_t rep_lo = 0;
    std::size_t rep_hi = 0;

    bool operator<(const Candidate& o) const {
        return std::tie(distance, rep_lo, rep_hi) < std::tie(o.distance, o.rep_lo, o.rep_hi);
    }
};

}  // namespace

Dendrogram agglomerative(const DistanceMatrix& matrix, Linkage linkage) {
    const std::size_t n = matrix.size();
    if (n < 2) throw DataError("agglomerative: need at least two series");

    // rank[i] = position of ids[i] in sorted order; a cluster's representative
    // is the smallest rank among its members.
    std::vector<std::size_t> by_id(n);
    std::iota(by_id.begin(), by_id.end(), std::size_t{0});
    std::sort(by_id.begin(), by_id.end(), [&](auto a, auto b) { return matrix.ids()[a] < matrix.ids()[b]; });
    std::vector<std::size_t> rep(n);
    for (std::size_t r = 0; r < n; ++r) rep[by_id[r]] = r;

    std::vector<double> d(matrix.entries());
    auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };
    std::vector<bool> active(n, true);
    std::vector<double> size(n, 1.0);
    std::vector<std::size_t> node(n);
    std::iota(node.begin(), node.end(), std::size_t{0});

    auto pair_key = [&](std::size_t i, std::size_t j) {
        return Candidate{at(i, j), std::min(rep[i], rep[j]), std::max(rep[i], rep[j])};
    };
    std::vector<std::size_t> nn(n, n);
    std::vector<Candidate> nn_key(n);
    auto refresh = [&](std::size_t i) {
        nn[i] = n;
        nn_key[i] = Candidate{};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !active[j]) continue;
            const Candidate c = pair_key(i, j);
            if (nn[i] == n || c < nn_key[i]) {
                nn_key[i] = c;
                nn[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) refresh(i);

    Dendrogram out;
    out.leaves = matrix.ids();
    out.linkage = linkage;
    out.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t a = n;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && (a == n || nn_key[i] < nn_key[a])) a = i;
        std::size_t b = nn[a];
        if (rep[b] < rep[a]) std::swap(a, b);
        const double height = at(a, b);

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) continue;
            // All four linkages are reducible, so the merged distance never
            // drops below the merge height; the max absorbs rounding.
            const double v =
                std::max(height, lance_williams(linkage, at(a, k), at(b, k), height, size[a], size[b], size[k]));
            at(a, k) = at(k, a) = v;
        }
        out.merges.push_back({node[a], node[b], height, static_cast<std::size_t>(size[a] + size[b])});
        active[b] = false;
        size[a] += size[b];
        rep[a] = std::min(rep[a], rep[b]);
        node[a] = n + step;

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a) continue;
            if (nn[k] == a || nn[k] == b) {
                refresh(k);
            } else if (const Candidate c = pair_key(k, a); c < nn_key[k]) {
                nn_key[k] = c;
                nn[k] = a;
            }
        }
        refresh(a);
    }
    return out;
}

ClusterAssignment cut_dendrogram(const Dendrogram& dendrogram, int k) {
    const std::size_t n = dendrogram.leaves.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw UsageError("cut_dendrogram: k out of range [1, n]");
    if (dendrogram.merges.size() + 1 != n) throw DataError("cut_dendrogram: dendrogram needs n-1 merges");

    // Union-find over leaf and internal node ids.
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const std::size_t applied = n - static_cast<std::size_t>(k);
    for (std::size_t s = 0; s < applied; ++s) {
        const auto& m = dendrogram.merges[s];
        parent[find(m.left)] = n + s;
        parent[find(m.right)] = n + s;
    }

    struct Group {
        std::size_t root;
        std::size_t size;
        const std::string* min_id;
    };
    std::vector<Group> groups;
    std::vector<std::size_t> group_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.root == r; });
        if (it == groups.end()) {
            groups.push_back({r, 0, &dendrogram.leaves[i]});
            it = groups.end() - 1;
        }
        ++it->size;
        if (dendrogram.leaves[i] < *it->min_id) it->min_id = &dendrogram.leaves[i];
        group_of[i] = static_cast<std::size_t>(it - groups.begin());
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto x, auto y) {
        if (groups[x].size != groups[y].size) return groups[x].size > groups[y].size;
        return *groups[x].min_id < *groups[y].min_id;
    });
    std::vector<int> label_of_group(groups.size());
    for (std::size_t r = 0; r < order.size(); ++r) label_of_group[order[r]] = static_cast<int>(r) + 1;

    ClusterAssignment a;
    a.ids = dendrogram.leaves;
    a.k = k;
    a.algorithm = "hierarchical-" + std::string(to_string(dendrogram.linkage));
    for (std::size_t i = 0; i < n; ++i) a.labels.push_back(label_of_group[group_of[i]]);
    a.validate();
    return a;
}

}  // namespace tsclust
