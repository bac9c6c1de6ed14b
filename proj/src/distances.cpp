#include "tsclust/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tsclust/error.hpp"

namespace tsclust {

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::euclidean: return "euclidean";
        case Metric::levenshtein: return "levenshtein";
        case Metric::dtw: return "dtw";
        case Metric::mpbd: return "mpbd";
    }
    return "?";
}

std::string_view to_string(Normalization normalization) {
    switch (normalization) {
        case Normalization::none: return "none";
        case Normalization::matrix_max: return "matrix_max";
        case Normalization::table1: return "table1";
    }
    return "?";
}

std::string_view to_string(Representation representation) {
    return representation == Representation::symbolic ? "symbolic" : "numeric";
}

Metric parse_metric(std::string_view text) {
    if (text == "euclidean") return Metric::euclidean;
    if (text == "levenshtein") return Metric::levenshtein;
    if (text == "dtw") return Metric::dtw;
    if (text == "mpbd") return Metric::mpbd;
    throw UsageError("unknown metric '" + std::string(text) + "' (expected euclidean|levenshtein|dtw|mpbd)");
}

Normalization parse_normalization(std::string_view text) {
    if (text == "none") return Normalization::none;
    if (text == "matrix_max") return Normalization::matrix_max;
    if (text == "table1") return Normalization::table1;
    throw UsageError("unknown normalization '" + std::string(text) + "' (expected none|matrix_max|table1)");
}

Representation parse_representation(std::string_view text) {
    if (text == "symbolic") return Representation::symbolic;
    if (text == "numeric") return Representation::numeric;
    throw UsageError("unknown representation '" + std::string(text) + "' (expected symbolic|numeric)");
}

double euclidean(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DataError("euclidean: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = q[i] - p[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::size_t levenshtein(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q) {
    if (p.size() < q.size()) std::swap(p, q);
    // Two-row table over the shorter sequence.
    std::vector<std::size_t> prev(q.size() + 1), cur(q.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= p.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= q.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (p[i - 1] == q[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[q.size()];
}

double normalized_levenshtein(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q) {
    const std::size_t longest = std::max(p.size(), q.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(p, q)) / static_cast<double>(longest);
}

double dtw(std::span<const double> p, std::span<const double> q, std::optional<std::size_t> window) {
    if (p.empty() || q.empty()) throw DataError("dtw: empty series");
    const std::size_t n = p.size(), m = q.size();
    const std::size_t gap = n > m ? n - m : m - n;
    if (window && *window < gap) throw UsageError("dtw: window smaller than the length difference");
    const std::size_t w = window ? *window : std::max(n, m);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        const std::size_t lo = i > w ? i - w : 1;
        const std::size_t hi = std::min(m, i + w);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = p[i - 1] - q[j - 1];
            cur[j] = d * d + std::min({prev[j - 1], prev[j], cur[j - 1]});
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[m]);
}

namespace {

int sign(double x) { return (x > 0) - (x < 0); }

template <typename T>
double mpbd_impl(std::span<const T> p, std::span<const T> q, double omega) {
    if (p.size() != q.size()) throw DataError("mpbd: length mismatch");
    if (p.size() < 2) throw DataError("mpbd: series need at least two points");
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < p.size(); ++t) {
        const double dp = static_cast<double>(p[t]) - static_cast<double>(p[t + 1]);
        const double dq = static_cast<double>(q[t]) - static_cast<double>(q[t + 1]);
        total += mpbd_step_cost(dp, dq, omega);
    }
    return total;
}

}  // namespace

double mpbd_step_cost(double delta_p, double delta_q, double omega) {
    if (delta_p == delta_q) return 0.0;
    const double gap = std::abs(delta_p - delta_q);
    if (sign(delta_p) == sign(delta_q)) return gap;  // both nonzero here
    return omega * gap;
}

double mpbd(std::span<const double> p, std::span<const double> q, double omega) {
    return mpbd_impl<double>(p, q, omega);
}

double mpbd(std::span<const std::uint8_t> p, std::span<const std::uint8_t> q, double omega) {
    return mpbd_impl<std::uint8_t>(p, q, omega);
}

}  // namespace tsclust
