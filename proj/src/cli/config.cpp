#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "tsclust/cli.hpp"
#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"

namespace tsclust::cli {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::hierarchical: return "hierarchical";
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::kmedoids: return "kmedoids";
        case Algorithm::image: return "image";
    }
    return "?";
}

Algorithm parse_cli_algorithm(std::string_view text) {
    if (text == "hierarchical") return Algorithm::hierarchical;
    if (text == "kmeans") return Algorithm::kmeans;
    if (text == "kmedoids") return Algorithm::kmedoids;
    if (text == "image") return Algorithm::image;
    throw UsageError("unknown algorithm '" + std::string(text) + "' (expected hierarchical|kmeans|kmedoids|image)");
}

MetricParams PipelineConfig::metric_params() const {
    MetricParams p;
    p.omega = omega;
    p.dtw_window = dtw_window;
    p.mpbd_representation = mpbd_representation;
    p.scale_lo = scale_lo;
    p.scale_hi = scale_hi;
    return p;
}

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
    throw UsageError("config: invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                     std::string(expected) + ")");
}

double real(std::string_view key, std::string_view v) {
    const auto r = csv::parse_real(v);
    if (!r) bad(key, v, "a real number");
    return *r;
}

template <typename Int>
Int integer(std::string_view key, std::string_view v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, v, "an integer");
    return out;
}

bool boolean(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad(key, v, "true|false");
}

Date date(std::string_view key, std::string_view v) {
    const auto d = parse_date(v);
    if (!d) bad(key, v, "YYYY-MM-DD");
    return *d;
}

using Setter = std::function<void(PipelineConfig&, std::string_view key, std::string_view value)>;

struct Entry {
    Setter set;
    std::string default_value;
    std::string help;
};

const std::map<std::string, Entry, std::less<>>& registry() {
    static const std::map<std::string, Entry, std::less<>> table = {
        {"input", {[](auto& c, auto, auto v) { c.input = std::string(v); }, "", "input CSV path"}},
        {"input_format",
         {[](auto& c, auto k, auto v) {
              if (v != "long" && v != "wide") bad(k, v, "long|wide");
              c.input_format = std::string(v);
          },
          "long", "long (one observation per row) or wide (series_id + date columns)"}},
        {"col_series_id", {[](auto& c, auto, auto v) { c.columns.series_id = std::string(v); }, "series_id", "long CSV column"}},
        {"col_date", {[](auto& c, auto, auto v) { c.columns.date = std::string(v); }, "date", "long CSV column"}},
        {"col_value", {[](auto& c, auto, auto v) { c.columns.value = std::string(v); }, "value", "long CSV column"}},
        {"col_category", {[](auto& c, auto, auto v) { c.columns.category = std::string(v); }, "category", "long CSV column"}},
        {"col_store", {[](auto& c, auto, auto v) { c.columns.store = std::string(v); }, "store", "long CSV column"}},
        {"mode", {[](auto& c, auto, auto v) { c.mode = parse_mode(v); }, "price", "price|sales"}},
        {"date_start", {[](auto& c, auto k, auto v) { c.date_start = date(k, v); }, "", "first day (default: earliest observation)"}},
        {"date_end", {[](auto& c, auto k, auto v) { c.date_end = date(k, v); }, "", "last day (default: latest observation)"}},
        {"max_missing_fraction",
         {[](auto& c, auto k, auto v) { c.max_missing_fraction = real(k, v); }, "0.8", "drop series missing more than this"}},
        {"fill",
         {[](auto& c, auto k, auto v) {
              if (v != "auto" && v != "forward" && v != "mean") bad(k, v, "auto|forward|mean");
              c.fill = std::string(v);
          },
          "auto", "auto = forward for price, mean for sales"}},
        {"scale_lo", {[](auto& c, auto k, auto v) { c.scale_lo = real(k, v); }, "0.1", "min-max lower bound"}},
        {"scale_hi", {[](auto& c, auto k, auto v) { c.scale_hi = real(k, v); }, "1.0", "min-max upper bound"}},
        {"thresholds",
         {[](auto& c, auto k, auto v) {
              const auto parts = csv::split_line(v);
              if (parts.size() != 4) bad(k, v, "four comma-separated cut points");
              for (std::size_t i = 0; i < 4; ++i) c.thresholds.cuts[i] = real(k, trim(parts[i]));
              c.thresholds.validate();
          },
          "0.29,0.47,0.65,0.83", "level cut points A|B, B|C, C|D, D|E"}},
        {"outlier_metric",
         {[](auto& c, auto k, auto v) {
              if (v != "none") (void)parse_metric(v);
              (void)k;
              c.outlier_metric = std::string(v);
          },
          "mpbd", "nearest-neighbour outlier metric, or none"}},
        {"outlier_percentile",
         {[](auto& c, auto k, auto v) {
              c.outlier_percentile = real(k, v);
              if (!(c.outlier_percentile > 0.0 && c.outlier_percentile <= 100.0)) bad(k, v, "a value in (0, 100]");
          },
          "95", "remove series whose NN distance exceeds this percentile"}},
        {"metric", {[](auto& c, auto, auto v) { c.metric = parse_metric(v); }, "mpbd", "euclidean|levenshtein|dtw|mpbd"}},
        {"omega", {[](auto& c, auto k, auto v) { c.omega = real(k, v); }, "2", "MPBD opposite-direction weight"}},
        {"dtw_window",
         {[](auto& c, auto k, auto v) {
              if (v == "none")
                  c.dtw_window.reset();
              else
                  c.dtw_window = integer<std::size_t>(k, v);
          },
          "none", "Sakoe-Chiba half-width, or none"}},
        {"mpbd_representation",
         {[](auto& c, auto, auto v) { c.mpbd_representation = parse_representation(v); }, "symbolic",
          "symbolic|numeric"}},
        {"normalization",
         {[](auto& c, auto, auto v) { c.normalization = parse_normalization(v); }, "matrix_max",
          "none|matrix_max|table1"}},
        {"algorithm",
         {[](auto& c, auto, auto v) { c.algorithm = parse_cli_algorithm(v); }, "hierarchical",
          "hierarchical|kmeans|kmedoids|image"}},
        {"linkage", {[](auto& c, auto, auto v) { c.linkage = parse_linkage(v); }, "ward", "ward|average|complete|single"}},
        {"k", {[](auto& c, auto k, auto v) { c.k = integer<int>(k, v); }, "15", "number of clusters"}},
        {"k_min", {[](auto& c, auto k, auto v) { c.k_min = integer<int>(k, v); }, "2", "sweep lower bound"}},
        {"k_max", {[](auto& c, auto k, auto v) { c.k_max = integer<int>(k, v); }, "20", "sweep upper bound"}},
        {"ch_variant",
         {[](auto& c, auto, auto v) { c.ch_variant = parse_ch_variant(v); }, "standard", "standard|paper"}},
        {"features",
         {[](auto& c, auto k, auto v) {
              if (v != "raster" && v != "external") bad(k, v, "raster|external");
              c.features = std::string(v);
          },
          "raster", "image-branch feature source"}},
        {"features_path", {[](auto& c, auto, auto v) { c.features_path = std::string(v); }, "", "external feature CSV"}},
        {"raster_width", {[](auto& c, auto k, auto v) { c.raster_width = integer<std::size_t>(k, v); }, "64", "raster columns"}},
        {"raster_height", {[](auto& c, auto k, auto v) { c.raster_height = integer<std::size_t>(k, v); }, "64", "raster rows"}},
        {"pool_block", {[](auto& c, auto k, auto v) { c.pool_block = integer<std::size_t>(k, v); }, "4", "pooling tile size"}},
        {"dump_pgm", {[](auto& c, auto k, auto v) { c.dump_pgm = boolean(k, v); }, "false", "write one PGM per series"}},
        {"seed", {[](auto& c, auto k, auto v) { c.seed = integer<std::uint64_t>(k, v); }, "0", "64-bit seed"}},
        {"out", {[](auto& c, auto, auto v) { c.out = std::string(v); }, "out", "output directory"}},
        {"threads", {[](auto& c, auto k, auto v) { c.threads = integer<std::size_t>(k, v); }, "0", "worker threads, 0 = auto"}},
        {"strict", {[](auto& c, auto k, auto v) { c.strict = boolean(k, v); }, "false", "exit 3 on degenerate indices"}},
    };
    return table;
}

}  // namespace

void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value) {
    const auto it = registry().find(key);
    if (it == registry().end()) throw UsageError("config: unknown key '" + std::string(key) + "'");
    it->second.set(config, key, value);
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, PipelineConfig config) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(number) + ": expected 'key = value'");
        try {
            apply_setting(config, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
        } catch (const UsageError& e) {
            throw UsageError("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    if (!base_dir.empty()) {
        if (!config.input.empty() && config.input.is_relative()) config.input = base_dir / config.input;
        if (!config.features_path.empty() && config.features_path.is_relative())
            config.features_path = base_dir / config.features_path;
    }
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw UsageError("config file not found: " + path.string());
    return parse_config(csv::read_text(path), path.parent_path());
}

std::string config_reference() {
    std::string out;
    for (const auto& [key, entry] : registry()) {
        out += "  " + key + " = " + entry.default_value;
        out += std::string(key.size() + entry.default_value.size() < 36 ? 36 - key.size() - entry.default_value.size() : 1, ' ');
        out += "# " + entry.help + "\n";
    }
    return out;
}

}  // namespace tsclust::cli
