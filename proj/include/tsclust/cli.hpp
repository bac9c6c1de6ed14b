#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/clustering.hpp"
#include "tsclust/core_data.hpp"
#include "tsclust/distances.hpp"
#include "tsclust/evaluation.hpp"

namespace tsclust::cli {

/// Clustering route. `image` is k-means on raster or external feature vectors.
enum class Algorithm { hierarchical, kmeans, kmedoids, image };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_cli_algorithm(std::string_view text);

struct PipelineConfig {
    std::filesystem::path input;
    std::string input_format = "long";  // long | wide
    ColumnMapping columns;
    Mode mode = Mode::price;
    std::optional<Date> date_start;
    std::optional<Date> date_end;

    double max_missing_fraction = 0.8;
    std::string fill = "auto";  // auto | forward | mean
    double scale_lo = 0.1;
    double scale_hi = 1.0;
    DiscretizationThresholds thresholds;
    std::string outlier_metric = "mpbd";  // any metric, or none
    double outlier_percentile = 95.0;

    Metric metric = Metric::mpbd;
    double omega = 2.0;
    std::optional<std::size_t> dtw_window;
    Representation mpbd_representation = Representation::symbolic;
    Normalization normalization = Normalization::matrix_max;

    Algorithm algorithm = Algorithm::hierarchical;
    Linkage linkage = Linkage::ward;
    int k = 15;
    int k_min = 2;
    int k_max = 20;
    ChVariant ch_variant = ChVariant::standard;

    std::string features = "raster";  // raster | external
    std::filesystem::path features_path;
    std::size_t raster_width = 64;
    std::size_t raster_height = 64;
    std::size_t pool_block = 4;
    bool dump_pgm = false;

    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    std::size_t threads = 0;
    bool strict = false;

    MetricParams metric_params() const;
};

/// Sets one `key = value` setting; unknown keys and bad values raise UsageError.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// Parses a flat `key = value` file with `#` comments. Relative `input` and
/// `features_path` resolve against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                            PipelineConfig config = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Every key with its default, in config-file syntax.
std::string config_reference();

/// Outcome of a command. `degenerate` lists index conditions that `--strict`
/// escalates to exit status 3.
struct CommandResult {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> degenerate;
};

CommandResult cmd_preprocess(const PipelineConfig& config);
CommandResult cmd_distmat(const PipelineConfig& config);
CommandResult cmd_features(const PipelineConfig& config);
CommandResult cmd_cluster(const PipelineConfig& config);
CommandResult cmd_sweep(const PipelineConfig& config);
CommandResult cmd_evaluate(const PipelineConfig& config);
CommandResult cmd_profile(const PipelineConfig& config);
/// preprocess -> distmat or features (as the algorithm needs) -> cluster -> evaluate -> profile.
CommandResult cmd_pipeline(const PipelineConfig& config);

struct ClusterProfile {
    int cluster = 0;
    std::size_t size = 0;
    std::size_t n_categories = 0;
    std::vector<std::pair<std::string, std::size_t>> top_categories;  // at most two
    std::optional<double> avg_value;
    std::optional<double> min_value;
    std::optional<double> max_value;
    std::size_t n_products = 0;
    std::size_t n_stores = 0;
};

/// Profiles over the present (non-imputed) values of `original`, whose
/// series carry the item/category/store metadata.
std::vector<ClusterProfile> profile_clusters(const ClusterAssignment& assignment, const SeriesCollection& original);
std::string profiles_to_csv(const std::vector<ClusterProfile>& profiles, Mode mode);

/// Entry point shared by the executable and the tests. Returns the exit
/// status: 0 success, 1 usage/config error, 2 data error, 3 degenerate
/// computation under --strict.
int run(const std::vector<std::string>& args);

}  // namespace tsclust::cli
