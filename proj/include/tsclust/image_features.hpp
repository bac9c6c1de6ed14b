#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsclust/clustering.hpp"
#include "tsclust/core_data.hpp"

namespace tsclust {

/// Row-major binary raster; row 0 is the top of the plot.
struct ImageGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    std::size_t lit_count() const;
};

/// Draws the series' polyline: t spans columns 0..width-1, value 0 maps to
/// the bottom row and 1 to the top row, segments use integer line stepping.
ImageGrid rasterize(const TimeSeries& series, std::size_t width = 64, std::size_t height = 64);

/// ASCII PGM (P2) with maxval 1.
std::string to_pgm(const ImageGrid& image);

struct FeatureVector {
    std::string series_id;
    std::vector<double> features;
    std::string extractor;
};

/// Mean intensity of each block x block tile, tiles in row-major order.
FeatureVector pool_features(const ImageGrid& image, std::size_t block = 4);

struct RasterOptions {
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t block = 4;
    std::size_t threads = 1;
};

/// rasterize + pool_features for every series, tagged with the series ids.
std::vector<FeatureVector> extract_features(const SeriesCollection& scaled, const RasterOptions& options = {});

/// Reads `series_id,f1,...,fm`. Every id must appear in `known_ids`; vectors
/// come back in the file's row order with extractor "external".
std::vector<FeatureVector> load_external_features(const std::filesystem::path& path,
                                                  const std::vector<std::string>& known_ids);

std::string features_to_csv(const std::vector<FeatureVector>& vectors);

/// Checks equal lengths and a shared extractor, then packs into a PointSet.
PointSet to_point_set(const std::vector<FeatureVector>& vectors);

/// k-means on the feature vectors; the descriptor records the extractor.
ClusterAssignment cluster_features(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed,
                                   std::size_t threads = 1);

}  // namespace tsclust
