#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tsclust/clustering.hpp"
#include "tsclust/core_data.hpp"
#include "tsclust/distances.hpp"
#include "tsclust/evaluation.hpp"

namespace tsclust::io {

using Json = nlohmann::ordered_json;

/// `series_id,<date_1>,...`; NaN values are written as empty cells.
std::string series_to_wide_csv(const SeriesCollection& collection);
SeriesCollection series_from_wide_csv(const std::filesystem::path& path, Mode mode);

/// Same layout with level letters A-E.
std::string symbolic_to_wide_csv(const SymbolicCollection& collection);
SymbolicCollection symbolic_from_wide_csv(const std::filesystem::path& path, Mode mode);

/// `series_id,item_id,category,store`.
std::string metadata_to_csv(const SeriesCollection& collection);
/// Copies item/category/store from the metadata file onto matching series.
void apply_metadata(SeriesCollection& collection, const std::filesystem::path& path);

/// Header `id,<id_1>,...,<id_n>` then one row per series, 9 significant digits.
std::string matrix_to_csv(const DistanceMatrix& matrix);
Json matrix_sidecar(const DistanceMatrix& matrix);
DistanceMatrix read_matrix(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path);

/// `series_id,cluster`.
std::string assignment_to_csv(const ClusterAssignment& assignment);
Json assignment_sidecar(const ClusterAssignment& assignment, const std::string& metric,
                        const std::string& normalization);
ClusterAssignment read_assignment(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path);

/// `step,left,right,height,size`.
std::string dendrogram_to_csv(const Dendrogram& dendrogram);

/// `k,ch,db,mpbi,note`; failed indices are left empty.
std::string sweep_to_csv(const SweepTable& table);

Json index_to_json(const IndexValue& value);

Json read_json(const std::filesystem::path& path);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& json);

}  // namespace tsclust::io
