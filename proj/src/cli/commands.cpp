#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tsclust/cli.hpp"
#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"
#include "tsclust/image_features.hpp"
#include "tsclust/io.hpp"
#include "tsclust/preprocess.hpp"

namespace tsclust::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOriginal = "series_original.csv";
constexpr const char* kScaled = "series_scaled.csv";
constexpr const char* kSymbolic = "series_symbolic.csv";
constexpr const char* kMetadata = "metadata.csv";
constexpr const char* kProvenance = "provenance.json";
constexpr const char* kRejects = "rejects.csv";
constexpr const char* kMatrix = "distmat.csv";
constexpr const char* kMatrixSidecar = "distmat.json";
constexpr const char* kFeatures = "features.csv";
constexpr const char* kAssignment = "assignment.csv";
constexpr const char* kAssignmentSidecar = "assignment.json";
constexpr const char* kDendrogram = "dendrogram.csv";
constexpr const char* kSweep = "sweep.csv";
constexpr const char* kSweepSidecar = "sweep.json";
constexpr const char* kEvaluation = "evaluation.json";
constexpr const char* kProfile = "profile.csv";

void emit(CommandResult& result, const fs::path& path, std::string_view content) {
    csv::write_atomic(path, content);
    result.written.push_back(path);
}

fs::path require(const PipelineConfig& config, const char* name, std::string_view producer) {
    const fs::path p = config.out / name;
    if (!fs::exists(p))
        throw DataError("missing prerequisite " + p.string() + " (run '" + std::string(producer) + "' first)");
    return p;
}

bool symbolic_metric(const PipelineConfig& config, Metric metric) {
    return metric == Metric::levenshtein ||
           (metric == Metric::mpbd && config.mpbd_representation == Representation::symbolic);
}

std::string metric_label(const PipelineConfig& config) {
    if (config.algorithm == Algorithm::image) return "features:" + config.features;
    return std::string(to_string(config.metric));
}

SeriesCollection load_scaled(const PipelineConfig& config) {
    return io::series_from_wide_csv(require(config, kScaled, "preprocess"), config.mode);
}

SymbolicCollection load_symbolic(const PipelineConfig& config) {
    return io::symbolic_from_wide_csv(require(config, kSymbolic, "preprocess"), config.mode);
}

std::vector<FeatureVector> load_features(const PipelineConfig& config, const std::vector<std::string>& ids) {
    auto vectors = load_external_features(require(config, kFeatures, "features"), ids);
    // features.csv carries no extractor tag; recover it from the config.
    const std::string extractor = config.features == "external"
                                      ? "external"
                                      : "raster" + std::to_string(config.raster_width) + "x" +
                                            std::to_string(config.raster_height) + "-pool" +
                                            std::to_string(config.pool_block);
    for (auto& v : vectors) v.extractor = extractor;
    return vectors;
}

DistanceMatrix load_matrix(const PipelineConfig& config) {
    auto m = io::read_matrix(require(config, kMatrix, "distmat"), require(config, kMatrixSidecar, "distmat"));
    if (m.metric() != config.metric)
        throw DataError(std::string(kMatrix) + " holds " + std::string(to_string(m.metric())) +
                        " distances but the config asks for " + std::string(to_string(config.metric)) +
                        " (rerun 'distmat')");
    return m;
}

}  // namespace

CommandResult cmd_preprocess(const PipelineConfig& config) {
    if (config.input.empty()) throw UsageError("preprocess: no input configured (set 'input')");
    const LoadResult loaded =
        config.input_format == "wide" ? load_wide_csv(config.input) : load_long_csv(config.input, config.columns);

    PreprocessOptions options;
    options.mode = config.mode;
    if (config.date_start || config.date_end) {
        auto [lo, hi] = std::minmax_element(loaded.observations.begin(), loaded.observations.end(),
                                            [](const auto& a, const auto& b) { return a.date < b.date; });
        if (loaded.observations.empty()) throw DataError("preprocess: no valid observations in " + config.input.string());
        options.range = DateRange{config.date_start.value_or(lo->date), config.date_end.value_or(hi->date)};
    }
    options.max_missing_fraction = config.max_missing_fraction;
    if (config.fill == "forward") options.fill = FillStrategy::forward;
    if (config.fill == "mean") options.fill = FillStrategy::mean;
    options.scale_lo = config.scale_lo;
    options.scale_hi = config.scale_hi;
    options.thresholds = config.thresholds;
    options.outliers.enabled = config.outlier_metric != "none";
    if (options.outliers.enabled) options.outliers.metric = parse_metric(config.outlier_metric);
    options.outliers.params = config.metric_params();
    options.outliers.percentile = config.outlier_percentile;
    options.outliers.threads = config.threads;

    const PreparedData data = preprocess(loaded.observations, options);

    CommandResult result;
    emit(result, config.out / kOriginal, io::series_to_wide_csv(data.original));
    emit(result, config.out / kScaled, io::series_to_wide_csv(data.scaled));
    emit(result, config.out / kSymbolic, io::symbolic_to_wide_csv(data.symbolic));
    emit(result, config.out / kMetadata, io::metadata_to_csv(data.original));
    emit(result, config.out / kProvenance, io::dump(provenance_to_json(data.provenance)));
    emit(result, config.out / kRejects, rejects_to_csv(loaded.rejects));
    return result;
}

CommandResult cmd_distmat(const PipelineConfig& config) {
    const MetricParams params = config.metric_params();
    DistanceMatrix raw = symbolic_metric(config, config.metric)
                             ? distance_matrix(load_symbolic(config), config.metric, params, config.threads)
                             : distance_matrix(load_scaled(config), config.metric, params, config.threads);
    const DistanceMatrix m = normalize_matrix(raw, config.normalization);
    CommandResult result;
    emit(result, config.out / kMatrix, io::matrix_to_csv(m));
    emit(result, config.out / kMatrixSidecar, io::dump(io::matrix_sidecar(m)));
    return result;
}

CommandResult cmd_features(const PipelineConfig& config) {
    const SeriesCollection scaled = load_scaled(config);
    std::vector<FeatureVector> vectors;
    CommandResult result;
    if (config.features == "external") {
        if (config.features_path.empty()) throw UsageError("features: set 'features_path' for external features");
        vectors = load_external_features(config.features_path, scaled.ids());
        std::set<std::string> have;
        for (const auto& v : vectors) have.insert(v.series_id);
        for (const auto& id : scaled.ids())
            if (!have.count(id)) throw DataError(config.features_path.string() + ": no feature row for series " + id);
        // Follow the collection's order.
        std::map<std::string, FeatureVector> by_id;
        for (auto& v : vectors) by_id.emplace(v.series_id, std::move(v));
        vectors.clear();
        for (const auto& id : scaled.ids()) vectors.push_back(std::move(by_id.at(id)));
        (void)to_point_set(vectors);
    } else {
        RasterOptions options{config.raster_width, config.raster_height, config.pool_block, config.threads};
        vectors = extract_features(scaled, options);
        if (config.dump_pgm) {
            for (const auto& s : scaled.series)
                emit(result, config.out / "pgm" / (s.series_id + ".pgm"),
                     to_pgm(rasterize(s, config.raster_width, config.raster_height)));
        }
    }
    emit(result, config.out / kFeatures, features_to_csv(vectors));
    return result;
}

CommandResult cmd_cluster(const PipelineConfig& config) {
    CommandResult result;
    ClusterAssignment assignment;
    std::string normalization = "none";
    switch (config.algorithm) {
        case Algorithm::kmeans: {
            if (config.metric != Metric::euclidean)
                throw UsageError("cluster: kmeans needs metric = euclidean (use kmedoids for " +
                                 std::string(to_string(config.metric)) + ")");
            const PointSet points = PointSet::from_collection(load_scaled(config));
            assignment = kmeans(points, {config.k, config.seed, 300, 1e-6, config.threads}).assignment;
            assignment.algorithm = "kmeans+euclidean";
            break;
        }
        case Algorithm::image: {
            const auto vectors = load_features(config, load_scaled(config).ids());
            assignment = cluster_features(vectors, config.k, config.seed, config.threads);
            break;
        }
        case Algorithm::kmedoids: {
            const DistanceMatrix m = load_matrix(config);
            normalization = std::string(to_string(m.normalization()));
            assignment = kmedoids(m, {config.k, config.seed, 100, config.threads}).assignment;
            assignment.algorithm = "kmedoids+" + std::string(to_string(m.metric()));
            break;
        }
        case Algorithm::hierarchical: {
            const DistanceMatrix m = load_matrix(config);
            normalization = std::string(to_string(m.normalization()));
            const Dendrogram tree = agglomerative(m, config.linkage);
            if (config.k < 1 || static_cast<std::size_t>(config.k) > m.size())
                throw UsageError("cluster: k = " + std::to_string(config.k) + " outside [1, " +
                                 std::to_string(m.size()) + "]");
            assignment = cut_dendrogram(tree, config.k);
            assignment.algorithm += "+" + std::string(to_string(m.metric()));
            assignment.seed = config.seed;
            emit(result, config.out / kDendrogram, io::dendrogram_to_csv(tree));
            break;
        }
    }
    emit(result, config.out / kAssignment, io::assignment_to_csv(assignment));
    emit(result, config.out / kAssignmentSidecar,
         io::dump(io::assignment_sidecar(assignment, metric_label(config), normalization)));
    return result;
}

CommandResult cmd_sweep(const PipelineConfig& config) {
    const SeriesCollection scaled = load_scaled(config);
    const SymbolicCollection symbolic = load_symbolic(config);
    const PointSet points = PointSet::from_collection(scaled);
    std::optional<DistanceMatrix> matrix;
    std::optional<PointSet> features;

    AlgorithmSpec spec;
    spec.seed = config.seed;
    spec.linkage = config.linkage;
    spec.threads = config.threads;
    SweepInputs inputs{&points, nullptr, &symbolic, nullptr};
    switch (config.algorithm) {
        case Algorithm::hierarchical:
        case Algorithm::kmedoids:
            spec.kind = config.algorithm == Algorithm::hierarchical ? AlgorithmKind::hierarchical : AlgorithmKind::kmedoids;
            matrix = load_matrix(config);
            inputs.matrix = &*matrix;
            break;
        case Algorithm::kmeans:
            if (config.metric != Metric::euclidean) throw UsageError("sweep: kmeans needs metric = euclidean");
            spec.kind = AlgorithmKind::kmeans;
            break;
        case Algorithm::image:
            spec.kind = AlgorithmKind::kmeans;
            features = to_point_set(load_features(config, scaled.ids()));
            inputs.cluster_points = &*features;
            break;
    }
    const SweepTable table = sweep_k(inputs, spec, config.k_min, config.k_max, config.ch_variant, config.omega);

    CommandResult result;
    for (const auto& row : table.rows) {
        if (!row.note.empty()) result.degenerate.push_back("k=" + std::to_string(row.k) + ": " + row.note);
        for (const auto* v : {&row.ch, &row.db, &row.mpbi})
            if (!v->ok()) result.degenerate.push_back("k=" + std::to_string(row.k) + ": " + v->condition);
    }
    io::Json side;
    side["algorithm"] = std::string(to_string(config.algorithm));
    if (config.algorithm == Algorithm::hierarchical) side["linkage"] = std::string(to_string(config.linkage));
    side["metric"] = metric_label(config);
    side["normalization"] = matrix ? std::string(to_string(matrix->normalization())) : std::string("none");
    side["seed"] = config.seed;
    side["k_min"] = config.k_min;
    side["k_max"] = config.k_max;
    side["ch_variant"] = std::string(to_string(config.ch_variant));
    side["omega"] = config.omega;
    emit(result, config.out / kSweep, io::sweep_to_csv(table));
    emit(result, config.out / kSweepSidecar, io::dump(side));
    return result;
}

CommandResult cmd_evaluate(const PipelineConfig& config) {
    const auto assignment = io::read_assignment(require(config, kAssignment, "cluster"),
                                                require(config, kAssignmentSidecar, "cluster"));
    const io::Json side = io::read_json(config.out / kAssignmentSidecar);
    const PointSet points = PointSet::from_collection(load_scaled(config));
    const SymbolicCollection symbolic = load_symbolic(config);
    const ValidityReport report = evaluate(&points, &symbolic, assignment, config.ch_variant, config.omega);

    CommandResult result;
    io::Json j;
    j["k"] = report.k;
    j["algorithm"] = side.at("algorithm");
    j["metric"] = side.at("metric");
    j["normalization"] = side.at("normalization");
    j["seed"] = side.at("seed");
    auto ch = io::index_to_json(report.ch);
    ch["variant"] = std::string(to_string(report.ch_variant));
    j["ch"] = ch;
    j["db"] = io::index_to_json(report.db);
    auto mp = io::index_to_json(report.mpbi);
    mp["omega"] = config.omega;
    mp["distances"] = "raw";
    j["mpbi"] = mp;
    for (const auto* v : {&report.ch, &report.db, &report.mpbi})
        if (!v->ok()) result.degenerate.push_back(v->condition);
    emit(result, config.out / kEvaluation, io::dump(j));
    return result;
}

std::vector<ClusterProfile> profile_clusters(const ClusterAssignment& assignment, const SeriesCollection& original) {
    assignment.validate();
    const auto labels = assignment.labels_for(original.ids());
    std::vector<ClusterProfile> out(static_cast<std::size_t>(assignment.k));
    std::vector<std::map<std::string, std::size_t>> categories(out.size());
    std::vector<std::set<std::string>> items(out.size()), stores(out.size());
    std::vector<double> sums(out.size(), 0.0);
    std::vector<std::size_t> counts(out.size(), 0);
    for (std::size_t c = 0; c < out.size(); ++c) out[c].cluster = static_cast<int>(c) + 1;

    for (std::size_t i = 0; i < original.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i] - 1);
        const TimeSeries& s = original.series[i];
        auto& p = out[c];
        ++p.size;
        if (s.category) ++categories[c][*s.category];
        items[c].insert(s.item_id);
        if (s.store) stores[c].insert(*s.store);
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (s.missing_mask[t] || std::isnan(s.values[t])) continue;
            const double v = s.values[t];
            sums[c] += v;
            ++counts[c];
            p.min_value = p.min_value ? std::min(*p.min_value, v) : v;
            p.max_value = p.max_value ? std::max(*p.max_value, v) : v;
        }
    }
    for (std::size_t c = 0; c < out.size(); ++c) {
        auto& p = out[c];
        p.n_categories = categories[c].size();
        std::vector<std::pair<std::string, std::size_t>> ranked(categories[c].begin(), categories[c].end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (ranked.size() > 2) ranked.resize(2);
        p.top_categories = std::move(ranked);
        if (counts[c]) p.avg_value = std::clamp(sums[c] / static_cast<double>(counts[c]), *p.min_value, *p.max_value);
        p.n_products = items[c].size();
        p.n_stores = stores[c].size();
    }
    return out;
}

std::string profiles_to_csv(const std::vector<ClusterProfile>& profiles, Mode mode) {
    auto real = [](const std::optional<double>& v) { return v ? csv::format_real(*v) : std::string(); };
    std::string out = "cluster,size,n_categories,top_categories,avg_value,min_value,max_value";
    if (mode == Mode::sales) out += ",n_products,n_stores";
    out += "\n";
    for (const auto& p : profiles) {
        std::string top;
        for (const auto& [name, count] : p.top_categories)
            top += (top.empty() ? "" : "; ") + name + ": " + std::to_string(count);
        out += std::to_string(p.cluster) + "," + std::to_string(p.size) + "," + std::to_string(p.n_categories) + "," +
               csv::escape(top) + "," + real(p.avg_value) + "," + real(p.min_value) + "," + real(p.max_value);
        if (mode == Mode::sales) out += "," + std::to_string(p.n_products) + "," + std::to_string(p.n_stores);
        out += "\n";
    }
    return out;
}

CommandResult cmd_profile(const PipelineConfig& config) {
    const auto assignment = io::read_assignment(require(config, kAssignment, "cluster"),
                                                require(config, kAssignmentSidecar, "cluster"));
    SeriesCollection original = io::series_from_wide_csv(require(config, kOriginal, "preprocess"), config.mode);
    io::apply_metadata(original, require(config, kMetadata, "preprocess"));
    CommandResult result;
    emit(result, config.out / kProfile, profiles_to_csv(profile_clusters(assignment, original), config.mode));
    return result;
}

CommandResult cmd_pipeline(const PipelineConfig& config) {
    CommandResult total;
    auto absorb = [&](CommandResult r) {
        total.written.insert(total.written.end(), r.written.begin(), r.written.end());
        total.degenerate.insert(total.degenerate.end(), r.degenerate.begin(), r.degenerate.end());
    };
    absorb(cmd_preprocess(config));
    if (config.algorithm == Algorithm::image)
        absorb(cmd_features(config));
    else if (config.algorithm != Algorithm::kmeans)
        absorb(cmd_distmat(config));
    absorb(cmd_cluster(config));
    absorb(cmd_evaluate(config));
    absorb(cmd_profile(config));
    return total;
}

}  // namespace tsclust::cli
