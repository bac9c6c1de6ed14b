#include "tsclust/image_features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <unordered_set>

#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust {

std::size_t ImageGrid::lit_count() const {
    return static_cast<std::size_t>(std::count_if(pixels.begin(), pixels.end(), [](double p) { return p != 0.0; }));
}

namespace {

// Bresenham between integer endpoints.
void draw_line(ImageGrid& img, long x0, long y0, long x1, long y1) {
    const long dx = std::labs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const long dy = -std::labs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
        img.pixels[static_cast<std::size_t>(y0) * img.width + static_cast<std::size_t>(x0)] = 1.0;
        if (x0 == x1 && y0 == y1) break;
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

ImageGrid rasterize(const TimeSeries& series, std::size_t width, std::size_t height) {
    if (width < 2 || height < 2) throw UsageError("rasterize: width and height must be at least 2");
    if (series.values.empty()) throw DataError("rasterize: empty series");
    for (double v : series.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw DataError("rasterize: series " + series.series_id + " has a value outside [0, 1]");

    ImageGrid img{width, height, std::vector<double>(width * height, 0.0)};
    const std::size_t n = series.size();
    auto column = [&](std::size_t t) {
        if (n == 1) return 0L;
        return std::lround(static_cast<double>(t) * static_cast<double>(width - 1) / static_cast<double>(n - 1));
    };
    auto row = [&](double v) {
        return static_cast<long>(height - 1) - std::lround(v * static_cast<double>(height - 1));
    };
    if (n == 1) {
        draw_line(img, 0, row(series.values[0]), 0, row(series.values[0]));
        return img;
    }
    for (std::size_t t = 0; t + 1 < n; ++t)
        draw_line(img, column(t), row(series.values[t]), column(t + 1), row(series.values[t + 1]));
    return img;
}

std::string to_pgm(const ImageGrid& image) {
    std::string out = "P2\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n1\n";
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c) {
            if (c) out.push_back(' ');
            out.push_back(image.at(r, c) != 0.0 ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

FeatureVector pool_features(const ImageGrid& image, std::size_t block) {
    if (block == 0 || image.width % block != 0 || image.height % block != 0)
        throw UsageError("pool_features: block " + std::to_string(block) + " does not divide " +
                         std::to_string(image.width) + "x" + std::to_string(image.height));
    FeatureVector fv;
    fv.extractor = "raster" + std::to_string(image.width) + "x" + std::to_string(image.height) + "-pool" +
                   std::to_string(block);
    const double area = static_cast<double>(block * block);
    for (std::size_t tr = 0; tr < image.height / block; ++tr) {
        for (std::size_t tc = 0; tc < image.width / block; ++tc) {
            double sum = 0.0;
            for (std::size_t r = 0; r < block; ++r)
                for (std::size_t c = 0; c < block; ++c) sum += image.at(tr * block + r, tc * block + c);
            fv.features.push_back(sum / area);
        }
    }
    return fv;
}

std::vector<FeatureVector> extract_features(const SeriesCollection& scaled, const RasterOptions& options) {
    std::vector<FeatureVector> out(scaled.size());
    parallel_for(scaled.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = pool_features(rasterize(scaled.series[i], options.width, options.height), options.block);
            out[i].series_id = scaled.series[i].series_id;
        }
    });
    return out;
}

std::vector<FeatureVector> load_external_features(const std::filesystem::path& path,
                                                  const std::vector<std::string>& known_ids) {
    const auto records = csv::read_file(path);
    if (records.empty()) throw DataError(path.string() + ": missing header row");
    const std::size_t width = records.front().fields.size();
    if (width < 2) throw DataError(path.string() + ": header needs series_id and at least one feature column");

    const std::unordered_set<std::string> known(known_ids.begin(), known_ids.end());
    std::vector<FeatureVector> out;
    std::vector<std::string> unknown;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = path.string() + ":" + std::to_string(rec.line_number);
        if (rec.fields.size() != width)
            throw DataError(where + ": ragged row (" + std::to_string(rec.fields.size() - 1) + " features, expected " +
                            std::to_string(width - 1) + ")");
        FeatureVector fv{rec.fields[0], {}, "external"};
        if (!seen.insert(fv.series_id).second) throw DataError(where + ": duplicate series_id " + fv.series_id);
        for (std::size_t c = 1; c < width; ++c) {
            const auto v = csv::parse_real(rec.fields[c]);
            if (!v) throw DataError(where + ": non-numeric cell '" + rec.fields[c] + "'");
            fv.features.push_back(*v);
        }
        if (!known.count(fv.series_id)) unknown.push_back(fv.series_id);
        out.push_back(std::move(fv));
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
        throw DataError(path.string() + ": unknown series ids: " + list);
    }
    return out;
}

std::string features_to_csv(const std::vector<FeatureVector>& vectors) {
    std::string out = "series_id";
    const std::size_t m = vectors.empty() ? 0 : vectors.front().features.size();
    for (std::size_t f = 1; f <= m; ++f) out += ",f" + std::to_string(f);
    out += "\n";
    for (const auto& v : vectors) {
        out += csv::escape(v.series_id);
        for (double x : v.features) out += "," + csv::format_real(x);
        out += "\n";
    }
    return out;
}

PointSet to_point_set(const std::vector<FeatureVector>& vectors) {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    for (const auto& v : vectors) {
        if (v.extractor != vectors.front().extractor) throw DataError("feature vectors mix extractors");
        ids.push_back(v.series_id);
        rows.push_back(v.features);
    }
    return PointSet::from_rows(std::move(ids), rows);
}

ClusterAssignment cluster_features(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed,
                                   std::size_t threads) {
    const PointSet points = to_point_set(vectors);
    auto a = kmeans(points, {k, seed, 300, 1e-6, threads}).assignment;
    a.algorithm = "kmeans+features(" + (vectors.empty() ? std::string() : vectors.front().extractor) + ")";
    return a;
}

}  // namespace tsclust
