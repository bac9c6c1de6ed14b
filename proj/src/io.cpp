#include "tsclust/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "tsclust/csv.hpp"
#include "tsclust/error.hpp"

namespace tsclust::io {

namespace {

std::string date_header(Date start, std::size_t length) {
    std::string out = "series_id";
    for (std::size_t t = 0; t < length; ++t) out += "," + format_date(start + std::chrono::days{static_cast<int>(t)});
    return out + "\n";
}

struct WideTable {
    Date start{};
    std::vector<csv::Record> rows;
    std::size_t length = 0;
};

WideTable read_wide(const std::filesystem::path& path) {
    auto records = csv::read_file(path);
    if (records.empty()) throw DataError(path.string() + ": missing header row");
    WideTable t;
    const auto& header = records.front().fields;
    if (header.size() < 2) throw DataError(path.string() + ": no date columns");
    t.length = header.size() - 1;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto d = parse_date(header[c]);
        if (!d) throw DataError(path.string() + ": bad date column '" + header[c] + "'");
        if (c == 1) t.start = *d;
        if (*d != t.start + std::chrono::days{static_cast<int>(c - 1)})
            throw DataError(path.string() + ": date columns are not consecutive days");
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].fields.size() != header.size())
            throw DataError(path.string() + ":" + std::to_string(records[r].line_number) + ": wrong field count");
        t.rows.push_back(std::move(records[r]));
    }
    return t;
}

std::uint64_t parse_u64(const Json& j) { return j.is_number_unsigned() ? j.get<std::uint64_t>() : 0; }

}  // namespace

std::string series_to_wide_csv(const SeriesCollection& collection) {
    std::string out = date_header(collection.start, collection.length());
    for (const auto& s : collection.series) {
        out += csv::escape(s.series_id);
        for (double v : s.values) out += "," + (std::isnan(v) ? std::string() : csv::format_real(v));
        out += "\n";
    }
    return out;
}

SeriesCollection series_from_wide_csv(const std::filesystem::path& path, Mode mode) {
    const auto table = read_wide(path);
    SeriesCollection c;
    c.mode = mode;
    c.start = table.start;
    for (const auto& rec : table.rows) {
        TimeSeries s;
        s.series_id = rec.fields[0];
        s.item_id = s.series_id;
        for (std::size_t i = 1; i < rec.fields.size(); ++i) {
            if (rec.fields[i].empty()) {
                s.values.push_back(std::numeric_limits<double>::quiet_NaN());
                s.missing_mask.push_back(true);
                continue;
            }
            const auto v = csv::parse_real(rec.fields[i]);
            if (!v)
                throw DataError(path.string() + ":" + std::to_string(rec.line_number) + ": non-numeric cell '" +
                                rec.fields[i] + "'");
            s.values.push_back(*v);
            s.missing_mask.push_back(false);
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

std::string symbolic_to_wide_csv(const SymbolicCollection& collection) {
    std::string out = date_header(collection.start, collection.length());
    for (const auto& s : collection.series) {
        out += csv::escape(s.series_id);
        for (auto l : s.levels) {
            out.push_back(',');
            out.push_back(static_cast<char>('A' + l - 1));
        }
        out += "\n";
    }
    return out;
}

SymbolicCollection symbolic_from_wide_csv(const std::filesystem::path& path, Mode mode) {
    const auto table = read_wide(path);
    SymbolicCollection c;
    c.mode = mode;
    c.start = table.start;
    for (const auto& rec : table.rows) {
        SymbolicSeries s{rec.fields[0], {}};
        for (std::size_t i = 1; i < rec.fields.size(); ++i) {
            const auto& f = rec.fields[i];
            if (f.size() != 1 || f[0] < 'A' || f[0] > 'E')
                throw DataError(path.string() + ":" + std::to_string(rec.line_number) + ": symbol '" + f +
                                "' is not one of A-E");
            s.levels.push_back(static_cast<std::uint8_t>(f[0] - 'A' + 1));
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

std::string metadata_to_csv(const SeriesCollection& collection) {
    std::string out = "series_id,item_id,category,store\n";
    for (const auto& s : collection.series)
        out += csv::join({s.series_id, s.item_id, s.category.value_or(""), s.store.value_or("")}) + "\n";
    return out;
}

void apply_metadata(SeriesCollection& collection, const std::filesystem::path& path) {
    const auto records = csv::read_file(path);
    std::unordered_map<std::string, const csv::Record*> by_id;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].fields.size() != 4)
            throw DataError(path.string() + ":" + std::to_string(records[r].line_number) + ": expected 4 fields");
        by_id.emplace(records[r].fields[0], &records[r]);
    }
    for (auto& s : collection.series) {
        auto it = by_id.find(s.series_id);
        if (it == by_id.end()) throw DataError(path.string() + ": no metadata for series " + s.series_id);
        const auto& f = it->second->fields;
        s.item_id = f[1];
        s.category = f[2].empty() ? std::nullopt : std::optional<std::string>(f[2]);
        s.store = f[3].empty() ? std::nullopt : std::optional<std::string>(f[3]);
    }
}

std::string matrix_to_csv(const DistanceMatrix& matrix) {
    std::string out = "id";
    for (const auto& id : matrix.ids()) out += "," + csv::escape(id);
    out += "\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out += csv::escape(matrix.ids()[i]);
        for (double v : matrix.row(i)) out += "," + csv::format_real(v);
        out += "\n";
    }
    return out;
}

Json matrix_sidecar(const DistanceMatrix& matrix) {
    Json j;
    j["metric"] = std::string(to_string(matrix.metric()));
    j["normalization"] = std::string(to_string(matrix.normalization()));
    Json params;
    const auto& p = matrix.params();
    if (matrix.metric() == Metric::mpbd) {
        params["omega"] = p.omega;
        params["representation"] = std::string(to_string(p.mpbd_representation));
    }
    if (matrix.metric() == Metric::dtw) params["dtw_window"] = p.dtw_window ? Json(*p.dtw_window) : Json(nullptr);
    if (matrix.metric() == Metric::euclidean) {
        params["scale_lo"] = p.scale_lo;
        params["scale_hi"] = p.scale_hi;
    }
    j["params"] = params.is_null() ? Json::object() : params;
    j["series_length"] = matrix.series_length();
    return j;
}

DistanceMatrix read_matrix(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path) {
    const Json side = read_json(sidecar_path);
    MetricParams params;
    const Json& p = side.at("params");
    const Metric metric = parse_metric(side.at("metric").get<std::string>());
    if (p.contains("omega")) params.omega = p["omega"].get<double>();
    if (p.contains("representation"))
        params.mpbd_representation = parse_representation(p["representation"].get<std::string>());
    if (p.contains("dtw_window") && !p["dtw_window"].is_null()) params.dtw_window = p["dtw_window"].get<std::size_t>();
    if (p.contains("scale_lo")) params.scale_lo = p["scale_lo"].get<double>();
    if (p.contains("scale_hi")) params.scale_hi = p["scale_hi"].get<double>();

    const auto records = csv::read_file(csv_path);
    if (records.empty()) throw DataError(csv_path.string() + ": empty matrix file");
    std::vector<std::string> ids(records.front().fields.begin() + 1, records.front().fields.end());
    if (records.size() != ids.size() + 1) throw DataError(csv_path.string() + ": matrix is not square");
    DistanceMatrix m(ids, metric, params, side.at("series_length").get<std::size_t>());
    m.set_normalization(parse_normalization(side.at("normalization").get<std::string>()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& f = records[i + 1].fields;
        if (f.size() != ids.size() + 1 || f[0] != ids[i])
            throw DataError(csv_path.string() + ":" + std::to_string(records[i + 1].line_number) + ": malformed row");
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const auto v = csv::parse_real(f[j + 1]);
            if (!v) throw DataError(csv_path.string() + ": non-numeric entry");
            m.set(i, j, *v);
        }
    }
    return m;
}

std::string assignment_to_csv(const ClusterAssignment& assignment) {
    std::string out = "series_id,cluster\n";
    for (std::size_t i = 0; i < assignment.ids.size(); ++i)
        out += csv::escape(assignment.ids[i]) + "," + std::to_string(assignment.labels[i]) + "\n";
    return out;
}

Json assignment_sidecar(const ClusterAssignment& assignment, const std::string& metric,
                        const std::string& normalization) {
    Json j;
    j["algorithm"] = assignment.algorithm;
    j["metric"] = metric;
    j["normalization"] = normalization;
    j["k"] = assignment.k;
    j["seed"] = assignment.seed;
    j["objective"] = assignment.objective ? Json(*assignment.objective) : Json(nullptr);
    return j;
}

ClusterAssignment read_assignment(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path) {
    const Json side = read_json(sidecar_path);
    ClusterAssignment a;
    a.algorithm = side.at("algorithm").get<std::string>();
    a.k = side.at("k").get<int>();
    a.seed = parse_u64(side.at("seed"));
    if (!side.at("objective").is_null()) a.objective = side["objective"].get<double>();
    const auto records = csv::read_file(csv_path);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& f = records[r].fields;
        int label = 0;
        if (f.size() != 2 ||
            std::from_chars(f[1].data(), f[1].data() + f[1].size(), label).ec != std::errc{})
            throw DataError(csv_path.string() + ":" + std::to_string(records[r].line_number) + ": malformed row");
        a.ids.push_back(f[0]);
        a.labels.push_back(label);
    }
    a.validate();
    return a;
}

std::string dendrogram_to_csv(const Dendrogram& dendrogram) {
    std::string out = "step,left,right,height,size\n";
    for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
        const auto& m = dendrogram.merges[s];
        out += std::to_string(s + 1) + "," + std::to_string(m.left) + "," + std::to_string(m.right) + "," +
               csv::format_real(m.height) + "," + std::to_string(m.size) + "\n";
    }
    return out;
}

std::string sweep_to_csv(const SweepTable& table) {
    auto cell = [](const IndexValue& v) { return v.value ? csv::format_real(*v.value) : std::string(); };
    std::string out = "k,ch,db,mpbi,note\n";
    for (const auto& row : table.rows) {
        std::string note = row.note;
        for (const auto* v : {&row.ch, &row.db, &row.mpbi})
            if (!v->ok() && !v->condition.empty()) note += (note.empty() ? "" : "; ") + v->condition;
        out += std::to_string(row.k) + "," + cell(row.ch) + "," + cell(row.db) + "," + cell(row.mpbi) + "," +
               csv::escape(note) + "\n";
    }
    return out;
}

Json index_to_json(const IndexValue& value) {
    Json j;
    j["value"] = value.value ? Json(*value.value) : Json(nullptr);
    if (!value.ok()) j["condition"] = value.condition;
    return j;
}

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(csv::read_text(path));
    } catch (const Json::exception& e) {
        throw DataError(path.string() + ": invalid JSON: " + e.what());
    }
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace tsclust::io
