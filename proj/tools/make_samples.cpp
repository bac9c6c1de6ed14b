// Writes the bundled synthetic samples: a daily price panel (price mode) and a
// Favorita-shaped item x store sales panel (sales mode). Output is a pure
// function of the seed.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tsclust/core_data.hpp"
#include "tsclust/csv.hpp"

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

const char* kCategories[] = {"Snacks", "Pet", "Beverages", "Dairy", "Bakery", "Household"};
constexpr std::size_t kDays = 120;

std::string money(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string price_sample(Rng& rng, tsclust::Date start) {
    struct Template {
        std::vector<std::size_t> days;
        std::vector<double> moves;  // relative change at each day
    };
    std::vector<Template> templates;
    for (std::size_t f = 0; f < 8; ++f) {
        Template t;
        const std::size_t changes = 2 + rng.index(4);
        for (std::size_t c = 0; c < changes; ++c) {
            t.days.push_back(5 + rng.index(kDays - 10));
            t.moves.push_back((rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.05 + 0.25 * rng.uniform()));
        }
        templates.push_back(std::move(t));
    }

    std::string out = "series_id,date,value,category,store\n";
    const std::size_t products = 60;
    for (std::size_t p = 0; p < products; ++p) {
        const auto& tpl = templates[p % templates.size()];
        const std::string id = "P" + std::string(p < 10 ? "0" : "") + std::to_string(p);
        const char* category = kCategories[(p / 3 + p % 2) % 6];
        double price = 2.0 + 48.0 * rng.uniform();
        const bool sparse = p % 20 == 7;  // three series far beyond the 80% missing cut
        const double missing_rate = sparse ? 0.9 : 0.3 * rng.uniform();
        const double scale = 0.6 + 0.8 * rng.uniform();
        for (std::size_t t = 0; t < kDays; ++t) {
            for (std::size_t c = 0; c < tpl.days.size(); ++c)
                if (tpl.days[c] == t) price *= 1.0 + tpl.moves[c] * scale;
            // Short promotions drawn per product.
            double shown = price;
            if (rng.uniform() < 0.02) shown *= 0.9;
            if (rng.uniform() < missing_rate) continue;
            out += id + "," + tsclust::format_date(start + std::chrono::days{static_cast<int>(t)}) + "," +
                   money(shown) + "," + category + ",\n";
        }
    }
    // Malformed rows that must land in the rejects report.
    out += "P00,2021-13-01,4.50,Snacks,\n";
    out += "P01,2021-02-01,n/a,Pet,\n";
    return out;
}

std::string sales_sample(Rng& rng, tsclust::Date start) {
    std::string out = "series_id,date,value,category,store\n";
    const std::size_t items = 20;
    const char* stores[] = {"S1", "S2", "S3"};
    for (std::size_t i = 0; i < items; ++i) {
        const std::string item = "I" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        const char* category = kCategories[i % 6];
        const std::size_t family = i % 5;
        for (std::size_t s = 0; s < 3; ++s) {
            const double level = 5.0 + 40.0 * rng.uniform();
            const bool sparse = (i == 4 && s == 1) || (i == 13 && s == 2);
            const double missing_rate = sparse ? 0.88 : 0.2 * rng.uniform();
            const double phase = static_cast<double>(family) * 1.3;
            for (std::size_t t = 0; t < kDays; ++t) {
                const double td = static_cast<double>(t);
                double v = level * (1.0 + 0.5 * std::sin(2.0 * M_PI * td / (7.0 + static_cast<double>(family)) + phase));
                v += level * 0.3 * (family % 2 ? td / kDays : 1.0 - td / kDays);
                v *= 0.85 + 0.3 * rng.uniform();
                if (rng.uniform() < missing_rate) continue;
                out += item + "," + tsclust::format_date(start + std::chrono::days{static_cast<int>(t)}) + "," +
                       std::to_string(static_cast<long>(std::lround(std::max(0.0, v)))) + "," + category + "," +
                       stores[s] + "\n";
            }
        }
    }
    out += "I00,2021-01-05,abc,Snacks,S1\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20211;
    const auto start = *tsclust::parse_date("2021-01-01");
    Rng rng(seed);
    tsclust::csv::write_atomic(dir / "sample_price.csv", price_sample(rng, start));
    tsclust::csv::write_atomic(dir / "sample_sales.csv", sales_sample(rng, start));
    std::printf("wrote %s and %s\n", (dir / "sample_price.csv").c_str(), (dir / "sample_sales.csv").c_str());
    return 0;
}
