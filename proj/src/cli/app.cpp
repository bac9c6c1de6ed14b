#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "tsclust/cli.hpp"
#include "tsclust/error.hpp"

namespace tsclust::cli {

int run(const std::vector<std::string>& args) {
    CLI::App app{"tsclust: movement-pattern clustering of fixed-length time series"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer("Config keys (key = value, '#' comments; flags override the file):\n" + config_reference() +
               "\nExit status: 0 success, 1 usage/config error, 2 data error, 3 degenerate index with --strict.");

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    bool strict = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Config file (key = value)");
    app.add_option("--seed", seed, "64-bit seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--threads", threads, "Worker threads, 0 = auto; never changes results");
    app.add_flag("--strict", strict, "Exit 3 when an index is degenerate");
    app.add_option("--set", overrides, "Override any config key: --set key=value")->take_all();

    struct Sub {
        const char* name;
        const char* help;
        CommandResult (*fn)(const PipelineConfig&);
    };
    const Sub subs[] = {
        {"preprocess", "Load, clean, scale and discretize the input", cmd_preprocess},
        {"distmat", "Build the pairwise distance matrix", cmd_distmat},
        {"features", "Extract raster features or ingest external ones", cmd_features},
        {"cluster", "Cluster and write the assignment", cmd_cluster},
        {"sweep", "Evaluate CH/DB/MPBI over a k range", cmd_sweep},
        {"evaluate", "Score the current assignment", cmd_evaluate},
        {"profile", "Summarise each cluster in source units", cmd_profile},
        {"pipeline", "preprocess -> distmat/features -> cluster -> evaluate -> profile", cmd_pipeline},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    std::vector<const char*> argv{"tsclust"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
            apply_setting(config, o.substr(0, eq), o.substr(eq + 1));
        }
        if (seed) config.seed = *seed;
        if (out) config.out = *out;
        if (threads) config.threads = *threads;
        if (strict) config.strict = true;

        for (const auto& s : subs) {
            if (!app.got_subcommand(s.name)) continue;
            const CommandResult r = s.fn(config);
            for (const auto& d : r.degenerate) std::cerr << "warning: " << d << "\n";
            if (config.strict && !r.degenerate.empty()) return 3;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace tsclust::cli
