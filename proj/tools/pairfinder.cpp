// pairfinder command line: synth, run, walkforward, predict-next, report.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairfinder/common/error.h"
#include "pairfinder/common/log.h"
#include "pairfinder/common/random.h"
#include "pairfinder/common/text.h"
#include "pairfinder/data/synthetic.h"
#include "pairfinder/pipeline/pipeline.h"

namespace fs = std::filesystem;
using namespace pairfinder;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string models;
    std::string mode;
    std::optional<std::size_t> threads;
    std::optional<std::string> short_on_down;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "Universe config (JSON)")->required();
    cmd->add_option("--seed", flags.seed, "Master seed (overrides the config)");
    cmd->add_option("--out", flags.out, "Output directory (overrides the config)");
    cmd->add_option("--models", flags.models, "Comma separated model kinds");
    cmd->add_option("--mode", flags.mode, "BestSingle or ProfitableList");
    cmd->add_option("--threads", flags.threads, "Worker threads, 0 = all cores");
    cmd->add_option("--short-on-down", flags.short_on_down, "true: short on 0 predictions, false: stay flat");
}

pipeline::RunConfig resolve(const CommonFlags& flags) {
    auto config = pipeline::load_run_config(flags.config);
    if (flags.seed) config.seed = flags.seed;
    if (!flags.out.empty()) config.output_dir = flags.out;
    if (!flags.models.empty()) {
        config.models.clear();
        for (auto name : split(flags.models, ',')) config.models.emplace_back(trim(name));
    }
    if (!flags.mode.empty()) config.selection_mode = meta::selection_mode_from_string(flags.mode);
    if (flags.threads) config.threads = *flags.threads;
    if (flags.short_on_down) {
        if (*flags.short_on_down != "true" && *flags.short_on_down != "false") {
            raise(ErrorCategory::Config, "--short-on-down takes true or false");
        }
        config.short_on_down = *flags.short_on_down == "true";
    }
    pipeline::finalize(config);
    return config;
}

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Config: return 2;
        case ErrorCategory::Parse:
        case ErrorCategory::Validation: return 3;
        case ErrorCategory::Io: return 4;
        case ErrorCategory::Training:
        case ErrorCategory::Domain:
        case ErrorCategory::InsufficientHistory: return 5;
    }
    return 1;
}

struct SynthFlags {
    std::uint64_t seed = 0;
    std::string out;
    std::size_t predictable = 3;
    std::size_t random = 3;
    std::size_t length = 2000;
    double persistence = 0.65;
    double volatility = 1.0;
};

// Writes one CSV per instrument plus universe.json pointing at them.
void synth(const SynthFlags& f) {
    fs::create_directories(f.out);
    nlohmann::json config;
    config["seed"] = f.seed;
    config["instruments"] = nlohmann::json::array();
    auto emit = [&](const std::string& symbol, data::SyntheticKind kind) {
        data::SyntheticSpec spec;
        spec.kind = kind;
        spec.length = f.length;
        spec.persistence = kind == data::SyntheticKind::PersistentSign ? f.persistence : 0.5;
        spec.volatility_pct = f.volatility;
        spec.seed = derive_seed(f.seed, symbol, "synthetic");
        data::validate(spec);
        const auto series = data::generate_synthetic_series(spec, data::InstrumentId(symbol));
        const auto file = symbol + ".csv";
        write_file((fs::path(f.out) / file).string(), data::serialize_ohlcv_csv(series));
        config["instruments"].push_back({{"symbol", symbol}, {"csv", file}});
    };
    for (std::size_t i = 1; i <= f.predictable; ++i) emit("PS" + std::to_string(i), data::SyntheticKind::PersistentSign);
    for (std::size_t i = 1; i <= f.random; ++i) emit("RW" + std::to_string(i), data::SyntheticKind::RandomWalk);
    write_file((fs::path(f.out) / "universe.json").string(), config.dump(2) + "\n");
    logger().info("wrote {} instruments to {}", f.predictable + f.random, f.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairfinder: two-layer instrument/model pair selection"};
    app.require_subcommand(1);

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic universe as CSV files");
    synth_cmd->add_option("--seed", synth_flags.seed)->required();
    synth_cmd->add_option("--out", synth_flags.out)->required();
    synth_cmd->add_option("--predictable", synth_flags.predictable, "PersistentSign instruments");
    synth_cmd->add_option("--random", synth_flags.random, "RandomWalk instruments");
    synth_cmd->add_option("--length", synth_flags.length, "Bars per instrument");
    synth_cmd->add_option("--persistence", synth_flags.persistence);
    synth_cmd->add_option("--volatility", synth_flags.volatility, "Daily volatility in percent");

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "One training cycle");
    add_common(run_cmd, run_flags);

    CommonFlags wf_flags;
    std::optional<std::size_t> windows;
    auto* wf_cmd = app.add_subcommand("walkforward", "Walk-forward replay over N test segments");
    add_common(wf_cmd, wf_flags);
    wf_cmd->add_option("--windows", windows, "Number of windows (overrides the config)");

    CommonFlags next_flags;
    auto* next_cmd = app.add_subcommand("predict-next", "Next-day directions for the selected pairs");
    add_common(next_cmd, next_flags);

    CommonFlags report_flags;
    std::string report_run;
    auto* report_cmd = app.add_subcommand("report", "Re-emit records and selection for a stored run");
    add_common(report_cmd, report_flags);
    report_cmd->add_option("--run", report_run, "Run id (default: latest)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) {
            synth(synth_flags);
        } else if (run_cmd->parsed()) {
            const auto config = resolve(run_flags);
            const auto report = pipeline::run_training_cycle(config);
            pipeline::emit_reports(report, config.output_dir);
            std::cout << pipeline::summary_text(report, config.selection_mode);
        } else if (wf_cmd->parsed()) {
            auto config = resolve(wf_flags);
            if (windows) config.windows = *windows;
            const auto reports = pipeline::walk_forward(config, config.windows);
            for (const auto& report : reports) {
                char dir[32];
                std::snprintf(dir, sizeof(dir), "window_%02zu", report.window);
                pipeline::emit_reports(report, config.output_dir / dir);
                std::cout << pipeline::summary_text(report, config.selection_mode) << '\n';
            }
        } else if (next_cmd->parsed()) {
            const auto config = resolve(next_flags);
            const auto calls = pipeline::predict_next(config);
            if (calls.empty()) {
                std::cout << "no trade\n";
                return 0;
            }
            std::cout << "dataset,model,direction,score\n";
            for (const auto& c : calls) {
                std::cout << c.instrument << ',' << c.model << ',' << (c.direction ? "up" : "down") << ','
                          << format_double(c.score) << '\n';
            }
        } else if (report_cmd->parsed()) {
            const auto config = resolve(report_flags);
            meta::RecordStore store(config.resolved_store_path());
            pipeline::report_from_store(store, report_run, *config.seed, config.meta, config.selection_mode,
                                        config.output_dir);
        }
    } catch (const Error& e) {
        logger().error("{} error: {}", to_string(e.category()), e.what());
        return exit_code(e.category());
    } catch (const std::exception& e) {
        logger().error("{}", e.what());
        return 1;
    }
    return 0;
}
