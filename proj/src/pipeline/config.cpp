#include "pairfinder/pipeline/config.h"

#include <initializer_list>

#include <json.hpp>

#include "pairfinder/common/error.h"
#include "pairfinder/common/random.h"
#include "pairfinder/common/text.h"

namespace pairfinder::pipeline {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    raise(ErrorCategory::Config, "config " + where + ": " + what);
}

void allow_keys(const json& object, const std::string& where, std::initializer_list<std::string_view> keys) {
    if (!object.is_object()) bad(where, "expected an object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) bad(where, "unknown key '" + key + "'");
    }
}

std::size_t get_count(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) bad(where, "expected a non-negative integer");
    return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

std::uint64_t get_seed(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    bad(where, "expected a non-negative integer seed");
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

data::SyntheticSpec parse_synthetic(const json& j, const std::string& where, bool& has_seed) {
    allow_keys(j, where, {"kind", "length", "persistence", "volatility_pct", "seed", "start_price", "start_date"});
    data::SyntheticSpec spec;
    if (j.contains("kind")) spec.kind = data::synthetic_kind_from_string(get_string(j["kind"], where + ".kind"));
    if (j.contains("length")) spec.length = get_count(j["length"], where + ".length");
    if (j.contains("persistence")) spec.persistence = get_number(j["persistence"], where + ".persistence");
    if (j.contains("volatility_pct")) spec.volatility_pct = get_number(j["volatility_pct"], where + ".volatility_pct");
    if (j.contains("start_price")) spec.start_price = get_number(j["start_price"], where + ".start_price");
    if (j.contains("start_date")) {
        auto date = parse_date(get_string(j["start_date"], where + ".start_date"));
        if (!date) bad(where + ".start_date", "expected YYYY-MM-DD");
        spec.start_date = *date;
    }
    has_seed = j.contains("seed");
    if (has_seed) spec.seed = get_seed(j["seed"], where + ".seed");
    return spec;
}

models::Hyperparameters parse_params(const json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    models::Hyperparameters out;
    for (const auto& [key, value] : j.items()) out[key] = get_number(value, where + "." + key);
    return out;
}

}  // namespace

std::vector<std::string> RunConfig::enabled_models() const {
    return models.empty() ? models::ModelRegistry::builtin().names() : models;
}

std::filesystem::path RunConfig::resolved_store_path() const {
    return store_path ? *store_path : output_dir / "records.store";
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(ErrorCategory::Config, std::string("config is not valid JSON: ") + e.what());
    }
    allow_keys(root, "root", {"seed", "instruments", "features", "splits", "models", "grids", "selection_mode",
                              "short_on_down", "walk_forward", "meta", "output_dir", "store", "threads"});
    RunConfig cfg;
    if (root.contains("seed")) cfg.seed = get_seed(root["seed"], "seed");

    if (!root.contains("instruments") || !root["instruments"].is_array()) bad("instruments", "expected an array");
    std::size_t index = 0;
    for (const auto& entry : root["instruments"]) {
        const std::string where = "instruments[" + std::to_string(index++) + "]";
        allow_keys(entry, where, {"symbol", "csv", "synthetic"});
        if (!entry.contains("symbol")) bad(where, "missing symbol");
        data::InstrumentId id(get_string(entry["symbol"], where + ".symbol"));
        if (entry.contains("csv") == entry.contains("synthetic")) bad(where, "needs exactly one of csv, synthetic");
        if (entry.contains("csv")) {
            std::filesystem::path path = get_string(entry["csv"], where + ".csv");
            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
            cfg.universe.instruments.push_back({id, data::CsvSource{path.string()}});
        } else {
            bool has_seed = false;
            auto spec = parse_synthetic(entry["synthetic"], where + ".synthetic", has_seed);
            if (!has_seed) cfg.derived_seed_symbols.insert(id.symbol());
            cfg.universe.instruments.push_back({id, spec});
        }
    }

    if (root.contains("features")) {
        const auto& f = root["features"];
        allow_keys(f, "features", {"sma_period", "rsi_period", "macd_fast", "macd_slow", "macd_signal"});
        if (f.contains("sma_period")) cfg.features.sma_period = get_count(f["sma_period"], "features.sma_period");
        if (f.contains("rsi_period")) cfg.features.rsi_period = get_count(f["rsi_period"], "features.rsi_period");
        if (f.contains("macd_fast")) cfg.features.macd.fast = get_count(f["macd_fast"], "features.macd_fast");
        if (f.contains("macd_slow")) cfg.features.macd.slow = get_count(f["macd_slow"], "features.macd_slow");
        if (f.contains("macd_signal")) cfg.features.macd.signal = get_count(f["macd_signal"], "features.macd_signal");
    }
    if (root.contains("splits")) {
        const auto& s = root["splits"];
        allow_keys(s, "splits", {"test_fraction", "validation_fraction"});
        if (s.contains("test_fraction")) cfg.splits.test = get_number(s["test_fraction"], "splits.test_fraction");
        if (s.contains("validation_fraction")) {
            cfg.splits.validation = get_number(s["validation_fraction"], "splits.validation_fraction");
        }
    }
    if (root.contains("models")) {
        if (!root["models"].is_array()) bad("models", "expected an array of kind names");
        for (const auto& m : root["models"]) cfg.models.push_back(get_string(m, "models"));
    }
    if (root.contains("grids")) {
        if (!root["grids"].is_object()) bad("grids", "expected an object");
        for (const auto& [kind, axes] : root["grids"].items()) {
            if (!axes.is_object()) bad("grids." + kind, "expected an object");
            models::GridAxes parsed;
            for (const auto& [param, values] : axes.items()) {
                const std::string where = "grids." + kind + "." + param;
                if (!values.is_array() || values.empty()) bad(where, "expected a non-empty array");
                for (const auto& v : values) parsed[param].push_back(get_number(v, where));
            }
            cfg.grids[kind] = std::move(parsed);
        }
    }
    if (root.contains("selection_mode")) {
        cfg.selection_mode = meta::selection_mode_from_string(get_string(root["selection_mode"], "selection_mode"));
    }
    if (root.contains("short_on_down")) {
        if (!root["short_on_down"].is_boolean()) bad("short_on_down", "expected true or false");
        cfg.short_on_down = root["short_on_down"].get<bool>();
    }
    if (root.contains("walk_forward")) {
        const auto& w = root["walk_forward"];
        allow_keys(w, "walk_forward", {"windows", "segment_size"});
        if (w.contains("windows")) cfg.windows = get_count(w["windows"], "walk_forward.windows");
        if (w.contains("segment_size")) cfg.segment_size = get_count(w["segment_size"], "walk_forward.segment_size");
    }
    if (root.contains("meta")) {
        const auto& m = root["meta"];
        allow_keys(m, "meta", {"min_records", "voters"});
        if (m.contains("min_records")) cfg.meta.min_records = get_count(m["min_records"], "meta.min_records");
        if (m.contains("voters")) {
            if (!m["voters"].is_array()) bad("meta.voters", "expected an array");
            cfg.meta.voters.clear();
            for (const auto& v : m["voters"]) {
                allow_keys(v, "meta.voters", {"kind", "params"});
                models::Hyperparameters params;
                if (v.contains("params")) params = parse_params(v["params"], "meta.voters.params");
                cfg.meta.voters.push_back(models::make_spec(get_string(v.at("kind"), "meta.voters.kind"), params));
            }
        }
    }
    if (root.contains("output_dir")) cfg.output_dir = get_string(root["output_dir"], "output_dir");
    if (root.contains("store")) cfg.store_path = get_string(root["store"], "store");
    if (root.contains("threads")) cfg.threads = get_count(root["threads"], "threads");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) raise(ErrorCategory::Io, path.string() + ": config file not found");
    return parse_run_config(read_file(path.string()), path.parent_path());
}

void finalize(RunConfig& config) {
    if (!config.seed) raise(ErrorCategory::Config, "no master seed: pass --seed or set \"seed\" in the config");
    config.universe.master_seed = *config.seed;
    if (config.universe.instruments.empty()) raise(ErrorCategory::Config, "universe has no instruments");
    features::validate(config.features);
    splits::minimum_split_size(config.splits);
    if (config.windows == 0) raise(ErrorCategory::Config, "walk-forward needs at least one window");

    const auto& registry = models::ModelRegistry::builtin();
    const auto kinds = config.enabled_models();
    if (kinds.empty()) raise(ErrorCategory::Config, "no model kinds enabled");
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (!registry.contains(kinds[i])) raise(ErrorCategory::Config, "unknown model kind '" + kinds[i] + "'");
        for (std::size_t j = 0; j < i; ++j) {
            if (kinds[j] == kinds[i]) raise(ErrorCategory::Config, "model kind '" + kinds[i] + "' listed twice");
        }
    }
    for (const auto& [kind, axes] : config.grids) {
        if (!registry.contains(kind)) raise(ErrorCategory::Config, "grid for unknown model kind '" + kind + "'");
        models::make_grid(kind, axes);  // range checks
    }
    if (config.meta.voters.empty() || config.meta.voters.size() % 2 == 0) {
        raise(ErrorCategory::Config, "the meta ensemble needs an odd number of voters");
    }

    const auto warm = features::warmup(config.features);
    for (auto& entry : config.universe.instruments) {
        if (auto* spec = std::get_if<data::SyntheticSpec>(&entry.source)) {
            if (config.derived_seed_symbols.contains(entry.instrument.symbol())) {
                spec->seed = derive_seed(*config.seed, entry.instrument.symbol(), "synthetic");
            }
            data::validate(*spec, warm);
        }
    }
}

}  // namespace pairfinder::pipeline
