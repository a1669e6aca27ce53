#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pairfinder/data/universe.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/meta/selector.h"
#include "pairfinder/models/classifier.h"
#include "pairfinder/splits/split.h"

namespace pairfinder::pipeline {

struct RunConfig {
    // universe.master_seed is only meaningful once `seed` is set.
    data::UniverseConfig universe;
    std::optional<std::uint64_t> seed;
    features::DatasetParams features;
    splits::SplitFractions splits;
    // Enabled kinds, in config order. Empty means every registered kind.
    std::vector<std::string> models;
    // Per-kind grid overrides; kinds without one use the zoo default grid.
    std::map<std::string, models::GridAxes> grids;
    meta::SelectionMode selection_mode = meta::SelectionMode::ProfitableList;
    bool short_on_down = true;
    meta::MetaConfig meta;
    std::size_t windows = 1;
    // Samples per walk-forward test segment; 0 = test fraction of each series.
    std::size_t segment_size = 0;
    std::filesystem::path output_dir = "out";
    // Defaults to <output_dir>/records.store.
    std::optional<std::filesystem::path> store_path;
    std::size_t threads = 1;

    // Synthetic instruments whose seed was omitted; they take
    // derive_seed(master, symbol, "synthetic") in finalize().
    std::set<std::string> derived_seed_symbols;

    std::vector<std::string> enabled_models() const;
    std::filesystem::path resolved_store_path() const;
};

// JSON config. Relative csv paths resolve against `base_dir`. Raises Config on
// unknown keys, bad types or values.
RunConfig parse_run_config(std::string_view json, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Checks everything that can be checked without data and fills in derived
// seeds. Raises Config when no seed was given.
void finalize(RunConfig& config);

}  // namespace pairfinder::pipeline
