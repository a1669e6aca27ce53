#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>

#include "pairfinder/common/error.h"
#include "pairfinder/common/text.h"
#include "pairfinder/meta/record_store.h"
#include "pairfinder/pipeline/config.h"
#include "pairfinder/pipeline/pipeline.h"

using namespace pairfinder;
using namespace pairfinder::pipeline;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("pairfinder_pipe_" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// n synthetic instruments, alternately persistent and random.
RunConfig small_config(const std::string& name, std::size_t n, std::vector<std::string> models,
                       std::size_t length = 220) {
    RunConfig cfg;
    cfg.seed = 42;
    for (std::size_t i = 0; i < n; ++i) {
        data::SyntheticSpec spec;
        spec.length = length;
        spec.seed = 1000 + i;
        spec.kind = i % 2 ? data::SyntheticKind::RandomWalk : data::SyntheticKind::PersistentSign;
        spec.persistence = 0.7;
        cfg.universe.instruments.push_back({data::InstrumentId("S" + std::to_string(i)), spec});
    }
    cfg.models = std::move(models);
    cfg.meta.min_records = 4;
    cfg.output_dir = temp_dir(name);
    finalize(cfg);
    return cfg;
}

ErrorCategory category_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCategory::Io;
}

}  // namespace

TEST(Pipeline, SinglePairSingleRecord) {
    auto cfg = small_config("single", 1, {"GaussianNB"});
    cfg.selection_mode = meta::SelectionMode::BestSingle;
    cfg.meta.min_records = 1;
    // One record with one label cannot train the meta model; seed the store
    // with the other label first.
    meta::RecordStore store(cfg.resolved_store_path());
    eval::EvaluationRecord seed_rec;
    seed_rec.run_id = "run0001";
    seed_rec.instrument = "OLD";
    seed_rec.model = "GaussianNB{var_smoothing=1e-09}";
    seed_rec.window_start = seed_rec.window_end = *parse_date("1999-01-04");
    seed_rec.metrics.backtest_return_pct = 1.0;
    seed_rec.profit_label = 1;
    eval::EvaluationRecord neg = seed_rec;
    neg.metrics.backtest_return_pct = -1.0;
    neg.profit_label = 0;
    store.append(std::vector{seed_rec, neg});

    const auto report = run_training_cycle(cfg);
    EXPECT_EQ(report.run_id, "run0002");
    ASSERT_EQ(report.records.size(), 1u);
    EXPECT_EQ(store.size(), 3u);
    EXPECT_TRUE(report.summary.meta_status.empty()) << report.summary.meta_status;
    ASSERT_EQ(report.selection.entries.size(), 1u);
    EXPECT_EQ(report.selection.entries[0].instrument, "S0");
}

TEST(Pipeline, FullZooRecordCount) {
    std::vector<std::string> none;
    auto cfg = small_config("zoo", 13, none, 160);
    const auto report = run_training_cycle(cfg);
    EXPECT_EQ(report.records.size() + report.summary.failures, 13u * 9u);
    EXPECT_EQ(report.records.size(), 117u);
    EXPECT_EQ(report.summary.model_kinds, 9u);
    // Exactly one record per (instrument, kind).
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& p : report.pairs) keys.insert({p.instrument, p.kind});
    EXPECT_EQ(keys.size(), 117u);
}

TEST(Pipeline, DeterministicAndOrderFree) {
    auto a = small_config("det_a", 5, {"GaussianNB", "LogisticRegression", "DecisionTree"});
    auto b = small_config("det_b", 5, {"GaussianNB", "LogisticRegression", "DecisionTree"});
    std::reverse(b.universe.instruments.begin(), b.universe.instruments.end());
    std::reverse(b.models.begin(), b.models.end());
    b.threads = 3;
    const auto ra = run_training_cycle(a);
    const auto rb = run_training_cycle(b);
    EXPECT_EQ(ra.records, rb.records);
    EXPECT_EQ(ra.selection, rb.selection);
    EXPECT_EQ(selection_csv(ra), selection_csv(rb));
}

TEST(Pipeline, SeedChangesSomething) {
    auto a = small_config("seed_a", 3, {"RandomForest"});
    auto b = small_config("seed_b", 3, {"RandomForest"});
    b.seed = 43;
    finalize(b);
    EXPECT_NE(run_training_cycle(a).records, run_training_cycle(b).records);
}

TEST(Pipeline, OneWindowEqualsTrainingCycle) {
    auto a = small_config("wf1_a", 4, {"GaussianNB", "LogisticRegression"});
    auto b = small_config("wf1_b", 4, {"GaussianNB", "LogisticRegression"});
    const auto single = run_training_cycle(a);
    const auto windows = walk_forward(b, 1);
    ASSERT_EQ(windows.size(), 1u);
    EXPECT_EQ(windows[0].records, single.records);
    EXPECT_EQ(windows[0].selection, single.selection);
}

TEST(Pipeline, WalkForwardHistoryGrows) {
    auto cfg = small_config("wf4", 4, {"GaussianNB", "LogisticRegression"}, 400);
    const auto reports = walk_forward(cfg, 4);
    ASSERT_EQ(reports.size(), 4u);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        EXPECT_EQ(reports[i].window, i + 1);
        EXPECT_EQ(reports[i].records.size(), 8u);
        if (i > 0) {
            EXPECT_GT(reports[i].summary.meta_training_rows, reports[i - 1].summary.meta_training_rows);
            const auto& now = reports[i].pairs[0].test->curve;
            const auto& before = reports[i - 1].pairs[0].test->curve;
            EXPECT_GT(now.front().date, before.back().date);
        }
    }
    EXPECT_EQ(meta::RecordStore(cfg.resolved_store_path()).size(), 32u);
    EXPECT_EQ(category_of([&] { walk_forward(cfg, 60); }), ErrorCategory::Config);
}

TEST(Pipeline, InsufficientHistoryIsNotFatal) {
    auto cfg = small_config("thin", 1, {"GaussianNB"});
    cfg.meta.min_records = 30;
    const auto report = run_training_cycle(cfg);
    EXPECT_TRUE(report.selection.entries.empty());
    EXPECT_FALSE(report.summary.meta_status.empty());
    EXPECT_NE(summary_text(report, cfg.selection_mode).find("(no trade)"), std::string::npos);
}

TEST(Pipeline, BadInstrumentIsSkipped) {
    auto cfg = small_config("skip", 2, {"GaussianNB"});
    cfg.universe.instruments.push_back({data::InstrumentId("MISSING"), data::CsvSource{"/nonexistent/x.csv"}});
    const auto report = run_training_cycle(cfg);
    EXPECT_EQ(report.records.size(), 2u);
    ASSERT_EQ(report.skipped.size(), 1u);
    EXPECT_NE(report.skipped[0].find("MISSING"), std::string::npos);
}

TEST(Pipeline, EmitReportsWritesFiles) {
    auto cfg = small_config("emit", 4, {"GaussianNB", "LogisticRegression"});
    const auto report = run_training_cycle(cfg);
    const auto out = cfg.output_dir / "report";
    emit_reports(report, out);
    for (const char* f : {"records.csv", "selection.csv", "summary.txt"}) EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
    const auto records = read_file((out / "records.csv").string());
    EXPECT_EQ(std::count(records.begin(), records.end(), '\n'), 9);
    std::size_t curves = 0;
    for (const auto& e : std::filesystem::directory_iterator(out)) {
        if (e.path().filename().string().starts_with("equity_")) ++curves;
    }
    EXPECT_EQ(curves, report.selection.entries.size());
}

TEST(Config, ParsesAndRejects) {
    const auto cfg = parse_run_config(R"({"seed": 7, "instruments": [{"symbol": "A", "csv": "a.csv"},
        {"symbol": "B", "synthetic": {"kind": "PersistentSign", "length": 300}}],
        "models": ["GaussianNB"], "selection_mode": "BestSingle", "walk_forward": {"windows": 3}})",
                                      "/data");
    EXPECT_EQ(*cfg.seed, 7u);
    EXPECT_EQ(std::get<data::CsvSource>(cfg.universe.instruments[0].source).path, "/data/a.csv");
    EXPECT_EQ(cfg.windows, 3u);
    EXPECT_EQ(cfg.selection_mode, meta::SelectionMode::BestSingle);

    EXPECT_EQ(category_of([] { parse_run_config(R"({"seed": 1, "instruments": [], "colour": 1})"); }),
              ErrorCategory::Config);
    EXPECT_EQ(category_of([] { parse_run_config("{not json"); }), ErrorCategory::Config);
    auto no_seed = parse_run_config(R"({"instruments": [{"symbol": "A", "synthetic": {}}]})");
    EXPECT_EQ(category_of([&] { finalize(no_seed); }), ErrorCategory::Config);
    auto bad_kind = parse_run_config(R"({"seed": 1, "instruments": [{"symbol": "A", "synthetic": {}}], "models": ["XGB"]})");
    EXPECT_EQ(category_of([&] { finalize(bad_kind); }), ErrorCategory::Config);
    EXPECT_EQ(category_of([] { load_run_config("/nonexistent/run.json"); }), ErrorCategory::Io);
}

TEST(Config, DerivedSyntheticSeedsDifferPerSymbol) {
    auto cfg = parse_run_config(R"({"seed": 9, "instruments": [{"symbol": "A", "synthetic": {}},
        {"symbol": "B", "synthetic": {}}, {"symbol": "C", "synthetic": {"seed": 5}}]})");
    finalize(cfg);
    const auto& i = cfg.universe.instruments;
    EXPECT_NE(std::get<data::SyntheticSpec>(i[0].source).seed, std::get<data::SyntheticSpec>(i[1].source).seed);
    EXPECT_EQ(std::get<data::SyntheticSpec>(i[2].source).seed, 5u);
}

#ifdef PAIRFINDER_CLI
namespace {
int run_cli(const std::string& args) {
    const int status = std::system((std::string(PAIRFINDER_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
}  // namespace

TEST(Cli, ExitCodes) {
    const auto dir = temp_dir("cli");
    EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()), 4);
    write_file((dir / "bad.json").string(), R"({"seed": 1, "instruments": [], "oops": true})");
    EXPECT_EQ(run_cli("run --config " + (dir / "bad.json").string()), 2);
    write_file((dir / "noseed.json").string(), R"({"instruments": [{"symbol": "A", "synthetic": {}}]})");
    EXPECT_EQ(run_cli("run --config " + (dir / "noseed.json").string()), 2);
    write_file((dir / "ok.json").string(),
               R"({"instruments": [{"symbol": "A", "synthetic": {"length": 200}}], "models": ["GaussianNB"]})");
    EXPECT_EQ(run_cli("run --config " + (dir / "ok.json").string() + " --seed 3 --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "summary.txt"));
}
#endif
