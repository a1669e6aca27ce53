#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "pairfinder/common/error.h"
#include "pairfinder/common/text.h"
#include "pairfinder/meta/record_store.h"
#include "pairfinder/meta/selector.h"

using namespace pairfinder;
using namespace pairfinder::meta;
using eval::EvaluationRecord;

namespace {

std::filesystem::path fresh_store(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("pairfinder_meta_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    auto p = dir / (name + ".store");
    std::filesystem::remove(p);
    return p;
}

EvaluationRecord record(std::string run, std::string inst, std::string model, double nacc, double ret) {
    EvaluationRecord r;
    r.run_id = std::move(run);
    r.instrument = std::move(inst);
    r.model = std::move(model);
    r.window_start = *parse_date("2020-01-02");
    r.window_end = *parse_date("2020-03-31");
    r.metrics.accuracy = nacc;
    r.metrics.normalized_acc = nacc;
    r.metrics.precision = 0.5;
    r.metrics.recall = 0.5;
    r.metrics.f1 = 0.5;
    r.metrics.auc = nacc;
    r.metrics.pred_pos_rate = 0.5;
    r.metrics.backtest_return_pct = ret;
    r.metrics.nnp_pct = 1.25;
    r.profit_label = ret > 0 ? 1 : 0;
    return r;
}

// Random metric vectors; label 1 iff normalized_acc > 0.5 unless `random_labels`.
std::vector<EvaluationRecord> planted(std::uint64_t seed, std::size_t n, bool random_labels = false) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.2, 0.8);
    std::bernoulli_distribution coin(0.5);
    std::vector<EvaluationRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = record("run0001", "I" + std::to_string(i), "M", 0.5, 0);
        r.metrics.accuracy = u(gen);
        r.metrics.normalized_acc = u(gen);
        r.metrics.precision = u(gen);
        r.metrics.recall = u(gen);
        r.metrics.f1 = u(gen);
        r.metrics.auc = u(gen);
        r.metrics.pred_pos_rate = u(gen);
        const bool up = random_labels ? coin(gen) : r.metrics.normalized_acc > 0.5;
        r.metrics.backtest_return_pct = up ? 2.0 : -2.0;
        r.profit_label = up;
        out.push_back(r);
    }
    return out;
}

double held_out_accuracy(const MetaModel& m, const std::vector<EvaluationRecord>& rs) {
    std::size_t hit = 0;
    for (const auto& r : rs) hit += m.predict(meta_features(r.metrics)) == r.profit_label;
    return static_cast<double>(hit) / static_cast<double>(rs.size());
}

}  // namespace

TEST(RecordStore, RoundTrip) {
    const RecordStore store(fresh_store("roundtrip"));
    EXPECT_TRUE(store.load().empty());
    EXPECT_EQ(store.next_run_id(), "run0001");
    const std::vector<EvaluationRecord> batch{record("run0001", "AAPL", "LogisticRegression{C=0.1}", 0.519, -0.77),
                                              record("run0001", "GC=F", "GaussianNB{var_smoothing=1e-09}", 0.61, 3.5)};
    store.append(batch);
    EXPECT_EQ(store.load(), batch);
    EXPECT_EQ(store.next_run_id(), "run0002");
}

TEST(RecordStore, RunsAreDistinguishable) {
    const RecordStore store(fresh_store("runs"));
    store.append(std::vector{record("run0001", "A", "M", 0.6, 1)});
    store.append(std::vector{record("run0002", "A", "M", 0.6, 1)});
    const auto all = store.load();
    ASSERT_EQ(all.size(), 2u);
    EXPECT_NE(all[0].run_id, all[1].run_id);
    EXPECT_EQ(store.run_ids(), (std::vector<std::string>{"run0001", "run0002"}));
}

TEST(RecordStore, GrowsByBatchSize) {
    const RecordStore store(fresh_store("grow"));
    store.append(planted(1, 20));
    const auto before = store.size();
    store.append(planted(2, 143));
    EXPECT_EQ(store.size(), before + 143);
}

TEST(RecordStore, PartialTailIgnoredThenTrimmed) {
    const auto path = fresh_store("tail");
    const RecordStore store(path);
    const auto first = planted(3, 5);
    store.append(first);
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        out << format_record_line(record("run0002", "X", "M", 0.6, 1)) << "\n" << "run0002,2020-01-0";
    }
    EXPECT_EQ(store.load(), first);
    const auto second = planted(4, 3);
    store.append(second);
    const auto all = store.load();
    ASSERT_EQ(all.size(), 8u);
    EXPECT_EQ(all.back(), second.back());
}

TEST(RecordStore, CorruptMiddleIsParseError) {
    const auto path = fresh_store("corrupt");
    const RecordStore store(path);
    store.append(planted(5, 3));
    store.append(planted(6, 3));
    auto text = read_file(path.string());
    const auto pos = text.find('\n', text.find('\n') + 1);
    text.insert(pos + 1, "garbage,line\n");
    write_file(path.string(), text);
    try {
        store.load();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Parse);
    }
}

TEST(RecordStore, LineFormatRoundTrip) {
    const auto r = record("run0007", "BTC-USD", "MLP{alpha=0.0001;hidden=69}", 0.123456789, -12.5);
    const auto back = parse_record_line(format_record_line(r));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, r);
    EXPECT_FALSE(parse_record_line("a,b,c"));
}

TEST(Meta, FeatureVectorExcludesReturns) {
    auto r = record("r", "A", "M", 0.6, 5.0);
    const auto f = meta_features(r.metrics);
    EXPECT_EQ(f.size(), 7u);
    r.metrics.backtest_return_pct = -5.0;
    r.metrics.nnp_pct = 99;
    EXPECT_EQ(meta_features(r.metrics), f);
}

TEST(Meta, LearnsPlantedRule) {
    const auto history = planted(10, 400);
    const auto held = planted(11, 300);
    const auto m = train_meta(history, 1);
    EXPECT_EQ(m.training_rows(), 400u);
    EXPECT_GE(held_out_accuracy(m, held), 0.95);
}

TEST(Meta, RandomLabelsStayNearChance) {
    double total = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto m = train_meta(planted(100 + s, 300, true), s);
        total += held_out_accuracy(m, planted(200 + s, 300, true));
    }
    EXPECT_NEAR(total / 20, 0.5, 0.1);
}

TEST(Meta, DuplicateRowWeighsTwice) {
    auto history = planted(12, 60);
    const auto m1 = train_meta(history, 3);
    history.push_back(history.front());
    const auto m2 = train_meta(history, 3);
    EXPECT_EQ(m2.training_rows(), m1.training_rows() + 1);
}

TEST(Meta, InsufficientHistory) {
    try {
        train_meta(planted(13, 29), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::InsufficientHistory);
    }
    auto same = planted(14, 50);
    for (auto& r : same) r.profit_label = 1;
    EXPECT_THROW(train_meta(same, 1), Error);
    MetaConfig cfg;
    cfg.min_records = 10;
    EXPECT_NO_THROW(train_meta(planted(15, 29), 1, cfg));
}

TEST(Meta, EvenVoterCountIsConfigError) {
    MetaConfig cfg;
    cfg.voters.pop_back();
    try {
        train_meta(planted(16, 50), 1, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Config);
    }
}

TEST(Meta, MajorityMatchesVotes) {
    const auto m = train_meta(planted(17, 200, true), 5);
    for (const auto& r : planted(18, 200)) {
        const auto f = meta_features(r.metrics);
        const auto v = m.votes(f);
        ASSERT_EQ(v.size(), 3u);
        const int ones = v[0] + v[1] + v[2];
        EXPECT_EQ(m.predict(f), ones >= 2 ? 1 : 0);
    }
}

TEST(Selection, ModesAndOrdering) {
    const auto m = train_meta(planted(19, 400), 1);
    std::vector<EvaluationRecord> current{record("r", "A", "M", 0.2, 1), record("r", "B", "M", 0.8, 1),
                                          record("r", "C", "M", 0.75, 2), record("r", "D", "M", 0.3, 1)};
    const auto list = select_pairs(m, current, SelectionMode::ProfitableList);
    for (const auto& e : list.entries) EXPECT_EQ(e.vote, 1);
    for (std::size_t i = 1; i < list.entries.size(); ++i) EXPECT_GE(list.entries[i - 1].meta_score, list.entries[i].meta_score);
    const auto best = select_pairs(m, current, SelectionMode::BestSingle);
    ASSERT_EQ(best.entries.size(), 1u);
    for (const auto& r : current) EXPECT_GE(best.entries[0].meta_score, m.score(meta_features(r.metrics)));
    EXPECT_THROW(select_pairs(m, std::vector<EvaluationRecord>{}, SelectionMode::BestSingle), Error);
}

TEST(Selection, TieBreakByBacktestThenName) {
    const auto m = train_meta(planted(20, 100), 1);
    std::vector<EvaluationRecord> current{record("r", "B", "M", 0.7, 1), record("r", "A", "M", 0.7, 1),
                                          record("r", "C", "M", 0.7, 3)};
    const auto s = select_pairs(m, current, SelectionMode::BestSingle);
    EXPECT_EQ(s.entries[0].instrument, "C");
    current.pop_back();
    EXPECT_EQ(select_pairs(m, current, SelectionMode::BestSingle).entries[0].instrument, "A");
}

TEST(Selection, NoneVotedProfitableIsEmpty) {
    const auto m = train_meta(planted(21, 400), 1);
    std::vector<EvaluationRecord> current{record("r", "A", "M", 0.21, 1), record("r", "B", "M", 0.22, 1)};
    for (auto& r : current) {
        r.metrics.accuracy = r.metrics.precision = r.metrics.recall = r.metrics.f1 = r.metrics.pred_pos_rate = 0.3;
    }
    EXPECT_TRUE(select_pairs(m, current, SelectionMode::ProfitableList).entries.empty());
}

TEST(Selection, ModeNames) {
    EXPECT_EQ(selection_mode_from_string(to_string(SelectionMode::BestSingle)), SelectionMode::BestSingle);
    EXPECT_EQ(selection_mode_from_string(to_string(SelectionMode::ProfitableList)), SelectionMode::ProfitableList);
    EXPECT_THROW(selection_mode_from_string("all"), Error);
}

TEST(MeanSystemAccuracy, Examples) {
    EXPECT_EQ(mean_system_accuracy(0.80), 0.60);
    EXPECT_EQ(mean_system_accuracy(0.5), 0.0);
    EXPECT_EQ(mean_system_accuracy(1.0), 1.0);
    EXPECT_EQ(mean_system_accuracy(0.0), -1.0);
    try {
        mean_system_accuracy(1.2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Domain);
    }
}
