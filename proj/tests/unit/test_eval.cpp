#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "pairfinder/common/error.h"
#include "pairfinder/data/synthetic.h"
#include "pairfinder/eval/evaluation.h"
#include "pairfinder/eval/metrics.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/models/classifier.h"

using namespace pairfinder;
using namespace pairfinder::eval;

namespace {

// Scores a fixed function of the return feature, no training involved.
class FnModel final : public models::Model {
public:
    explicit FnModel(std::function<double(std::span<const double>)> fn) : fn_(std::move(fn)) {}
    double score(std::span<const double> x) const override { return fn_(x); }

private:
    std::function<double(std::span<const double>)> fn_;
};

models::TrainedClassifier wrap(std::function<double(std::span<const double>)> fn) {
    return {models::make_spec("GaussianNB"), std::nullopt, std::make_shared<FnModel>(std::move(fn)),
            features::kFeatureCount};
}

features::LabeledDataset dataset(std::uint64_t seed) {
    data::SyntheticSpec spec;
    spec.length = 300;
    spec.seed = seed;
    return features::build_dataset(data::generate_synthetic_series(spec, data::InstrumentId("E")));
}

}  // namespace

TEST(Confusion, Examples) {
    const std::vector<int> l{1, 0, 0, 1};
    const auto perfect = confusion_metrics(l, l);
    EXPECT_EQ(perfect.accuracy, 1.0);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.recall, 1.0);
    EXPECT_EQ(perfect.f1, 1.0);

    const auto m = confusion_metrics(std::vector<int>{1, 0, 1, 1}, std::vector<int>{1, 0, 0, 1});
    EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
    EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.f1, 0.8);

    const auto zero = confusion_metrics(std::vector<int>{0, 0, 0, 0}, std::vector<int>{1, 0, 1, 0});
    EXPECT_EQ(zero.accuracy, 0.5);
    EXPECT_EQ(zero.precision, 0.0);
    EXPECT_EQ(zero.recall, 0.0);
    EXPECT_EQ(zero.f1, 0.0);
}

TEST(NormalizedAcc, Examples) {
    std::vector<int> labels(100, 1);
    for (int i = 0; i < 10; ++i) labels[i] = 0;
    const std::vector<int> ones(100, 1);
    EXPECT_DOUBLE_EQ(confusion_metrics(ones, labels).accuracy, 0.9);
    EXPECT_DOUBLE_EQ(normalized_acc(ones, labels), 0.5);
    EXPECT_DOUBLE_EQ(normalized_acc(labels, labels), 1.0);
    EXPECT_DOUBLE_EQ(pred_pos_rate(ones), 1.0);

    std::mt19937_64 gen(1);
    std::bernoulli_distribution coin(0.5), lab(0.3);
    std::vector<int> p(20000), y(20000);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = coin(gen);
        y[i] = lab(gen);
    }
    EXPECT_NEAR(normalized_acc(p, y), 0.5, 0.05);
    EXPECT_THROW(normalized_acc(ones, ones), Error);
}

TEST(Auc, Examples) {
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}), 0.75);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, std::vector<int>{0, 1, 0, 1}), 0.5);
    EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), Error);
}

TEST(Auc, MatchesPairEnumeration) {
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<int> bucket(0, 5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 30;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = bucket(gen) / 5.0;
            y[i] = bucket(gen) < 3 ? 1 : 0;
        }
        y[0] = 0;
        y[1] = 1;
        EXPECT_NEAR(auc(s, y), oracle::auc_pairs(s, y), 1e-12);
    }
}

TEST(Backtest, Examples) {
    EXPECT_NEAR(backtest(std::vector<int>{1, 0}, std::vector<double>{1.0, 2.0}), -1.02, 1e-12);
    EXPECT_EQ(nnp(std::vector<double>{0, 0, 0}), 0.0);
    EXPECT_NEAR(nnp(std::vector<double>{10, -10}), -1.0, 1e-12);
    EXPECT_NEAR(nnp(std::vector<double>{2.5}), 2.5, 1e-12);
    EXPECT_THROW(nnp(std::vector<double>{-100.0}), Error);
}

TEST(Backtest, FlatModeIgnoresDownCalls) {
    const std::vector<double> r{1.0, 2.0, -3.0};
    const std::vector<int> p{1, 0, 0};
    EXPECT_DOUBLE_EQ(backtest(p, r, false), 1.0);
    EXPECT_NEAR(backtest(p, r, true), (1.01 * 0.98 * 1.03 - 1) * 100, 1e-12);
}

TEST(Backtest, PerfectForesightDominates) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0, 1.5);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> r(40);
        std::vector<int> p(40), best(40);
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = z(gen);
            p[i] = coin(gen);
            best[i] = r[i] > 0;
        }
        EXPECT_GE(backtest(best, r), backtest(p, r));
    }
}

TEST(EvaluatePair, PerfectModel) {
    const auto ds = dataset(4);
    // The model peeks at nothing: it scores from the realized return passed in
    // through a lookup keyed on the features, which is fine for this check.
    std::map<std::array<double, features::kFeatureCount>, int> truth;
    for (const auto& s : ds.samples) truth[s.features.as_array()] = s.label;
    const auto model = wrap([&](std::span<const double> x) {
        std::array<double, features::kFeatureCount> key;
        std::copy(x.begin(), x.end(), key.begin());
        return static_cast<double>(truth.at(key));
    });
    const auto result = evaluate_pair(model, ds, {200, 260}, "r1");
    ASSERT_TRUE(result.record);
    EXPECT_EQ(result.record->metrics.accuracy, 1.0);
    EXPECT_EQ(result.record->profit_label, 1);
    for (const auto& p : result.curve) EXPECT_GE(p.strategy_cum_pct, p.normal_cum_pct);
}

TEST(EvaluatePair, AlwaysLongMatchesBaseline) {
    const auto ds = dataset(5);
    const auto model = wrap([](std::span<const double>) { return 0.9; });
    const auto result = evaluate_pair(model, ds, {100, 180}, "r1");
    ASSERT_TRUE(result.record);
    EXPECT_EQ(result.record->metrics.backtest_return_pct, result.record->metrics.nnp_pct);
    EXPECT_EQ(result.record->metrics.pred_pos_rate, 1.0);
    EXPECT_EQ(result.record->metrics.normalized_acc, 0.5);
    for (const auto& p : result.curve) EXPECT_EQ(p.strategy_cum_pct, p.normal_cum_pct);
    EXPECT_EQ(result.record->window_start, ds.samples[100].target_date);
    EXPECT_EQ(result.record->window_end, ds.samples[179].target_date);
}

TEST(EvaluatePair, ProfitLabelStrictlyPositive) {
    EvaluationRecord r;
    r.metrics.backtest_return_pct = -0.77;
    EXPECT_EQ(r.metrics.backtest_return_pct > 0 ? 1 : 0, 0);
    const auto ds = dataset(6);
    const auto model = wrap([](std::span<const double> x) { return x[0] > 0 ? 0.7 : 0.2; });
    const auto result = evaluate_pair(model, ds, {50, 120}, "r1");
    ASSERT_TRUE(result.record);
    EXPECT_EQ(result.record->profit_label, result.record->metrics.backtest_return_pct > 0 ? 1 : 0);
    EXPECT_EQ(result.curve.back().strategy_cum_pct, result.record->metrics.backtest_return_pct);
}

TEST(RecordsCsv, HeaderAndRowLayout) {
    EvaluationRecord r;
    r.instrument = "AAPL";
    r.model = "LogisticRegression{C=0.1}";
    r.metrics.accuracy = 0.519;
    r.metrics.normalized_acc = 0.492;
    r.metrics.backtest_return_pct = -0.77;
    const auto csv = records_csv(std::vector<EvaluationRecord>{r});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kRecordsHeader);
    EXPECT_NE(csv.find("AAPL,LogisticRegression{C=0.1},0.519,0.492,"), std::string::npos);
    EXPECT_EQ(csv.substr(csv.size() - 3), ",0\n");
}
