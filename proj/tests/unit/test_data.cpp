#include <gtest/gtest.h>

#include <filesystem>
#include <unistd.h>

#include "pairfinder/common/error.h"
#include "pairfinder/common/text.h"
#include "pairfinder/data/ohlcv.h"
#include "pairfinder/data/synthetic.h"
#include "pairfinder/data/universe.h"

using namespace pairfinder;
using namespace pairfinder::data;

namespace {

const std::string kHeader = "Date,Open,High,Low,Close,Adj Close,Volume\n";

const std::string kGoldRows =
    kHeader +
    "2013-12-24,1199.800049,1205.599976,1197.699951,1205.099976,1205.099976,184\n"
    "2013-12-26,1207.099976,1215.900024,1207.099976,1214.099976,1214.099976,140\n"
    "2013-12-27,1213.400024,1218.500000,121.9000024,1216.099976,1216.099976,278\n";

template <typename Fn>
ErrorCategory category_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCategory::Io;
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("pairfinder_data_" + std::to_string(::getpid())) / name;
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Ohlcv, ParsesSampleRows) {
    const auto s = parse_ohlcv_csv(kGoldRows, InstrumentId("GC"));
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s.bars()[0].open, 1199.800049);
    EXPECT_EQ(s.bars()[0].close, 1205.099976);
    EXPECT_EQ(s.bars()[0].volume, 184);
    EXPECT_EQ(format_date(s.bars()[0].date), "2013-12-24");
}

TEST(Ohlcv, TypoLowIsValidButFlaggedAsOutlier) {
    const auto s = parse_ohlcv_csv(kGoldRows, InstrumentId("GC"));
    const auto flagged = outlier_dates(s);
    ASSERT_EQ(flagged.size(), 1u);
    EXPECT_EQ(format_date(flagged[0]), "2013-12-27");
}

TEST(Ohlcv, UnsortedRowsAreSorted) {
    const std::string shuffled = kHeader +
                                 "2013-12-27,1213.400024,1218.5,1210,1216.099976,1216.099976,278\n"
                                 "2013-12-24,1199.800049,1205.599976,1197.699951,1205.099976,1205.099976,184\n";
    const auto s = parse_ohlcv_csv(shuffled, InstrumentId("GC"));
    EXPECT_EQ(format_date(s.bars()[0].date), "2013-12-24");
    EXPECT_EQ(format_date(s.bars()[1].date), "2013-12-27");
}

TEST(Ohlcv, DuplicateDateIsValidationError) {
    const std::string dup = kHeader + "2013-12-24,1,2,0.5,1.5,1.5,10\n2013-12-24,1,2,0.5,1.5,1.5,10\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(dup, InstrumentId("X")); }), ErrorCategory::Validation);
    EXPECT_NE(message_of([&] { parse_ohlcv_csv(dup, InstrumentId("X")); }).find("2013-12-24"), std::string::npos);
}

TEST(Ohlcv, MalformedRowNamesLine) {
    const std::string bad = kHeader + "2013-12-24,1,2,0.5,1.5,1.5,10\n2013-12-25,1,abc,0.5,1.5,1.5,10\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(bad, InstrumentId("X")); }), ErrorCategory::Parse);
    EXPECT_NE(message_of([&] { parse_ohlcv_csv(bad, InstrumentId("X")); }).find("row 3"), std::string::npos);
    const std::string short_row = kHeader + "2013-12-24,1,2,0.5,1.5\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(short_row, InstrumentId("X")); }), ErrorCategory::Parse);
}

TEST(Ohlcv, BarInvariantViolations) {
    // high below close
    const std::string high = kHeader + "2013-12-24,1,1.2,0.5,1.5,1.5,10\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(high, InstrumentId("X")); }), ErrorCategory::Validation);
    // non-positive price
    const std::string zero = kHeader + "2013-12-24,0,2,0,1.5,1.5,10\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(zero, InstrumentId("X")); }), ErrorCategory::Validation);
    // negative volume
    const std::string vol = kHeader + "2013-12-24,1,2,0.5,1.5,1.5,-1\n";
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv(vol, InstrumentId("X")); }), ErrorCategory::Validation);
}

TEST(Ohlcv, HeaderAndBom) {
    EXPECT_EQ(category_of([&] { parse_ohlcv_csv("Date,O,H,L,C\n", InstrumentId("X")); }), ErrorCategory::Parse);
    const auto s = parse_ohlcv_csv("\xEF\xBB\xBF" + kGoldRows, InstrumentId("GC"));
    EXPECT_EQ(s.size(), 3u);
}

TEST(Ohlcv, FractionalZeroVolumeAccepted) {
    const auto s = parse_ohlcv_csv(kHeader + "2013-12-24,1,2,0.5,1.5,1.5,184.0\n", InstrumentId("X"));
    EXPECT_EQ(s.bars()[0].volume, 184);
}

TEST(Ohlcv, SerializeRoundTrip) {
    const auto s = parse_ohlcv_csv(kGoldRows, InstrumentId("GC"));
    const auto again = parse_ohlcv_csv(serialize_ohlcv_csv(s), InstrumentId("GC"));
    EXPECT_EQ(s, again);
}

TEST(Ohlcv, EmptySymbolRejected) {
    EXPECT_EQ(category_of([] { InstrumentId(""); }), ErrorCategory::Config);
}

TEST(Synthetic, FullPersistenceKeepsFirstSign) {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::PersistentSign;
    spec.persistence = 1.0;
    spec.length = 300;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = seed;
        const auto s = generate_synthetic_series(spec, InstrumentId("P"));
        const bool first_up = s.bars()[0].close > s.bars()[0].open;
        for (const auto& bar : s.bars()) EXPECT_EQ(bar.close > bar.open, first_up);
    }
}

TEST(Synthetic, MeasuredPersistenceMatches) {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::PersistentSign;
    spec.persistence = 0.65;
    spec.length = 5000;
    spec.seed = 2024;
    const auto s = generate_synthetic_series(spec, InstrumentId("P"));
    std::size_t same = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        same += (s.bars()[i].close > s.bars()[i].open) == (s.bars()[i - 1].close > s.bars()[i - 1].open);
    }
    const double measured = static_cast<double>(same) / static_cast<double>(s.size() - 1);
    EXPECT_GE(measured, 0.62);
    EXPECT_LE(measured, 0.68);
}

TEST(Synthetic, RandomWalkHasNoPersistence) {
    SyntheticSpec spec;
    spec.length = 5000;
    spec.seed = 7;
    const auto s = generate_synthetic_series(spec, InstrumentId("R"));
    std::size_t same = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        same += (s.bars()[i].close > s.bars()[i].open) == (s.bars()[i - 1].close > s.bars()[i - 1].open);
    }
    EXPECT_NEAR(static_cast<double>(same) / static_cast<double>(s.size() - 1), 0.5, 0.03);
}

TEST(Synthetic, DeterministicAndContinuous) {
    SyntheticSpec spec;
    spec.seed = 99;
    spec.length = 500;
    const auto a = generate_synthetic_series(spec, InstrumentId("R"));
    const auto b = generate_synthetic_series(spec, InstrumentId("R"));
    EXPECT_EQ(serialize_ohlcv_csv(a), serialize_ohlcv_csv(b));
    for (std::size_t i = 1; i < a.size(); ++i) {
        EXPECT_EQ(a.bars()[i].open, a.bars()[i - 1].close);
        const auto wd = std::chrono::weekday(std::chrono::sys_days(a.bars()[i].date));
        EXPECT_NE(wd, std::chrono::Saturday);
        EXPECT_NE(wd, std::chrono::Sunday);
    }
}

TEST(Synthetic, SpecValidation) {
    SyntheticSpec spec;
    spec.persistence = 1.5;
    EXPECT_EQ(category_of([&] { validate(spec); }), ErrorCategory::Config);
    spec = {};
    spec.volatility_pct = 0;
    EXPECT_EQ(category_of([&] { validate(spec); }), ErrorCategory::Config);
    spec = {};
    spec.length = 100;
    EXPECT_EQ(category_of([&] { validate(spec); }), ErrorCategory::Config);
    spec.length = 134;
    EXPECT_NO_THROW(validate(spec));
}

TEST(Universe, ConfigOrderAndMixedSources) {
    const auto dir = temp_dir("mixed");
    write_file((dir / "gc.csv").string(), kGoldRows);
    UniverseConfig cfg;
    SyntheticSpec spec;
    spec.length = 200;
    cfg.instruments.push_back({InstrumentId("SYN"), spec});
    cfg.instruments.push_back({InstrumentId("GC"), CsvSource{(dir / "gc.csv").string()}});
    const auto series = load_universe(cfg, 1);
    ASSERT_EQ(series.size(), 2u);
    EXPECT_EQ(series[0].instrument().symbol(), "SYN");
    EXPECT_EQ(series[1].instrument().symbol(), "GC");
}

TEST(Universe, Errors) {
    UniverseConfig empty;
    EXPECT_EQ(category_of([&] { load_universe(empty, 1); }), ErrorCategory::Config);

    UniverseConfig dup;
    dup.instruments.push_back({InstrumentId("A"), SyntheticSpec{}});
    dup.instruments.push_back({InstrumentId("A"), SyntheticSpec{}});
    EXPECT_EQ(category_of([&] { load_universe(dup, 1); }), ErrorCategory::Config);

    UniverseConfig missing;
    missing.instruments.push_back({InstrumentId("MISS"), CsvSource{"/nonexistent/miss.csv"}});
    EXPECT_EQ(category_of([&] { load_universe(missing, 1); }), ErrorCategory::Io);
    EXPECT_NE(message_of([&] { load_universe(missing, 1); }).find("MISS"), std::string::npos);

    UniverseConfig too_short;
    SyntheticSpec spec;
    spec.length = 200;
    too_short.instruments.push_back({InstrumentId("S"), spec});
    EXPECT_EQ(category_of([&] { load_universe(too_short, 500); }), ErrorCategory::Validation);
}
