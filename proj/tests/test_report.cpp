#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "frontier/error.hpp"
#include "frontier/panel.hpp"
#include "frontier/report.hpp"

using namespace frontier;
using namespace frontier::report;
using frontier::ownership::ShareRegister;

namespace {

// Firm registers that realise the given bracket counts for CR1, one stake
// per firm sitting in the middle of its bracket.
std::vector<FirmRegister> registers_for(const std::string& sector, const synth::BracketCounts& counts) {
    static const double mid[] = {5, 20, 40, 60, 80, 95};
    std::vector<FirmRegister> out;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        for (std::size_t i = 0; i < counts[b]; ++i) {
            out.push_back({sector, ShareRegister(sector + std::to_string(b) + "-" + std::to_string(i), 2010, {mid[b]})});
        }
    }
    return out;
}

double two_pass_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double two_pass_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = two_pass_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

dea::EfficiencyResult result(const std::string& id, const std::string& sector, double theta, dea::Rts rts) {
    dea::EfficiencyResult r;
    r.dmu_id = id;
    r.sector = sector;
    r.year = 2005;
    r.theta_star = theta;
    r.efficient = theta >= 1 - 1e-6;
    r.rts = rts;
    r.group_key = sector;
    return r;
}

}  // namespace

TEST_CASE("frequency table counts and totals") {
    std::vector<FirmRegister> regs;
    for (const auto& [sector, counts] : std::vector<std::pair<std::string, synth::BracketCounts>>{
             {"TradingServices", {6, 24, 18, 9, 1, 0}},
             {"ConsumerProducts", {1, 9, 15, 4, 0, 0}},
             {"Construction", {1, 8, 3, 0, 0, 0}},
             {"IndustrialProducts", {2, 28, 20, 7, 0, 0}}}) {
        auto part = registers_for(sector, counts);
        regs.insert(regs.end(), part.begin(), part.end());
    }
    const auto t = frequency_table(regs, 1);
    CHECK(t.sectors ==
          std::vector<std::string>{"ConsumerProducts", "IndustrialProducts", "Construction", "TradingServices"});
    CHECK(t.counts[0] == synth::BracketCounts{1, 9, 15, 4, 0, 0});
    CHECK(t.row_total(0) == 29);
    CHECK(t.row_total(3) == 58);
    const std::size_t expected[] = {10, 69, 56, 20, 1, 0};
    for (std::size_t b = 0; b < 6; ++b) CHECK(t.column_total(b) == expected[b]);
    CHECK(t.grand_total() == 156);
}

TEST_CASE("frequency table edge cases") {
    const auto one = frequency_table({{"Construction", ShareRegister("X", 2009, {100.0})}}, 1);
    REQUIRE(one.sectors.size() == 1);
    CHECK(one.counts[0] == synth::BracketCounts{0, 0, 0, 0, 0, 1});
    CHECK(one.grand_total() == 1);

    const auto skip = frequency_table({{"Construction", ShareRegister("X", 2009, {})},
                                       {"Construction", ShareRegister("Y", 2009, {30.0})},
                                       {"Mining", ShareRegister("Z", 2009, {5.0, 4.0})}},
                                      2);
    CHECK(skip.skipped == std::vector<std::string>{"X"});
    CHECK(skip.sectors == std::vector<std::string>{"Construction", "Mining"});
    CHECK(skip.counts[1] == synth::BracketCounts{1, 0, 0, 0, 0, 0});
    CHECK(skip.grand_total() == 2);

    CHECK_THROWS_AS(frequency_table({{"C", ShareRegister("X", 2009, {3.0})}, {"C", ShareRegister("X", 2010, {3.0})}}, 1),
                    ValidationError);
    CHECK_THROWS_AS(frequency_table(std::vector<FirmRegister>{}, 0), ValidationError);
}

TEST_CASE("register selection takes the latest disclosing year") {
    const auto d = panel::parse_panel(
        "firm_id,sector,year,labour_expense,revenue,stake_1,stake_2\n"
        "A,Construction,2001,1,2,60,\n"
        "A,Construction,2002,1,2,5,\n"
        "A,Construction,2003,1,2,,\n"
        "B,Construction,2003,1,2,,\n"
        "C,Construction,2001,1,2,40,40\n");
    const auto sel = select_registers(d);
    REQUIRE(sel.registers.size() == 2);
    CHECK(sel.registers[0].reg.firm_id() == "A");
    CHECK(sel.registers[0].reg.year() == 2002);
    CHECK(sel.skipped == std::vector<std::string>{"B"});
    const auto t2 = frequency_table(sel, 2);
    CHECK(t2.counts[0] == synth::BracketCounts{1, 0, 0, 0, 1, 0});
    CHECK(t2.skipped == std::vector<std::string>{"B"});

    const auto y2001 = select_registers(d, 2001);
    REQUIRE(y2001.registers.size() == 2);
    CHECK(y2001.registers[0].reg.stakes() == std::vector<double>{60});
    CHECK(y2001.skipped == std::vector<std::string>{"B"});
}

TEST_CASE("describe examples") {
    using dea::Rts;
    const auto s = describe({result("a", "Construction", 0.5, Rts::CRS), result("b", "Construction", 1.0, Rts::CRS)});
    REQUIRE(s.size() == 1);
    CHECK(s[0].mean == doctest::Approx(0.75));
    CHECK(s[0].std_dev == doctest::Approx(0.3535533906).epsilon(1e-10));
    CHECK(s[0].min == 0.5);
    CHECK(s[0].max == 1.0);

    const auto single = summarize({0.42});
    CHECK(single.mean == doctest::Approx(0.42));
    CHECK(single.std_dev == 0.0);

    const auto ones = summarize({1, 1, 1, 1});
    CHECK(ones.mean == 1.0);
    CHECK(ones.std_dev == 0.0);

    const auto mixed = describe({result("a", "Mining", 0.9, Rts::VRS), result("b", "Construction", 0.7, Rts::VRS),
                                 result("c", "Construction", 0.6, Rts::CRS), result("d", "ConsumerProducts", 1, Rts::CRS)});
    REQUIRE(mixed.size() == 4);
    CHECK(mixed[0].group == "ConsumerProducts");
    CHECK(mixed[0].mode == Rts::CRS);
    CHECK(mixed[1].group == "Construction");
    CHECK(mixed[1].mode == Rts::CRS);
    CHECK(mixed[2].group == "Construction");
    CHECK(mixed[2].mode == Rts::VRS);
    CHECK(mixed[3].group == "Mining");

    CHECK_THROWS_AS(describe({}), ValidationError);
    CHECK_THROWS_AS(summarize({}), ValidationError);
}

TEST_CASE("single-pass statistics agree with the two-pass formula") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + gen() % 400);
        for (double& x : v) x = u(gen);
        const auto s = summarize(v);
        CHECK(std::abs(s.mean - two_pass_mean(v)) <= 1e-12);
        CHECK(std::abs(s.std_dev - two_pass_sd(v)) <= 1e-12);
        CHECK(s.min == *std::min_element(v.begin(), v.end()));
        CHECK(s.max == *std::max_element(v.begin(), v.end()));
    }
}

TEST_CASE("rendered frequency table") {
    const auto t = frequency_table(registers_for("ConsumerProducts", {1, 9, 15, 4, 0, 0}), 1);
    const std::string text = render(t, Format::Text);
    CHECK(text.find("Sector of Firms") != std::string::npos);
    CHECK(text.find("Consumer Products") != std::string::npos);
    CHECK(text.find("≤10") != std::string::npos);
    CHECK(text.find("11–30") != std::string::npos);
    CHECK(text.find("CR1") != std::string::npos);
    CHECK(text.find("Skipped firms (no disclosed stakes): 0") != std::string::npos);

    const std::string csv = render(t, Format::Csv);
    CHECK(csv.rfind("k,sector,≤10,11–30,31–50,51–70,71–90,>90,total\n", 0) == 0);
    CHECK(csv.find("1,ConsumerProducts,1,9,15,4,0,0,29\n") != std::string::npos);
    CHECK(csv.find("1,Total,1,9,15,4,0,0,29\n") != std::string::npos);
    const auto back = parse_frequency_csv(csv);
    CHECK(back.k == t.k);
    CHECK(back.sectors == t.sectors);
    CHECK(back.counts == t.counts);

    const std::string json = render(t, Format::Json);
    CHECK(json.find("\"grand_total\": 29") != std::string::npos);
}

TEST_CASE("text tables align columns with multibyte labels") {
    const auto t = frequency_table(registers_for("TradingServices", {6, 24, 18, 9, 1, 0}), 1);
    const std::string text = render(t, Format::Text);
    // Every table line shares one display width.
    auto width = [](const std::string& line) {
        std::size_t n = 0;
        for (unsigned char c : line) n += (c & 0xC0) != 0x80;
        return n;
    };
    std::vector<std::size_t> widths;
    std::size_t start = text.find("Sector of Firms");
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string line = text.substr(start, end - start);
        if (line.rfind("Skipped", 0) == 0) break;
        widths.push_back(width(line));
        start = end + 1;
    }
    REQUIRE(widths.size() == 3);
    CHECK(widths[0] == widths[1]);
    CHECK(widths[1] == widths[2]);
}

TEST_CASE("stats round trip through CSV and JSON") {
    std::vector<DescriptiveStats> stats = {
        {"ConsumerProducts", dea::Rts::CRS, 0.1 + 0.2, 1.0 / 3.0, 0.01, 1.0},
        {"Construction", dea::Rts::CRS, 0.75, 0.0, 0.75, 0.75},
        {"ConsumerProducts", dea::Rts::VRS, 0.9, 0.123456789012345, 0.5, 1.0}};
    for (auto* parse : {&parse_stats_csv, &parse_stats_json}) {
        const auto back = (*parse)(render(stats, parse == &parse_stats_csv ? Format::Csv : Format::Json));
        REQUIRE(back.size() == stats.size());
        for (std::size_t i = 0; i < stats.size(); ++i) {
            CHECK(back[i].group == stats[i].group);
            CHECK(back[i].mode == stats[i].mode);
            CHECK(back[i].mean == doctest::Approx(stats[i].mean).epsilon(1e-11));
            CHECK(back[i].std_dev == doctest::Approx(stats[i].std_dev).epsilon(1e-11));
            CHECK(back[i].min == doctest::Approx(stats[i].min).epsilon(1e-11));
            CHECK(back[i].max == doctest::Approx(stats[i].max).epsilon(1e-11));
        }
    }
    const std::string text = render(stats, Format::Text);
    CHECK(text.find("EFFIINCRS") != std::string::npos);
    CHECK(text.find("EFFIINVRS") != std::string::npos);
    CHECK(text.find("0.300") != std::string::npos);
    CHECK(text.find("0.333") != std::string::npos);
    CHECK(render(stats, Format::Csv).rfind("group,mode,mean,std_dev,min,max\n", 0) == 0);

    CHECK_THROWS_AS(parse_stats_csv("group,mode\nX,crs\n"), ValidationError);
    CHECK_THROWS_AS(parse_stats_json("[{\"group\": 3}]"), ValidationError);
}

TEST_CASE("scores rendering") {
    auto r = result("F1", "Construction", 0.5, dea::Rts::CRS);
    r.lambdas = {{"F2:2005", 0.25}, {"F3:2005", 0.5}};
    const std::string csv = render(std::vector<dea::EfficiencyResult>{r}, Format::Csv);
    CHECK(csv == "firm_id,sector,year,group,rts,theta,efficient,peers\n"
                 "F1,Construction,2005,Construction,crs,0.5,false,F2:2005=0.25;F3:2005=0.5\n");
    const std::string json = render(std::vector<dea::EfficiencyResult>{r}, Format::Json);
    CHECK(json.find("\"theta\": 0.5") != std::string::npos);
}

TEST_CASE("format names") {
    CHECK(parse_format("text") == Format::Text);
    CHECK(parse_format("csv") == Format::Csv);
    CHECK(parse_format("json") == Format::Json);
    CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("sector ordering") {
    std::vector<std::string> s = {"Zinc", "TradingServices", "Agri", "ConsumerProducts"};
    sort_sectors(s);
    CHECK(s == std::vector<std::string>{"ConsumerProducts", "TradingServices", "Agri", "Zinc"});
}
