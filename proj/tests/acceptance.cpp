// End-to-end acceptance run. One line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "frontier/cli.hpp"
#include "frontier/dea.hpp"
#include "frontier/panel.hpp"
#include "frontier/report.hpp"
#include "frontier/synth.hpp"
#include "oracle/vertex_enum.hpp"
#include "support.hpp"

using namespace frontier;
using testing_support::pick;
using testing_support::random_panel;
using testing_support::RawPanel;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<std::string> sectors_for(std::mt19937_64& gen, std::size_t n) {
    std::vector<std::string> s(n);
    for (auto& v : s) v = pick(gen, 0, 1) ? "North" : "South";
    return s;
}

Verdict nesting() {
    Verdict v;
    std::mt19937_64 gen(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        RawPanel raw = random_panel(gen, pick(gen, 1, 50), pick(gen, 1, 3), pick(gen, 1, 2));
        const auto p = raw.panel();
        const auto crs = dea::score_all(p, dea::Rts::CRS, dea::GroupingRule::Pooled);
        const auto vrs = dea::score_all(p, dea::Rts::VRS, dea::GroupingRule::Pooled);
        for (std::size_t j = 0; j < crs.size(); ++j) {
            worst = std::max(worst, crs[j].theta_star - vrs[j].theta_star);
            for (double t : {crs[j].theta_star, vrs[j].theta_star}) {
                if (!(t > 0.0 && t <= 1.0 + 1e-9)) v.fail("theta " + fmt(t) + " out of range");
            }
            if (vrs[j].theta_star < crs[j].theta_star - 1e-7) v.fail("VRS below CRS at trial " + std::to_string(trial));
        }
    }
    if (v.pass) v.detail = "max(CRS - VRS) = " + fmt(worst);
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    std::mt19937_64 gen(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        RawPanel raw = random_panel(gen, pick(gen, 1, 6), pick(gen, 1, 2), pick(gen, 1, 2));
        const auto p = raw.panel();
        for (auto rts : {dea::Rts::CRS, dea::Rts::VRS}) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                const auto want = oracle::solve(oracle::envelopment(raw.x, raw.y, j, rts == dea::Rts::VRS));
                if (!want) {
                    v.fail("oracle found no feasible point");
                    continue;
                }
                const double got = dea::efficiency(p, j, rts).theta_star;
                worst = std::max(worst, std::abs(got - want->value));
                if (std::abs(got - want->value) > 1e-7) v.fail("trial " + std::to_string(trial) + " differs by " + fmt(got - want->value));
            }
        }
    }
    if (v.pass) v.detail = "max |diff| = " + fmt(worst);
    return v;
}

Verdict closed_form() {
    Verdict v;
    std::mt19937_64 gen(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        RawPanel raw = random_panel(gen, pick(gen, 1, 30), 1, 1);
        const auto p = raw.panel();
        std::vector<double> x, y;
        for (std::size_t j = 0; j < p.size(); ++j) {
            x.push_back(raw.x[j][0]);
            y.push_back(raw.y[j][0]);
        }
        const std::size_t target = pick(gen, 0, p.size() - 1);
        const double want = oracle::single_ratio_crs(x, y, target);
        const double got = dea::efficiency(p, target, dea::Rts::CRS).theta_star;
        worst = std::max(worst, std::abs(got - want));
        if (std::abs(got - want) > 1e-9) v.fail("instance " + std::to_string(trial) + " differs by " + fmt(got - want));
    }
    if (v.pass) v.detail = "max |diff| = " + fmt(worst);
    return v;
}

Verdict units_invariance() {
    Verdict v;
    std::mt19937_64 gen(1004);
    std::uniform_real_distribution<double> log_c(std::log(1e-3), std::log(1e3));
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        RawPanel raw = random_panel(gen, pick(gen, 2, 25), pick(gen, 1, 3), pick(gen, 1, 2));
        raw.sector = sectors_for(gen, raw.x.size());
        RawPanel scaled = raw;
        const std::size_t m = raw.x[0].size();
        const std::size_t col = pick(gen, 0, m + raw.y[0].size() - 1);
        const double c = std::exp(log_c(gen));
        for (std::size_t j = 0; j < raw.x.size(); ++j) {
            if (col < m) scaled.x[j][col] *= c;
            else scaled.y[j][col - m] *= c;
        }
        for (auto rts : {dea::Rts::CRS, dea::Rts::VRS}) {
            const auto a = dea::score_all(raw.panel(), rts, dea::GroupingRule::Sector);
            const auto b = dea::score_all(scaled.panel(), rts, dea::GroupingRule::Sector);
            for (std::size_t j = 0; j < a.size(); ++j) {
                const double d = std::abs(a[j].theta_star - b[j].theta_star);
                worst = std::max(worst, d);
                if (d > 1e-7) v.fail("trial " + std::to_string(trial) + " moved by " + fmt(d));
            }
        }
    }
    if (v.pass) v.detail = "max |diff| = " + fmt(worst);
    return v;
}

Verdict frontier_existence() {
    Verdict v;
    std::mt19937_64 gen(1005);
    std::size_t groups = 0;
    for (int trial = 0; trial < 300; ++trial) {
        RawPanel raw = random_panel(gen, pick(gen, 1, 40), pick(gen, 1, 3), pick(gen, 1, 2));
        raw.sector = sectors_for(gen, raw.x.size());
        for (auto rts : {dea::Rts::CRS, dea::Rts::VRS}) {
            for (auto rule : {dea::GroupingRule::Pooled, dea::GroupingRule::Sector}) {
                std::map<std::string, double> best;
                for (const auto& r : dea::score_all(raw.panel(), rts, rule)) {
                    best[r.group_key] = std::max(best[r.group_key], r.theta_star);
                }
                for (const auto& [key, top] : best) {
                    ++groups;
                    if (top < 1 - 1e-6) v.fail("group " + key + " in trial " + std::to_string(trial) + " tops at " + fmt(top));
                }
            }
        }
    }
    if (v.pass) v.detail = std::to_string(groups) + " groups checked";
    return v;
}

const synth::SynthPanel& fixture() {
    static const synth::SynthPanel s = synth::generate(synth::default_spec(), 20140530);
    return s;
}

Verdict cr1_table() {
    Verdict v;
    const auto t = report::frequency_table(report::select_registers(fixture().dataset), 1);
    const std::vector<synth::BracketCounts> rows = {
        {1, 9, 15, 4, 0, 0}, {2, 28, 20, 7, 0, 0}, {1, 8, 3, 0, 0, 0}, {6, 24, 18, 9, 1, 0}};
    if (t.counts != rows) v.fail("sector rows differ");
    const std::size_t totals[] = {10, 69, 56, 20, 1, 0};
    for (std::size_t b = 0; b < 6; ++b) {
        if (t.column_total(b) != totals[b]) v.fail("column total " + std::to_string(b) + " is " + std::to_string(t.column_total(b)));
    }
    if (t.grand_total() != 156) v.fail("grand total " + std::to_string(t.grand_total()));
    if (t.row_total(0) != 29) v.fail("consumer products row total " + std::to_string(t.row_total(0)));
    if (v.pass) v.detail = "consumer products (1, 9, 15, 4, 0)/29, totals (10, 69, 56, 20, 1)/156";
    return v;
}

Verdict cr2_totals() {
    Verdict v;
    const auto t = report::frequency_table(report::select_registers(fixture().dataset), 2);
    const std::size_t totals[] = {1, 40, 57, 47, 11, 0};
    std::string got;
    for (std::size_t b = 0; b < 6; ++b) {
        got += (b ? ", " : "") + std::to_string(t.column_total(b));
        if (t.column_total(b) != totals[b]) v.fail("column totals (" + got + ", ...)");
    }
    if (t.grand_total() != 156) v.fail("grand total " + std::to_string(t.grand_total()));
    if (v.pass) v.detail = "totals (" + got + ")/156";
    return v;
}

Verdict allocation() {
    Verdict v;
    const auto a = panel::allocate_strata(156, {0.372, 0.365, 0.186, 0.077});
    if (a.counts != std::vector<std::size_t>{58, 57, 29, 12}) v.fail("allocation differs");
    else v.detail = "(58, 57, 29, 12)";
    return v;
}

Verdict describe_reference() {
    Verdict v;
    std::mt19937_64 gen(1009);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<dea::EfficiencyResult> results;
        std::vector<double> values(pick(gen, 1, 500));
        for (std::size_t i = 0; i < values.size(); ++i) {
            dea::EfficiencyResult r;
            r.dmu_id = "F" + std::to_string(i);
            r.sector = "Construction";
            r.theta_star = values[i] = pick(gen, 0, 9) == 0 ? 1.0 : u(gen);
            r.group_key = r.sector;
            results.push_back(r);
        }
        double sum = 0.0, mn = values[0], mx = values[0];
        for (double x : values) {
            sum += x;
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        const double mean = sum / static_cast<double>(values.size());
        double ss = 0.0;
        for (double x : values) ss += (x - mean) * (x - mean);
        const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
        const auto s = report::describe(results);
        if (s.size() != 1) {
            v.fail("expected one group");
            continue;
        }
        const double d = std::max(std::abs(s[0].mean - mean), std::abs(s[0].std_dev - sd));
        worst = std::max(worst, d);
        if (d > 1e-12 || s[0].min != mn || s[0].max != mx) v.fail("set " + std::to_string(trial) + " differs by " + fmt(d));
    }
    if (v.pass) v.detail = "max |diff| = " + fmt(worst);
    return v;
}

Verdict scale() {
    Verdict v;
    const auto s = synth::generate(synth::default_spec(), 7);
    const auto p = panel::to_dea_panel(s.dataset);
    const auto start = std::chrono::steady_clock::now();
    const auto crs = dea::score_all(p, dea::Rts::CRS, dea::GroupingRule::Sector);
    const auto vrs = dea::score_all(p, dea::Rts::VRS, dea::GroupingRule::Sector);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (crs.size() != p.size() || vrs.size() != p.size()) v.fail("missing results");
    if (secs >= 5.0) v.fail("took " + fmt(secs) + " s");
    if (v.pass) v.detail = std::to_string(p.size()) + " firm-years, CRS + VRS in " + fmt(secs) + " s";
    return v;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    Verdict v;
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("frontier-acceptance-" + std::to_string(::getpid()));
    std::vector<std::map<std::string, std::string>> runs;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = root / std::to_string(run);
        fs::create_directories(dir);
        const std::string panel_csv = (dir / "panel.csv").string();
        const std::vector<std::vector<std::string>> steps = {
            {"synth", "--seed", "99", "--out", panel_csv},
            {"score", panel_csv, "--format", "csv", "--out", (dir / "scores.csv").string()},
            {"score", panel_csv, "--rts", "vrs", "--format", "csv", "--out", (dir / "scores_vrs.csv").string()},
            {"ownership", panel_csv, "--format", "csv", "--out", (dir / "ownership.csv").string()},
            {"describe", panel_csv, "--format", "csv", "--out", (dir / "describe.csv").string()}};
        for (const auto& args : steps) {
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) v.fail(args[0] + " failed: " + err.str());
        }
        std::map<std::string, std::string> files;
        for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
        runs.push_back(files);
    }
    fs::remove_all(root);
    if (runs[0].size() != 5) v.fail("expected 5 output files");
    for (const auto& [name, text] : runs[0]) {
        if (text.empty()) v.fail(name + " is empty");
        if (runs[1][name] != text) v.fail(name + " differs between runs");
    }
    if (v.pass) v.detail = std::to_string(runs[0].size()) + " CSV files byte-identical";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"nesting VRS >= CRS, theta in (0, 1]", nesting},
        {"vertex-enumeration oracle equivalence", oracle_equivalence},
        {"single-ratio closed form", closed_form},
        {"units invariance", units_invariance},
        {"frontier existence per group", frontier_existence},
        {"CR1 frequency table", cr1_table},
        {"CR2 column totals", cr2_totals},
        {"largest-remainder allocation", allocation},
        {"describe vs two-pass reference", describe_reference},
        {"156 firms x 11 years scoring time", scale},
        {"pipeline determinism", determinism}};
    const double limits[] = {10.0, 30.0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limits[i] > 0 && secs >= limits[i]) v.fail("took " + fmt(secs) + " s, limit " + fmt(limits[i]) + " s");
        failed += v.pass ? 0 : 1;
        std::printf("[%s] %2zu %-40s %7.2fs  %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    v.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
