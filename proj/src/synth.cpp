#include "frontier/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>

#include <json.hpp>

#include "frontier/csv.hpp"
#include "frontier/error.hpp"
#include "random.hpp"

namespace frontier::synth {

SynthSpec default_spec() {
    SynthSpec spec;
    spec.sectors = {{"ConsumerProducts", 29, 3},
                    {"IndustrialProducts", 57, 4},
                    {"Construction", 12, 2},
                    {"TradingServices", 58, 4}};
    BracketTargets cr1{1, {}};
    cr1.by_sector["ConsumerProducts"] = {1, 9, 15, 4, 0, 0};
    cr1.by_sector["IndustrialProducts"] = {2, 28, 20, 7, 0, 0};
    cr1.by_sector["Construction"] = {1, 8, 3, 0, 0, 0};
    cr1.by_sector["TradingServices"] = {6, 24, 18, 9, 1, 0};
    BracketTargets cr2{2, {}};
    cr2.by_sector["ConsumerProducts"] = {0, 3, 10, 13, 3, 0};
    cr2.by_sector["IndustrialProducts"] = {1, 16, 23, 14, 3, 0};
    cr2.by_sector["Construction"] = {0, 4, 6, 2, 0, 0};
    cr2.by_sector["TradingServices"] = {0, 17, 18, 18, 5, 0};
    spec.targets = {cr1, cr2};
    return spec;
}

namespace {

constexpr long long kHundredths = 100;
constexpr long long kFull = 100 * kHundredths;

double round12(double v) { return std::strtod(csv::format_real(v).c_str(), nullptr); }

struct Range {
    long long lo;  // inclusive, hundredths
    long long hi;
};

// Interior of a bracket in hundredths of a percent, one unit away from both
// ends so sums of two-decimal stakes never land on a boundary.
Range interior(std::optional<std::size_t> bracket) {
    if (!bracket) return {1, kFull - 1};
    const auto b = ownership::bounds(ownership::kAllBrackets[*bracket]);
    return {static_cast<long long>(std::llround(b.lower * kHundredths)) + 1,
            static_cast<long long>(std::llround(b.upper * kHundredths)) - 1};
}

using Want = std::array<std::optional<std::size_t>, 3>;  // brackets for CR1, CR2, CR4

bool matches(const std::vector<double>& stakes, const Want& want) {
    ownership::ShareRegister reg("probe", 0, stakes);
    constexpr std::array<std::size_t, 3> ks = {1, 2, 4};
    for (std::size_t t = 0; t < 3; ++t) {
        if (!want[t]) continue;
        const double v = ownership::cr(reg, ks[t]).value;
        if (ownership::index(ownership::bracket_of(std::min(v, 100.0))) != *want[t]) return false;
    }
    return true;
}

// Four stakes s1 >= s2 >= s3 >= s4 whose top-1/2/4 sums land in the wanted
// brackets, built in hundredths: c1 = s1, c2 = c1 + s2, c4 = c2 + s3 + s4.
std::optional<std::vector<double>> plant_stakes(const Want& want, std::mt19937_64& gen) {
    const Range r1 = interior(want[0]);
    const Range r2 = interior(want[1]);
    const Range r4 = interior(want[2]);
    for (int attempt = 0; attempt < 500; ++attempt) {
        if (r1.lo > r1.hi) return std::nullopt;
        const long long c1 = detail::uniform_between(gen, r1.lo, r1.hi);
        const long long s2_lo = std::max(1LL, r2.lo - c1);
        const long long s2_hi = std::min(c1, r2.hi - c1);
        if (s2_lo > s2_hi) continue;
        const long long s2 = detail::uniform_between(gen, s2_lo, s2_hi);
        const long long c2 = c1 + s2;
        const long long d_lo = std::max(2LL, r4.lo - c2);
        const long long d_hi = std::min({2 * s2, r4.hi - c2, kFull - 1 - c2});
        if (d_lo > d_hi) continue;
        const long long d = detail::uniform_between(gen, d_lo, d_hi);
        const long long s3 = (d + 1) / 2;
        const long long s4 = d - s3;
        std::vector<double> stakes = {static_cast<double>(c1) / kHundredths, static_cast<double>(s2) / kHundredths,
                                      static_cast<double>(s3) / kHundredths, static_cast<double>(s4) / kHundredths};
        if (matches(stakes, want)) return stakes;
    }
    return std::nullopt;
}

std::string firm_prefix(const std::string& code, std::size_t sector_index) {
    std::string p;
    for (char c : code) {
        if (std::isupper(static_cast<unsigned char>(c))) p.push_back(c);
    }
    if (p.size() < 2) {
        p.clear();
        for (char c : code) {
            if (std::isalnum(static_cast<unsigned char>(c))) p.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            if (p.size() == 2) break;
        }
    }
    if (p.empty()) p = "S" + std::to_string(sector_index + 1);
    return p;
}

std::string pad3(std::size_t n) {
    std::string s = std::to_string(n);
    return s.size() >= 3 ? s : std::string(3 - s.size(), '0') + s;
}

void validate(const SynthSpec& spec) {
    if (spec.sectors.empty()) throw ValidationError("synthetic spec has no sectors; dataset would be empty");
    if (spec.first_year > spec.last_year) throw ValidationError("synthetic spec: first_year after last_year");
    if (spec.input_count < 1 || spec.input_count > panel::kInputColumns.size()) {
        throw ValidationError("synthetic spec: input_count must be 1..3");
    }
    if (!(spec.min_inefficiency > 1.0) || spec.max_inefficiency < spec.min_inefficiency) {
        throw ValidationError("synthetic spec: inefficiency multipliers must satisfy 1 < min <= max");
    }
    if (!(spec.presence > 0.0) || spec.presence > 1.0) {
        throw ValidationError("synthetic spec: presence must be in (0, 1]");
    }
    std::set<std::string> codes;
    for (const SectorSpec& s : spec.sectors) {
        if (s.code.empty()) throw ValidationError("synthetic spec: empty sector code");
        if (!codes.insert(s.code).second) throw ValidationError("synthetic spec: duplicate sector " + s.code);
        if (s.firms == 0) throw ValidationError("synthetic spec: sector " + s.code + " has no firms");
        if (s.frontier_firms == 0 || s.frontier_firms > s.firms) {
            throw ValidationError("synthetic spec: sector " + s.code + " needs 1..firms frontier firms");
        }
    }
    std::set<std::size_t> ks;
    for (const BracketTargets& t : spec.targets) {
        if (t.k != 1 && t.k != 2 && t.k != 4) throw ValidationError("synthetic spec: targets only for k in {1, 2, 4}");
        if (!ks.insert(t.k).second) throw ValidationError("synthetic spec: duplicate targets for k=" + std::to_string(t.k));
        for (const auto& [code, counts] : t.by_sector) {
            auto it = std::find_if(spec.sectors.begin(), spec.sectors.end(),
                                   [&](const SectorSpec& s) { return s.code == code; });
            if (it == spec.sectors.end()) throw ValidationError("synthetic spec: targets for unknown sector " + code);
            const std::size_t sum = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
            if (sum > it->firms) {
                throw ValidationError("synthetic spec: CR" + std::to_string(t.k) + " bracket counts for " + code +
                                      " total " + std::to_string(sum) + ", more than its " +
                                      std::to_string(it->firms) + " firms");
            }
        }
    }
}

// Registers for one sector. Each k's requested brackets are sorted
// ascending and paired position by position, which keeps CR1 <= CR2 <= CR4
// attainable; the registers are then shuffled across firms.
std::vector<std::vector<double>> sector_registers(const SynthSpec& spec, const SectorSpec& sector,
                                                  std::mt19937_64& gen) {
    constexpr std::array<std::size_t, 3> ks = {1, 2, 4};
    std::vector<Want> wants(sector.firms);
    for (std::size_t t = 0; t < 3; ++t) {
        for (const BracketTargets& target : spec.targets) {
            if (target.k != ks[t]) continue;
            auto it = target.by_sector.find(sector.code);
            if (it == target.by_sector.end()) continue;
            std::size_t pos = 0;
            for (std::size_t b = 0; b < ownership::kBracketCount; ++b) {
                for (std::size_t c = 0; c < it->second[b]; ++c) wants[pos++][t] = b;
            }
        }
    }
    std::vector<std::vector<double>> registers;
    registers.reserve(sector.firms);
    for (const Want& w : wants) {
        auto stakes = plant_stakes(w, gen);
        if (!stakes) {
            throw ValidationError("synthetic spec: no share register satisfies the requested CR brackets in sector " +
                                  sector.code);
        }
        registers.push_back(std::move(*stakes));
    }
    for (std::size_t i = registers.size(); i > 1; --i) {
        std::swap(registers[i - 1], registers[detail::uniform_below(gen, i)]);
    }
    return registers;
}

}  // namespace

SynthPanel generate(const SynthSpec& spec, std::uint64_t seed) {
    validate(spec);
    std::mt19937_64 gen(seed);
    const std::size_t m = spec.input_count;
    const double exponent = 1.0 / static_cast<double>(m);
    constexpr double kProductivity = 1.5;

    std::vector<std::string> input_names(panel::kInputColumns.begin(), panel::kInputColumns.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<panel::FirmRecord> records;
    SynthPanel out;
    std::set<std::string> prefixes;

    for (std::size_t si = 0; si < spec.sectors.size(); ++si) {
        const SectorSpec& sector = spec.sectors[si];
        std::string prefix = firm_prefix(sector.code, si);
        while (!prefixes.insert(prefix).second) prefix += std::to_string(si + 1);

        const auto registers = sector_registers(spec, sector, gen);

        // frontier[year - first_year] holds that year's frontier records.
        std::vector<std::vector<panel::FirmRecord>> frontier(
            static_cast<std::size_t>(spec.last_year - spec.first_year + 1));
        for (std::size_t f = 0; f < sector.firms; ++f) {
            const std::string id = prefix + pad3(f + 1);
            const bool on_frontier = f < sector.frontier_firms;
            if (on_frontier) out.frontier_firms.insert(id);

            std::vector<int> years;
            for (int y = spec.first_year; y <= spec.last_year; ++y) {
                if (on_frontier || detail::uniform_unit(gen) < spec.presence) years.push_back(y);
            }
            if (years.empty()) {
                years.push_back(spec.first_year +
                                static_cast<int>(detail::uniform_below(gen, static_cast<std::uint64_t>(spec.last_year - spec.first_year + 1))));
            }

            for (int y : years) {
                panel::FirmRecord rec;
                rec.firm_id = id;
                rec.sector = sector.code;
                rec.year = y;
                rec.stakes = registers[f];
                auto& peers = frontier[static_cast<std::size_t>(y - spec.first_year)];
                double planted = 1.0;
                if (on_frontier) {
                    double log_output = std::log(kProductivity);
                    for (std::size_t i = 0; i < m; ++i) {
                        const double x = round12(std::exp(detail::uniform_real(gen, std::log(1e2), std::log(1e5))));
                        rec.inputs.push_back(x);
                        log_output += exponent * std::log(x);
                    }
                    rec.revenue = round12(std::exp(log_output));
                    peers.push_back(rec);
                } else {
                    const panel::FirmRecord& src = peers[detail::uniform_below(gen, peers.size())];
                    const double factor = std::exp(detail::uniform_real(gen, std::log(spec.min_inefficiency),
                                                                        std::log(spec.max_inefficiency)));
                    const double size = std::exp(detail::uniform_real(gen, std::log(0.5), std::log(2.0)));
                    for (double x : src.inputs) rec.inputs.push_back(round12(x * factor * size));
                    rec.revenue = round12(src.revenue * size);
                    planted = 1.0 / factor;
                }
                out.planted_crs[id + ":" + std::to_string(y)] = planted;
                records.push_back(std::move(rec));
            }
        }
    }
    out.dataset = panel::PanelDataset(std::move(input_names), std::move(records));
    return out;
}

SynthSpec spec_from_json(const std::string& json_text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("synthetic spec is not valid JSON: ") + e.what());
    }
    try {
        SynthSpec spec = default_spec();
        if (j.contains("sectors")) {
            spec.sectors.clear();
            spec.targets.clear();
            for (const auto& s : j.at("sectors")) {
                SectorSpec sector;
                sector.code = s.at("code").get<std::string>();
                sector.firms = s.at("firms").get<std::size_t>();
                sector.frontier_firms = s.value("frontier_firms", std::size_t{1});
                spec.sectors.push_back(sector);
            }
        }
        spec.first_year = j.value("first_year", spec.first_year);
        spec.last_year = j.value("last_year", spec.last_year);
        spec.input_count = j.value("input_count", spec.input_count);
        spec.min_inefficiency = j.value("min_inefficiency", spec.min_inefficiency);
        spec.max_inefficiency = j.value("max_inefficiency", spec.max_inefficiency);
        spec.presence = j.value("presence", spec.presence);
        if (j.contains("targets")) {
            spec.targets.clear();
            for (const auto& t : j.at("targets")) {
                BracketTargets target;
                target.k = t.at("k").get<std::size_t>();
                for (const auto& [code, counts] : t.at("by_sector").items()) {
                    const auto v = counts.get<std::vector<std::size_t>>();
                    if (v.size() != ownership::kBracketCount) {
                        throw ValidationError("synthetic spec: bracket counts for " + code + " need 6 entries");
                    }
                    std::copy(v.begin(), v.end(), target.by_sector[code].begin());
                }
                spec.targets.push_back(std::move(target));
            }
        }
        return spec;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("synthetic spec: ") + e.what());
    }
}

}  // namespace frontier::synth
