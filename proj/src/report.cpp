#include "frontier/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "frontier/csv.hpp"
#include "frontier/error.hpp"

namespace frontier::report {

using nlohmann::json;

Format parse_format(const std::string& text) {
    if (text == "text") return Format::Text;
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw ValidationError("unknown output format '" + text + "' (expected text, csv or json)");
}

void sort_sectors(std::vector<std::string>& sectors) {
    const auto rank = [](const std::string& s) {
        auto it = std::find(panel::kCanonicalSectors.begin(), panel::kCanonicalSectors.end(), s);
        return static_cast<std::size_t>(it - panel::kCanonicalSectors.begin());
    };
    std::sort(sectors.begin(), sectors.end(), [&](const std::string& a, const std::string& b) {
        const auto ra = rank(a), rb = rank(b);
        return ra != rb ? ra < rb : a < b;
    });
}

RegisterSelection select_registers(const panel::PanelDataset& dataset, std::optional<int> year) {
    std::map<std::string, const panel::FirmRecord*> pick;
    std::set<std::string> firms;
    for (const panel::FirmRecord& r : dataset.records()) {
        firms.insert(r.firm_id);
        if (r.stakes.empty()) continue;
        if (year ? r.year != *year : false) continue;
        auto& slot = pick[r.firm_id];
        if (!slot || r.year > slot->year) slot = &r;
    }
    RegisterSelection out;
    for (const std::string& f : firms) {
        auto it = pick.find(f);
        if (it == pick.end()) {
            out.skipped.push_back(f);
        } else {
            out.registers.push_back({it->second->sector,
                                     ownership::ShareRegister(f, it->second->year, it->second->stakes)});
        }
    }
    return out;
}

std::size_t FrequencyTable::row_total(std::size_t row) const {
    std::size_t n = 0;
    for (std::size_t c : counts[row]) n += c;
    return n;
}

std::size_t FrequencyTable::column_total(std::size_t bracket) const {
    std::size_t n = 0;
    for (const auto& row : counts) n += row[bracket];
    return n;
}

std::size_t FrequencyTable::grand_total() const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) n += row_total(r);
    return n;
}

FrequencyTable frequency_table(const std::vector<FirmRegister>& registers, std::size_t k) {
    if (k == 0) throw ValidationError("concentration order k must be at least 1");
    FrequencyTable table;
    table.k = k;
    std::set<std::string> seen;
    std::map<std::string, synth::BracketCounts> rows;
    for (const FirmRegister& fr : registers) {
        if (!seen.insert(fr.reg.firm_id()).second) {
            throw ValidationError("firm " + fr.reg.firm_id() + " contributes more than one register");
        }
        if (fr.reg.stakes().empty()) {
            table.skipped.push_back(fr.reg.firm_id());
            continue;
        }
        // Sums of stakes may exceed 100 by rounding noise.
        const double value = std::min(ownership::cr(fr.reg, k).value, 100.0);
        ++rows[fr.sector][ownership::index(ownership::bracket_of(value))];
    }
    for (const auto& [sector, _] : rows) table.sectors.push_back(sector);
    sort_sectors(table.sectors);
    for (const auto& s : table.sectors) table.counts.push_back(rows[s]);
    return table;
}

FrequencyTable frequency_table(const RegisterSelection& selection, std::size_t k) {
    FrequencyTable table = frequency_table(selection.registers, k);
    table.skipped.insert(table.skipped.end(), selection.skipped.begin(), selection.skipped.end());
    std::sort(table.skipped.begin(), table.skipped.end());
    return table;
}

DescriptiveStats summarize(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("cannot summarize an empty sample");
    DescriptiveStats s;
    double mean = 0.0;
    double m2 = 0.0;
    double n = 0.0;
    s.min = values.front();
    s.max = values.front();
    for (double x : values) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = std::clamp(mean, s.min, s.max);
    s.std_dev = values.size() > 1 ? std::sqrt(std::max(0.0, m2) / (n - 1.0)) : 0.0;
    return s;
}

std::vector<DescriptiveStats> describe(const std::vector<dea::EfficiencyResult>& results) {
    if (results.empty()) throw ValidationError("no efficiency results to describe");
    std::map<std::pair<dea::Rts, std::string>, std::vector<double>> groups;
    for (const auto& r : results) groups[{r.rts, r.sector}].push_back(r.theta_star);

    std::vector<DescriptiveStats> out;
    for (dea::Rts mode : {dea::Rts::CRS, dea::Rts::VRS}) {
        std::vector<std::string> sectors;
        for (const auto& [key, _] : groups) {
            if (key.first == mode) sectors.push_back(key.second);
        }
        sort_sectors(sectors);
        for (const auto& sector : sectors) {
            DescriptiveStats s = summarize(groups[{mode, sector}]);
            s.group = sector;
            s.mode = mode;
            out.push_back(s);
        }
    }
    return out;
}

namespace {

// Display width in code points; every label used here is single-width.
std::size_t width(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string pad_left(std::string_view s, std::size_t w) {
    const std::size_t n = width(s);
    return std::string(n < w ? w - n : 0, ' ') + std::string(s);
}

std::string pad_right(std::string_view s, std::size_t w) {
    const std::size_t n = width(s);
    return std::string(s) + std::string(n < w ? w - n : 0, ' ');
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// 12 significant digits, so the JSON and CSV renderings agree.
double json_real(double v) { return std::strtod(csv::format_real(v).c_str(), nullptr); }

std::string table_title(std::size_t k) {
    switch (k) {
        case 1: return "Share controlled by the single largest shareholder (CR1)";
        case 2: return "Share controlled by the top two largest shareholders (CR2)";
        case 4: return "Share controlled by the top four largest shareholders (CR4)";
        default: return "Share controlled by the top " + std::to_string(k) + " largest shareholders (CR" + std::to_string(k) + ")";
    }
}

std::string mode_variable(dea::Rts mode) { return mode == dea::Rts::CRS ? "EFFIINCRS" : "EFFIINVRS"; }

const std::size_t kSectorWidth = 22;
const std::size_t kCountWidth = 7;

}  // namespace

std::string render(const FrequencyTable& table, Format format) {
    using ownership::kAllBrackets;
    switch (format) {
        case Format::Text: {
            std::string out = "Frequency distribution of ownership structure\n" + table_title(table.k) + "\n\n";
            out += pad_right("Sector of Firms", kSectorWidth);
            for (auto b : kAllBrackets) out += pad_left(ownership::label(b), kCountWidth);
            out += pad_left("Total", kCountWidth) + "\n";
            for (std::size_t r = 0; r < table.sectors.size(); ++r) {
                out += pad_right(panel::sector_display_name(table.sectors[r]), kSectorWidth);
                for (std::size_t c : table.counts[r]) out += pad_left(std::to_string(c), kCountWidth);
                out += pad_left(std::to_string(table.row_total(r)), kCountWidth) + "\n";
            }
            out += pad_right("Total", kSectorWidth);
            for (std::size_t b = 0; b < kAllBrackets.size(); ++b) {
                out += pad_left(std::to_string(table.column_total(b)), kCountWidth);
            }
            out += pad_left(std::to_string(table.grand_total()), kCountWidth) + "\n";
            out += "Skipped firms (no disclosed stakes): " + std::to_string(table.skipped.size()) + "\n";
            return out;
        }
        case Format::Csv: {
            std::vector<std::string> header = {"k", "sector"};
            for (auto b : kAllBrackets) header.emplace_back(ownership::label(b));
            header.emplace_back("total");
            std::string out = csv::join(header);
            const std::string k = std::to_string(table.k);
            for (std::size_t r = 0; r < table.sectors.size(); ++r) {
                std::vector<std::string> cells = {k, table.sectors[r]};
                for (std::size_t c : table.counts[r]) cells.push_back(std::to_string(c));
                cells.push_back(std::to_string(table.row_total(r)));
                out += csv::join(cells);
            }
            std::vector<std::string> cells = {k, "Total"};
            for (std::size_t b = 0; b < kAllBrackets.size(); ++b) cells.push_back(std::to_string(table.column_total(b)));
            cells.push_back(std::to_string(table.grand_total()));
            out += csv::join(cells);
            return out;
        }
        case Format::Json: {
            json j;
            j["k"] = table.k;
            j["rows"] = json::array();
            for (std::size_t r = 0; r < table.sectors.size(); ++r) {
                json counts = json::object();
                for (auto b : kAllBrackets) counts[std::string(ownership::label(b))] = table.counts[r][ownership::index(b)];
                j["rows"].push_back({{"sector", table.sectors[r]}, {"counts", counts}, {"total", table.row_total(r)}});
            }
            json totals = json::object();
            for (auto b : kAllBrackets) totals[std::string(ownership::label(b))] = table.column_total(ownership::index(b));
            j["column_totals"] = totals;
            j["grand_total"] = table.grand_total();
            j["skipped"] = table.skipped;
            return j.dump(2) + "\n";
        }
    }
    throw ValidationError("unknown output format");
}

std::string render(const std::vector<DescriptiveStats>& stats, Format format) {
    switch (format) {
        case Format::Text: {
            std::string out = "Descriptive statistics of estimated efficiency scores\n\n";
            out += pad_right("Variable", 12) + pad_right("Sector of Firm", kSectorWidth) + pad_left("Mean", 8) +
                   pad_left("Std. Dev", 10) + pad_left("Min", 8) + pad_left("Max", 8) + "\n";
            std::optional<dea::Rts> last;
            for (const auto& s : stats) {
                const std::string variable = (last && *last == s.mode) ? "" : mode_variable(s.mode);
                last = s.mode;
                out += pad_right(variable, 12) + pad_right(panel::sector_display_name(s.group), kSectorWidth) +
                       pad_left(fixed(s.mean, 3), 8) + pad_left(fixed(s.std_dev, 3), 10) +
                       pad_left(fixed(s.min, 3), 8) + pad_left(fixed(s.max, 3), 8) + "\n";
            }
            return out;
        }
        case Format::Csv: {
            std::string out = csv::join({"group", "mode", "mean", "std_dev", "min", "max"});
            for (const auto& s : stats) {
                out += csv::join({s.group, dea::to_string(s.mode), csv::format_real(s.mean),
                                  csv::format_real(s.std_dev), csv::format_real(s.min), csv::format_real(s.max)});
            }
            return out;
        }
        case Format::Json: {
            json j = json::array();
            for (const auto& s : stats) {
                j.push_back({{"group", s.group},
                             {"mode", dea::to_string(s.mode)},
                             {"mean", json_real(s.mean)},
                             {"std_dev", json_real(s.std_dev)},
                             {"min", json_real(s.min)},
                             {"max", json_real(s.max)}});
            }
            return j.dump(2) + "\n";
        }
    }
    throw ValidationError("unknown output format");
}

namespace {

std::string peers_cell(const dea::EfficiencyResult& r) {
    std::string out;
    for (const auto& p : r.lambdas) {
        if (!out.empty()) out.push_back(';');
        out += p.label + "=" + csv::format_real(p.weight);
    }
    return out;
}

}  // namespace

std::string render(const std::vector<dea::EfficiencyResult>& results, Format format) {
    switch (format) {
        case Format::Text: {
            std::string out = pad_right("DMU", 16) + pad_right("Group", 26) + pad_left("RTS", 4) +
                              pad_left("Theta", 12) + pad_left("Eff", 5) + "  Peers\n";
            for (const auto& r : results) {
                out += pad_right(r.label(), 16) + pad_right(r.group_key, 26) + pad_left(dea::to_string(r.rts), 4) +
                       pad_left(fixed(r.theta_star, 6), 12) + pad_left(r.efficient ? "yes" : "no", 5) + "  " +
                       peers_cell(r) + "\n";
            }
            return out;
        }
        case Format::Csv: {
            std::string out = csv::join({"firm_id", "sector", "year", "group", "rts", "theta", "efficient", "peers"});
            for (const auto& r : results) {
                out += csv::join({r.dmu_id, r.sector, r.year ? std::to_string(*r.year) : std::string(), r.group_key,
                                  dea::to_string(r.rts), csv::format_real(r.theta_star), r.efficient ? "true" : "false",
                                  peers_cell(r)});
            }
            return out;
        }
        case Format::Json: {
            json j = json::array();
            for (const auto& r : results) {
                json peers = json::object();
                for (const auto& p : r.lambdas) peers[p.label] = json_real(p.weight);
                json row = {{"firm_id", r.dmu_id}, {"sector", r.sector},  {"group", r.group_key},
                            {"rts", dea::to_string(r.rts)}, {"theta", json_real(r.theta_star)},
                            {"efficient", r.efficient}, {"peers", peers}};
                row["year"] = r.year ? json(*r.year) : json(nullptr);
                j.push_back(std::move(row));
            }
            return j.dump(2) + "\n";
        }
    }
    throw ValidationError("unknown output format");
}

namespace {

double real_cell(const csv::Row& row, std::size_t c) {
    double v = 0.0;
    if (c >= row.cells.size() || !csv::parse_real(row.cells[c], v)) {
        throw ValidationError("line " + std::to_string(row.line) + ": bad number in column " + std::to_string(c + 1));
    }
    return v;
}

std::size_t count_cell(const csv::Row& row, std::size_t c) {
    long long v = 0;
    if (c >= row.cells.size() || !csv::parse_int(row.cells[c], v) || v < 0) {
        throw ValidationError("line " + std::to_string(row.line) + ": bad count in column " + std::to_string(c + 1));
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<DescriptiveStats> parse_stats_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    const std::vector<std::string> header = {"group", "mode", "mean", "std_dev", "min", "max"};
    if (rows.empty() || rows.front().cells != header) {
        throw ValidationError("statistics CSV must start with header group,mode,mean,std_dev,min,max");
    }
    std::vector<DescriptiveStats> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.cells.size() != header.size()) {
            throw ValidationError("line " + std::to_string(row.line) + ": expected 6 cells");
        }
        DescriptiveStats s;
        s.group = row.cells[0];
        s.mode = dea::parse_rts(row.cells[1]);
        s.mean = real_cell(row, 2);
        s.std_dev = real_cell(row, 3);
        s.min = real_cell(row, 4);
        s.max = real_cell(row, 5);
        out.push_back(s);
    }
    return out;
}

std::vector<DescriptiveStats> parse_stats_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        std::vector<DescriptiveStats> out;
        for (const auto& e : j) {
            DescriptiveStats s;
            s.group = e.at("group").get<std::string>();
            s.mode = dea::parse_rts(e.at("mode").get<std::string>());
            s.mean = e.at("mean").get<double>();
            s.std_dev = e.at("std_dev").get<double>();
            s.min = e.at("min").get<double>();
            s.max = e.at("max").get<double>();
            out.push_back(s);
        }
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad statistics JSON: ") + e.what());
    }
}

FrequencyTable parse_frequency_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    constexpr std::size_t kCells = 2 + ownership::kBracketCount + 1;
    if (rows.empty() || rows.front().cells.size() != kCells || rows.front().cells[0] != "k") {
        throw ValidationError("frequency CSV must start with header k,sector,<brackets>,total");
    }
    FrequencyTable table;
    bool saw_total = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.cells.size() != kCells) {
            throw ValidationError("line " + std::to_string(row.line) + ": expected " + std::to_string(kCells) + " cells");
        }
        table.k = count_cell(row, 0);
        if (row.cells[1] == "Total") {
            saw_total = true;
            for (std::size_t b = 0; b < ownership::kBracketCount; ++b) {
                if (count_cell(row, 2 + b) != table.column_total(b)) {
                    throw ValidationError("line " + std::to_string(row.line) + ": Total row disagrees with column sums");
                }
            }
            continue;
        }
        synth::BracketCounts counts{};
        for (std::size_t b = 0; b < ownership::kBracketCount; ++b) counts[b] = count_cell(row, 2 + b);
        table.sectors.push_back(row.cells[1]);
        table.counts.push_back(counts);
        if (count_cell(row, kCells - 1) != table.row_total(table.sectors.size() - 1)) {
            throw ValidationError("line " + std::to_string(row.line) + ": row total disagrees with its counts");
        }
    }
    if (!saw_total) throw ValidationError("frequency CSV has no Total row");
    return table;
}

}  // namespace frontier::report
