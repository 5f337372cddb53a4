#include "frontier/panel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "frontier/csv.hpp"
#include "frontier/error.hpp"
#include "random.hpp"

namespace frontier::panel {

std::string sector_display_name(std::string_view code) {
    if (code == "ConsumerProducts") return "Consumer Products";
    if (code == "IndustrialProducts") return "Industrial Products";
    if (code == "Construction") return "Construction";
    if (code == "TradingServices") return "Trading/Services";
    return std::string(code);
}

namespace {

std::string where(const FirmRecord& r) {
    return "firm " + r.firm_id + " (" + std::to_string(r.year) + ")";
}

void validate_record(const FirmRecord& r, std::size_t input_count) {
    if (r.firm_id.empty()) throw ValidationError("record with empty firm_id");
    if (r.sector.empty()) throw ValidationError(where(r) + ": empty sector");
    if (r.inputs.size() != input_count) {
        throw ValidationError(where(r) + ": expected " + std::to_string(input_count) + " inputs");
    }
    for (double v : r.inputs) {
        if (!std::isfinite(v) || v <= 0.0) throw ValidationError(where(r) + ": expenses must be positive");
    }
    if (!std::isfinite(r.revenue) || r.revenue <= 0.0) {
        throw ValidationError(where(r) + ": revenue must be positive");
    }
    if (!r.stakes.empty()) ownership::ShareRegister(r.firm_id, r.year, r.stakes);
}

}  // namespace

PanelDataset::PanelDataset(std::vector<std::string> input_names, std::vector<FirmRecord> records)
    : input_names_(std::move(input_names)), records_(std::move(records)) {
    if (input_names_.empty()) throw ValidationError("dataset needs at least one input column");
    std::set<std::pair<std::string, int>> seen;
    for (const FirmRecord& r : records_) {
        validate_record(r, input_names_.size());
        if (!seen.emplace(r.firm_id, r.year).second) {
            throw ValidationError("duplicate record for " + where(r));
        }
    }
}

bool PanelDataset::unbalanced() const {
    return records_.size() != firms().size() * years().size();
}

std::vector<std::string> PanelDataset::firms() const {
    std::set<std::string> s;
    for (const auto& r : records_) s.insert(r.firm_id);
    return {s.begin(), s.end()};
}

std::vector<int> PanelDataset::years() const {
    std::set<int> s;
    for (const auto& r : records_) s.insert(r.year);
    return {s.begin(), s.end()};
}

std::size_t PanelDataset::max_stake_count() const {
    std::size_t n = 0;
    for (const auto& r : records_) n = std::max(n, r.stakes.size());
    return n;
}

PanelDataset parse_panel(std::string_view csv_text, const ParseOptions& options) {
    const std::vector<csv::Row> rows = csv::parse(csv_text);
    if (rows.empty()) throw ValidationError("header row missing");

    const csv::Row& header = rows.front();
    const auto at_header = [&](const std::string& msg) {
        return ValidationError("line " + std::to_string(header.line) + ": " + msg);
    };

    std::map<std::string, std::size_t> column;
    std::map<long long, std::size_t> stake_column;
    for (std::size_t c = 0; c < header.cells.size(); ++c) {
        const std::string& name = header.cells[c];
        if (name.starts_with("stake_")) {
            long long k = 0;
            if (!csv::parse_int(std::string_view(name).substr(6), k) || k < 1) {
                throw at_header("bad stake column '" + name + "'");
            }
            if (!stake_column.emplace(k, c).second) throw at_header("duplicate column '" + name + "'");
            continue;
        }
        const bool known = name == "firm_id" || name == "sector" || name == "year" ||
                           name == kOutputColumn ||
                           std::find(kInputColumns.begin(), kInputColumns.end(), name) != kInputColumns.end();
        if (!known) throw at_header("unknown column '" + name + "'");
        if (!column.emplace(name, c).second) throw at_header("duplicate column '" + name + "'");
    }
    for (const char* required : {"firm_id", "sector", "year", "revenue"}) {
        if (!column.count(required)) throw at_header(std::string("missing column '") + required + "'");
    }
    std::vector<std::string> input_names;
    std::vector<std::size_t> input_cols;
    for (std::string_view name : kInputColumns) {
        auto it = column.find(std::string(name));
        if (it != column.end()) {
            input_names.emplace_back(name);
            input_cols.push_back(it->second);
        }
    }
    if (input_names.empty()) throw at_header("no expense columns (need at least one of labour_expense, capital_expense, interest_expense)");
    std::vector<std::size_t> stake_cols;
    for (const auto& [k, c] : stake_column) {
        if (k != static_cast<long long>(stake_cols.size()) + 1) {
            throw at_header("stake columns must be numbered stake_1..stake_N without gaps");
        }
        stake_cols.push_back(c);
    }

    std::vector<FirmRecord> records;
    std::map<std::pair<std::string, int>, std::size_t> first_line;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        const auto fail = [&](const std::string& col, const std::string& msg) {
            return ValidationError("line " + std::to_string(row.line) + ", column '" + col + "': " + msg);
        };
        if (row.cells.size() > header.cells.size()) {
            throw ValidationError("line " + std::to_string(row.line) + ": " +
                                  std::to_string(row.cells.size()) + " cells but header has " +
                                  std::to_string(header.cells.size()));
        }
        const auto cell = [&](std::size_t c) -> std::string_view {
            return c < row.cells.size() ? std::string_view(row.cells[c]) : std::string_view();
        };
        const auto positive = [&](std::size_t c, const std::string& name) {
            double v = 0.0;
            if (cell(c).empty()) throw fail(name, "missing value");
            if (!csv::parse_real(cell(c), v)) throw fail(name, "not a number: '" + std::string(cell(c)) + "'");
            if (v <= 0.0) throw fail(name, "must be positive (got " + std::string(cell(c)) + ")");
            return v;
        };

        FirmRecord rec;
        rec.firm_id = std::string(cell(column["firm_id"]));
        if (rec.firm_id.empty()) throw fail("firm_id", "missing value");
        rec.sector = std::string(cell(column["sector"]));
        if (rec.sector.empty()) throw fail("sector", "missing value");
        long long year = 0;
        if (!csv::parse_int(cell(column["year"]), year)) {
            throw fail("year", "not an integer: '" + std::string(cell(column["year"])) + "'");
        }
        if (year < options.min_year || year > options.max_year) {
            throw fail("year", std::to_string(year) + " outside " + std::to_string(options.min_year) +
                                   "-" + std::to_string(options.max_year));
        }
        rec.year = static_cast<int>(year);
        for (std::size_t k = 0; k < input_cols.size(); ++k) {
            rec.inputs.push_back(positive(input_cols[k], input_names[k]));
        }
        rec.revenue = positive(column["revenue"], "revenue");

        bool gap = false;
        for (std::size_t k = 0; k < stake_cols.size(); ++k) {
            const std::string name = "stake_" + std::to_string(k + 1);
            const std::string_view text = cell(stake_cols[k]);
            if (text.find_first_not_of(" \t") == std::string_view::npos) {
                gap = true;
                continue;
            }
            if (gap) throw fail(name, "stake after an empty stake cell");
            double v = 0.0;
            if (!csv::parse_real(text, v)) throw fail(name, "not a number: '" + std::string(text) + "'");
            if (v <= 0.0 || v > 100.0) throw fail(name, "stake must be in (0, 100]");
            rec.stakes.push_back(v);
        }
        if (!rec.stakes.empty()) {
            try {
                ownership::ShareRegister(rec.firm_id, rec.year, rec.stakes);
            } catch (const ValidationError& e) {
                throw ValidationError("line " + std::to_string(row.line) + ": " + e.what());
            }
        }

        const auto key = std::make_pair(rec.firm_id, rec.year);
        if (auto [it, inserted] = first_line.emplace(key, row.line); !inserted) {
            throw ValidationError("line " + std::to_string(row.line) + ": duplicate record for firm " +
                                  rec.firm_id + " year " + std::to_string(rec.year) +
                                  " (first seen on line " + std::to_string(it->second) + ")");
        }
        records.push_back(std::move(rec));
    }
    return PanelDataset(std::move(input_names), std::move(records));
}

std::string render_panel(const PanelDataset& dataset) {
    const std::size_t stakes = dataset.max_stake_count();
    std::vector<std::string> header = {"firm_id", "sector", "year"};
    for (const auto& n : dataset.input_names()) header.push_back(n);
    header.emplace_back(kOutputColumn);
    for (std::size_t k = 1; k <= stakes; ++k) header.push_back("stake_" + std::to_string(k));

    std::string out = csv::join(header);
    for (const FirmRecord& r : dataset.records()) {
        std::vector<std::string> cells = {r.firm_id, r.sector, std::to_string(r.year)};
        for (double v : r.inputs) cells.push_back(csv::format_real(v));
        cells.push_back(csv::format_real(r.revenue));
        for (std::size_t k = 0; k < stakes; ++k) {
            cells.push_back(k < r.stakes.size() ? csv::format_real(r.stakes[k]) : std::string());
        }
        out += csv::join(cells);
    }
    return out;
}

dea::Panel to_dea_panel(const PanelDataset& dataset, const std::vector<std::string>& inputs) {
    std::vector<std::size_t> pick;
    if (inputs.empty()) {
        pick.resize(dataset.input_names().size());
        std::iota(pick.begin(), pick.end(), 0);
    } else {
        for (const std::string& name : inputs) {
            const auto& names = dataset.input_names();
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw ValidationError("input column '" + name + "' not present in dataset");
            pick.push_back(static_cast<std::size_t>(it - names.begin()));
        }
    }
    std::vector<dea::Dmu> dmus;
    dmus.reserve(dataset.records().size());
    for (const FirmRecord& r : dataset.records()) {
        dea::Dmu d;
        d.id = r.firm_id;
        d.sector = r.sector;
        d.year = r.year;
        for (std::size_t i : pick) d.inputs.push_back(r.inputs[i]);
        d.outputs = {r.revenue};
        dmus.push_back(std::move(d));
    }
    return dea::Panel(std::move(dmus));
}

std::vector<ownership::ShareRegister> share_registers(const PanelDataset& dataset) {
    std::vector<ownership::ShareRegister> out;
    for (const FirmRecord& r : dataset.records()) {
        if (!r.stakes.empty()) out.emplace_back(r.firm_id, r.year, r.stakes);
    }
    return out;
}

StrataAllocation allocate_strata(std::size_t total, const std::vector<double>& weights,
                                 std::vector<std::string> labels) {
    if (total == 0) throw ValidationError("sample total must be positive");
    if (weights.empty()) throw ValidationError("no strata weights given");
    if (!labels.empty() && labels.size() != weights.size()) {
        throw ValidationError("got " + std::to_string(labels.size()) + " stratum labels for " +
                              std::to_string(weights.size()) + " weights");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw ValidationError("stratum weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw ValidationError("stratum weights sum to " + csv::format_real(sum) + ", expected 1");
    }
    if (labels.empty()) {
        for (std::size_t i = 0; i < weights.size(); ++i) labels.push_back("stratum_" + std::to_string(i + 1));
    }

    StrataAllocation out;
    out.labels = std::move(labels);
    out.weights = weights;
    out.counts.resize(weights.size());
    std::vector<double> remainder(weights.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double quota = static_cast<double>(total) * weights[i] / sum;
        const double floor = std::floor(quota + 1e-9);
        out.counts[i] = static_cast<std::size_t>(floor);
        remainder[i] = std::max(0.0, quota - floor);
        assigned += out.counts[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b] + 1e-9;
    });
    for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size()) {
        ++out.counts[order[i]];
        ++assigned;
    }
    return out;
}

PanelDataset sample_strata(const PanelDataset& population, const StrataAllocation& allocation,
                           std::uint64_t seed) {
    if (allocation.labels.size() != allocation.counts.size()) {
        throw ValidationError("allocation labels and counts differ in length");
    }
    std::map<std::string, std::set<std::string>> firms_by_sector;
    std::map<std::string, std::string> sector_of;
    for (const FirmRecord& r : population.records()) {
        if (sector_of.emplace(r.firm_id, r.sector).second) firms_by_sector[r.sector].insert(r.firm_id);
    }

    std::mt19937_64 gen(seed);
    std::set<std::string> chosen;
    for (std::size_t s = 0; s < allocation.labels.size(); ++s) {
        const auto it = firms_by_sector.find(allocation.labels[s]);
        std::vector<std::string> pool;
        if (it != firms_by_sector.end()) pool.assign(it->second.begin(), it->second.end());
        const std::size_t want = allocation.counts[s];
        if (want > pool.size()) {
            throw ValidationError("stratum '" + allocation.labels[s] + "' has " + std::to_string(pool.size()) +
                                  " firms but " + std::to_string(want) + " were allocated");
        }
        // Partial Fisher-Yates: the first `want` slots end up a uniform sample.
        for (std::size_t i = 0; i < want; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(detail::uniform_below(gen, pool.size() - i));
            std::swap(pool[i], pool[j]);
            chosen.insert(pool[i]);
        }
    }

    std::vector<FirmRecord> records;
    for (const FirmRecord& r : population.records()) {
        if (chosen.count(r.firm_id)) records.push_back(r);
    }
    return PanelDataset(population.input_names(), std::move(records));
}

}  // namespace frontier::panel
