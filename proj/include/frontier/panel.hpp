#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frontier/dea.hpp"
#include "frontier/ownership.hpp"

namespace frontier::panel {

/// Expense columns recognised in a panel file, in canonical order.
inline constexpr std::array<std::string_view, 3> kInputColumns = {
    "labour_expense", "capital_expense", "interest_expense"};
inline constexpr std::string_view kOutputColumn = "revenue";

/// The four analysed sectors, in reporting order. Other codes are accepted.
inline constexpr std::array<std::string_view, 4> kCanonicalSectors = {
    "ConsumerProducts", "IndustrialProducts", "Construction", "TradingServices"};

/// "Consumer Products", "Trading/Services", ...; unknown codes pass through.
std::string sector_display_name(std::string_view code);

struct FirmRecord {
    std::string firm_id;
    std::string sector;
    int year = 0;
    std::vector<double> inputs;   // aligned with PanelDataset::input_names
    double revenue = 0.0;
    std::vector<double> stakes;   // empty when not disclosed

    bool operator==(const FirmRecord&) const = default;
};

/// Firm-year records. (firm_id, year) pairs are unique.
class PanelDataset {
public:
    PanelDataset() = default;
    /// Throws ValidationError on duplicate (firm, year) pairs, non-positive
    /// monetary values, bad stakes, or inputs misaligned with input_names.
    PanelDataset(std::vector<std::string> input_names, std::vector<FirmRecord> records);

    const std::vector<std::string>& input_names() const { return input_names_; }
    const std::vector<FirmRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

    /// True when some firm is missing from some year that appears in the data.
    bool unbalanced() const;
    std::vector<std::string> firms() const;   // sorted, unique
    std::vector<int> years() const;           // sorted, unique
    std::size_t max_stake_count() const;

    bool operator==(const PanelDataset&) const = default;

private:
    std::vector<std::string> input_names_;
    std::vector<FirmRecord> records_;
};

struct ParseOptions {
    int min_year = 1900;
    int max_year = 2100;
};

/// Parses the wide CSV layout:
///   firm_id,sector,year,<expense columns...>,revenue[,stake_1..stake_N]
/// Columns are located by header name; at least one expense column is
/// required. Errors carry the line (and column) of the first violation.
PanelDataset parse_panel(std::string_view csv_text, const ParseOptions& options = {});

/// Inverse of parse_panel; reals are printed with 12 significant digits.
std::string render_panel(const PanelDataset& dataset);

/// DEA view of the dataset: one DMU per firm-year with revenue as the single
/// output. `inputs` selects expense columns by name (empty = all present).
dea::Panel to_dea_panel(const PanelDataset& dataset, const std::vector<std::string>& inputs = {});

/// Share registers of firm-years that disclose stakes.
std::vector<ownership::ShareRegister> share_registers(const PanelDataset& dataset);

struct StrataAllocation {
    std::vector<std::string> labels;
    std::vector<double> weights;
    std::vector<std::size_t> counts;
};

/// Largest-remainder (Hamilton) rounding of total * weight. Leftover units
/// go to the largest fractional parts; ties favour the earlier stratum.
/// Weights must be nonnegative and sum to 1 within 1e-6.
StrataAllocation allocate_strata(std::size_t total, const std::vector<double>& weights,
                                 std::vector<std::string> labels = {});

/// Draws allocation.counts[i] firms uniformly without replacement from the
/// firms of sector allocation.labels[i] and returns all of their records.
/// Reproducible from `seed` across platforms.
PanelDataset sample_strata(const PanelDataset& population, const StrataAllocation& allocation,
                           std::uint64_t seed);

}  // namespace frontier::panel
