#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frontier/dea.hpp"
#include "frontier/ownership.hpp"
#include "frontier/panel.hpp"
#include "frontier/synth.hpp"

namespace frontier::report {

enum class Format { Text, Csv, Json };
Format parse_format(const std::string& text);

struct FirmRegister {
    std::string sector;
    ownership::ShareRegister reg;
};

struct RegisterSelection {
    std::vector<FirmRegister> registers;
    std::vector<std::string> skipped;  // firms without disclosed stakes
};

/// One register per firm: the latest year that discloses stakes, or exactly
/// `year` when given. Firms with nothing to offer land in `skipped`.
RegisterSelection select_registers(const panel::PanelDataset& dataset, std::optional<int> year = std::nullopt);

/// Sector x bracket counts of CR_k. Sectors appear in canonical order
/// followed by any other codes alphabetically.
struct FrequencyTable {
    std::size_t k = 1;
    std::vector<std::string> sectors;
    std::vector<synth::BracketCounts> counts;  // parallel to sectors
    std::vector<std::string> skipped;

    std::size_t row_total(std::size_t row) const;
    std::size_t column_total(std::size_t bracket) const;
    std::size_t grand_total() const;
    bool operator==(const FrequencyTable&) const = default;
};

/// Registers without stakes are listed in `skipped`, not counted. Throws
/// ValidationError if a firm appears twice.
FrequencyTable frequency_table(const std::vector<FirmRegister>& registers, std::size_t k);
FrequencyTable frequency_table(const RegisterSelection& selection, std::size_t k);

struct DescriptiveStats {
    std::string group;   // sector code
    dea::Rts mode = dea::Rts::CRS;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1); 0 for one observation
    double min = 0.0;
    double max = 0.0;

    bool operator==(const DescriptiveStats&) const = default;
};

/// Statistics of theta_star per (sector, rts), CRS groups first, sectors in
/// canonical order. Throws ValidationError on an empty result set.
std::vector<DescriptiveStats> describe(const std::vector<dea::EfficiencyResult>& results);

/// Single-pass (Welford) summary of one sample; values nonempty.
DescriptiveStats summarize(const std::vector<double>& values);

std::string render(const FrequencyTable& table, Format format);
std::string render(const std::vector<DescriptiveStats>& stats, Format format);
std::string render(const std::vector<dea::EfficiencyResult>& results, Format format);

std::vector<DescriptiveStats> parse_stats_csv(std::string_view text);
std::vector<DescriptiveStats> parse_stats_json(std::string_view text);
FrequencyTable parse_frequency_csv(std::string_view text);

/// Orders sector codes canonically, then alphabetically.
void sort_sectors(std::vector<std::string>& sectors);

}  // namespace frontier::report
