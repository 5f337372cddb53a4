#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frontier/ownership.hpp"
#include "frontier/panel.hpp"

namespace frontier::synth {

using BracketCounts = std::array<std::size_t, ownership::kBracketCount>;

struct SectorSpec {
    std::string code;
    std::size_t firms = 0;
    /// Firms placed on the production frontier in every year.
    std::size_t frontier_firms = 1;
};

/// Requested number of firms per ownership bracket of CR_k, per sector.
/// Counts may sum to less than the sector size; the rest are unconstrained.
struct BracketTargets {
    std::size_t k = 1;
    std::map<std::string, BracketCounts> by_sector;
};

struct SynthSpec {
    std::vector<SectorSpec> sectors;
    int first_year = 2000;
    int last_year = 2010;
    std::size_t input_count = 3;
    /// Inefficient firm-years copy a same-year frontier firm-year with inputs
    /// multiplied by a factor drawn log-uniformly from this range (> 1).
    double min_inefficiency = 1.1;
    double max_inefficiency = 10.0;
    /// Probability that a non-frontier firm reports in a given year.
    double presence = 0.85;
    std::vector<BracketTargets> targets;
};

struct SynthPanel {
    panel::PanelDataset dataset;
    /// Expected CRS score for every firm-year label ("firm:year").
    std::map<std::string, double> planted_crs;
    std::set<std::string> frontier_firms;
};

/// Default fixture: 29/57/12/58 firms over 2000-2010 with three inputs,
/// CR1 planted to the single-largest-shareholder distribution and CR2 to the
/// top-two distribution reported for the sampled listed firms.
SynthSpec default_spec();

/// Frontier firm-years lie on y = 1.5 * prod x_i^(1/m), so each is CRS
/// efficient; a copy of one with inputs scaled by f scores exactly 1/f under
/// CRS. Every firm keeps one share register across its years. Throws
/// ValidationError for an infeasible spec. Reals are rounded to 12
/// significant digits so the dataset survives a render/parse round trip.
SynthPanel generate(const SynthSpec& spec, std::uint64_t seed);

/// Reads a generator spec from JSON (same field names as SynthSpec; targets
/// as {"k": 1, "by_sector": {"Code": [6 counts]}}). Missing fields keep
/// their defaults; a missing "sectors" array means default_spec().sectors.
SynthSpec spec_from_json(const std::string& json_text);

}  // namespace frontier::synth
