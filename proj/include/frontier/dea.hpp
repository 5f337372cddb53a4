#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontier/lp.hpp"

namespace frontier::dea {

/// Returns-to-scale assumption. VRS adds the convexity row sum(lambda) = 1.
enum class Rts { CRS, VRS };

/// How DMUs are partitioned into reference groups before scoring.
enum class GroupingRule { Pooled, Sector, Year, SectorYear };

inline constexpr double kClassificationTolerance = 1e-6;
inline constexpr double kLambdaThreshold = 1e-7;

/// One decision-making unit: strictly positive input and output quantities
/// plus the labels used for grouping.
struct Dmu {
    std::string id;
    std::string sector;
    std::optional<int> year;
    std::vector<double> inputs;
    std::vector<double> outputs;

    /// "id" or "id:year"; unique within a panel.
    std::string label() const;
};

/// Reference set. All members share input and output dimensions.
class Panel {
public:
    Panel() = default;
    /// Throws ValidationError on empty input, mixed dimensions, duplicate
    /// labels, or non-positive / non-finite quantities.
    explicit Panel(std::vector<Dmu> dmus);

    const std::vector<Dmu>& dmus() const { return dmus_; }
    std::size_t size() const { return dmus_.size(); }
    std::size_t input_count() const { return dmus_.empty() ? 0 : dmus_.front().inputs.size(); }
    std::size_t output_count() const { return dmus_.empty() ? 0 : dmus_.front().outputs.size(); }
    const Dmu& operator[](std::size_t i) const { return dmus_[i]; }

    /// Index of the member with the same label; throws if absent.
    std::size_t index_of(const Dmu& target) const;

private:
    std::vector<Dmu> dmus_;
};

struct Peer {
    std::string label;
    double weight = 0.0;
};

struct EfficiencyResult {
    std::string dmu_id;
    std::string sector;
    std::optional<int> year;
    double theta_star = 1.0;
    std::vector<Peer> lambdas;   // weights above kLambdaThreshold, panel order
    bool efficient = true;
    Rts rts = Rts::CRS;
    std::string group_key;
    std::size_t iterations = 0;

    std::string label() const;
};

/// Envelopment LP over (theta, lambda_1..lambda_n): minimize theta subject to
///   sum_j lambda_j x_ij <= theta x_i0   (one row per input)
///   sum_j lambda_j y_rj >= y_r0         (one row per output)
///   sum_j lambda_j = 1                  (VRS only)
/// Each row is divided by the target's own quantity, so the target's
/// coefficients are exactly 1; this leaves the feasible set unchanged.
lp::LinearProgram build_envelopment_lp(const Panel& panel, std::size_t target, Rts rts);
lp::LinearProgram build_envelopment_lp(const Dmu& target, const Panel& panel, Rts rts);

EfficiencyResult efficiency(const Panel& panel, std::size_t target, Rts rts,
                            double tolerance = lp::kDefaultTolerance);
EfficiencyResult efficiency(const Dmu& target, const Panel& panel, Rts rts,
                            double tolerance = lp::kDefaultTolerance);

struct ScoreOptions {
    double tolerance = lp::kDefaultTolerance;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Group key of a DMU under a grouping rule ("all", "<sector>", "<year>",
/// "<sector>/<year>").
std::string group_key(const Dmu& dmu, GroupingRule rule);

/// Scores every DMU against the members of its own group. Results follow
/// panel order; within a group members are ordered by label before the LPs
/// are built, so the output does not depend on input order.
std::vector<EfficiencyResult> score_all(const Panel& panel, Rts rts, GroupingRule grouping,
                                        const ScoreOptions& options = {});

const char* to_string(Rts rts);
const char* to_string(GroupingRule rule);
Rts parse_rts(const std::string& text);
GroupingRule parse_grouping(const std::string& text);

}  // namespace frontier::dea
