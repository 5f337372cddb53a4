#include "frontier/dea.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include "frontier/error.hpp"

namespace frontier::dea {

std::string Dmu::label() const {
    return year ? id + ":" + std::to_string(*year) : id;
}

std::string EfficiencyResult::label() const {
    return year ? dmu_id + ":" + std::to_string(*year) : dmu_id;
}

namespace {

void check_quantities(const Dmu& d, const std::vector<double>& values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0) {
            throw ValidationError("DMU " + d.label() + ": " + what + " " + std::to_string(i + 1) +
                                  " must be a positive finite number");
        }
    }
}

}  // namespace

Panel::Panel(std::vector<Dmu> dmus) : dmus_(std::move(dmus)) {
    if (dmus_.empty()) throw ValidationError("panel has no DMUs");
    const std::size_t m = dmus_.front().inputs.size();
    const std::size_t s = dmus_.front().outputs.size();
    if (m == 0) throw ValidationError("DMUs need at least one input");
    if (s == 0) throw ValidationError("DMUs need at least one output");
    std::set<std::string> seen;
    for (const Dmu& d : dmus_) {
        if (d.inputs.size() != m || d.outputs.size() != s) {
            throw ValidationError("DMU " + d.label() + " has mismatched input/output dimensions");
        }
        check_quantities(d, d.inputs, "input");
        check_quantities(d, d.outputs, "output");
        if (!seen.insert(d.label()).second) {
            throw ValidationError("duplicate DMU " + d.label());
        }
    }
}

std::size_t Panel::index_of(const Dmu& target) const {
    const std::string wanted = target.label();
    for (std::size_t j = 0; j < dmus_.size(); ++j) {
        if (dmus_[j].label() == wanted) return j;
    }
    throw ValidationError("DMU " + wanted + " is not a member of the panel");
}

lp::LinearProgram build_envelopment_lp(const Panel& panel, std::size_t target, Rts rts) {
    if (target >= panel.size()) {
        throw ValidationError("target index out of range");
    }
    const Dmu& t = panel[target];
    const std::size_t n = panel.size();
    const std::size_t m = panel.input_count();
    const std::size_t s = panel.output_count();
    if (t.inputs.size() != m || t.outputs.size() != s) {
        throw ValidationError("target dimensions do not match the panel");
    }

    lp::LinearProgram lp;
    lp.sense = lp::Sense::Minimize;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[0] = 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        lp::Constraint row;
        row.coefficients.resize(n + 1);
        row.coefficients[0] = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            row.coefficients[j + 1] = panel[j].inputs[i] / t.inputs[i];
        }
        row.relation = lp::Relation::LE;
        row.rhs = 0.0;
        lp.constraints.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < s; ++r) {
        lp::Constraint row;
        row.coefficients.resize(n + 1);
        row.coefficients[0] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row.coefficients[j + 1] = panel[j].outputs[r] / t.outputs[r];
        }
        row.relation = lp::Relation::GE;
        row.rhs = 1.0;
        lp.constraints.push_back(std::move(row));
    }
    if (rts == Rts::VRS) {
        lp::Constraint row;
        row.coefficients.assign(n + 1, 1.0);
        row.coefficients[0] = 0.0;
        row.relation = lp::Relation::EQ;
        row.rhs = 1.0;
        lp.constraints.push_back(std::move(row));
    }
    return lp;
}

lp::LinearProgram build_envelopment_lp(const Dmu& target, const Panel& panel, Rts rts) {
    return build_envelopment_lp(panel, panel.index_of(target), rts);
}

EfficiencyResult efficiency(const Panel& panel, std::size_t target, Rts rts, double tolerance) {
    const lp::LinearProgram program = build_envelopment_lp(panel, target, rts);
    const lp::LpSolution sol = lp::solve(program, tolerance);
    const Dmu& t = panel[target];
    if (!sol.optimal()) {
        throw InternalError("envelopment LP for " + t.label() + " is " + lp::to_string(sol.status) +
                            "; input data is inconsistent");
    }

    double theta = sol.objective_value;
    if (!(theta > 0.0) || theta > 1.0 + kClassificationTolerance) {
        throw InternalError("envelopment LP for " + t.label() + " returned theta " +
                            std::to_string(theta) + " outside (0, 1]");
    }
    theta = std::min(theta, 1.0);

    EfficiencyResult out;
    out.dmu_id = t.id;
    out.sector = t.sector;
    out.year = t.year;
    out.theta_star = theta;
    out.efficient = theta >= 1.0 - kClassificationTolerance;
    out.rts = rts;
    out.iterations = sol.iterations;
    for (std::size_t j = 0; j < panel.size(); ++j) {
        const double w = sol.variable_values[j + 1];
        if (w > kLambdaThreshold) out.lambdas.push_back({panel[j].label(), w});
    }
    return out;
}

EfficiencyResult efficiency(const Dmu& target, const Panel& panel, Rts rts, double tolerance) {
    return efficiency(panel, panel.index_of(target), rts, tolerance);
}

std::string group_key(const Dmu& dmu, GroupingRule rule) {
    const std::string year = dmu.year ? std::to_string(*dmu.year) : std::string("-");
    switch (rule) {
        case GroupingRule::Pooled: return "all";
        case GroupingRule::Sector: return dmu.sector;
        case GroupingRule::Year: return year;
        case GroupingRule::SectorYear: return dmu.sector + "/" + year;
    }
    return "all";
}

std::vector<EfficiencyResult> score_all(const Panel& panel, Rts rts, GroupingRule grouping,
                                        const ScoreOptions& options) {
    if (panel.size() == 0) throw ValidationError("panel has no DMUs");

    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t j = 0; j < panel.size(); ++j) {
        members[group_key(panel[j], grouping)].push_back(j);
    }

    struct Job {
        const Panel* group;
        std::size_t local;
        std::size_t global;
        const std::string* key;
    };
    std::vector<Panel> groups;
    groups.reserve(members.size());
    std::vector<std::pair<const std::string*, std::vector<std::size_t>>> order;
    for (auto& [key, idx] : members) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return panel[a].label() < panel[b].label();
        });
        std::vector<Dmu> dmus;
        dmus.reserve(idx.size());
        for (std::size_t j : idx) dmus.push_back(panel[j]);
        groups.emplace_back(std::move(dmus));
        order.emplace_back(&key, idx);
    }
    std::vector<Job> jobs;
    jobs.reserve(panel.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t local = 0; local < order[g].second.size(); ++local) {
            jobs.push_back({&groups[g], local, order[g].second[local], order[g].first});
        }
    }

    std::vector<EfficiencyResult> results(panel.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size() || failed.load()) return;
            try {
                EfficiencyResult r = efficiency(*jobs[k].group, jobs[k].local, rts, options.tolerance);
                r.group_key = *jobs[k].key;
                results[jobs[k].global] = std::move(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

const char* to_string(Rts rts) { return rts == Rts::CRS ? "crs" : "vrs"; }

const char* to_string(GroupingRule rule) {
    switch (rule) {
        case GroupingRule::Pooled: return "pooled";
        case GroupingRule::Sector: return "sector";
        case GroupingRule::Year: return "year";
        case GroupingRule::SectorYear: return "sector-year";
    }
    return "pooled";
}

Rts parse_rts(const std::string& text) {
    if (text == "crs" || text == "CRS") return Rts::CRS;
    if (text == "vrs" || text == "VRS") return Rts::VRS;
    throw ValidationError("unknown returns-to-scale mode '" + text + "' (expected crs or vrs)");
}

GroupingRule parse_grouping(const std::string& text) {
    if (text == "pooled") return GroupingRule::Pooled;
    if (text == "sector") return GroupingRule::Sector;
    if (text == "year") return GroupingRule::Year;
    if (text == "sector-year") return GroupingRule::SectorYear;
    throw ValidationError("unknown grouping '" + text + "' (expected sector, year, sector-year or pooled)");
}

}  // namespace frontier::dea
