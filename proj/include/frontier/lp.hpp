#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frontier::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LE, EQ, GE };
enum class Status { Optimal, Infeasible, Unbounded };

inline constexpr double kDefaultTolerance = 1e-9;

struct Constraint {
    std::vector<double> coefficients;
    Relation relation = Relation::LE;
    double rhs = 0.0;
};

/// Linear program over nonnegative variables.
struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<Constraint> constraints;

    std::size_t variable_count() const { return objective.size(); }

    /// Throws ValidationError unless every row has variable_count()
    /// coefficients and there is at least one variable.
    void validate() const;
};

struct LpSolution {
    Status status = Status::Infeasible;
    double objective_value = 0.0;          // meaningful iff Optimal
    std::vector<double> variable_values;   // empty unless Optimal
    std::size_t iterations = 0;

    bool optimal() const { return status == Status::Optimal; }
};

/// Two-phase dense-tableau simplex with Bland's rule.
///
/// Entries with magnitude below `tolerance` are treated as zero when
/// choosing pivots. Returns any optimal basic solution; for degenerate
/// problems only the objective value is unique. Pure function of its
/// arguments, so concurrent calls on distinct programs are safe.
LpSolution solve(const LinearProgram& lp, double tolerance = kDefaultTolerance);

/// True iff `point` satisfies every constraint and nonnegativity bound.
/// Violations are measured relative to max(1, |rhs|, sum_j |a_j x_j|).
bool check_feasible(const LinearProgram& lp, std::span<const double> point,
                    double tolerance = kDefaultTolerance);

/// Upper bound on pivots solve() will perform before declaring an
/// internal error. Bland's rule terminates well below it.
std::size_t iteration_limit(const LinearProgram& lp);

const char* to_string(Status status);

}  // namespace frontier::lp
