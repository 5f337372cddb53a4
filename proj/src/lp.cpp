#include "frontier/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frontier/error.hpp"

namespace frontier::lp {

void LinearProgram::validate() const {
    if (objective.empty()) {
        throw ValidationError("linear program has no variables");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].coefficients.size() != objective.size()) {
            throw ValidationError("constraint " + std::to_string(i) + " has " +
                                  std::to_string(constraints[i].coefficients.size()) +
                                  " coefficients, expected " +
                                  std::to_string(objective.size()));
        }
    }
}

std::size_t iteration_limit(const LinearProgram& lp) {
    const std::size_t rows = lp.constraints.size();
    const std::size_t cols = lp.variable_count() + 2 * rows;
    return 1000 + 50 * (rows + 1) * (cols + 1);
}

const char* to_string(Status status) {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

enum class ColumnKind { Structural, Slack, Artificial };

// Relation after negating rows with a negative right-hand side.
Relation effective(const Constraint& c) {
    if (c.rhs >= 0.0 || c.relation == Relation::EQ) return c.relation;
    return c.relation == Relation::LE ? Relation::GE : Relation::LE;
}

// Dense tableau. Row r holds B^{-1}A | B^{-1}b; `cost` holds reduced costs
// with the negated objective value in its last slot.
class Tableau {
public:
    Tableau(const LinearProgram& lp, double tolerance)
        : tol_(tolerance), rows_(lp.constraints.size()), structural_(lp.variable_count()) {
        std::size_t extra = 0;
        for (const auto& c : lp.constraints) {
            extra += (effective(c) == Relation::GE) ? 2 : 1;
        }
        cols_ = structural_ + extra;
        width_ = cols_ + 1;
        data_.assign(rows_ * width_, 0.0);
        kind_.assign(cols_, ColumnKind::Structural);
        basis_.assign(rows_, 0);
        cost_.assign(width_, 0.0);

        std::size_t next = structural_;
        for (std::size_t r = 0; r < rows_; ++r) {
            const Constraint& c = lp.constraints[r];
            const double flip = c.rhs < 0.0 ? -1.0 : 1.0;
            const Relation rel = effective(c);
            for (std::size_t j = 0; j < structural_; ++j) {
                at(r, j) = flip * c.coefficients[j];
            }
            rhs(r) = flip * c.rhs;
            switch (rel) {
                case Relation::LE:
                    kind_[next] = ColumnKind::Slack;
                    at(r, next) = 1.0;
                    basis_[r] = next++;
                    break;
                case Relation::GE:
                    kind_[next] = ColumnKind::Slack;
                    at(r, next++) = -1.0;
                    kind_[next] = ColumnKind::Artificial;
                    at(r, next) = 1.0;
                    basis_[r] = next++;
                    break;
                case Relation::EQ:
                    kind_[next] = ColumnKind::Artificial;
                    at(r, next) = 1.0;
                    basis_[r] = next++;
                    break;
            }
        }
    }

    bool has_artificials() const {
        return std::find(kind_.begin(), kind_.end(), ColumnKind::Artificial) != kind_.end();
    }

    // Phase one: minimize the sum of artificials. Returns the optimum.
    double run_phase_one(std::size_t& iterations, std::size_t limit) {
        std::vector<double> c(cols_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (kind_[j] == ColumnKind::Artificial) c[j] = 1.0;
        }
        price(c);
        iterate(/*allow_artificial=*/true, iterations, limit);
        return -cost_[cols_];
    }

    // Pivots zero-level artificials out of the basis; drops redundant rows.
    void expel_artificials() {
        for (std::size_t r = 0; r < rows_;) {
            if (kind_[basis_[r]] != ColumnKind::Artificial) {
                ++r;
                continue;
            }
            std::size_t entering = cols_;
            double best = pivot_floor(r);
            for (std::size_t j = 0; j < cols_; ++j) {
                if (kind_[j] != ColumnKind::Artificial && std::abs(at(r, j)) > best) {
                    entering = j;
                    best = std::abs(at(r, j));
                }
            }
            if (entering == cols_) {
                remove_row(r);
            } else {
                pivot(r, entering);
                ++r;
            }
        }
    }

    // Returns false when the objective is unbounded below.
    bool run_phase_two(const std::vector<double>& structural_cost, std::size_t& iterations,
                       std::size_t limit) {
        std::vector<double> c(cols_, 0.0);
        std::copy(structural_cost.begin(), structural_cost.end(), c.begin());
        price(c);
        return iterate(/*allow_artificial=*/false, iterations, limit);
    }

    std::vector<double> structural_values() const {
        std::vector<double> x(structural_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (basis_[r] < structural_) {
                x[basis_[r]] = std::max(0.0, data_[r * width_ + cols_]);
            }
        }
        return x;
    }

    double max_abs_rhs() const {
        double m = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) m = std::max(m, std::abs(data_[r * width_ + cols_]));
        return m;
    }

private:
    double& at(std::size_t r, std::size_t j) { return data_[r * width_ + j]; }
    double at(std::size_t r, std::size_t j) const { return data_[r * width_ + j]; }
    double& rhs(std::size_t r) { return data_[r * width_ + cols_]; }

    void price(const std::vector<double>& c) {
        std::copy(c.begin(), c.end(), cost_.begin());
        cost_[cols_] = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            const double cb = c[basis_[r]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) cost_[j] -= cb * at(r, j);
        }
    }

    // Bland: lowest-index improving column enters; among minimum-ratio rows
    // the one whose basic variable has the lowest index leaves.
    bool iterate(bool allow_artificial, std::size_t& iterations, std::size_t limit) {
        for (;;) {
            std::size_t entering = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!allow_artificial && kind_[j] == ColumnKind::Artificial) continue;
                if (cost_[j] < -tol_) {
                    entering = j;
                    break;
                }
            }
            if (entering == cols_) return true;

            std::size_t leaving = rows_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, entering);
                if (a <= pivot_floor(r)) continue;
                const double ratio = std::max(0.0, data_[r * width_ + cols_]) / a;
                if (leaving == rows_) {
                    leaving = r;
                    best_ratio = ratio;
                    continue;
                }
                const double slack = tol_ * (1.0 + best_ratio);
                if (ratio < best_ratio - slack) {
                    leaving = r;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + slack && basis_[r] < basis_[leaving]) {
                    leaving = r;
                    best_ratio = std::min(best_ratio, ratio);
                }
            }
            if (leaving == rows_) return false;

            if (++iterations > limit) {
                throw InternalError("simplex exceeded its iteration limit");
            }
            pivot(leaving, entering);
        }
    }

    // Entries this small relative to their row are treated as zero when
    // choosing a pivot; pivoting on them amplifies rounding noise.
    double pivot_floor(std::size_t r) const {
        double m = 1.0;
        for (std::size_t j = 0; j < cols_; ++j) m = std::max(m, std::abs(at(r, j)));
        return tol_ * m;
    }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        double* prow = &data_[pr * width_];
        for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        auto eliminate = [&](double* row) {
            const double f = row[pc];
            if (f == 0.0) return;
            for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        };
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r != pr) eliminate(&data_[r * width_]);
        }
        eliminate(cost_.data());
        basis_[pr] = pc;
    }

    void remove_row(std::size_t r) {
        data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --rows_;
    }

    double tol_;
    std::size_t rows_;
    std::size_t structural_;
    std::size_t cols_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
    std::vector<ColumnKind> kind_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, double tolerance) {
    lp.validate();
    if (!(tolerance > 0.0)) {
        throw ValidationError("solver tolerance must be positive");
    }

    LpSolution out;
    Tableau tableau(lp, tolerance);
    const std::size_t limit = iteration_limit(lp);

    if (tableau.has_artificials()) {
        const double scale = 1.0 + tableau.max_abs_rhs();
        const double infeasibility = tableau.run_phase_one(out.iterations, limit);
        if (infeasibility > tolerance * scale * static_cast<double>(lp.constraints.size())) {
            out.status = Status::Infeasible;
            return out;
        }
        tableau.expel_artificials();
    }

    std::vector<double> cost = lp.objective;
    if (lp.sense == Sense::Maximize) {
        for (double& c : cost) c = -c;
    }
    if (!tableau.run_phase_two(cost, out.iterations, limit)) {
        out.status = Status::Unbounded;
        return out;
    }

    out.status = Status::Optimal;
    out.variable_values = tableau.structural_values();
    if (!check_feasible(lp, out.variable_values, std::max(1e-6, tolerance))) {
        throw InternalError("simplex returned a point that violates the constraints");
    }
    out.objective_value = 0.0;
    for (std::size_t j = 0; j < lp.objective.size(); ++j) {
        out.objective_value += lp.objective[j] * out.variable_values[j];
    }
    return out;
}

bool check_feasible(const LinearProgram& lp, std::span<const double> point, double tolerance) {
    lp.validate();
    if (point.size() != lp.variable_count()) {
        throw ValidationError("point has " + std::to_string(point.size()) +
                              " entries, expected " + std::to_string(lp.variable_count()));
    }
    for (double v : point) {
        if (!std::isfinite(v) || v < -tolerance) return false;
    }
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        double magnitude = std::abs(c.rhs);
        for (std::size_t j = 0; j < point.size(); ++j) {
            lhs += c.coefficients[j] * point[j];
            magnitude += std::abs(c.coefficients[j] * point[j]);
        }
        const double slack = tolerance * std::max(1.0, magnitude);
        switch (c.relation) {
            case Relation::LE:
                if (lhs > c.rhs + slack) return false;
                break;
            case Relation::GE:
                if (lhs < c.rhs - slack) return false;
                break;
            case Relation::EQ:
                if (std::abs(lhs - c.rhs) > slack) return false;
                break;
        }
    }
    return true;
}

}  // namespace frontier::lp
