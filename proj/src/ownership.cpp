#include "frontier/ownership.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "frontier/error.hpp"

namespace frontier::ownership {

ShareRegister::ShareRegister(std::string firm_id, int year, std::vector<double> stakes)
    : firm_id_(std::move(firm_id)), year_(year), stakes_(std::move(stakes)) {
    double total = 0.0;
    for (double s : stakes_) {
        if (!std::isfinite(s) || s <= 0.0 || s > 100.0) {
            throw ValidationError("firm " + firm_id_ + " (" + std::to_string(year_) +
                                  "): stake " + std::to_string(s) + " outside (0, 100]");
        }
        total += s;
    }
    if (total > 100.0 + 1e-6) {
        throw ValidationError("firm " + firm_id_ + " (" + std::to_string(year_) +
                              "): stakes sum to " + std::to_string(total) + "%, above 100%");
    }
}

ConcentrationRatio cr(const ShareRegister& reg, std::size_t k) {
    if (k == 0) throw ValidationError("concentration order k must be at least 1");
    if (reg.stakes().empty()) {
        throw ValidationError("firm " + reg.firm_id() + " has no disclosed shareholders");
    }
    std::vector<double> sorted = reg.stakes();
    const std::size_t take = std::min(k, sorted.size());
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take),
                      sorted.end(), std::greater<>());
    // Summing in descending order keeps CR_k bitwise nondecreasing in k.
    const double value = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), 0.0);
    return {k, value, sorted.size() < k};
}

namespace {

constexpr std::array<BracketBounds, kBracketCount> kBounds = {{
    {0.0, 10.0}, {10.0, 30.0}, {30.0, 50.0}, {50.0, 70.0}, {70.0, 90.0}, {90.0, 100.0}}};

constexpr std::array<std::string_view, kBracketCount> kLabels = {
    "≤10", "11–30", "31–50", "51–70", "71–90", ">90"};

}  // namespace

Bracket bracket_of(double value) {
    if (!(value > 0.0) || value > 100.0) {
        throw ValidationError("ownership share " + std::to_string(value) + " outside (0, 100]");
    }
    for (std::size_t i = 0; i < kBracketCount; ++i) {
        if (value <= kBounds[i].upper) return kAllBrackets[i];
    }
    return Bracket::Above90;
}

BracketBounds bounds(Bracket b) { return kBounds[index(b)]; }
std::string_view label(Bracket b) { return kLabels[index(b)]; }
std::size_t index(Bracket b) { return static_cast<std::size_t>(b); }

}  // namespace frontier::ownership
