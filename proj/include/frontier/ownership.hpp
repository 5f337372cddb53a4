#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace frontier::ownership {

/// Shareholder stakes of one firm in one year, as percentages of paid-up
/// capital. Order is irrelevant.
class ShareRegister {
public:
    /// Throws ValidationError unless every stake is in (0, 100] and the
    /// stakes sum to at most 100 (+1e-6).
    ShareRegister(std::string firm_id, int year, std::vector<double> stakes);

    const std::string& firm_id() const { return firm_id_; }
    int year() const { return year_; }
    const std::vector<double>& stakes() const { return stakes_; }
    std::size_t disclosed_count() const { return stakes_.size(); }

private:
    std::string firm_id_;
    int year_;
    std::vector<double> stakes_;
};

struct ConcentrationRatio {
    std::size_t k = 1;
    double value = 0.0;
    bool truncated = false;  // fewer than k stakes disclosed
};

/// Sum of the k largest stakes. Throws ValidationError for k == 0 or an
/// empty register.
ConcentrationRatio cr(const ShareRegister& reg, std::size_t k);

/// Percentage brackets (0,10], (10,30], (30,50], (50,70], (70,90], (90,100].
enum class Bracket { UpTo10, From11To30, From31To50, From51To70, From71To90, Above90 };

inline constexpr std::size_t kBracketCount = 6;
inline constexpr std::array<Bracket, kBracketCount> kAllBrackets = {
    Bracket::UpTo10,     Bracket::From11To30, Bracket::From31To50,
    Bracket::From51To70, Bracket::From71To90, Bracket::Above90};

struct BracketBounds {
    double lower;  // exclusive
    double upper;  // inclusive
};

/// Throws ValidationError when value is outside (0, 100].
Bracket bracket_of(double value);

BracketBounds bounds(Bracket b);
std::string_view label(Bracket b);   // "≤10", "11–30", ..., ">90"
std::size_t index(Bracket b);

}  // namespace frontier::ownership
