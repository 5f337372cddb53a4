#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "frontier/dea.hpp"
#include "frontier/lp.hpp"
#include "oracle/vertex_enum.hpp"

namespace testing_support {

inline oracle::Problem to_oracle(const frontier::lp::LinearProgram& lp) {
    oracle::Problem p;
    p.maximize = lp.sense == frontier::lp::Sense::Maximize;
    p.c = lp.objective;
    for (const auto& c : lp.constraints) {
        oracle::Rel rel = c.relation == frontier::lp::Relation::LE   ? oracle::Rel::LE
                          : c.relation == frontier::lp::Relation::GE ? oracle::Rel::GE
                                                                     : oracle::Rel::EQ;
        p.rows.push_back({c.coefficients, rel, c.rhs});
    }
    return p;
}

struct RawPanel {
    std::vector<std::vector<double>> x;  // [dmu][input]
    std::vector<std::vector<double>> y;  // [dmu][output]
    std::vector<std::string> sector;

    frontier::dea::Panel panel() const {
        std::vector<frontier::dea::Dmu> dmus;
        for (std::size_t j = 0; j < x.size(); ++j) {
            frontier::dea::Dmu d;
            d.id = "D" + std::to_string(j);
            d.sector = sector.empty() ? "S" : sector[j];
            d.inputs = x[j];
            d.outputs = y[j];
            dmus.push_back(std::move(d));
        }
        return frontier::dea::Panel(std::move(dmus));
    }
};

/// Log-uniform positive data spanning two orders of magnitude.
inline RawPanel random_panel(std::mt19937_64& gen, std::size_t n, std::size_t m, std::size_t s) {
    std::uniform_real_distribution<double> u(0.0, std::log(100.0));
    RawPanel p;
    p.x.assign(n, std::vector<double>(m));
    p.y.assign(n, std::vector<double>(s));
    for (std::size_t j = 0; j < n; ++j) {
        for (auto& v : p.x[j]) v = std::exp(u(gen));
        for (auto& v : p.y[j]) v = std::exp(u(gen));
    }
    return p;
}

inline std::size_t pick(std::mt19937_64& gen, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
}

}  // namespace testing_support
