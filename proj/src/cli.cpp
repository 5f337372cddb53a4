#include "frontier/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "frontier/csv.hpp"
#include "frontier/dea.hpp"
#include "frontier/error.hpp"
#include "frontier/panel.hpp"
#include "frontier/report.hpp"
#include "frontier/synth.hpp"

namespace frontier::cli {

namespace {

struct RunConfig {
    std::string input;
    std::string rts = "crs";
    std::string group_by = "sector";
    std::vector<std::string> inputs;
    std::optional<std::size_t> k;
    std::optional<int> year;
    std::string format = "text";
    std::uint64_t seed = 20140530;
    std::optional<double> tolerance;
    std::string out_path;
    bool summary = false;
    unsigned threads = 0;
    std::size_t total = 0;
    std::vector<double> weights;
    std::vector<std::string> strata;
    std::string spec_path;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double resolve_tolerance(const RunConfig& cfg) {
    double tol = lp::kDefaultTolerance;
    if (cfg.tolerance) {
        tol = *cfg.tolerance;
    } else if (const char* env = std::getenv("FRONTIER_DEA_TOLERANCE"); env && *env) {
        if (!csv::parse_real(env, tol)) throw ValidationError("FRONTIER_DEA_TOLERANCE is not a number");
    }
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    return tol;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + cfg.out_path + "'");
    f << text;
}

std::vector<dea::EfficiencyResult> score(const panel::PanelDataset& data, const RunConfig& cfg, dea::Rts rts) {
    const dea::Panel p = panel::to_dea_panel(data, cfg.inputs);
    dea::ScoreOptions opts;
    opts.tolerance = resolve_tolerance(cfg);
    opts.threads = cfg.threads;
    return dea::score_all(p, rts, dea::parse_grouping(cfg.group_by), opts);
}

void cmd_score(const RunConfig& cfg, std::ostream& out) {
    const auto data = panel::parse_panel(read_file(cfg.input));
    const auto format = report::parse_format(cfg.format);
    const auto results = score(data, cfg, dea::parse_rts(cfg.rts));
    std::string text = report::render(results, format);
    if (cfg.summary) {
        if (format == report::Format::Json) {
            text = "{\"scores\": " + text + ", \"summary\": " + report::render(report::describe(results), format) + "}\n";
        } else {
            text += "\n" + report::render(report::describe(results), format);
        }
    }
    emit(cfg, text, out);
}

void cmd_ownership(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto data = panel::parse_panel(read_file(cfg.input));
    const auto format = report::parse_format(cfg.format);
    const auto selection = report::select_registers(data, cfg.year);
    if (selection.registers.empty()) {
        throw ValidationError("no firm in the input discloses shareholder stakes");
    }
    std::vector<std::size_t> ks = {1, 2, 4};
    if (cfg.k) {
        if (*cfg.k != 1 && *cfg.k != 2 && *cfg.k != 4) throw ValidationError("--k must be 1, 2 or 4");
        ks = {*cfg.k};
    }
    std::string text;
    if (format == report::Format::Json && ks.size() > 1) text = "[\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const std::string part = report::render(report::frequency_table(selection, ks[i]), format);
        if (i == 0) {
            text += part;
            continue;
        }
        switch (format) {
            case report::Format::Text: text += "\n" + part; break;
            case report::Format::Csv: text += part.substr(part.find('\n') + 1); break;
            case report::Format::Json: text += ",\n" + part; break;
        }
    }
    if (format == report::Format::Json && ks.size() > 1) text += "]\n";
    emit(cfg, text, out);
    err << "ownership: " << selection.registers.size() << " firms tabulated, " << selection.skipped.size()
        << " skipped\n";
}

void cmd_describe(const RunConfig& cfg, std::ostream& out) {
    const auto data = panel::parse_panel(read_file(cfg.input));
    const auto format = report::parse_format(cfg.format);
    auto results = score(data, cfg, dea::Rts::CRS);
    auto vrs = score(data, cfg, dea::Rts::VRS);
    results.insert(results.end(), vrs.begin(), vrs.end());
    emit(cfg, report::render(report::describe(results), format), out);
}

void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto population = panel::parse_panel(read_file(cfg.input));
    std::vector<std::string> strata = cfg.strata;
    std::map<std::string, std::size_t> firms_per_sector;
    std::map<std::string, bool> counted;
    for (const auto& r : population.records()) {
        if (counted.emplace(r.firm_id, true).second) {
            if (!firms_per_sector.count(r.sector)) {
                if (cfg.strata.empty()) strata.push_back(r.sector);
            }
            ++firms_per_sector[r.sector];
        }
    }
    std::vector<double> weights = cfg.weights;
    if (weights.empty()) {
        double all = 0.0;
        for (const auto& s : strata) all += static_cast<double>(firms_per_sector[s]);
        if (all == 0.0) throw ValidationError("population has no firms in the requested strata");
        for (const auto& s : strata) weights.push_back(static_cast<double>(firms_per_sector[s]) / all);
    }
    if (weights.size() != strata.size()) {
        throw ValidationError("got " + std::to_string(weights.size()) + " weights for " + std::to_string(strata.size()) +
                              " strata; pass --strata to name them");
    }
    const std::size_t total = cfg.total ? cfg.total : counted.size();
    const auto allocation = panel::allocate_strata(total, weights, strata);
    for (std::size_t i = 0; i < allocation.labels.size(); ++i) {
        err << "sample: " << allocation.labels[i] << " " << allocation.counts[i] << "\n";
    }
    emit(cfg, panel::render_panel(panel::sample_strata(population, allocation, cfg.seed)), out);
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
    const synth::SynthSpec spec = cfg.spec_path.empty() ? synth::default_spec()
                                                        : synth::spec_from_json(read_file(cfg.spec_path));
    emit(cfg, panel::render_panel(synth::generate(spec, cfg.seed).dataset), out);
}

void cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const auto data = panel::parse_panel(read_file(cfg.input));
    (void)panel::to_dea_panel(data, cfg.inputs);
    const auto years = data.years();
    std::ostringstream ss;
    ss << "ok: " << data.records().size() << " records, " << data.firms().size() << " firms, " << years.size()
       << " years";
    if (!years.empty()) ss << " (" << years.front() << "-" << years.back() << ")";
    ss << ", " << (data.unbalanced() ? "unbalanced" : "balanced") << ", inputs:";
    for (const auto& n : data.input_names()) ss << " " << n;
    ss << "\n";
    emit(cfg, ss.str(), out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"DEA efficiency scores and ownership concentration tables for firm panels", "frontier-dea"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
        sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
    };
    const auto add_scoring = [&](CLI::App* sub) {
        sub->add_option("--group-by", cfg.group_by, "Reference groups")
            ->check(CLI::IsMember({"sector", "year", "sector-year", "pooled"}));
        sub->add_option("--inputs", cfg.inputs, "Expense columns to use as inputs (default: all present)")
            ->delimiter(',');
        sub->add_option("--tolerance", cfg.tolerance, "LP pivot tolerance (env FRONTIER_DEA_TOLERANCE)");
        sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
    };

    auto* score = app.add_subcommand("score", "Efficiency score per firm-year");
    score->add_option("input", cfg.input, "Panel CSV")->required();
    score->add_option("--rts", cfg.rts, "Returns to scale")->check(CLI::IsMember({"crs", "vrs"}));
    score->add_flag("--summary", cfg.summary, "Append per-sector descriptive statistics");
    add_scoring(score);
    add_common(score);

    auto* own = app.add_subcommand("ownership", "Ownership concentration frequency tables");
    own->add_option("input", cfg.input, "Panel CSV")->required();
    own->add_option("--k", cfg.k, "Concentration order (1, 2 or 4; default all three)");
    own->add_option("--year", cfg.year, "Use registers from this year instead of each firm's latest");
    add_common(own);

    auto* describe = app.add_subcommand("describe", "Per-sector statistics of CRS and VRS scores");
    describe->add_option("input", cfg.input, "Panel CSV")->required();
    add_scoring(describe);
    add_common(describe);

    auto* sample = app.add_subcommand("sample", "Stratified random sample of firms by sector");
    sample->add_option("input", cfg.input, "Population panel CSV")->required();
    sample->add_option("--total", cfg.total, "Number of firms to draw (default: all)");
    sample->add_option("--weights", cfg.weights, "Stratum weights (default: population shares)")->delimiter(',');
    sample->add_option("--strata", cfg.strata, "Sector codes matching --weights")->delimiter(',');
    sample->add_option("--seed", cfg.seed, "Random seed");
    sample->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic panel with a planted frontier");
    synth->add_option("--spec", cfg.spec_path, "Generator spec (JSON); default is a 156-firm, four-sector fixture");
    synth->add_option("--seed", cfg.seed, "Random seed");
    synth->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

    auto* validate = app.add_subcommand("validate", "Check a panel file");
    validate->add_option("input", cfg.input, "Panel CSV")->required();
    validate->add_option("--inputs", cfg.inputs, "Expense columns that must be present")->delimiter(',');
    validate->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }

    try {
        if (*score) cmd_score(cfg, out);
        else if (*own) cmd_ownership(cfg, out, err);
        else if (*describe) cmd_describe(cfg, out);
        else if (*sample) cmd_sample(cfg, out, err);
        else if (*synth) cmd_synth(cfg, out);
        else if (*validate) cmd_validate(cfg, out);
        return kSuccess;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace frontier::cli
