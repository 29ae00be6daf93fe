// Command-line front end: run, study, audit, print-config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/simulation.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<double> h;
    std::optional<double> t_final;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
};

void add_common(CLI::App* cmd, Overrides& o) {
    // "-h" would collide with --h.
    cmd->set_help_flag("--help", "print this help and exit");
    cmd->add_option("--config", o.config, "YAML run configuration")->required();
    cmd->add_option("--h", o.h, "override grid.h");
    cmd->add_option("--t-final", o.t_final, "override time.t_final");
    cmd->add_option("--seed", o.seed, "override sequence.seed");
    cmd->add_option("--output", o.output, "override output.directory");
}

glimm::RunConfig load(const Overrides& o) {
    glimm::RunConfig cfg = glimm::load_config_file(o.config);
    if (o.h) cfg.grid.h = *o.h;
    if (o.t_final) {
        cfg.time.t_final = *o.t_final;
        // Snapshot times beyond the new horizon are dropped.
        std::erase_if(cfg.time.snapshot_times, [&](double t) { return t > *o.t_final; });
    }
    if (o.seed) cfg.sequence.seed = *o.seed;
    if (o.output) cfg.output.directory = *o.output;
    glimm::validate_config(cfg);
    return cfg;
}

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw glimm::Error(glimm::ErrorKind::ValidationError,
                               "--h-list entries must be numbers, got '" + item + "'");
        }
    }
    if (out.empty()) {
        throw glimm::Error(glimm::ErrorKind::ValidationError, "--h-list must not be empty");
    }
    return out;
}

int cmd_audit(const glimm::RunConfig& cfg) {
    const glimm::SystemModel model = glimm::make_model(cfg);
    const glimm::AuditReport rep = glimm::audit_assumptions(
        model, glimm::make_profile(cfg), glimm::make_ball(cfg), glimm::make_sampling_plan(cfg));
    std::cout << "hypothesis               margin                  result  description\n";
    for (const auto& c : rep.checks) {
        std::cout << std::left << std::setw(25) << c.id << std::setw(24)
                  << glimm::format_number(c.margin) << std::setw(8)
                  << (c.pass ? "pass" : "FAIL") << c.description << "\n";
    }
    std::cout << "speed range [" << glimm::format_number(rep.min_speed) << ", "
              << glimm::format_number(rep.max_speed) << "] over " << rep.samples
              << " samples\n";
    return rep.all_pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modified random choice solver for 1-D balance laws"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    Overrides run_o, study_o, audit_o, print_o;
    std::string run_oracle, study_oracle = "exact", h_list;

    auto* run = app.add_subcommand("run", "run the scheme and write outputs");
    add_common(run, run_o);
    run->add_option("--compare-oracle", run_oracle,
                    "report L1 error against exact|characteristics|ode|fine_grid");

    auto* study = app.add_subcommand("study", "convergence study over a list of h");
    add_common(study, study_o);
    study->add_option("--h-list", h_list, "comma-separated mesh widths")->required();
    study->add_option("--compare-oracle", study_oracle, "oracle for the error column");

    auto* audit = app.add_subcommand("audit", "audit the structural hypotheses");
    add_common(audit, audit_o);

    auto* print = app.add_subcommand("print-config", "print the normalized configuration");
    add_common(print, print_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            const glimm::RunConfig cfg = load(run_o);
            return glimm::run_simulation(cfg, run_oracle, &std::cout).exit_code;
        }
        if (*study) {
            const glimm::RunConfig cfg = load(study_o);
            const auto rows = glimm::convergence_study(cfg, parse_h_list(h_list), study_oracle);
            const std::string table = glimm::study_csv(rows);
            std::filesystem::create_directories(cfg.output.directory);
            std::ofstream(std::filesystem::path(cfg.output.directory) / "convergence.csv")
                << table;
            std::cout << table;
            int rc = 0;
            for (const auto& r : rows) {
                if (!r.failure.empty()) {
                    std::cerr << "h=" << glimm::format_number(r.h) << ": " << r.failure << "\n";
                    rc = 3;
                }
            }
            return rc;
        }
        if (*audit) return cmd_audit(load(audit_o));
        if (*print) {
            std::cout << glimm::dump_config(load(print_o));
            return 0;
        }
    } catch (const glimm::Error& e) {
        std::cerr << glimm::to_string(e.kind()) << ": " << e.what() << "\n";
        return glimm::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
