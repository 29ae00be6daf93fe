#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glimm/diagnostics.hpp"
#include "glimm/scheme.hpp"
#include "glimm/sequence.hpp"
#include "glimm/system.hpp"

namespace glimm {

struct RunConfig {
    struct System {
        std::string name;
        Params params;
    } system;

    // Piecewise-constant U0: states.size() == breaks.size() + 1. When absent
    // the data are the ball centre everywhere.
    struct Initial {
        std::vector<double> breaks;
        std::vector<std::vector<double>> states;
    } initial;

    struct Grid {
        double h = 0.0;
        double lambda_cfl = 0.0;  // 0 = derive from the audited speeds
        double x_min = -1.0;
        double x_max = 1.0;
    } grid;

    struct Time {
        double t_final = 0.0;
        std::vector<double> snapshot_times;  // defaults to {t_final}
    } time;

    struct Sequence {
        SequenceKind kind = SequenceKind::VanDerCorput;
        std::uint64_t seed = 0;
    } sequence;

    struct Ball {
        std::vector<double> center;
        double radius = 0.0;
    } ball;

    // Unset entries are filled from the built-in default profile.
    struct Assumptions {
        double A_const = 5.0;
        std::optional<double> omega;
        std::optional<PhiSpec> phi;
        std::optional<PsiSpec> psi;
    } assumptions;

    struct Diagnostics {
        double C0 = 5.0;
        bool functionals = true;
        bool diamonds = true;
        bool balance = true;
        bool theorem = true;
        double C1 = 2.0;
        double C2 = 2.0;
        double sigma_prefactor = 1.0;
    } diagnostics;

    struct Output {
        std::string directory = "glimm_out";
        std::vector<std::string> formats{"csv", "jsonl", "manifest"};
        int points_per_h = 4;
    } output;

    struct Solver {
        double small_data_threshold = 0.5;
        double newton_tol = 1e-12;
        int newton_max_iter = 60;
        double flux_level_tol = 1e-12;
        int boundary_margin_cells = 4;
        double boundary_wave_tol = 1e-8;
    } solver;

    bool wants(const std::string& format) const;
};

/// Parses a YAML document: key tree as in RunConfig, unknown keys rejected,
/// a top-level `manifest` block accepted and ignored. Throws ParseError with
/// the offending key and line. Does not run the semantic checks.
RunConfig parse_config_document(const std::string& text);

/// Fills the derived defaults (ball for a built-in system, lambda_cfl as 1.5x
/// the audited speed sup when unset) and runs the semantic checks: grid, CFL
/// against the audited speeds, domain span, snapshot times, ball and initial
/// data. Throws ValidationError.
void validate_config(RunConfig& cfg);

/// parse_config_document followed by validate_config.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Normalized YAML with every default spelled out.
std::string dump_config(const RunConfig& cfg);

// Objects built from a validated config.
SystemModel make_model(const RunConfig& cfg);
DomainBall make_ball(const RunConfig& cfg);
AssumptionProfile make_profile(const RunConfig& cfg);
InitialProfile make_initial(const RunConfig& cfg);
Problem make_problem(const RunConfig& cfg);
DiagnosticsOptions make_diagnostics_options(const RunConfig& cfg);
SamplingPlan make_sampling_plan(const RunConfig& cfg);

}  // namespace glimm
