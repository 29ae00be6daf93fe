#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "glimm/config.hpp"
#include "glimm/oracle.hpp"

namespace glimm {

struct RunOutcome {
    int exit_code = 0;
    std::string message;
    long strips = 0;
    double max_tv = 0.0;
    // L¹ errors against the oracle at each snapshot time, if requested.
    std::vector<std::pair<double, double>> oracle_errors;
};

/// Oracle applicable to the configured problem: "exact" (homogeneous
/// Burgers, one break), "characteristics" (advection_var), "ode" (constant
/// data), or "fine_grid" with mesh width h_ref. Throws ValidationError.
OracleSolution select_oracle(const RunConfig& cfg, const std::string& name,
                             double h_ref = 0.0);

/// L¹ distance between the trajectory at t and the oracle over the grid
/// window, midpoint rule with points_per_h cells per h.
double l1_error(const Trajectory& traj, const OracleSolution& oracle, double t,
                int points_per_h = 4);

/// Runs the scheme and writes snapshots.csv, diagnostics.jsonl and
/// manifest.yaml into the output directory (failure.json on error).
RunOutcome run_simulation(const RunConfig& cfg, const std::string& compare_oracle = "",
                          std::ostream* log = nullptr);

struct StudyRow {
    double h = 0.0;
    std::optional<double> error;
    std::optional<double> order;
    std::string failure;
};

/// Error at t_final against the oracle for each h; rows that fail keep their
/// error message and the table is still produced.
std::vector<StudyRow> convergence_study(const RunConfig& cfg, const std::vector<double>& h_list,
                                        const std::string& oracle);

std::string study_csv(const std::vector<StudyRow>& rows);

/// Formats numbers as the shortest round-trip decimal.
std::string format_number(double v);

}  // namespace glimm
