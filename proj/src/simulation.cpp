#include "glimm/simulation.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "glimm/errors.hpp"

#ifndef GLIMM_VERSION
#define GLIMM_VERSION "0.0.0"
#endif

namespace glimm {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

[[noreturn]] void unsuitable(const std::string& oracle, const std::string& why) {
    throw Error(ErrorKind::ValidationError, "oracle '" + oracle + "' not applicable: " + why);
}

nlohmann::json report_json(const FunctionalReport& r) {
    nlohmann::json j;
    j["s"] = r.s;
    j["t"] = r.t;
    j["L"] = r.L;
    j["Q"] = r.Q;
    j["G"] = r.G;
    j["D_total"] = r.D_total;
    j["diamonds"] = r.diamonds;
    j["balance_ratio_max"] = r.balance_ratio_max;
    j["balance_residual_max"] = r.balance_residual_max;
    j["TV"] = r.TV;
    j["sup_norm"] = r.sup_norm;
    j["sigma"] = r.bounds.sigma;
    j["tv_bound"] = r.bounds.tv_bound;
    j["tv_margin"] = r.bounds.tv_margin;
    j["sup_bound"] = r.bounds.sup_bound;
    j["sup_margin"] = r.bounds.sup_margin;
    j["bounds_pass"] = r.bounds.pass;
    return j;
}

void write_failure(const std::filesystem::path& dir, const Error& e) {
    nlohmann::json j;
    j["error_kind"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
    j["exit_code"] = exit_code(e.kind());
    j["strip"] = e.strip ? nlohmann::json(*e.strip) : nlohmann::json();
    j["mesh_point"] = e.mesh_point ? nlohmann::json(*e.mesh_point) : nlohmann::json();
    std::ofstream(dir / "failure.json") << j.dump(2) << "\n";
}

std::string manifest_text(const RunConfig& cfg, long strips, double dt) {
    std::ostringstream m;
    m << dump_config(cfg);
    m << "manifest:\n";
    m << "  code_version: " << GLIMM_VERSION << "\n";
    m << "  sequence_kind: " << to_string(cfg.sequence.kind) << "\n";
    m << "  seed: " << cfg.sequence.seed << "\n";
    m << "  strips: " << strips << "\n";
    m << "  dt: " << format_number(dt) << "\n";
    return m.str();
}

}  // namespace

OracleSolution select_oracle(const RunConfig& cfg, const std::string& name, double h_ref) {
    const Params p = builtin_params(cfg.system.name, cfg.system.params);
    if (name == "exact") {
        if (cfg.system.name != "burgers_inhom" || p.at("epsilon") != 0.0 ||
            p.at("kappa") != 0.0) {
            unsuitable(name, "needs homogeneous burgers_inhom (epsilon = kappa = 0)");
        }
        if (cfg.initial.breaks.size() != 1) unsuitable(name, "needs exactly one initial break");
        const double a = p.at("a_inf");
        const double x0 = cfg.initial.breaks[0];
        ScalarFlux flux{[a](double u) { return 0.5 * a * u * u; }, [a](double u) { return a * u; }};
        const OracleSolution base = scalar_riemann_exact(flux, cfg.initial.states[0][0],
                                                         cfg.initial.states[1][0]);
        OracleSolution sol = base;
        sol.evaluator = [base, x0](double x, double t) { return base(x - x0, t); };
        return sol;
    }
    if (name == "characteristics") {
        if (cfg.system.name != "advection_var") unsuitable(name, "needs advection_var");
        const double a_inf = p.at("a_inf"), eps = p.at("epsilon");
        const InitialProfile u0 = make_initial(cfg);
        const double dt = cfg.grid.h / cfg.grid.lambda_cfl;
        return characteristics_linear(
            [=](double x, double t) { return a_inf + eps * std::exp(-t) * sech2(x); },
            [=](double x, double t) {
                return -2.0 * eps * std::exp(-t) * sech2(x) * std::tanh(x);
            },
            {}, [u0](double x) { return u0(x)(0); }, dt / 10.0, cfg.time.t_final,
            cfg.grid.x_min, cfg.grid.x_max);
    }
    if (name == "ode") {
        if (!cfg.initial.breaks.empty()) unsuitable(name, "needs spatially constant data");
        if (cfg.system.name == "advection_var" ||
            (cfg.system.name == "burgers_inhom" && p.at("epsilon") != 0.0)) {
            unsuitable(name, "needs a flux independent of x");
        }
        const auto model = std::make_shared<SystemModel>(make_model(cfg));
        const double dt = cfg.grid.h / cfg.grid.lambda_cfl;
        return ode_reference(
            [model](const State& u, double t) { return model->source(u, model->frame(0.0, t)); },
            make_initial(cfg)(0.0), dt / 100.0, cfg.time.t_final);
    }
    if (name == "fine_grid") {
        RunConfig fine = cfg;
        fine.grid.h = h_ref > 0.0 ? h_ref : cfg.grid.h / 8.0;
        validate_config(fine);
        const SystemModel model = make_model(fine);
        return fine_grid_reference(model, make_problem(cfg), fine.grid.h);
    }
    unsuitable(name, "unknown oracle (exact, characteristics, ode, fine_grid)");
}

double l1_error(const Trajectory& traj, const OracleSolution& oracle, double t, int points_per_h) {
    const StaggeredGrid& g = traj.grid();
    const long cells = std::lround((g.x_max - g.x_min) / g.h) * points_per_h;
    return l1_distance([&](double x) { return traj.evaluate(x, t); },
                       [&](double x) { return oracle(x, t); }, g.x_min, g.x_max, cells);
}

RunOutcome run_simulation(const RunConfig& cfg, const std::string& compare_oracle,
                          std::ostream* log) {
    RunOutcome out;
    const std::filesystem::path dir(cfg.output.directory);
    std::filesystem::create_directories(dir);

    const SystemModel model = make_model(cfg);
    const Problem problem = make_problem(cfg);
    const AssumptionProfile profile = make_profile(cfg);
    DiagnosticsMonitor diag(model, problem, profile, make_diagnostics_options(cfg));

    std::ofstream jsonl;
    if (cfg.wants("jsonl")) {
        jsonl.open(dir / "diagnostics.jsonl");
        diag.sink = [&jsonl](const FunctionalReport& r) { jsonl << report_json(r).dump() << "\n"; };
    }

    std::optional<Trajectory> traj;
    try {
        traj.emplace(run(model, problem, {diag.hook()}));
        diag.finish();
    } catch (const Error& e) {
        diag.finish();
        write_failure(dir, e);
        out.exit_code = exit_code(e.kind());
        out.message = std::string(to_string(e.kind())) + ": " + e.what();
        if (e.strip) {
            out.message += " (strip " + std::to_string(*e.strip) + ", mesh point " +
                           std::to_string(*e.mesh_point) + ")";
        }
        if (log) *log << out.message << "\n";
        return out;
    }
    out.strips = traj->steps() + 1;
    out.max_tv = diag.max_tv();

    if (cfg.wants("csv")) {
        std::ofstream csv(dir / "snapshots.csv");
        csv << "t,x";
        for (int i = 1; i <= model.n(); ++i) csv << ",U" << i;
        csv << "\n";
        for (double t : problem.snapshot_times) {
            for (const auto& [x, u] : traj->snapshot(t, cfg.output.points_per_h)) {
                csv << format_number(t) << "," << format_number(x);
                for (int i = 0; i < u.size(); ++i) csv << "," << format_number(u(i));
                csv << "\n";
            }
        }
    }
    if (cfg.wants("manifest")) {
        std::ofstream(dir / "manifest.yaml") << manifest_text(cfg, out.strips, problem.grid.dt);
    }

    if (!compare_oracle.empty()) {
        const OracleSolution oracle = select_oracle(cfg, compare_oracle);
        std::ofstream oc(dir / "oracle_comparison.csv");
        oc << "t,l1_error\n";
        for (double t : problem.snapshot_times) {
            const double err = l1_error(*traj, oracle, t, cfg.output.points_per_h);
            out.oracle_errors.emplace_back(t, err);
            oc << format_number(t) << "," << format_number(err) << "\n";
        }
    }
    out.message = "completed " + std::to_string(out.strips) + " strips";
    if (log) {
        *log << out.message << "; max TV " << format_number(out.max_tv) << "\n";
        for (const auto& [t, e] : out.oracle_errors) {
            *log << "L1 error vs " << compare_oracle << " at t=" << format_number(t) << ": "
                 << format_number(e) << "\n";
        }
    }
    return out;
}

std::vector<StudyRow> convergence_study(const RunConfig& cfg, const std::vector<double>& h_list,
                                        const std::string& oracle_name) {
    std::vector<StudyRow> rows;
    std::optional<OracleSolution> fixed;
    if (oracle_name == "fine_grid") {
        double h_min = cfg.grid.h;
        for (double h : h_list) h_min = std::min(h_min, h);
        RunConfig base = cfg;
        base.grid.h = h_min;
        fixed = select_oracle(base, oracle_name, h_min / 8.0);
    }
    for (double h : h_list) {
        StudyRow row;
        row.h = h;
        try {
            RunConfig c = cfg;
            c.grid.h = h;
            validate_config(c);
            const OracleSolution oracle = fixed ? *fixed : select_oracle(c, oracle_name);
            const SystemModel model = make_model(c);
            Problem problem = make_problem(c);
            problem.snapshot_times = {c.time.t_final};
            const Trajectory traj = run(model, problem);
            row.error = l1_error(traj, oracle, c.time.t_final, c.output.points_per_h);
        } catch (const Error& e) {
            row.failure = std::string(to_string(e.kind())) + ": " + e.what();
        }
        if (!rows.empty() && rows.back().error && row.error && *row.error > 0.0 &&
            *rows.back().error > 0.0) {
            row.order = std::log(*rows.back().error / *row.error) / std::log(rows.back().h / h);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
    std::ostringstream s;
    s << "h,error,order\n";
    for (const auto& r : rows) {
        s << format_number(r.h) << ",";
        if (r.error) s << format_number(*r.error);
        s << ",";
        if (r.order) s << format_number(*r.order);
        s << "\n";
    }
    return s.str();
}

}  // namespace glimm
