#include "glimm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "glimm/errors.hpp"

namespace glimm {

bool RunConfig::wants(const std::string& format) const {
    return std::find(output.formats.begin(), output.formats.end(), format) !=
           output.formats.end();
}

namespace {

[[noreturn]] void parse_fail(const std::string& key, const YAML::Node& node,
                             const std::string& what) {
    std::string where = key;
    if (node.IsDefined() && node.Mark().line >= 0) {
        where += " (line " + std::to_string(node.Mark().line + 1) + ")";
    }
    throw Error(ErrorKind::ParseError, where + ": " + what);
}

// A mapping whose keys are checked off as they are read.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
            parse_fail(path_.empty() ? "document" : path_, node_, "expected a mapping");
        }
    }

    bool present() const { return node_.IsDefined() && !node_.IsNull(); }
    bool has(const std::string& key) {
        seen_.insert(key);
        return present() && node_[key].IsDefined() && !node_[key].IsNull();
    }

    template <typename T>
    std::optional<T> get(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const YAML::Node v = node_[key];
        try {
            return v.as<T>();
        } catch (const YAML::Exception&) {
            parse_fail(full(key), v, "value has the wrong type");
        }
    }

    template <typename T>
    void read(const std::string& key, T& into) {
        if (auto v = get<T>(key)) into = *v;
    }

    // Scalar or sequence of numbers.
    std::optional<std::vector<double>> numbers(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const YAML::Node v = node_[key];
        try {
            if (v.IsScalar()) return std::vector<double>{v.as<double>()};
            return v.as<std::vector<double>>();
        } catch (const YAML::Exception&) {
            parse_fail(full(key), v, "expected a number or a list of numbers");
        }
    }

    Section child(const std::string& key) {
        seen_.insert(key);
        return Section(present() ? node_[key] : YAML::Node(), full(key));
    }

    YAML::Node raw(const std::string& key) {
        seen_.insert(key);
        return present() ? node_[key] : YAML::Node();
    }

    void finish() const {
        if (!present()) return;
        for (const auto& kv : node_) {
            const std::string k = kv.first.as<std::string>();
            if (!seen_.count(k)) parse_fail(full(k), kv.first, "unknown key");
        }
    }

    std::string full(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

PhiSpec::Kind phi_kind(const std::string& s, const YAML::Node& n) {
    if (s == "sech2") return PhiSpec::Kind::Sech2;
    if (s == "gaussian") return PhiSpec::Kind::Gaussian;
    parse_fail("assumptions.phi.kind", n, "expected sech2 or gaussian");
}

PsiSpec::Kind psi_kind(const std::string& s, const YAML::Node& n) {
    if (s == "exponential" || s == "exp") return PsiSpec::Kind::Exponential;
    if (s == "algebraic") return PsiSpec::Kind::Algebraic;
    parse_fail("assumptions.psi.kind", n, "expected exponential or algebraic");
}

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorKind::ValidationError, what);
}

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

constexpr double kDefaultCflFactor = 1.5;

std::pair<std::vector<double>, double> default_ball(const std::string& system) {
    if (system == "p_system") return {{1.0, 0.0}, 0.3};
    if (system == "advection_var") return {{1.0}, 0.5};
    if (system == "burgers_inhom") return {{1.0}, 0.25};
    invalid("ball.center is required for system " + system);
}

State to_state(const std::vector<double>& v) {
    State u(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) u(static_cast<Eigen::Index>(i)) = v[i];
    return u;
}

}  // namespace

RunConfig parse_config_document(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    RunConfig cfg;
    Section top(root, "");
    top.raw("manifest");

    Section sys = top.child("system");
    if (!sys.present()) parse_fail("system", root, "required section missing");
    const auto name = sys.get<std::string>("name");
    if (!name) parse_fail("system.name", root["system"], "required key missing");
    cfg.system.name = *name;
    if (sys.has("params")) {
        const YAML::Node p = sys.raw("params");
        if (!p.IsMap()) parse_fail("system.params", p, "expected a mapping");
        for (const auto& kv : p) {
            const std::string k = kv.first.as<std::string>();
            try {
                cfg.system.params[k] = kv.second.as<double>();
            } catch (const YAML::Exception&) {
                parse_fail("system.params." + k, kv.second, "expected a number");
            }
        }
    }
    sys.finish();

    Section init = top.child("initial");
    if (auto b = init.numbers("breaks")) cfg.initial.breaks = *b;
    if (init.has("states")) {
        const YAML::Node st = init.raw("states");
        if (!st.IsSequence()) parse_fail("initial.states", st, "expected a list of states");
        for (const auto& item : st) {
            try {
                if (item.IsScalar()) {
                    cfg.initial.states.push_back({item.as<double>()});
                } else {
                    cfg.initial.states.push_back(item.as<std::vector<double>>());
                }
            } catch (const YAML::Exception&) {
                parse_fail("initial.states", item, "expected a number or list of numbers");
            }
        }
    }
    init.finish();

    Section grid = top.child("grid");
    if (!grid.present()) parse_fail("grid", root, "required section missing");
    if (!grid.has("h")) parse_fail("grid.h", root["grid"], "required key missing");
    grid.read("h", cfg.grid.h);
    grid.read("lambda_cfl", cfg.grid.lambda_cfl);
    grid.read("x_min", cfg.grid.x_min);
    grid.read("x_max", cfg.grid.x_max);
    grid.finish();

    Section time = top.child("time");
    if (!time.has("t_final")) parse_fail("time.t_final", root, "required key missing");
    time.read("t_final", cfg.time.t_final);
    if (auto s = time.numbers("snapshot_times")) cfg.time.snapshot_times = *s;
    time.finish();

    Section seq = top.child("sequence");
    if (auto k = seq.get<std::string>("kind")) {
        try {
            cfg.sequence.kind = parse_sequence_kind(*k);
        } catch (const Error& e) {
            parse_fail("sequence.kind", root["sequence"]["kind"], e.what());
        }
    }
    seq.read("seed", cfg.sequence.seed);
    seq.finish();

    Section ball = top.child("ball");
    if (auto c = ball.numbers("center")) cfg.ball.center = *c;
    ball.read("radius", cfg.ball.radius);
    ball.finish();

    Section as = top.child("assumptions");
    as.read("A_const", cfg.assumptions.A_const);
    if (auto w = as.get<double>("omega")) cfg.assumptions.omega = *w;
    Section phi = as.child("phi");
    if (phi.present()) {
        PhiSpec spec;
        if (auto k = phi.get<std::string>("kind")) spec.kind = phi_kind(*k, root);
        phi.read("amplitude", spec.amplitude);
        cfg.assumptions.phi = spec;
    }
    phi.finish();
    Section psi = as.child("psi");
    if (psi.present()) {
        PsiSpec spec;
        if (auto k = psi.get<std::string>("kind")) spec.kind = psi_kind(*k, root);
        psi.read("rate", spec.rate);
        cfg.assumptions.psi = spec;
    }
    psi.finish();
    as.finish();

    Section diag = top.child("diagnostics");
    diag.read("C0", cfg.diagnostics.C0);
    diag.read("C1", cfg.diagnostics.C1);
    diag.read("C2", cfg.diagnostics.C2);
    diag.read("sigma_prefactor", cfg.diagnostics.sigma_prefactor);
    Section flags = diag.child("flags");
    flags.read("functionals", cfg.diagnostics.functionals);
    flags.read("diamonds", cfg.diagnostics.diamonds);
    flags.read("balance", cfg.diagnostics.balance);
    flags.read("theorem", cfg.diagnostics.theorem);
    flags.finish();
    diag.finish();

    Section out = top.child("output");
    out.read("directory", cfg.output.directory);
    if (out.has("formats")) {
        const YAML::Node f = out.raw("formats");
        try {
            cfg.output.formats = f.as<std::vector<std::string>>();
        } catch (const YAML::Exception&) {
            parse_fail("output.formats", f, "expected a list of format names");
        }
    }
    out.read("points_per_h", cfg.output.points_per_h);
    out.finish();

    Section sol = top.child("solver");
    sol.read("small_data_threshold", cfg.solver.small_data_threshold);
    sol.read("newton_tol", cfg.solver.newton_tol);
    sol.read("newton_max_iter", cfg.solver.newton_max_iter);
    sol.read("flux_level_tol", cfg.solver.flux_level_tol);
    sol.read("boundary_margin_cells", cfg.solver.boundary_margin_cells);
    sol.read("boundary_wave_tol", cfg.solver.boundary_wave_tol);
    sol.finish();

    top.finish();
    return cfg;
}

SystemModel make_model(const RunConfig& cfg) {
    return builtin_system(cfg.system.name, cfg.system.params);
}

DomainBall make_ball(const RunConfig& cfg) { return {to_state(cfg.ball.center), cfg.ball.radius}; }

AssumptionProfile make_profile(const RunConfig& cfg) {
    const auto& a = cfg.assumptions;
    AssumptionProfile base;
    const bool need_default = !a.omega || !a.phi || !a.psi;
    if (need_default) {
        base = default_profile(cfg.system.name, cfg.system.params, make_ball(cfg), a.A_const);
    }
    const double omega = a.omega ? *a.omega : base.omega;
    const PhiSpec phi = a.phi ? *a.phi : base.phi;
    const PsiSpec psi = a.psi ? *a.psi : base.psi;
    return AssumptionProfile::make(a.A_const, omega, phi, psi);
}

InitialProfile make_initial(const RunConfig& cfg) {
    if (cfg.initial.states.empty() && cfg.initial.breaks.empty()) {
        return InitialProfile::constant(to_state(cfg.ball.center));
    }
    std::vector<State> states;
    for (const auto& s : cfg.initial.states) states.push_back(to_state(s));
    return InitialProfile::piecewise(cfg.initial.breaks, std::move(states));
}

SamplingPlan make_sampling_plan(const RunConfig& cfg) {
    SamplingPlan plan;
    plan.x_min = cfg.grid.x_min;
    plan.x_max = cfg.grid.x_max;
    plan.t_min = 0.0;
    plan.t_max = std::max(cfg.time.t_final, 1e-12);
    return plan;
}

Problem make_problem(const RunConfig& cfg) {
    Problem p;
    p.grid = StaggeredGrid::make(cfg.grid.h, cfg.grid.lambda_cfl, cfg.grid.x_min, cfg.grid.x_max);
    p.sequence = SamplingSequence(cfg.sequence.kind, cfg.sequence.seed);
    p.initial = make_initial(cfg);
    p.ball = make_ball(cfg);
    p.options.riemann.small_data_threshold = cfg.solver.small_data_threshold;
    p.options.riemann.newton_tol = cfg.solver.newton_tol;
    p.options.riemann.newton_max_iter = cfg.solver.newton_max_iter;
    p.options.flux_level_tol = cfg.solver.flux_level_tol;
    p.options.boundary_margin_cells = cfg.solver.boundary_margin_cells;
    p.options.boundary_wave_tol = cfg.solver.boundary_wave_tol;
    p.t_final = cfg.time.t_final;
    p.snapshot_times = cfg.time.snapshot_times;
    if (p.snapshot_times.empty()) p.snapshot_times.push_back(cfg.time.t_final);
    return p;
}

DiagnosticsOptions make_diagnostics_options(const RunConfig& cfg) {
    DiagnosticsOptions o;
    o.C0 = cfg.diagnostics.C0;
    o.functionals = cfg.diagnostics.functionals;
    o.diamonds = cfg.diagnostics.diamonds;
    o.balance = cfg.diagnostics.balance && cfg.diagnostics.diamonds;
    o.theorem = cfg.diagnostics.theorem;
    o.constants = {cfg.diagnostics.C1, cfg.diagnostics.C2, cfg.diagnostics.sigma_prefactor};
    return o;
}

void validate_config(RunConfig& cfg) {
    const auto& g = cfg.grid;
    if (!(g.h > 0.0) || !std::isfinite(g.h)) invalid("grid.h must be positive");
    if (!(g.lambda_cfl >= 0.0)) invalid("grid.lambda_cfl must be positive");
    if (!(g.x_min < g.x_max)) invalid("grid.x_min must be below grid.x_max");
    if (!(cfg.time.t_final >= 0.0) || !std::isfinite(cfg.time.t_final)) {
        invalid("time.t_final must be a nonnegative number");
    }
    for (double t : cfg.time.snapshot_times) {
        if (!(t >= 0.0 && t <= cfg.time.t_final)) {
            invalid("time.snapshot_times must lie in [0, t_final]; got " + num(t));
        }
    }
    if (cfg.output.points_per_h < 1) invalid("output.points_per_h must be at least 1");
    for (const auto& f : cfg.output.formats) {
        if (f != "csv" && f != "jsonl" && f != "manifest") {
            invalid("output.formats entries must be csv, jsonl or manifest; got " + f);
        }
    }
    if (!(cfg.solver.small_data_threshold > 0.0)) {
        invalid("solver.small_data_threshold must be positive");
    }
    if (!(cfg.diagnostics.C0 >= 0.0)) invalid("diagnostics.C0 must be nonnegative");

    const SystemModel model = make_model(cfg);
    const int n = model.n();
    if (cfg.ball.center.empty()) {
        const auto [center, radius] = default_ball(cfg.system.name);
        cfg.ball.center = center;
        if (!(cfg.ball.radius > 0.0)) cfg.ball.radius = radius;
    }
    if (static_cast<int>(cfg.ball.center.size()) != n) {
        invalid("ball.center must have " + std::to_string(n) + " components");
    }
    if (!(cfg.ball.radius > 0.0)) invalid("ball.radius must be positive");
    const DomainBall ball = make_ball(cfg);

    if (cfg.initial.states.size() != cfg.initial.breaks.size() + 1 &&
        !(cfg.initial.states.empty() && cfg.initial.breaks.empty())) {
        invalid("initial.states must have one more entry than initial.breaks");
    }
    if (!std::is_sorted(cfg.initial.breaks.begin(), cfg.initial.breaks.end())) {
        invalid("initial.breaks must be ascending");
    }
    for (std::size_t k = 0; k < cfg.initial.states.size(); ++k) {
        if (static_cast<int>(cfg.initial.states[k].size()) != n) {
            invalid("initial.states[" + std::to_string(k) + "] must have " +
                    std::to_string(n) + " components");
        }
        if (!ball.contains(to_state(cfg.initial.states[k]))) {
            invalid("initial.states[" + std::to_string(k) + "] lies outside the ball");
        }
    }

    const AssumptionProfile profile = make_profile(cfg);
    const AuditReport audit = audit_assumptions(model, profile, ball, make_sampling_plan(cfg));
    if (!std::isfinite(audit.max_abs_speed)) {
        invalid("characteristic speeds could not be audited on the ball");
    }
    if (g.lambda_cfl == 0.0) {
        cfg.grid.lambda_cfl = kDefaultCflFactor * audit.max_abs_speed;
        if (!(g.lambda_cfl > 0.0)) cfg.grid.lambda_cfl = 1.0;
    }
    if (!(g.lambda_cfl > audit.max_abs_speed)) {
        invalid("grid.lambda_cfl = " + num(g.lambda_cfl) +
                " must exceed the audited wave-speed sup " + num(audit.max_abs_speed) +
                " (CFL invariant)");
    }

    if (!cfg.initial.breaks.empty()) {
        const double margin = cfg.solver.boundary_margin_cells * g.h;
        const double t = cfg.time.t_final;
        const double need_lo = cfg.initial.breaks.front() + std::min(0.0, audit.min_speed) * t - margin;
        const double need_hi = cfg.initial.breaks.back() + std::max(0.0, audit.max_speed) * t + margin;
        if (g.x_min > need_lo || g.x_max < need_hi) {
            invalid("grid [" + num(g.x_min) + ", " + num(g.x_max) +
                    "] must span the initial support plus the wave-speed margin [" +
                    num(need_lo) + ", " + num(need_hi) + "]");
        }
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg = parse_config_document(text);
    validate_config(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_document(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    YAML::Emitter e;
    auto list = [&](const std::vector<double>& v) {
        e << YAML::Flow << YAML::BeginSeq;
        for (double x : v) e << num(x);
        e << YAML::EndSeq;
    };
    e << YAML::BeginMap;
    e << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << cfg.system.name;
    e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : builtin_params(cfg.system.name, cfg.system.params)) {
        e << YAML::Key << k << YAML::Value << num(v);
    }
    e << YAML::EndMap << YAML::EndMap;

    e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "breaks" << YAML::Value;
    list(cfg.initial.breaks);
    e << YAML::Key << "states" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.initial.states) list(s);
    e << YAML::EndSeq << YAML::EndMap;

    e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "h" << YAML::Value << num(cfg.grid.h);
    e << YAML::Key << "lambda_cfl" << YAML::Value << num(cfg.grid.lambda_cfl);
    e << YAML::Key << "x_min" << YAML::Value << num(cfg.grid.x_min);
    e << YAML::Key << "x_max" << YAML::Value << num(cfg.grid.x_max);
    e << YAML::EndMap;

    e << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "t_final" << YAML::Value << num(cfg.time.t_final);
    e << YAML::Key << "snapshot_times" << YAML::Value;
    list(cfg.time.snapshot_times.empty() ? std::vector<double>{cfg.time.t_final}
                                         : cfg.time.snapshot_times);
    e << YAML::EndMap;

    e << YAML::Key << "sequence" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.sequence.kind));
    e << YAML::Key << "seed" << YAML::Value << cfg.sequence.seed;
    e << YAML::EndMap;

    e << YAML::Key << "ball" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "center" << YAML::Value;
    list(cfg.ball.center);
    e << YAML::Key << "radius" << YAML::Value << num(cfg.ball.radius);
    e << YAML::EndMap;

    const AssumptionProfile prof = make_profile(cfg);
    e << YAML::Key << "assumptions" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "A_const" << YAML::Value << num(prof.A_const);
    e << YAML::Key << "omega" << YAML::Value << num(prof.omega);
    e << YAML::Key << "phi" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << std::string(to_string(prof.phi.kind));
    e << YAML::Key << "amplitude" << YAML::Value << num(prof.phi.amplitude);
    e << YAML::EndMap;
    e << YAML::Key << "psi" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << std::string(to_string(prof.psi.kind));
    e << YAML::Key << "rate" << YAML::Value << num(prof.psi.rate);
    e << YAML::EndMap << YAML::EndMap;

    const auto& d = cfg.diagnostics;
    e << YAML::Key << "diagnostics" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "C0" << YAML::Value << num(d.C0);
    e << YAML::Key << "C1" << YAML::Value << num(d.C1);
    e << YAML::Key << "C2" << YAML::Value << num(d.C2);
    e << YAML::Key << "sigma_prefactor" << YAML::Value << num(d.sigma_prefactor);
    e << YAML::Key << "flags" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "functionals" << YAML::Value << d.functionals;
    e << YAML::Key << "diamonds" << YAML::Value << d.diamonds;
    e << YAML::Key << "balance" << YAML::Value << d.balance;
    e << YAML::Key << "theorem" << YAML::Value << d.theorem;
    e << YAML::EndMap << YAML::EndMap;

    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "directory" << YAML::Value << cfg.output.directory;
    e << YAML::Key << "formats" << YAML::Value << YAML::Flow << cfg.output.formats;
    e << YAML::Key << "points_per_h" << YAML::Value << cfg.output.points_per_h;
    e << YAML::EndMap;

    const auto& s = cfg.solver;
    e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "small_data_threshold" << YAML::Value << num(s.small_data_threshold);
    e << YAML::Key << "newton_tol" << YAML::Value << num(s.newton_tol);
    e << YAML::Key << "newton_max_iter" << YAML::Value << s.newton_max_iter;
    e << YAML::Key << "flux_level_tol" << YAML::Value << num(s.flux_level_tol);
    e << YAML::Key << "boundary_margin_cells" << YAML::Value << s.boundary_margin_cells;
    e << YAML::Key << "boundary_wave_tol" << YAML::Value << num(s.boundary_wave_tol);
    e << YAML::EndMap;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}  // namespace glimm
