#include "glimm/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "glimm/errors.hpp"

namespace glimm {

// ---------------------------------------------------------------------------
// Grid and initial data

StaggeredGrid StaggeredGrid::make(double h, double lambda_cfl, double x_min, double x_max) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error(ErrorKind::ValidationError, "grid.h must be positive");
    }
    if (!(lambda_cfl > 0.0) || !std::isfinite(lambda_cfl)) {
        throw Error(ErrorKind::ValidationError, "grid.lambda_cfl must be positive");
    }
    if (!(x_min < x_max)) {
        throw Error(ErrorKind::ValidationError, "grid.x_min must be below grid.x_max");
    }
    StaggeredGrid g;
    g.h = h;
    g.lambda_cfl = lambda_cfl;
    g.dt = h / lambda_cfl;
    g.x_min = x_min;
    g.x_max = x_max;
    g.r_lo = static_cast<long>(std::ceil(x_min / h - 1e-9));
    g.r_hi = static_cast<long>(std::floor(x_max / h + 1e-9));
    if (g.r_hi - g.r_lo < 4) {
        throw Error(ErrorKind::ValidationError, "grid must hold at least five mesh points");
    }
    return g;
}

long StaggeredGrid::steps_to(double t_final) const {
    if (t_final <= 0.0) return 0;
    return static_cast<long>(std::ceil(t_final / dt - 1e-9));
}

InitialProfile InitialProfile::constant(State u) { return piecewise({}, {std::move(u)}); }

InitialProfile InitialProfile::piecewise(std::vector<double> breaks, std::vector<State> states) {
    if (states.size() != breaks.size() + 1) {
        throw Error(ErrorKind::ValidationError, "initial data need one more state than breaks");
    }
    if (!std::is_sorted(breaks.begin(), breaks.end())) {
        throw Error(ErrorKind::ValidationError, "initial breaks must be ascending");
    }
    InitialProfile p;
    for (const State& u : states) {
        if (u.size() != states.front().size() || !u.allFinite()) {
            throw Error(ErrorKind::ValidationError, "initial states must be finite, equal size");
        }
        p.sup_ = std::max(p.sup_, u.norm());
    }
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        p.tv_ += (states[i + 1] - states[i]).norm();
    }
    if (!breaks.empty()) p.support_ = {breaks.front(), breaks.back()};
    p.breaks_ = std::move(breaks);
    p.states_ = std::move(states);
    return p;
}

InitialProfile InitialProfile::function(std::function<State(double)> f, double lo, double hi,
                                        int samples) {
    InitialProfile p;
    p.fn_ = std::move(f);
    p.fn_lo_ = lo;
    p.fn_hi_ = hi;
    p.support_ = {lo, hi};
    State prev = p.fn_(lo);
    p.sup_ = prev.norm();
    for (int i = 1; i < samples; ++i) {
        const State u = p.fn_(lo + (hi - lo) * i / (samples - 1));
        p.tv_ += (u - prev).norm();
        p.sup_ = std::max(p.sup_, u.norm());
        prev = u;
    }
    return p;
}

State InitialProfile::operator()(double x) const {
    if (fn_) return fn_(std::clamp(x, fn_lo_, fn_hi_));
    const auto idx = std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin();
    return states_[static_cast<std::size_t>(idx)];
}

State InitialProfile::left_state() const { return fn_ ? fn_(fn_lo_) : states_.front(); }
State InitialProfile::right_state() const { return fn_ ? fn_(fn_hi_) : states_.back(); }

// ---------------------------------------------------------------------------
// Strip evaluation

std::size_t StripSolution::fan_index(double x) const {
    const long j = static_cast<long>(std::ceil(x / h)) - 1;
    const long r = ((j + s) % 2 == 0) ? j : j + 1;
    const long k = (r - r_first) / 2;
    return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(fans.size()) - 1));
}

State StripSolution::evaluate(const SystemModel& model, double x, double t) const {
    const std::size_t k = fan_index(x);
    const WaveFan& fan = fans[k];
    const double xr = static_cast<double>(r_of(k)) * h;
    if (x <= xr - h) return fan.left();
    if (x > xr + h) return fan.right();
    if (t <= t0) return x <= xr ? fan.left() : fan.right();
    return sample_fan(model, fan, (x - xr) / (t - t0));
}

// ---------------------------------------------------------------------------
// Trajectory

const StripSolution& Trajectory::strip(long s) const {
    const auto it = strips_.find(s);
    if (it == strips_.end()) {
        throw Error(ErrorKind::SnapshotUnavailable,
                    "strip " + std::to_string(s) + " was not retained");
    }
    return it->second;
}

long Trajectory::strip_for_time(double t) const {
    if (t < -1e-12 || t > t_final_ + 1e-9 * (1.0 + t_final_)) {
        throw Error(ErrorKind::SnapshotUnavailable, "time outside the computed range");
    }
    const long s = static_cast<long>(std::floor(t / grid_.dt + 1e-9));
    return std::clamp<long>(s, 0, steps_);
}

State Trajectory::evaluate(double x, double t) const {
    return strip(strip_for_time(t)).evaluate(model_, x, t);
}

std::vector<std::pair<double, State>> Trajectory::snapshot(double t, int points_per_h) const {
    const StripSolution& st = strip(strip_for_time(t));
    // Cover every rectangle of the strip, so each constant piece is hit.
    const double lo = grid_.x(st.r_first - 1);
    const long span = 2 * static_cast<long>(st.fans.size());
    const double dx = grid_.h / points_per_h;
    const long count = span * points_per_h;
    std::vector<std::pair<double, State>> out;
    out.reserve(static_cast<std::size_t>(count + 1));
    for (long i = 0; i <= count; ++i) {
        const double x = lo + static_cast<double>(i) * dx;
        out.emplace_back(x, st.evaluate(model_, x, t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Elementary steps

namespace {

void require_in_ball(const DomainBall* ball, const State& u, const char* what) {
    if (ball && !ball->contains(u)) {
        throw Error(ErrorKind::BallExit, std::string(what) + " left the admissible ball");
    }
}

// Slope of the sampling ray inside a rectangle.
double sample_slope(const StaggeredGrid& g, double a) { return a * g.h / g.dt; }

// Attach (s, r) to an error escaping the per-point work.
template <typename Fn>
void at_point(long s, long r, Fn&& fn) {
    try {
        fn();
    } catch (Error& e) {
        if (!e.strip) e.at(s, r);
        throw;
    }
}

State newton_flux_level(const SystemModel& model, const State& start, const State& target,
                        const Frame& f, const SolverOptions& opts) {
    State u = start;
    State res = model.flux(u, f) - target;
    double rn = res.lpNorm<Eigen::Infinity>();
    auto step = [&](const State& at, const State& r) -> State {
        const Matrix jac = model.jacobian(at, f);
        if (at.size() == 1) return State::Constant(1, r(0) / jac(0, 0));
        return jac.partialPivLu().solve(r);
    };
    for (int it = 0; it <= opts.flux_level_max_iter; ++it) {
        if (rn == 0.0) return u;
        if (rn <= opts.flux_level_tol) {
            // One polishing step; keep it only if it does not hurt.
            const State u2 = u - step(u, res);
            if (u2.allFinite() &&
                (model.flux(u2, f) - target).lpNorm<Eigen::Infinity>() <= rn) {
                return u2;
            }
            return u;
        }
        u -= step(u, res);
        if (!u.allFinite()) break;
        res = model.flux(u, f) - target;
        rn = res.lpNorm<Eigen::Infinity>();
    }
    throw Error(ErrorKind::NewtonDivergence, "flux-level equation did not converge");
}

std::pair<State, State> flux_levels(const SystemModel& model, const State& u_hat,
                                    const Frame& left, const Frame& here, const Frame& right,
                                    double h, const SolverOptions& opts, const DomainBall* ball) {
    const State target = model.flux(u_hat, here);
    const State th = theta(model, u_hat, here);
    const State v = newton_flux_level(model, u_hat - h * th, target, right, opts);
    const State w = newton_flux_level(model, u_hat + h * th, target, left, opts);
    require_in_ball(ball, v, "flux-level state V");
    require_in_ball(ball, w, "flux-level state W");
    return {v, w};
}

State split_at(const SystemModel& model, const State& u, const Frame& f, double dt,
               const DomainBall* ball) {
    if (!model.has_source()) return u;
    const State out = u - dt * model.source(u, f);
    require_in_ball(ball, out, "split state");
    return out;
}

LevelStates empty_level(const StaggeredGrid& g, long s) {
    LevelStates lv;
    lv.s = s;
    lv.r_first = ((g.r_lo - 1 + s) % 2 != 0) ? g.r_lo - 1 : g.r_lo;
    const long r_last = ((g.r_hi + 1 + s) % 2 != 0) ? g.r_hi + 1 : g.r_hi;
    const auto count = static_cast<std::size_t>((r_last - lv.r_first) / 2 + 1);
    lv.U.resize(count);
    return lv;
}

}  // namespace

State split_source(const SystemModel& model, const State& u, long r, long s,
                   const StaggeredGrid& grid, const DomainBall* ball) {
    if (!model.has_source()) return u;
    return split_at(model, u, model.frame(grid.x(r), grid.t(s)), grid.dt, ball);
}

std::pair<State, State> solve_flux_level(const SystemModel& model, const State& u_hat, long r,
                                         long s, const StaggeredGrid& grid,
                                         const SolverOptions& opts, const DomainBall* ball) {
    const double t = grid.t(s);
    return flux_levels(model, u_hat, model.frame(grid.x(r - 1), t), model.frame(grid.x(r), t),
                       model.frame(grid.x(r + 1), t), grid.h, opts, ball);
}

void complete_level(const SystemModel& model, const Problem& problem, LevelStates& level) {
    const std::size_t m = level.size();
    level.U_hat.resize(m);
    level.V.resize(m);
    level.W.resize(m);
    const DomainBall* ball = &problem.ball;
    const StaggeredGrid& g = problem.grid;
    const double t = g.t(level.s);
    level.frames.resize(2 * m + 1);
    for (std::size_t j = 0; j < level.frames.size(); ++j) {
        level.frames[j] = model.frame(g.x(level.r_first - 1 + static_cast<long>(j)), t);
    }
    for (std::size_t k = 0; k < m; ++k) {
        const long r = level.r_of(k);
        at_point(level.s, r, [&] {
            require_in_ball(ball, level.U[k], "sampled state");
            level.U_hat[k] = split_at(model, level.U[k], level.frame_at(r), g.dt, ball);
            auto [v, w] = flux_levels(model, level.U_hat[k], level.frame_at(r - 1),
                                      level.frame_at(r), level.frame_at(r + 1), g.h,
                                      problem.options, ball);
            level.V[k] = std::move(v);
            level.W[k] = std::move(w);
        });
    }
}

LevelStates initial_level(const SystemModel& model, const Problem& problem) {
    const StaggeredGrid& g = problem.grid;
    LevelStates lv = empty_level(g, 0);
    lv.a = problem.sequence(0);
    for (std::size_t k = 0; k < lv.size(); ++k) lv.U[k] = problem.initial(lv.y(k, g));
    complete_level(model, problem, lv);
    return lv;
}

StripSolution solve_strip(const SystemModel& model, const Problem& problem,
                          const LevelStates& level) {
    const StaggeredGrid& g = problem.grid;
    const SolverOptions& opts = problem.options;
    const long s = level.s;
    StripSolution st;
    st.s = s;
    st.h = g.h;
    st.t0 = g.t(s);
    st.t1 = g.t(s + 1);
    st.r_first = ((g.r_lo + s) % 2 == 0) ? g.r_lo : g.r_lo + 1;
    const long r_last = ((g.r_hi + s) % 2 == 0) ? g.r_hi : g.r_hi - 1;
    st.fans.resize(static_cast<std::size_t>((r_last - st.r_first) / 2 + 1));
    for (std::size_t k = 0; k < st.fans.size(); ++k) {
        const long r = st.r_of(k);
        at_point(s, r, [&] {
            const State& left = level.V[level.slot(r - 1)];
            const State& right = level.W[level.slot(r + 1)];
            WaveFan fan = solve_riemann(model, left, right,
                                        level.frames.empty() ? model.frame(g.x(r), st.t0)
                                                             : level.frame_at(r),
                                        opts.riemann);
            if (!fan.is_null()) {
                if (fan.max_abs_speed() >= g.lambda_cfl) {
                    throw Error(ErrorKind::CflViolation, "wave speed reached lambda_cfl");
                }
                for (int i = 1; i < fan.n; ++i) require_in_ball(&problem.ball, fan.states[i],
                                                                "intermediate fan state");
                const bool near_edge = r - g.r_lo < opts.boundary_margin_cells ||
                                       g.r_hi - r < opts.boundary_margin_cells;
                if (near_edge && fan.strength_l1() > opts.boundary_wave_tol) {
                    throw Error(ErrorKind::BoundaryReached,
                                "a wave reached the truncated domain boundary");
                }
            }
            st.fans[k] = std::move(fan);
        });
    }
    return st;
}

LevelStates sample_next(const SystemModel& model, const Problem& problem,
                        const StripSolution& strip) {
    const StaggeredGrid& g = problem.grid;
    LevelStates lv = empty_level(g, strip.s + 1);
    lv.a = problem.sequence(lv.s);
    const double xi = sample_slope(g, lv.a);
    for (std::size_t k = 0; k < lv.size(); ++k) {
        const long r = std::clamp(lv.r_of(k), strip.r_first, strip.r_of(strip.fans.size() - 1));
        // Ghost columns repeat the nearest in-range column of the same parity.
        const auto j = static_cast<std::size_t>((r - strip.r_first) / 2);
        lv.U[k] = sample_fan(model, strip.fans[j], xi);
    }
    return lv;
}

std::pair<StripSolution, LevelStates> advance_strip(const SystemModel& model,
                                                    const Problem& problem,
                                                    const LevelStates& level) {
    StripSolution st = solve_strip(model, problem, level);
    LevelStates next = sample_next(model, problem, st);
    complete_level(model, problem, next);
    return {std::move(st), std::move(next)};
}

Trajectory run(const SystemModel& model, const Problem& problem,
               const std::vector<StripMonitor>& monitors) {
    const StaggeredGrid& g = problem.grid;
    if (problem.initial.dim() != model.n()) {
        throw Error(ErrorKind::ValidationError, "initial data dimension does not match system");
    }
    const long steps = g.steps_to(problem.t_final);
    Trajectory traj(model, g);
    traj.set_final({}, steps, problem.t_final);

    std::set<long> wanted;
    for (double t : problem.snapshot_times) {
        wanted.insert(std::clamp<long>(static_cast<long>(std::floor(t / g.dt + 1e-9)), 0, steps));
    }
    wanted.insert(steps);

    LevelStates level = initial_level(model, problem);
    for (long s = 0; s <= steps; ++s) {
        StripSolution st = solve_strip(model, problem, level);
        LevelStates next = sample_next(model, problem, st);
        if (s < steps) complete_level(model, problem, next);
        for (const auto& mon : monitors) mon(st, next);
        if (problem.retention == Retention::All || wanted.count(s)) traj.keep(std::move(st));
        if (s == steps) {
            traj.set_final(std::move(level), steps, problem.t_final);
            break;
        }
        level = std::move(next);
    }
    return traj;
}

std::vector<LevelStates> classical_glimm(const SystemModel& model, const Problem& problem,
                                         long steps) {
    const StaggeredGrid& g = problem.grid;
    std::vector<LevelStates> levels;
    LevelStates lv = empty_level(g, 0);
    lv.a = problem.sequence(0);
    for (std::size_t k = 0; k < lv.size(); ++k) lv.U[k] = problem.initial(lv.y(k, g));
    levels.push_back(lv);
    for (long s = 0; s < steps; ++s) {
        const LevelStates& cur = levels.back();
        StripSolution st;
        st.s = s;
        st.h = g.h;
        st.t0 = g.t(s);
        st.r_first = ((g.r_lo + s) % 2 == 0) ? g.r_lo : g.r_lo + 1;
        const long r_last = ((g.r_hi + s) % 2 == 0) ? g.r_hi : g.r_hi - 1;
        for (long r = st.r_first; r <= r_last; r += 2) {
            st.fans.push_back(solve_riemann(model, cur.U[cur.slot(r - 1)], cur.U[cur.slot(r + 1)],
                                            model.frame(g.x(r), st.t0),
                                            problem.options.riemann));
        }
        levels.push_back(sample_next(model, problem, st));
    }
    return levels;
}

}  // namespace glimm
