#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "glimm/riemann.hpp"
#include "glimm/sequence.hpp"
#include "glimm/system.hpp"

namespace glimm {

/// x_r = r h, t_s = s Δt with Δt = h / λ. Mesh indices run over [r_lo, r_hi].
struct StaggeredGrid {
    double h = 0.01;
    double lambda_cfl = 2.0;
    double dt = 0.005;
    double x_min = -1.0;
    double x_max = 1.0;
    long r_lo = -100;
    long r_hi = 100;

    static StaggeredGrid make(double h, double lambda_cfl, double x_min, double x_max);

    double x(long r) const { return static_cast<double>(r) * h; }
    double t(long s) const { return static_cast<double>(s) * dt; }
    // Number of strips needed to reach t_final.
    long steps_to(double t_final) const;
};

struct SolverOptions {
    RiemannOptions riemann;
    double flux_level_tol = 1e-12;
    int flux_level_max_iter = 30;
    int boundary_margin_cells = 4;
    double boundary_wave_tol = 1e-8;
};

/// Initial data: piecewise constant (breaks + states) or an arbitrary
/// function of x. Piecewise data take the right state at a break.
class InitialProfile {
public:
    InitialProfile() = default;

    static InitialProfile constant(State u);
    static InitialProfile piecewise(std::vector<double> breaks, std::vector<State> states);
    // TV and sup are measured on `samples` points of [lo, hi].
    static InitialProfile function(std::function<State(double)> f, double lo, double hi,
                                   int samples = 20001);

    State operator()(double x) const;
    int dim() const { return static_cast<int>(left_state().size()); }
    double total_variation() const { return tv_; }
    double sup_norm() const { return sup_; }
    State left_state() const;
    State right_state() const;
    // Smallest interval outside which the data are constant.
    std::pair<double, double> support() const { return support_; }

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<State>& states() const { return states_; }
    bool is_piecewise() const { return !fn_; }

private:
    std::vector<double> breaks_;
    std::vector<State> states_;
    std::function<State(double)> fn_;
    double fn_lo_ = 0.0, fn_hi_ = 0.0;
    double tv_ = 0.0;
    double sup_ = 0.0;
    std::pair<double, double> support_{0.0, 0.0};
};

/// States on time level s at the mesh points r with r + s odd.
///
/// Slot k holds r = r_first + 2k; the first and last slots are ghost columns
/// just outside [r_lo, r_hi].
struct LevelStates {
    long s = 0;
    long r_first = 0;
    double a = 0.0;  // sampling point a_s
    std::vector<State> U, U_hat, V, W;
    // Frozen frames at (x_r, t_s) for r_first - 1 ≤ r ≤ r_of(size() - 1) + 1,
    // filled by complete_level.
    std::vector<Frame> frames;

    std::size_t size() const { return U.size(); }
    long r_of(std::size_t k) const { return r_first + 2 * static_cast<long>(k); }
    std::size_t slot(long r) const { return static_cast<std::size_t>((r - r_first) / 2); }
    double y(std::size_t k, const StaggeredGrid& g) const { return g.x(r_of(k)) + a * g.h; }
    const Frame& frame_at(long r) const { return frames[static_cast<std::size_t>(r - r_first + 1)]; }
};

/// U_h on the strip t_s ≤ t < t_{s+1}: one fan per mesh point r with r + s
/// even, centred at (x_r, t_s), filling (x_{r-1}, x_{r+1}].
///
/// Fan r carries left datum V^{r-1}_s and right datum W^{r+1}_s, so the
/// vertical segment at x_{r-1} separates fan(r-2).right() = W^{r-1}_s from
/// fan(r).left() = V^{r-1}_s.
struct StripSolution {
    long s = 0;
    long r_first = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    double h = 0.0;
    std::vector<WaveFan> fans;

    long r_of(std::size_t k) const { return r_first + 2 * static_cast<long>(k); }
    // Index of the fan whose rectangle contains x (clamped to the range).
    std::size_t fan_index(double x) const;
    // U_h(x, t) for t0 ≤ t ≤ t1; at t = t0 this is the t_s+ profile.
    State evaluate(const SystemModel& model, double x, double t) const;
};

using StripMonitor = std::function<void(const StripSolution& strip, const LevelStates& next)>;

enum class Retention { All, Snapshots };

struct Problem {
    StaggeredGrid grid;
    SamplingSequence sequence;
    InitialProfile initial;
    DomainBall ball;
    SolverOptions options;
    double t_final = 0.0;
    std::vector<double> snapshot_times;
    Retention retention = Retention::Snapshots;
};

/// Strips retained by a run plus the final sampled level.
class Trajectory {
public:
    Trajectory(SystemModel model, StaggeredGrid grid) : model_(std::move(model)), grid_(grid) {}

    const StaggeredGrid& grid() const { return grid_; }
    const SystemModel& model() const { return model_; }
    long steps() const { return steps_; }
    double t_final() const { return t_final_; }

    bool has_strip(long s) const { return strips_.count(s) != 0; }
    const StripSolution& strip(long s) const;
    long strip_for_time(double t) const;
    // U_h(x, t); right-continuous in t. Throws SnapshotUnavailable.
    State evaluate(double x, double t) const;
    // Exact evaluations on a uniform grid of `points_per_h` points per h
    // spanning every rectangle of the strip.
    std::vector<std::pair<double, State>> snapshot(double t, int points_per_h = 4) const;
    // The sampled states U^r_S at t_S = t_final (left limits in time).
    const LevelStates& final_level() const { return final_level_; }

    void keep(StripSolution strip) { strips_[strip.s] = std::move(strip); }
    void set_final(LevelStates level, long steps, double t_final) {
        final_level_ = std::move(level);
        steps_ = steps;
        t_final_ = t_final;
    }

private:
    SystemModel model_;
    StaggeredGrid grid_;
    std::map<long, StripSolution> strips_;
    LevelStates final_level_;
    long steps_ = 0;
    double t_final_ = 0.0;
};

// ---------------------------------------------------------------------------
// Elementary steps

/// Û = U − Δt G(U, x_r, t_s). Throws BallExit.
State split_source(const SystemModel& model, const State& u, long r, long s,
                   const StaggeredGrid& grid, const DomainBall* ball = nullptr);

/// (V, W) with F(V, x_{r+1}) = F(Û, x_r) = F(W, x_{r-1}) at t_s, by Newton
/// from Û ∓ h ϑ(Û). Throws NewtonDivergence, SingularJacobian, BallExit.
std::pair<State, State> solve_flux_level(const SystemModel& model, const State& u_hat, long r,
                                         long s, const StaggeredGrid& grid,
                                         const SolverOptions& opts = {},
                                         const DomainBall* ball = nullptr);

/// Level 0: U^r_0 = U0(y^r_0), followed by the split and flux-level solves.
LevelStates initial_level(const SystemModel& model, const Problem& problem);

/// All Riemann problems of strip s from the level-s data.
StripSolution solve_strip(const SystemModel& model, const Problem& problem,
                          const LevelStates& level);

/// U^r_{s+1} = U_h(y^r_{s+1}−, t_{s+1}−) for r + s even, ghosts included.
/// Only the U column is filled.
LevelStates sample_next(const SystemModel& model, const Problem& problem,
                        const StripSolution& strip);

/// Split and flux-level solves for every slot of a sampled level.
void complete_level(const SystemModel& model, const Problem& problem, LevelStates& level);

/// One strip: Riemann solves on level s, then the complete level s+1.
std::pair<StripSolution, LevelStates> advance_strip(const SystemModel& model,
                                                    const Problem& problem,
                                                    const LevelStates& level);

/// Strips 0..S with S = steps_to(t_final), so snapshots at t_final are the
/// t_S+ profile. Monitors see every strip together with the next level.
/// Errors carry the strip and mesh point where they happened.
Trajectory run(const SystemModel& model, const Problem& problem,
               const std::vector<StripMonitor>& monitors = {});

/// Unmodified random choice for homogeneous systems: Riemann problems
/// between neighbouring samples, no splitting, no flux levels. Returns the
/// sampled U columns of levels 0..steps.
std::vector<LevelStates> classical_glimm(const SystemModel& model, const Problem& problem,
                                         long steps);

}  // namespace glimm
