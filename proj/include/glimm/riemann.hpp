#pragma once

#include <array>
#include <string_view>

#include "glimm/system.hpp"

namespace glimm {

enum class WaveKind { Null, Shock, Rarefaction, Contact };

std::string_view to_string(WaveKind kind);

struct RiemannOptions {
    // Fans with Σ|τ_i| above this abort with SmallDataExceeded.
    double small_data_threshold = 0.5;
    double newton_tol = 1e-12;
    int newton_max_iter = 60;
};

/// Self-similar solution of a Riemann problem for the flux frozen at `frame`.
///
/// Families are indexed 0..n-1. `states[i]` is the constant state left of
/// family i, `states[n]` the right datum. Shocks and contacts carry a single
/// speed (speed_lo == speed_hi); rarefactions carry [λ_i(left), λ_i(right)].
struct WaveFan {
    int n = 0;
    Frame frame;
    State strengths;
    std::array<WaveKind, kMaxDim> kinds{};
    std::array<double, kMaxDim> speed_lo{};
    std::array<double, kMaxDim> speed_hi{};
    std::array<State, kMaxDim + 1> states;

    const State& left() const { return states[0]; }
    const State& right() const { return states[n]; }
    bool is_null() const;
    double strength_l1() const { return strengths.lpNorm<1>(); }
    double max_abs_speed() const;
};

/// Φ_i(τ; U0, x̄, t̄): the state reached from U0 by an i-wave of strength τ.
///
/// The strength is the eigen-coordinate τ = l_i(U0)·(Φ_i − U0), so
/// dΦ_i/dτ(0) = r_i. For genuinely nonlinear fields τ > 0 follows the
/// rarefaction curve and τ < 0 the admissible Hugoniot branch; linearly
/// degenerate fields follow the contact curve for both signs.
State wave_curve(const SystemModel& model, int family, double tau, const State& u0,
                 const Frame& frame);

/// Φ(τ; U0): composition of the n single-family curves.
State wave_fan_curve(const SystemModel& model, const State& tau, const State& u0,
                     const Frame& frame);

/// Shock speed of the i-shock from u0 with strength tau < 0 (Rankine–Hugoniot).
double shock_speed(const SystemModel& model, int family, double tau, const State& u0,
                   const Frame& frame);

/// Ω(U_R; U_L): the fan with Φ(Ω) = U_R. Throws NewtonDivergence,
/// SmallDataExceeded, AdmissibilityViolation, NonHyperbolic.
WaveFan solve_riemann(const SystemModel& model, const State& left, const State& right,
                      const Frame& frame, const RiemannOptions& opts = {});

/// Value of the fan at slope ξ = (x − x̄)/(t − t̄). At a shock or contact
/// speed the left state is returned.
State sample_fan(const SystemModel& model, const WaveFan& fan, double xi);

}  // namespace glimm
