#pragma once

#include <functional>
#include <memory>
#include <string_view>

#include "glimm/scheme.hpp"

namespace glimm {

enum class OracleKind { ClosedForm, Characteristics, FineGrid, Ode };

std::string_view to_string(OracleKind kind);

/// Reference solution on a space-time window.
struct OracleSolution {
    std::function<State(double x, double t)> evaluator;
    double t_min = 0.0;
    double t_max = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    OracleKind provenance = OracleKind::ClosedForm;

    State operator()(double x, double t) const { return evaluator(x, t); }
};

/// Scalar flux with its derivative, for the closed-form Riemann oracle.
struct ScalarFlux {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// Entropy solution of u_t + f(u)_x = 0 with Riemann data at x = 0, t = 0.
/// Throws NonConvex unless f' is strictly increasing between the states.
OracleSolution scalar_riemann_exact(const ScalarFlux& flux, double u_left, double u_right,
                                    double t_max = 1e300);

/// u_t + (a u)_x + g(u, x, t) = 0 by characteristics: the foot of the
/// characteristic through (x, t) is found by RK4 backwards, then u is carried
/// forwards along du/dτ = −a_x u − g. `step` is the RK4 step.
OracleSolution characteristics_linear(std::function<double(double, double)> a,
                                      std::function<double(double, double)> a_x,
                                      std::function<double(double, double, double)> g,
                                      std::function<double(double)> u0, double step,
                                      double t_max, double x_min = -1e300,
                                      double x_max = 1e300);

/// U' = −G(U, t) by RK4 with step `step`, for spatially constant data.
OracleSolution ode_reference(std::function<State(const State&, double)> source, State u0,
                             double step, double t_max);

/// The scheme itself at mesh width h_ref, retaining the snapshot strips of
/// `problem` (and t_final).
OracleSolution fine_grid_reference(const SystemModel& model, const Problem& problem,
                                   double h_ref);

/// ∫_lo^hi |f(x) − g(x)|₁ dx by the midpoint rule on `cells` cells.
double l1_distance(const std::function<State(double)>& f, const std::function<State(double)>& g,
                   double lo, double hi, long cells);

}  // namespace glimm
