#include "glimm/oracle.hpp"

#include <cmath>

#include "glimm/errors.hpp"

namespace glimm {

std::string_view to_string(OracleKind kind) {
    switch (kind) {
    case OracleKind::ClosedForm: return "closed_form";
    case OracleKind::Characteristics: return "characteristics";
    case OracleKind::FineGrid: return "fine_grid";
    case OracleKind::Ode: return "ode";
    }
    return "unknown";
}

OracleSolution scalar_riemann_exact(const ScalarFlux& flux, double u_left, double u_right,
                                    double t_max) {
    OracleSolution sol;
    sol.t_max = t_max;
    sol.x_min = -1e300;
    sol.x_max = 1e300;
    sol.provenance = OracleKind::ClosedForm;
    if (u_left == u_right) {
        sol.evaluator = [u_left](double, double) { return State::Constant(1, u_left); };
        return sol;
    }
    const double lo = std::min(u_left, u_right), hi = std::max(u_left, u_right);
    constexpr int probes = 64;
    double prev = flux.df(lo);
    for (int k = 1; k <= probes; ++k) {
        const double d = flux.df(lo + (hi - lo) * k / probes);
        if (!(d > prev)) throw Error(ErrorKind::NonConvex, "flux is not strictly convex");
        prev = d;
    }
    if (u_left > u_right) {
        const double s = (flux.f(u_left) - flux.f(u_right)) / (u_left - u_right);
        sol.evaluator = [=](double x, double t) {
            if (t <= 0.0) return State::Constant(1, x < 0.0 ? u_left : u_right);
            return State::Constant(1, x <= s * t ? u_left : u_right);
        };
        return sol;
    }
    const double sl = flux.df(u_left), sr = flux.df(u_right);
    const auto df = flux.df;
    sol.evaluator = [=](double x, double t) {
        if (t <= 0.0) return State::Constant(1, x < 0.0 ? u_left : u_right);
        const double xi = x / t;
        if (xi <= sl) return State::Constant(1, u_left);
        if (xi >= sr) return State::Constant(1, u_right);
        double a = u_left, b = u_right;
        for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            (df(m) < xi ? a : b) = m;
        }
        return State::Constant(1, 0.5 * (a + b));
    };
    return sol;
}

OracleSolution characteristics_linear(std::function<double(double, double)> a,
                                      std::function<double(double, double)> a_x,
                                      std::function<double(double, double, double)> g,
                                      std::function<double(double)> u0, double step,
                                      double t_max, double x_min, double x_max) {
    if (!(step > 0.0)) throw Error(ErrorKind::IntegrationFailure, "step must be positive");
    OracleSolution sol;
    sol.t_max = t_max;
    sol.x_min = x_min;
    sol.x_max = x_max;
    sol.provenance = OracleKind::Characteristics;
    sol.evaluator = [=](double x, double t) {
        if (t <= 0.0) return State::Constant(1, u0(x));
        const long n = static_cast<long>(std::ceil(t / step - 1e-12));
        const double k = t / n;
        // Backwards to the foot.
        double y = x;
        for (long i = 0; i < n; ++i) {
            const double tau = t - i * k;
            const double k1 = a(y, tau);
            const double k2 = a(y - 0.5 * k * k1, tau - 0.5 * k);
            const double k3 = a(y - 0.5 * k * k2, tau - 0.5 * k);
            const double k4 = a(y - k * k3, tau - k);
            y -= (k / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        // Forwards with (x, u) together.
        double u = u0(y);
        auto du = [&](double xx, double uu, double tau) {
            const double src = g ? g(uu, xx, tau) : 0.0;
            return -a_x(xx, tau) * uu - src;
        };
        for (long i = 0; i < n; ++i) {
            const double tau = i * k;
            const double x1 = a(y, tau), u1 = du(y, u, tau);
            const double ym = y + 0.5 * k * x1, um = u + 0.5 * k * u1;
            const double x2 = a(ym, tau + 0.5 * k), u2 = du(ym, um, tau + 0.5 * k);
            const double yn = y + 0.5 * k * x2, un = u + 0.5 * k * u2;
            const double x3 = a(yn, tau + 0.5 * k), u3 = du(yn, un, tau + 0.5 * k);
            const double ye = y + k * x3, ue = u + k * u3;
            const double x4 = a(ye, tau + k), u4 = du(ye, ue, tau + k);
            y += (k / 6.0) * (x1 + 2.0 * x2 + 2.0 * x3 + x4);
            u += (k / 6.0) * (u1 + 2.0 * u2 + 2.0 * u3 + u4);
        }
        if (!std::isfinite(u)) {
            throw Error(ErrorKind::IntegrationFailure, "characteristic integration diverged");
        }
        return State::Constant(1, u);
    };
    return sol;
}

OracleSolution ode_reference(std::function<State(const State&, double)> source, State u0,
                             double step, double t_max) {
    if (!(step > 0.0)) throw Error(ErrorKind::IntegrationFailure, "step must be positive");
    OracleSolution sol;
    sol.t_max = t_max;
    sol.x_min = -1e300;
    sol.x_max = 1e300;
    sol.provenance = OracleKind::Ode;
    sol.evaluator = [=](double, double t) {
        State u = u0;
        if (t <= 0.0 || !source) return u;
        const long n = static_cast<long>(std::ceil(t / step - 1e-12));
        const double k = t / n;
        auto rhs = [&](const State& v, double tau) { return State(-source(v, tau)); };
        for (long i = 0; i < n; ++i) {
            const double tau = i * k;
            const State k1 = rhs(u, tau);
            const State k2 = rhs(u + 0.5 * k * k1, tau + 0.5 * k);
            const State k3 = rhs(u + 0.5 * k * k2, tau + 0.5 * k);
            const State k4 = rhs(u + k * k3, tau + k);
            u += (k / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!u.allFinite()) throw Error(ErrorKind::IntegrationFailure, "ODE reference diverged");
        return u;
    };
    return sol;
}

OracleSolution fine_grid_reference(const SystemModel& model, const Problem& problem,
                                   double h_ref) {
    Problem fine = problem;
    fine.grid = StaggeredGrid::make(h_ref, problem.grid.lambda_cfl, problem.grid.x_min,
                                    problem.grid.x_max);
    fine.retention = Retention::Snapshots;
    auto traj = std::make_shared<Trajectory>(run(model, fine));
    OracleSolution sol;
    sol.t_max = problem.t_final;
    sol.x_min = problem.grid.x_min;
    sol.x_max = problem.grid.x_max;
    sol.provenance = OracleKind::FineGrid;
    sol.evaluator = [traj](double x, double t) { return traj->evaluate(x, t); };
    return sol;
}

double l1_distance(const std::function<State(double)>& f, const std::function<State(double)>& g,
                   double lo, double hi, long cells) {
    const double dx = (hi - lo) / cells;
    double sum = 0.0;
    for (long i = 0; i < cells; ++i) {
        const double x = lo + (i + 0.5) * dx;
        sum += (f(x) - g(x)).lpNorm<1>();
    }
    return sum * dx;
}

}  // namespace glimm
