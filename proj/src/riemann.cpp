#include "glimm/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

std::string_view to_string(WaveKind kind) {
    switch (kind) {
    case WaveKind::Null: return "null";
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Contact: return "contact";
    }
    return "unknown";
}

bool WaveFan::is_null() const {
    for (int i = 0; i < n; ++i) {
        if (kinds[i] != WaveKind::Null) return false;
    }
    return true;
}

double WaveFan::max_abs_speed() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        if (kinds[i] == WaveKind::Null) continue;
        m = std::max({m, std::abs(speed_lo[i]), std::abs(speed_hi[i])});
    }
    return m;
}

namespace {

using Row = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;
using Augmented = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                                kMaxDim + 1, kMaxDim + 1>;
using AugVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;

constexpr int kRk4Substeps = 32;
constexpr int kRk4MaxSubsteps = 4096;
constexpr double kCurveTol = 1e-12;
constexpr double kAdmissTol = 1e-10;
constexpr double kTinyShock = 1e-7;
constexpr double kHugoniotChunk = 0.05;

// Oriented eigen-data at the base point of a single-family curve.
struct CurveBase {
    State r;
    Row l;
    double lambda = 0.0;
};

CurveBase curve_base(const SystemModel& model, int family, const State& u0, const Frame& f) {
    const EigenStructure es = eigen_decompose(model, u0, f);
    return {es.right.col(family), es.left.row(family), es.lambdas(family)};
}

double speed_of(const SystemModel& model, int family, const State& u, const Frame& f) {
    return characteristic_speeds(model.jacobian(u, f))(family);
}

// Scalar orientation: +1 if λ increases with u (or the field is linear).
double scalar_orientation(const SystemModel& model, const State& u, const Frame& f) {
    if (!model.genuinely_nonlinear(0)) return 1.0;
    const double h = 1e-6 * (1.0 + std::abs(u(0)));
    State up = u, um = u;
    up(0) += h;
    um(0) -= h;
    const double d = model.jacobian(up, f)(0, 0) - model.jacobian(um, f)(0, 0);
    return d < 0.0 ? -1.0 : 1.0;
}

// Integral curve of r_i in the eigen-coordinate σ = l_i(U0)·(U − U0).
State integral_curve(const SystemModel& model, int family, double sigma, const State& u0,
                     const CurveBase& base, const Frame& f) {
    if (sigma == 0.0) return u0;
    auto rhs = [&](const State& u) -> State {
        const EigenStructure es = eigen_of_matrix(model.jacobian(u, f));
        State r = es.right.col(family);
        if (r.dot(base.r) < 0.0) r = -r;
        const double d = base.l.dot(r);
        if (!(std::abs(d) > 1e-8)) {
            throw Error(ErrorKind::CurveIntegrationFailure,
                        "rarefaction curve left the eigen-coordinate chart");
        }
        return r / d;
    };
    auto rk4 = [&](const State& u, double ds) -> State {
        const State k1 = rhs(u);
        const State k2 = rhs(u + 0.5 * ds * k1);
        const State k3 = rhs(u + 0.5 * ds * k2);
        const State k4 = rhs(u + ds * k3);
        return u + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    int steps = kRk4Substeps;
    while (true) {
        const double ds = sigma / steps;
        const State whole = rk4(u0, ds);
        const State halves = rk4(rk4(u0, 0.5 * ds), 0.5 * ds);
        if ((whole - halves).lpNorm<Eigen::Infinity>() > kCurveTol) {
            steps *= 2;
            if (steps > kRk4MaxSubsteps) {
                throw Error(ErrorKind::CurveIntegrationFailure,
                            "rarefaction curve step rejected at minimum substep");
            }
            continue;
        }
        State u = whole;
        for (int k = 1; k < steps; ++k) u = rk4(u, ds);
        if (!u.allFinite()) {
            throw Error(ErrorKind::CurveIntegrationFailure, "non-finite rarefaction state");
        }
        return u;
    }
}

// Hugoniot locus point U = U0 + τ w with l·w = 1, solved for (w, s) from
//   (F(U0 + τ w) − F(U0)) / τ = s w,
// which stays regular as τ → 0 (w → r_i, s → λ_i).
std::pair<State, double> hugoniot(const SystemModel& model, int family, double tau,
                                  const State& u0, const CurveBase& base, const Frame& f) {
    const int n = model.n();
    if (tau == 0.0) return {u0, base.lambda};
    if (std::abs(tau) < kTinyShock) {
        // The difference quotient is pure rounding here; the tangent is exact to O(τ²).
        const State u = u0 + tau * base.r;
        return {u, 0.5 * (base.lambda + speed_of(model, family, u, f))};
    }
    const State f0 = model.flux(u0, f);
    State w = base.r;
    double s = base.lambda;
    const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(tau) / kHugoniotChunk)));
    for (int c = 1; c <= chunks; ++c) {
        const double tk = tau * c / chunks;
        bool converged = false;
        double last_step = 0.0;
        for (int it = 0; it < 40; ++it) {
            const State u = u0 + tk * w;
            const State hres = (model.flux(u, f) - f0) / tk - s * w;
            const double cres = base.l.dot(w) - 1.0;
            Augmented jac = Augmented::Zero(n + 1, n + 1);
            jac.topLeftCorner(n, n) = model.jacobian(u, f);
            jac.topLeftCorner(n, n).diagonal().array() -= s;
            jac.block(0, n, n, 1) = -w;
            jac.block(n, 0, 1, n) = base.l;
            AugVec rhs(n + 1);
            rhs.head(n) = -hres;
            rhs(n) = -cres;
            const AugVec delta = jac.fullPivLu().solve(rhs);
            if (!delta.allFinite()) break;
            w += delta.head(n);
            s += delta(n);
            last_step = delta.head(n).lpNorm<Eigen::Infinity>();
            if (last_step <= 1e-13 || last_step * std::abs(tk) <= 1e-16) {
                converged = true;
                break;
            }
        }
        if (!converged && !(last_step * std::abs(tk) <= 1e-13)) {
            throw Error(ErrorKind::HugoniotSolveFailure,
                        "Rankine-Hugoniot Newton iteration did not converge");
        }
    }
    return {u0 + tau * w, s};
}

State single_curve(const SystemModel& model, int family, double tau, const State& u0,
                   const CurveBase& base, const Frame& f) {
    if (tau == 0.0) return u0;
    if (model.n() == 1) return u0 + tau * base.r;
    if (model.genuinely_nonlinear(family) && tau < 0.0) {
        return hugoniot(model, family, tau, u0, base, f).first;
    }
    return integral_curve(model, family, tau, u0, base, f);
}

// Illinois false position on a bracket with f(a) < 0 < f(b) (or reversed).
template <typename Fn>
double illinois(Fn&& fn, double a, double fa, double b, double fb, double xtol) {
    for (int it = 0; it < 200; ++it) {
        const double c = b - fb * (b - a) / (fb - fa);
        const double fc = fn(c);
        if (fc == 0.0 || std::abs(c - b) <= xtol) return c;
        if ((fc < 0.0) != (fb < 0.0)) {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = c;
        fb = fc;
    }
    return b;
}

WaveFan null_fan(int n, const State& u, const Frame& f) {
    WaveFan fan;
    fan.n = n;
    fan.frame = f;
    fan.strengths = State::Zero(n);
    for (int i = 0; i <= n; ++i) fan.states[i] = u;
    return fan;
}

void check_lax(double lambda_right, double s, double lambda_left) {
    const double tol = kAdmissTol * (1.0 + std::abs(s));
    if (!(lambda_right <= s + tol && s <= lambda_left + tol)) {
        std::ostringstream m;
        m.precision(17);
        m << "shock violates Lax entropy inequalities: lambda_right " << lambda_right
          << ", speed " << s << ", lambda_left " << lambda_left;
        throw Error(ErrorKind::AdmissibilityViolation, m.str());
    }
}

WaveFan solve_scalar(const SystemModel& model, const State& left, const State& right,
                     const Frame& f, const RiemannOptions& opts) {
    WaveFan fan = null_fan(1, left, f);
    fan.states[1] = right;
    const double orient = scalar_orientation(model, left, f);
    const double tau = orient * (right(0) - left(0));
    fan.strengths(0) = tau;
    if (std::abs(tau) > opts.small_data_threshold) {
        throw Error(ErrorKind::SmallDataExceeded, "Riemann data exceed the small-data threshold");
    }
    const double lam_l = model.jacobian(left, f)(0, 0);
    const double lam_r = model.jacobian(right, f)(0, 0);
    if (!model.genuinely_nonlinear(0)) {
        fan.kinds[0] = WaveKind::Contact;
        fan.speed_lo[0] = fan.speed_hi[0] = lam_l;
    } else if (tau < 0.0) {
        // The chord loses all digits for tiny jumps; the mean speed is exact to O(du²).
        const double du = right(0) - left(0);
        const double s = std::abs(du) < 1e-7 * (1.0 + std::abs(left(0)))
                             ? 0.5 * (lam_l + lam_r)
                             : (model.flux(right, f)(0) - model.flux(left, f)(0)) / du;
        check_lax(lam_r, s, lam_l);
        fan.kinds[0] = WaveKind::Shock;
        fan.speed_lo[0] = fan.speed_hi[0] = s;
    } else {
        fan.kinds[0] = WaveKind::Rarefaction;
        fan.speed_lo[0] = lam_l;
        fan.speed_hi[0] = lam_r;
    }
    return fan;
}

}  // namespace

State wave_curve(const SystemModel& model, int family, double tau, const State& u0,
                 const Frame& frame) {
    if (tau == 0.0) return u0;
    if (model.n() == 1) {
        return u0 + State::Constant(1, tau * scalar_orientation(model, u0, frame));
    }
    return single_curve(model, family, tau, u0, curve_base(model, family, u0, frame), frame);
}

State wave_fan_curve(const SystemModel& model, const State& tau, const State& u0,
                     const Frame& frame) {
    State u = u0;
    for (int i = 0; i < model.n(); ++i) u = wave_curve(model, i, tau(i), u, frame);
    return u;
}

double shock_speed(const SystemModel& model, int family, double tau, const State& u0,
                   const Frame& frame) {
    if (model.n() == 1) {
        const State u1 = wave_curve(model, 0, tau, u0, frame);
        return (model.flux(u1, frame)(0) - model.flux(u0, frame)(0)) / (u1(0) - u0(0));
    }
    return hugoniot(model, family, tau, u0, curve_base(model, family, u0, frame), frame).second;
}

WaveFan solve_riemann(const SystemModel& model, const State& left, const State& right,
                      const Frame& frame, const RiemannOptions& opts) {
    const int n = model.n();
    if (!left.allFinite() || !right.allFinite()) {
        throw Error(ErrorKind::NewtonDivergence, "non-finite Riemann data");
    }
    if (left == right) return null_fan(n, left, frame);
    if (n == 1) return solve_scalar(model, left, right, frame, opts);

    const EigenStructure es = eigen_decompose(model, left, frame);
    State tau = es.left * (right - left);
    const double guess_l1 = tau.lpNorm<1>();

    auto residual = [&](const State& t) { return State(wave_fan_curve(model, t, left, frame) - right); };
    auto diverged = [&](const char* why) {
        if (guess_l1 > opts.small_data_threshold) {
            return Error(ErrorKind::SmallDataExceeded, "Riemann data exceed the small-data threshold");
        }
        return Error(ErrorKind::NewtonDivergence, why);
    };

    State res = residual(tau);
    double res_norm = res.lpNorm<Eigen::Infinity>();
    int it = 0;
    while (res_norm > opts.newton_tol) {
        if (++it > opts.newton_max_iter) throw diverged("Riemann Newton iteration limit reached");
        Matrix jac(n, n);
        for (int k = 0; k < n; ++k) {
            State tp = tau;
            const double d = 1e-7 * (1.0 + std::abs(tau(k)));
            tp(k) += d;
            jac.col(k) = (residual(tp) - res) / d;
        }
        const State step = jac.fullPivLu().solve(-res);
        if (!step.allFinite()) throw diverged("singular Riemann Newton Jacobian");
        double mu = 1.0;
        bool accepted = false;
        for (int damp = 0; damp < 30; ++damp, mu *= 0.5) {
            const State trial = tau + mu * step;
            State trial_res;
            try {
                trial_res = residual(trial);
            } catch (const Error&) {
                continue;
            }
            const double trial_norm = trial_res.lpNorm<Eigen::Infinity>();
            if (trial_norm < res_norm) {
                tau = trial;
                res = trial_res;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Residual at the floating-point noise floor of Φ.
            if (res_norm <= 100.0 * opts.newton_tol) break;
            throw diverged("Riemann Newton damping failed to reduce the residual");
        }
    }
    if (tau.lpNorm<1>() > opts.small_data_threshold) {
        throw Error(ErrorKind::SmallDataExceeded, "Riemann fan exceeds the small-data threshold");
    }

    WaveFan fan = null_fan(n, left, frame);
    fan.strengths = tau;
    for (int i = 0; i < n; ++i) {
        const State& base_state = fan.states[i];
        if (tau(i) == 0.0) {
            fan.states[i + 1] = base_state;
            continue;
        }
        const CurveBase base = curve_base(model, i, base_state, frame);
        if (!model.genuinely_nonlinear(i)) {
            fan.kinds[i] = WaveKind::Contact;
            fan.speed_lo[i] = fan.speed_hi[i] = base.lambda;
            fan.states[i + 1] = integral_curve(model, i, tau(i), base_state, base, frame);
        } else if (tau(i) < 0.0) {
            auto [u, s] = hugoniot(model, i, tau(i), base_state, base, frame);
            check_lax(speed_of(model, i, u, frame), s, base.lambda);
            fan.kinds[i] = WaveKind::Shock;
            fan.speed_lo[i] = fan.speed_hi[i] = s;
            fan.states[i + 1] = u;
        } else {
            const State u = integral_curve(model, i, tau(i), base_state, base, frame);
            fan.kinds[i] = WaveKind::Rarefaction;
            fan.speed_lo[i] = base.lambda;
            fan.speed_hi[i] = speed_of(model, i, u, frame);
            fan.states[i + 1] = u;
        }
    }
    fan.states[n] = right;

    int prev = -1;
    for (int i = 0; i < n; ++i) {
        if (fan.kinds[i] == WaveKind::Null) continue;
        if (prev >= 0 && fan.speed_hi[prev] > fan.speed_lo[i] + kAdmissTol) {
            throw Error(ErrorKind::AdmissibilityViolation, "wave families overlap in the fan");
        }
        prev = i;
    }
    return fan;
}

State sample_fan(const SystemModel& model, const WaveFan& fan, double xi) {
    for (int i = 0; i < fan.n; ++i) {
        switch (fan.kinds[i]) {
        case WaveKind::Null:
            continue;
        case WaveKind::Shock:
        case WaveKind::Contact:
            if (xi <= fan.speed_lo[i]) return fan.states[i];
            continue;
        case WaveKind::Rarefaction:
            break;
        }
        const double lo = fan.speed_lo[i], hi = fan.speed_hi[i];
        if (xi <= lo) return fan.states[i];
        if (xi >= hi) continue;
        const State& ul = fan.states[i];
        const Frame& f = fan.frame;
        if (fan.n == 1) {
            const double a = ul(0), b = fan.states[i + 1](0);
            const double u = illinois(
                [&](double v) { return model.jacobian(State::Constant(1, v), f)(0, 0) - xi; }, a,
                lo - xi, b, hi - xi, 1e-15 * (1.0 + std::abs(b)));
            return State::Constant(1, u);
        }
        const CurveBase base = curve_base(model, i, ul, f);
        const double tau = fan.strengths(i);
        auto g = [&](double sigma) {
            return speed_of(model, i, integral_curve(model, i, sigma, ul, base, f), f) - xi;
        };
        const double sigma = illinois(g, 0.0, lo - xi, tau, hi - xi, 1e-14 * (1.0 + tau));
        return integral_curve(model, i, sigma, ul, base, f);
    }
    return fan.states[fan.n];
}

}  // namespace glimm
