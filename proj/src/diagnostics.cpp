#include "glimm/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "glimm/errors.hpp"

namespace glimm {

std::vector<WaveRecord> fan_waves(const SystemModel& model, const WaveFan& fan, long r) {
    std::vector<WaveRecord> out;
    for (int i = 0; i < fan.n; ++i) {
        if (fan.kinds[i] == WaveKind::Null) continue;
        out.push_back({r, i, fan.strengths(i), fan.kinds[i], model.genuinely_nonlinear(i)});
    }
    return out;
}

std::vector<WaveRecord> level_waves(const SystemModel& model, const StripSolution& strip) {
    std::vector<WaveRecord> out;
    for (std::size_t k = 0; k < strip.fans.size(); ++k) {
        const WaveFan& fan = strip.fans[k];
        for (int i = 0; i < fan.n; ++i) {
            if (fan.kinds[i] == WaveKind::Null) continue;
            out.push_back({strip.r_of(k), i, fan.strengths(i), fan.kinds[i],
                           model.genuinely_nonlinear(i)});
        }
    }
    return out;
}

bool approaching(const WaveRecord& a, const WaveRecord& b) {
    if (a.family > b.family) return true;
    if (a.family < b.family) return false;
    return a.genuinely_nonlinear &&
           (a.kind == WaveKind::Shock || b.kind == WaveKind::Shock);
}

double functional_L(const std::vector<WaveRecord>& waves) {
    double sum = 0.0;
    for (const auto& w : waves) sum += std::abs(w.strength);
    return sum;
}

double functional_Q(const std::vector<WaveRecord>& waves) {
    // Running sums over the waves already passed, per family.
    std::array<double, kMaxDim> all{}, shocks{};
    double q = 0.0;
    for (const auto& w : waves) {
        const double mag = std::abs(w.strength);
        double partner = 0.0;
        for (int i = w.family + 1; i < kMaxDim; ++i) partner += all[i];
        if (w.genuinely_nonlinear) {
            partner += (w.kind == WaveKind::Shock) ? all[w.family] : shocks[w.family];
        }
        q += mag * partner;
        all[w.family] += mag;
        if (w.kind == WaveKind::Shock) shocks[w.family] += mag;
    }
    return q;
}

double functional_G(const std::vector<WaveRecord>& waves, double C0) {
    return functional_L(waves) + 2.0 * C0 * functional_Q(waves);
}

double interaction_amount(const SystemModel& model, const WaveFan& left, const WaveFan& right) {
    double d = 0.0;
    for (const auto& a : fan_waves(model, left)) {
        for (const auto& b : fan_waves(model, right)) {
            if (approaching(a, b)) d += std::abs(a.strength * b.strength);
        }
    }
    return d;
}

double diamond_interaction(const SystemModel& model, const Diamond& d) {
    return interaction_amount(model, d.alpha, d.beta);
}

double wave_balance_residual(const Diamond& d) {
    const int n = std::max({d.alpha.n, d.beta.n, d.epsilon.n});
    State sum = State::Zero(n);
    if (d.alpha.n == n) sum += d.alpha.strengths;
    if (d.beta.n == n) sum += d.beta.strengths;
    const State eps = d.epsilon.n == n ? d.epsilon.strengths : State(State::Zero(n));
    return (eps - sum).lpNorm<1>();
}

Diamond incoming_fans(const SystemModel& model, const StripSolution& strip,
                      const LevelStates& next, std::size_t left_fan,
                      const RiemannOptions& opts) {
    const WaveFan& fl = strip.fans[left_fan];
    const WaveFan& fr = strip.fans[left_fan + 1];
    Diamond d;
    d.r = strip.r_of(left_fan) + 1;
    d.s = strip.s;
    const State& u_left = next.U[next.slot(d.r - 1)];
    const State& u_right = next.U[next.slot(d.r + 1)];
    d.alpha = solve_riemann(model, u_left, fl.right(), fl.frame, opts);
    d.beta = solve_riemann(model, fr.left(), u_right, fr.frame, opts);
    d.epsilon.n = fl.n;
    d.epsilon.strengths = State::Zero(fl.n);
    return d;
}

TvSup tv_and_sup(const StripSolution& strip) {
    TvSup out;
    for (std::size_t k = 0; k < strip.fans.size(); ++k) {
        const WaveFan& fan = strip.fans[k];
        if (k > 0) out.tv += (fan.left() - strip.fans[k - 1].right()).norm();
        out.tv += (fan.right() - fan.left()).norm();
        out.sup = std::max({out.sup, fan.left().norm(), fan.right().norm()});
    }
    return out;
}

BoundCheck check_theorem_bounds(const TvSup& now, double tv0, double sup0,
                                const AssumptionProfile& profile, const TheoremConstants& c) {
    BoundCheck b;
    b.sigma = c.sigma_prefactor * profile.omega * profile.psi_l1;
    const double base = std::exp(b.sigma) * (tv0 + profile.omega);
    b.tv_bound = c.C1 * base;
    b.sup_bound = sup0 + c.C2 * base;
    b.tv_margin = b.tv_bound - now.tv;
    b.sup_margin = b.sup_bound - now.sup;
    b.pass = b.tv_margin >= 0.0 && b.sup_margin >= 0.0;
    return b;
}

// ---------------------------------------------------------------------------
// DiagnosticsMonitor

DiagnosticsMonitor::DiagnosticsMonitor(const SystemModel& model, const Problem& problem,
                                       const AssumptionProfile& profile, DiagnosticsOptions opts)
    : model_(model), problem_(problem), profile_(profile), opts_(opts) {}

StripMonitor DiagnosticsMonitor::hook() {
    return [this](const StripSolution& strip, const LevelStates& next) { observe(strip, next); };
}

void DiagnosticsMonitor::flush_pending(const StripSolution* outgoing) {
    for (auto& rep : held_) {
        if (outgoing && opts_.balance && !pending_.empty()) {
            const double h = problem_.grid.h;
            double ratio = 0.0, resid = 0.0;
            for (const auto& p : pending_) {
                const long k = (p.r - outgoing->r_first) / 2;
                if (k < 0 || k >= static_cast<long>(outgoing->fans.size())) continue;
                const double res = (outgoing->fans[k].strengths - p.sum).lpNorm<1>();
                resid = std::max(resid, res);
                ratio = std::max(ratio, res / (h * p.size + h * h + p.D));
            }
            rep.balance_ratio_max = ratio;
            rep.balance_residual_max = resid;
        }
        reports_.push_back(rep);
        if (sink) sink(rep);
    }
    held_.clear();
    pending_.clear();
}

void DiagnosticsMonitor::observe(const StripSolution& strip, const LevelStates& next) {
    flush_pending(&strip);

    FunctionalReport rep;
    rep.s = strip.s;
    rep.t = strip.t0;
    if (opts_.functionals) {
        const auto waves = level_waves(model_, strip);
        rep.L = functional_L(waves);
        rep.Q = functional_Q(waves);
        rep.G = rep.L + 2.0 * opts_.C0 * rep.Q;
    }
    const TvSup ts = tv_and_sup(strip);
    rep.TV = ts.tv;
    rep.sup_norm = ts.sup;
    if (opts_.theorem) {
        rep.bounds = check_theorem_bounds(ts, problem_.initial.total_variation(),
                                          problem_.initial.sup_norm(), profile_,
                                          opts_.constants);
    }
    if (opts_.diamonds && strip.fans.size() >= 2) {
        RiemannOptions ro = problem_.options.riemann;
        ro.small_data_threshold = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < strip.fans.size(); ++k) {
            if (strip.fans[k].is_null() && strip.fans[k + 1].is_null()) {
                if (opts_.balance) {
                    pending_.push_back({strip.r_of(k) + 1, State::Zero(model_.n()), 0.0, 0.0});
                }
                continue;
            }
            const Diamond d = incoming_fans(model_, strip, next, k, ro);
            const double D = diamond_interaction(model_, d);
            rep.D_total += D;
            ++rep.diamonds;
            if (opts_.balance) {
                pending_.push_back({d.r, State(d.alpha.strengths + d.beta.strengths),
                                    d.alpha.strength_l1() + d.beta.strength_l1(), D});
            }
        }
        total_D_ += rep.D_total;
    }
    held_.push_back(rep);
}

void DiagnosticsMonitor::finish() { flush_pending(nullptr); }

IncrementConstants DiagnosticsMonitor::increments(double psi_floor) const {
    IncrementConstants k;
    const double h = problem_.grid.h;
    double pos = 0.0, psi_sum = 0.0;
    for (std::size_t i = 0; i + 1 < reports_.size(); ++i) {
        const double dg = reports_[i + 1].G - reports_[i].G;
        const double psi = profile_.psi(reports_[i + 1].t);
        pos += std::max(dg, 0.0);
        psi_sum += psi;
        k.max_increase = std::max(k.max_increase, dg);
        if (psi >= psi_floor) k.peak = std::max(k.peak, dg / (h * psi));
        ++k.steps;
    }
    k.cumulative = psi_sum > 0.0 ? pos / (h * psi_sum) : 0.0;
    return k;
}

double DiagnosticsMonitor::max_tv() const {
    double m = 0.0;
    for (const auto& r : reports_) m = std::max(m, r.TV);
    return m;
}

// ---------------------------------------------------------------------------
// Weak-form residual

namespace {

double bump(double z) {
    if (std::abs(z) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - z * z));
}

double bump_prime(double z) {
    if (std::abs(z) >= 1.0) return 0.0;
    const double q = 1.0 - z * z;
    return bump(z) * (-2.0 * z / (q * q));
}

}  // namespace

double TestFunction::value(double x, double t) const {
    return bump((x - center) / width) * bump(t / t_support);
}

double TestFunction::dx(double x, double t) const {
    return bump_prime((x - center) / width) / width * bump(t / t_support);
}

double TestFunction::dt(double x, double t) const {
    return bump((x - center) / width) * bump_prime(t / t_support) / t_support;
}

std::vector<TestFunction> default_test_functions(double lo, double hi, double t_support) {
    std::vector<TestFunction> out;
    const double width = 0.5 * (hi - lo) / 2.0;
    for (int k = 0; k < 5; ++k) {
        out.push_back({lo + (hi - lo) * k / 4.0, width, t_support});
    }
    return out;
}

WeakResidualMonitor::WeakResidualMonitor(const SystemModel& model, const Problem& problem,
                                         std::vector<TestFunction> tests, int points_per_h)
    : model_(model), problem_(problem), tests_(std::move(tests)), points_per_h_(points_per_h) {
    const int n = model.n();
    for (const auto& tf : tests_) {
        State acc = State::Zero(n);
        const double a = tf.center - tf.width, b = tf.center + tf.width;
        std::vector<double> cuts{a};
        if (problem.initial.is_piecewise()) {
            for (double br : problem.initial.breaks()) {
                if (br > a && br < b) cuts.push_back(br);
            }
        }
        cuts.push_back(b);
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            for (int c = 0; c < n; ++c) {
                auto f = [&](double x) { return problem.initial(x)(c) * tf.value(x, 0.0); };
                acc(c) += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    f, cuts[p], cuts[p + 1], 15, 1e-13);
            }
        }
        acc_.push_back(acc);
    }
}

StripMonitor WeakResidualMonitor::hook() {
    return [this](const StripSolution& strip, const LevelStates& next) { observe(strip, next); };
}

void WeakResidualMonitor::observe(const StripSolution& strip, const LevelStates&) {
    const double dt = problem_.grid.dt;
    const double g = 0.5 / std::sqrt(3.0);
    const std::array<double, 2> times{strip.t0 + dt * (0.5 - g), strip.t0 + dt * (0.5 + g)};
    const double dx = problem_.grid.h / points_per_h_;
    for (std::size_t k = 0; k < tests_.size(); ++k) {
        const TestFunction& tf = tests_[k];
        if (strip.t0 >= tf.t_support) continue;
        const double lo = tf.center - tf.width;
        const long count = static_cast<long>(std::ceil(2.0 * tf.width / dx));
        const double step = 2.0 * tf.width / count;
        for (double t : times) {
            for (long i = 0; i < count; ++i) {
                const double x = lo + (i + 0.5) * step;
                const State u = strip.evaluate(model_, x, t);
                const Frame f = model_.frame(x, t);
                State integrand = u * tf.dt(x, t) + model_.flux(u, f) * tf.dx(x, t);
                if (model_.has_source()) integrand -= model_.source(u, f) * tf.value(x, t);
                acc_[k] += (0.5 * dt * step) * integrand;
            }
        }
    }
}

std::vector<double> WeakResidualMonitor::residuals() const {
    std::vector<double> out;
    for (const auto& a : acc_) out.push_back(a.norm());
    return out;
}

double WeakResidualMonitor::max_residual() const {
    double m = 0.0;
    for (double r : residuals()) m = std::max(m, r);
    return m;
}

}  // namespace glimm
