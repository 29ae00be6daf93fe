#include "glimm/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

constexpr double kFdRelStep = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

double fd_step(const State& u) { return kFdRelStep * (1.0 + u.norm()); }

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

// sup_x |d/dx sech²(x)| = 4 / (3√3)
constexpr double kSech2SlopeMax = 0.769800358919501;

template <typename Map>
Matrix fd_jacobian_of(const Map& map, const State& u, const Frame& f) {
    const int n = static_cast<int>(u.size());
    const double h = fd_step(u);
    Matrix jac(n, n);
    for (int j = 0; j < n; ++j) {
        State up = u;
        State um = u;
        up(j) += h;
        um(j) -= h;
        jac.col(j) = (map(up, f) - map(um, f)) / (2.0 * h);
    }
    return jac;
}

double operator_norm(const Matrix& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    return svd.singularValues()(0);
}

void orient_first_positive(Matrix& right, int i) {
    const auto col = right.col(i);
    for (Eigen::Index k = 0; k < col.size(); ++k) {
        if (std::abs(col(k)) > 1e-12) {
            if (col(k) < 0) right.col(i) = -right.col(i);
            return;
        }
    }
}

void require_hyperbolic(bool ok, const char* why) {
    if (!ok) throw Error(ErrorKind::NonHyperbolic, why);
}

// Closed-form eigenvalues of a 2×2 real matrix; throws for complex or
// coincident pairs.
std::pair<double, double> eigenvalues_2x2(const Matrix& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = (a - d) * (a - d) + 4.0 * b * c;
    require_hyperbolic(disc > 0.0, "complex or coincident characteristic speeds");
    const double sq = std::sqrt(disc);
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1.0});
    require_hyperbolic(sq > 1e-12 * scale, "coincident characteristic speeds");
    double l1, l2;
    if (tr >= 0.0) {
        l2 = 0.5 * (tr + sq);
        l1 = l2 != 0.0 ? det / l2 : 0.5 * (tr - sq);
    } else {
        l1 = 0.5 * (tr - sq);
        l2 = det / l1;
    }
    return {l1, l2};
}

State eigenvector_2x2(const Matrix& m, double lambda) {
    State v1(2), v2(2);
    v1 << m(0, 1), lambda - m(0, 0);
    v2 << lambda - m(1, 1), m(1, 0);
    State v = v1.norm() >= v2.norm() ? v1 : v2;
    return v / v.norm();
}

EigenStructure eigen_general(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(a), true);
    require_hyperbolic(solver.info() == Eigen::Success, "eigen-decomposition failed");
    const auto& vals = solver.eigenvalues();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        require_hyperbolic(std::abs(vals(i).imag()) <= 1e-12 * scale,
                           "complex characteristic speeds");
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](int p, int q) { return vals(p).real() < vals(q).real(); });
    EigenStructure es;
    es.lambdas.resize(n);
    es.right.resize(n, n);
    for (int i = 0; i < n; ++i) {
        es.lambdas(i) = vals(order[i]).real();
        State r = solver.eigenvectors().col(order[i]).real();
        es.right.col(i) = r / r.norm();
        orient_first_positive(es.right, i);
    }
    for (int i = 0; i + 1 < n; ++i) {
        require_hyperbolic(es.lambdas(i + 1) - es.lambdas(i) > 1e-12 * scale,
                           "coincident characteristic speeds");
    }
    es.left = es.right.inverse();
    return es;
}

}  // namespace

std::string_view to_string(FieldKind kind) {
    return kind == FieldKind::GenuinelyNonlinear ? "genuinely_nonlinear" : "linearly_degenerate";
}

// ---------------------------------------------------------------------------
// SystemModel

SystemModel::SystemModel(SystemDefinition def) : def_(std::move(def)) {
    if (def_.n < 1 || def_.n > kMaxDim) {
        throw Error(ErrorKind::InvalidParams, "system dimension must be in [1, 4]");
    }
    if (!def_.flux) throw Error(ErrorKind::InvalidParams, "system requires a flux");
    if (def_.field_kinds.empty()) {
        def_.field_kinds.assign(def_.n, FieldKind::GenuinelyNonlinear);
    }
    if (static_cast<int>(def_.field_kinds.size()) != def_.n) {
        throw Error(ErrorKind::InvalidParams, "one field kind per characteristic family");
    }
}

Frame SystemModel::frame(double x, double t) const {
    Frame f;
    f.x = x;
    f.t = t;
    if (def_.bind) def_.bind(f);
    return f;
}

State SystemModel::source(const State& u, const Frame& f) const {
    if (def_.source) return def_.source(u, f);
    return State::Zero(u.size());
}

Matrix SystemModel::jacobian(const State& u, const Frame& f) const {
    if (def_.flux_jacobian) return def_.flux_jacobian(u, f);
    return jacobian_fd(u, f);
}

Matrix SystemModel::jacobian_fd(const State& u, const Frame& f) const {
    return fd_jacobian_of(def_.flux, u, f);
}

State SystemModel::flux_x(const State& u, const Frame& f) const {
    if (def_.flux_x) return def_.flux_x(u, f);
    const double h = kFdRelStep * (1.0 + std::abs(f.x));
    return (flux(u, frame(f.x + h, f.t)) - flux(u, frame(f.x - h, f.t))) / (2.0 * h);
}

State SystemModel::flux_t(const State& u, const Frame& f) const {
    if (def_.flux_t) return def_.flux_t(u, f);
    const double h = kFdRelStep * (1.0 + std::abs(f.t));
    return (flux(u, frame(f.x, f.t + h)) - flux(u, frame(f.x, f.t - h))) / (2.0 * h);
}

Matrix SystemModel::source_jacobian(const State& u, const Frame& f) const {
    if (!def_.source) return Matrix::Zero(u.size(), u.size());
    if (def_.source_jacobian) return def_.source_jacobian(u, f);
    return fd_jacobian_of(def_.source, u, f);
}

// ---------------------------------------------------------------------------
// Eigen-structure

EigenStructure eigen_of_matrix(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    EigenStructure es;
    if (n == 1) {
        require_hyperbolic(std::isfinite(a(0, 0)), "non-finite flux Jacobian");
        es.lambdas = State::Constant(1, a(0, 0));
        es.right = Matrix::Ones(1, 1);
        es.left = Matrix::Ones(1, 1);
        return es;
    }
    if (n == 2) {
        const auto [l1, l2] = eigenvalues_2x2(a);
        es.lambdas.resize(2);
        es.lambdas << l1, l2;
        es.right.resize(2, 2);
        es.right.col(0) = eigenvector_2x2(a, l1);
        es.right.col(1) = eigenvector_2x2(a, l2);
        orient_first_positive(es.right, 0);
        orient_first_positive(es.right, 1);
        const double det = es.right(0, 0) * es.right(1, 1) - es.right(0, 1) * es.right(1, 0);
        require_hyperbolic(std::abs(det) > 1e-14, "degenerate eigenvectors");
        es.left.resize(2, 2);
        es.left << es.right(1, 1), -es.right(0, 1), -es.right(1, 0), es.right(0, 0);
        es.left /= det;
        return es;
    }
    return eigen_general(a);
}

State characteristic_speeds(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 1) return State::Constant(1, a(0, 0));
    if (n == 2) {
        const auto [l1, l2] = eigenvalues_2x2(a);
        State s(2);
        s << l1, l2;
        return s;
    }
    return eigen_general(a).lambdas;
}

EigenStructure eigen_decompose(const SystemModel& model, const State& u, const Frame& f) {
    if (!u.allFinite()) throw Error(ErrorKind::NonHyperbolic, "non-finite state");
    EigenStructure es = eigen_of_matrix(model.jacobian(u, f));
    for (int i = 0; i < model.n(); ++i) {
        if (!model.genuinely_nonlinear(i)) continue;
        const double h = fd_step(u);
        const State r = es.right.col(i);
        const double up = characteristic_speeds(model.jacobian(u + h * r, f))(i);
        const double dn = characteristic_speeds(model.jacobian(u - h * r, f))(i);
        if (up - dn < 0.0) {
            es.right.col(i) = -es.right.col(i);
            es.left.row(i) = -es.left.row(i);
        }
    }
    return es;
}

EigenStructure eigen_decompose(const SystemModel& model, const State& u, double x, double t) {
    return eigen_decompose(model, u, model.frame(x, t));
}

State theta(const SystemModel& model, const State& u, const Frame& f) {
    const State fx = model.flux_x(u, f);
    if ((fx.array() == 0.0).all()) return State::Zero(u.size());
    const Matrix jac = model.jacobian(u, f);
    const double scale = std::max(1.0, jac.cwiseAbs().maxCoeff());
    if (u.size() == 1) {
        if (!(std::abs(jac(0, 0)) > 1e-14 * scale)) {
            throw Error(ErrorKind::SingularJacobian, "flux Jacobian singular (resonance)");
        }
        return State::Constant(1, fx(0) / jac(0, 0));
    }
    Eigen::FullPivLU<Matrix> lu(jac);
    lu.setThreshold(1e-14);
    if (!lu.isInvertible()) {
        throw Error(ErrorKind::SingularJacobian, "flux Jacobian singular (resonance)");
    }
    return lu.solve(fx);
}

State theta(const SystemModel& model, const State& u, double x, double t) {
    return theta(model, u, model.frame(x, t));
}

// ---------------------------------------------------------------------------
// Envelopes and profile

double PhiSpec::operator()(double x) const {
    switch (kind) {
    case Kind::Sech2: return amplitude * sech2(x);
    case Kind::Gaussian: return amplitude * std::exp(-x * x);
    }
    return 0.0;
}

double PhiSpec::integral() const {
    switch (kind) {
    case Kind::Sech2: return 2.0 * amplitude;
    case Kind::Gaussian: return std::sqrt(std::numbers::pi) * amplitude;
    }
    return 0.0;
}

double PsiSpec::operator()(double t) const {
    switch (kind) {
    case Kind::Exponential: return std::exp(-rate * t);
    case Kind::Algebraic: return std::pow(1.0 + t, -rate);
    }
    return 0.0;
}

double PsiSpec::l1() const {
    switch (kind) {
    case Kind::Exponential: return 1.0 / rate;
    case Kind::Algebraic: return 1.0 / (rate - 1.0);
    }
    return kInf;
}

std::string_view to_string(PhiSpec::Kind kind) {
    return kind == PhiSpec::Kind::Sech2 ? "sech2" : "gaussian";
}

std::string_view to_string(PsiSpec::Kind kind) {
    return kind == PsiSpec::Kind::Exponential ? "exponential" : "algebraic";
}

AssumptionProfile AssumptionProfile::make(double A_const, double omega, PhiSpec phi,
                                          PsiSpec psi) {
    AssumptionProfile p;
    p.A_const = A_const;
    p.omega = omega;
    p.phi = phi;
    p.psi = psi;
    p.psi_l1 = psi.l1();
    p.validate();
    return p;
}

void AssumptionProfile::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
    if (!(A_const > 0.0) || !std::isfinite(A_const)) fail("assumptions.A_const must be positive");
    if (!(omega > 0.0) || !std::isfinite(omega)) fail("assumptions.omega must be positive");
    if (!(phi.amplitude > 0.0)) fail("assumptions.phi.amplitude must be positive");
    if (psi.kind == PsiSpec::Kind::Exponential && !(psi.rate > 0.0)) {
        fail("assumptions.psi.rate must be positive for exp decay");
    }
    if (psi.kind == PsiSpec::Kind::Algebraic && !(psi.rate > 1.0)) {
        fail("assumptions.psi.rate must exceed 1 for algebraic decay (psi in L1)");
    }
    boost::math::quadrature::sinh_sinh<double> whole_line;
    const double phi_int = whole_line.integrate([this](double x) { return phi(x); }, 1e-10);
    if (!(phi_int <= omega * (1.0 + 1e-6))) {
        std::ostringstream os;
        os << "integral of phi (" << phi_int << ") exceeds omega (" << omega << ")";
        fail(os.str());
    }
    boost::math::quadrature::exp_sinh<double> half_line;
    const double psi_int = half_line.integrate([this](double t) { return psi(t); }, 0.0, kInf);
    if (!std::isfinite(psi_l1) || std::abs(psi_int - psi_l1) > 1e-6 * std::abs(psi_l1)) {
        fail("assumptions psi_l1 inconsistent with quadrature of psi");
    }
}

// ---------------------------------------------------------------------------
// Audit

bool AuditReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const HypothesisCheck& AuditReport::check(std::string_view id) const {
    for (const auto& c : checks) {
        if (c.id == id) return c;
    }
    throw std::out_of_range("no audit check with id " + std::string(id));
}

namespace {

std::vector<State> ball_samples(const DomainBall& ball, int per_axis) {
    const int n = static_cast<int>(ball.center.size());
    std::vector<State> out;
    if (per_axis <= 1) {
        out.push_back(ball.center);
        return out;
    }
    std::vector<int> idx(n, 0);
    while (true) {
        State u = ball.center;
        for (int k = 0; k < n; ++k) {
            u(k) += ball.radius * (-1.0 + 2.0 * idx[k] / (per_axis - 1));
        }
        if (ball.distance(u) <= ball.radius * (1.0 + 1e-12)) out.push_back(u);
        int k = 0;
        while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == n) break;
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
    return v;
}

// Tracks min(envelope/|q|) − 1 across samples.
struct EnvelopeMargin {
    double margin = kInf;
    void observe(double envelope, double q) {
        if (q == 0.0) return;
        margin = std::min(margin, envelope / q - 1.0);
    }
};

}  // namespace

AuditReport audit_assumptions(const SystemModel& model, const AssumptionProfile& profile,
                              const DomainBall& ball, const SamplingPlan& plan) {
    const int n = model.n();
    const double inv_a = 1.0 / profile.A_const;
    AuditReport rep;

    double sep = kInf, nonres = kInf, bound = 0.0;
    EnvelopeMargin m35, m36, m36g, m37;
    bool hyperbolic = true;

    const auto states = ball_samples(ball, plan.ball_points_per_axis);
    const auto xs = linspace(plan.x_min, plan.x_max, plan.x_points);
    const auto ts = linspace(plan.t_min, plan.t_max, plan.t_points);

    auto fx_map = [&](const State& u, const Frame& f) { return model.flux_x(u, f); };
    auto ft_map = [&](const State& u, const Frame& f) { return model.flux_t(u, f); };
    auto jac_map = [&](const State& u, const Frame& f) { return model.jacobian(u, f); };

    for (double t : ts) {
        const double psi = profile.psi(t);
        for (double x : xs) {
            const Frame f = model.frame(x, t);
            const double phi = profile.phi(x);
            for (const State& u : states) {
                ++rep.samples;
                const Matrix jac = model.jacobian(u, f);
                State lam;
                try {
                    lam = characteristic_speeds(jac);
                } catch (const Error&) {
                    hyperbolic = false;
                    continue;
                }
                for (int i = 0; i < n; ++i) {
                    rep.min_speed = std::min(rep.min_speed, lam(i));
                    rep.max_speed = std::max(rep.max_speed, lam(i));
                    rep.max_abs_speed = std::max(rep.max_abs_speed, std::abs(lam(i)));
                    nonres = std::min(nonres, std::abs(lam(i)) - inv_a);
                    for (int j = i + 1; j < n; ++j) {
                        sep = std::min(sep, std::abs(lam(i) - lam(j)) - inv_a);
                    }
                }

                // D²_U F as a tensor of Jacobian differences, Frobenius norm.
                const double h = fd_step(u);
                double d2 = 0.0;
                for (int k = 0; k < n; ++k) {
                    State up = u, um = u;
                    up(k) += h;
                    um(k) -= h;
                    d2 += ((jac_map(up, f) - jac_map(um, f)) / (2.0 * h)).squaredNorm();
                }
                const double dug = operator_norm(model.source_jacobian(u, f));
                bound = std::max({bound, operator_norm(jac), std::sqrt(d2), dug});

                const State fx = model.flux_x(u, f);
                const double fx_n = fx.norm();
                const double g_n = model.source(u, f).norm();
                const double dufx = operator_norm(fd_jacobian_of(fx_map, u, f));
                const double duft = operator_norm(fd_jacobian_of(ft_map, u, f));

                const double ht = kFdRelStep * 10.0 * (1.0 + std::abs(t));
                const double ftx = ((model.flux_x(u, model.frame(x, t + ht)) -
                                     model.flux_x(u, model.frame(x, t - ht))) /
                                    (2.0 * ht))
                                       .norm();
                const double hx = kFdRelStep * 10.0 * (1.0 + std::abs(x));
                const double gx = ((model.source(u, model.frame(x + hx, t)) -
                                    model.source(u, model.frame(x - hx, t))) /
                                   (2.0 * hx))
                                      .norm();

                const double env = profile.omega * psi;
                m35.observe(env, std::max(fx_n, g_n));
                m36.observe(env, std::max(dufx, duft));
                m36g.observe(env, dug);
                m37.observe(phi * psi, std::max({fx_n, dufx, ftx, gx}));
            }
        }
    }

    auto add = [&](std::string id, std::string desc, double margin) {
        rep.checks.push_back({std::move(id), std::move(desc), margin, margin > 0.0});
    };
    add("separation", "strict separation |lambda_i - lambda_j| > 1/A",
        hyperbolic ? sep : -kInf);
    add("nonresonance", "nonresonance |lambda_i| > 1/A", hyperbolic ? nonres : -kInf);
    add("uniform_bounds", "uniform bounds |DF|, |D2F|, |DG| <= A", profile.A_const - bound);
    boost::math::quadrature::sinh_sinh<double> whole_line;
    const double phi_int =
        whole_line.integrate([&](double x) { return profile.phi(x); }, 1e-10);
    add("phi_integral", "integral of phi <= omega", profile.omega - phi_int);
    add("decay", "|F_x|, |G| <= omega psi(t)", m35.margin);
    add("derivative_decay", "|D_U F_x|, |D_U F_t| <= omega psi(t)", m36.margin);
    add("source_derivative_decay", "|D_U G| <= omega psi(t) (also bounded by A)", m36g.margin);
    add("phi_envelope", "|F_x|, |D_U F_x|, |F_tx|, |G_x| <= phi(x) psi(t)", m37.margin);
    return rep;
}

// ---------------------------------------------------------------------------
// Built-in systems

namespace {

Params with_defaults(std::string_view name, const Params& given, const Params& defaults) {
    Params out = defaults;
    for (const auto& [k, v] : given) {
        if (!defaults.count(k)) {
            throw Error(ErrorKind::InvalidParams,
                        "unknown parameter '" + k + "' for system " + std::string(name));
        }
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidParams, "parameter '" + k + "' must be finite");
        }
        out[k] = v;
    }
    return out;
}

// a(x,t) = a_inf + eps e^{-t} sech²(x) in coeff[0], a_x in coeff[1], a_t in
// coeff[2], and the source rate kappa e^{-t} in coeff[3].
std::function<void(Frame&)> decaying_coefficient(double a_inf, double eps, double kappa) {
    return [=](Frame& f) {
        const double decay = std::exp(-f.t);
        // sech² and tanh from a single exponential.
        const double e = std::exp(-2.0 * std::abs(f.x));
        const double s2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
        const double th = std::copysign((1.0 - e) / (1.0 + e), f.x);
        f.coeff[0] = a_inf + eps * decay * s2;
        f.coeff[1] = -2.0 * eps * decay * s2 * th;
        f.coeff[2] = -eps * decay * s2;
        f.coeff[3] = kappa * decay;
    };
}

SystemModel make_burgers(const Params& p) {
    const double a_inf = p.at("a_inf"), eps = p.at("epsilon"), kappa = p.at("kappa");
    SystemDefinition d;
    d.name = "burgers_inhom";
    d.n = 1;
    d.field_kinds = {FieldKind::GenuinelyNonlinear};
    d.bind = decaying_coefficient(a_inf, eps, kappa);
    d.flux = [](const State& u, const Frame& f) {
        return State::Constant(1, 0.5 * f.coeff[0] * u(0) * u(0));
    };
    d.flux_jacobian = [](const State& u, const Frame& f) {
        return Matrix::Constant(1, 1, f.coeff[0] * u(0));
    };
    d.flux_x = [](const State& u, const Frame& f) {
        return State::Constant(1, 0.5 * f.coeff[1] * u(0) * u(0));
    };
    d.flux_t = [](const State& u, const Frame& f) {
        return State::Constant(1, 0.5 * f.coeff[2] * u(0) * u(0));
    };
    if (kappa != 0.0) {
        d.source = [](const State& u, const Frame& f) {
            return State::Constant(1, f.coeff[3] * u(0));
        };
        d.source_jacobian = [](const State&, const Frame& f) {
            return Matrix::Constant(1, 1, f.coeff[3]);
        };
    }
    return SystemModel(std::move(d));
}

SystemModel make_advection(const Params& p) {
    const double a_inf = p.at("a_inf"), eps = p.at("epsilon");
    SystemDefinition d;
    d.name = "advection_var";
    d.n = 1;
    d.field_kinds = {FieldKind::LinearlyDegenerate};
    d.bind = decaying_coefficient(a_inf, eps, 0.0);
    d.flux = [](const State& u, const Frame& f) { return State::Constant(1, f.coeff[0] * u(0)); };
    d.flux_jacobian = [](const State&, const Frame& f) {
        return Matrix::Constant(1, 1, f.coeff[0]);
    };
    d.flux_x = [](const State& u, const Frame& f) {
        return State::Constant(1, f.coeff[1] * u(0));
    };
    d.flux_t = [](const State& u, const Frame& f) {
        return State::Constant(1, f.coeff[2] * u(0));
    };
    return SystemModel(std::move(d));
}

SystemModel make_p_system(const Params& p) {
    const double gamma = p.at("gamma"), kappa = p.at("kappa");
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidParams, "p_system requires gamma > 0");
    SystemDefinition d;
    d.name = "p_system";
    d.n = 2;
    d.field_kinds = {FieldKind::GenuinelyNonlinear, FieldKind::GenuinelyNonlinear};
    d.bind = [kappa](Frame& f) { f.coeff[3] = kappa * std::exp(-f.t); };
    d.flux = [gamma](const State& u, const Frame&) {
        State out(2);
        out << -u(1), std::pow(u(0), -gamma);
        return out;
    };
    d.flux_jacobian = [gamma](const State& u, const Frame&) {
        Matrix j(2, 2);
        j << 0.0, -1.0, -gamma * std::pow(u(0), -gamma - 1.0), 0.0;
        return j;
    };
    d.flux_x = [](const State& u, const Frame&) { return State::Zero(u.size()); };
    d.flux_t = [](const State& u, const Frame&) { return State::Zero(u.size()); };
    if (kappa != 0.0) {
        d.source = [](const State& u, const Frame& f) {
            State out(2);
            out << 0.0, f.coeff[3] * u(1);
            return out;
        };
        d.source_jacobian = [](const State&, const Frame& f) {
            Matrix j = Matrix::Zero(2, 2);
            j(1, 1) = f.coeff[3];
            return j;
        };
    }
    return SystemModel(std::move(d));
}

const Params& defaults_for(std::string_view name) {
    static const Params burgers{{"a_inf", 1.0}, {"epsilon", 0.0}, {"kappa", 0.0}};
    static const Params advection{{"a_inf", 1.0}, {"epsilon", 0.0}};
    static const Params psys{{"gamma", 2.0}, {"kappa", 0.0}};
    if (name == "burgers_inhom") return burgers;
    if (name == "advection_var") return advection;
    if (name == "p_system") return psys;
    throw Error(ErrorKind::UnknownSystem, "unknown system '" + std::string(name) + "'");
}

}  // namespace

Params builtin_params(std::string_view name, const Params& params) {
    if (name == "user_defined") return params;
    return with_defaults(name, params, defaults_for(name));
}

SystemModel builtin_system(std::string_view name, const Params& params,
                           const UserSystemFactory& user) {
    if (name == "user_defined") {
        if (!user) {
            throw Error(ErrorKind::InvalidParams,
                        "user_defined requires a programmatic SystemDefinition factory");
        }
        return user(params);
    }
    const Params p = builtin_params(name, params);
    if (name == "burgers_inhom") return make_burgers(p);
    if (name == "advection_var") return make_advection(p);
    return make_p_system(p);
}

AssumptionProfile default_profile(std::string_view name, const Params& params,
                                  const DomainBall& ball, double A_const) {
    constexpr double slack = 1.1;
    const Params p = builtin_params(name, params);
    double c_phi = 0.0;
    double omega_sup = 0.0;
    if (name == "burgers_inhom") {
        const double um = std::abs(ball.center(0)) + ball.radius;
        const double eps = std::abs(p.at("epsilon")), kap = std::abs(p.at("kappa"));
        c_phi = slack * std::max(eps * um * um, 2.0 * eps * um);
        omega_sup = slack * std::max({kSech2SlopeMax * eps * um * um / 2.0, kap * um,
                                      kSech2SlopeMax * eps * um, eps * um, kap});
    } else if (name == "advection_var") {
        const double um = std::abs(ball.center(0)) + ball.radius;
        const double eps = std::abs(p.at("epsilon"));
        c_phi = slack * 2.0 * eps * std::max(um, 1.0);
        omega_sup = slack * std::max({kSech2SlopeMax * eps * um, kSech2SlopeMax * eps, eps});
    } else if (name == "p_system") {
        const double um = std::abs(ball.center(1)) + ball.radius;
        const double kap = std::abs(p.at("kappa"));
        omega_sup = slack * std::max(kap * um, kap);
    } else {
        throw Error(ErrorKind::UnknownSystem,
                    "no default assumption profile for '" + std::string(name) + "'");
    }
    // ∫ c sech² = 2c; the slack keeps the φ-integral check strict.
    const double omega = std::max({slack * 2.0 * c_phi, omega_sup, 1e-9});
    if (c_phi == 0.0) c_phi = 0.5 * omega / slack;
    return AssumptionProfile::make(A_const, omega, PhiSpec{PhiSpec::Kind::Sech2, c_phi},
                                   PsiSpec{PsiSpec::Kind::Exponential, 1.0});
}

}  // namespace glimm
