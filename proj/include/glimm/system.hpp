#pragma once

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "glimm/types.hpp"

namespace glimm {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

std::string_view to_string(FieldKind kind);

/// The point (x̄, t̄) at which a flux or source is evaluated.
///
/// `coeff` holds whatever a system precomputes from (x̄, t̄) in its `bind`
/// hook, so that repeated evaluations at a frozen point pay for the
/// space-time dependence only once.
struct Frame {
    double x = 0.0;
    double t = 0.0;
    std::array<double, 4> coeff{};
};

using StateMap = std::function<State(const State&, const Frame&)>;
using MatrixMap = std::function<Matrix(const State&, const Frame&)>;

/// Ingredients of a balance law  U_t + F(U,x,t)_x + G(U,x,t) = 0.
///
/// Only `flux` is mandatory. Missing derivatives fall back to central
/// differences; a missing source means G ≡ 0.
struct SystemDefinition {
    std::string name;
    int n = 1;
    std::vector<FieldKind> field_kinds;
    std::function<void(Frame&)> bind;
    StateMap flux;
    StateMap source;
    MatrixMap flux_jacobian;
    StateMap flux_x;
    StateMap flux_t;
    MatrixMap source_jacobian;
};

/// Immutable, shareable description of one balance-law system.
class SystemModel {
public:
    explicit SystemModel(SystemDefinition def);

    int n() const { return def_.n; }
    const std::string& name() const { return def_.name; }
    FieldKind field_kind(int family) const { return def_.field_kinds[family]; }
    bool genuinely_nonlinear(int family) const {
        return def_.field_kinds[family] == FieldKind::GenuinelyNonlinear;
    }
    bool has_source() const { return static_cast<bool>(def_.source); }
    bool has_analytic_jacobian() const { return static_cast<bool>(def_.flux_jacobian); }
    bool has_analytic_flux_x() const { return static_cast<bool>(def_.flux_x); }

    Frame frame(double x, double t) const;

    State flux(const State& u, const Frame& f) const { return def_.flux(u, f); }
    State source(const State& u, const Frame& f) const;
    Matrix jacobian(const State& u, const Frame& f) const;
    State flux_x(const State& u, const Frame& f) const;
    State flux_t(const State& u, const Frame& f) const;
    Matrix source_jacobian(const State& u, const Frame& f) const;

    State flux(const State& u, double x, double t) const { return flux(u, frame(x, t)); }
    State source(const State& u, double x, double t) const { return source(u, frame(x, t)); }
    Matrix jacobian(const State& u, double x, double t) const {
        return jacobian(u, frame(x, t));
    }
    State flux_x(const State& u, double x, double t) const { return flux_x(u, frame(x, t)); }

    // Central-difference Jacobian of the flux, independent of any analytic form.
    Matrix jacobian_fd(const State& u, const Frame& f) const;

private:
    SystemDefinition def_;
};

/// Characteristic speeds and biorthonormal eigenvectors of D_U F.
struct EigenStructure {
    State lambdas;  // ascending
    Matrix right;   // column i is r_i, unit Euclidean length
    Matrix left;    // row i is l_i, l_i · r_j = δ_ij
};

/// Raw eigen-decomposition of a matrix with real distinct eigenvalues.  Sign
/// convention: first non-negligible component of each r_i positive.
/// Throws NonHyperbolic.
EigenStructure eigen_of_matrix(const Matrix& a);

/// Sorted eigenvalues only (cheaper than the full decomposition).
State characteristic_speeds(const Matrix& a);

/// Eigen-structure of D_U F at (U, x̄, t̄), with genuinely nonlinear fields
/// oriented so that ∇λ_i · r_i > 0.
EigenStructure eigen_decompose(const SystemModel& model, const State& u, const Frame& f);
EigenStructure eigen_decompose(const SystemModel& model, const State& u, double x, double t);

/// ϑ = (D_U F)⁻¹ F_x, the first-order shift between flux levels at
/// neighbouring mesh points. Throws SingularJacobian.
State theta(const SystemModel& model, const State& u, const Frame& f);
State theta(const SystemModel& model, const State& u, double x, double t);

/// Closed Euclidean ball of admissible states.
struct DomainBall {
    State center;
    double radius = 1.0;

    bool contains(const State& u) const { return (u - center).norm() <= radius; }
    double distance(const State& u) const { return (u - center).norm(); }
};

/// Space envelope φ ∈ W^{1,1}.
struct PhiSpec {
    enum class Kind { Sech2, Gaussian };
    Kind kind = Kind::Sech2;
    double amplitude = 1.0;

    double operator()(double x) const;
    double integral() const;
};

/// Time envelope ψ ∈ L¹(0,∞), bounded.
struct PsiSpec {
    enum class Kind { Exponential, Algebraic };
    Kind kind = Kind::Exponential;
    double rate = 1.0;  // e^{-rate t}, or (1+t)^{-rate} with rate > 1

    double operator()(double t) const;
    double l1() const;
};

std::string_view to_string(PhiSpec::Kind kind);
std::string_view to_string(PsiSpec::Kind kind);

/// The constants and envelopes the global BV theory is stated in terms of.
struct AssumptionProfile {
    double A_const = 1.0;
    double omega = 1.0;
    PhiSpec phi;
    PsiSpec psi;
    double psi_l1 = 1.0;

    static AssumptionProfile make(double A_const, double omega, PhiSpec phi, PsiSpec psi);

    // Checks positivity, ∫φ ≤ ω(1+1e-6) and psi_l1 against quadrature.
    // Throws ValidationError.
    void validate() const;
};

/// Finite grids over ball × x-window × t-window used by the audit.
struct SamplingPlan {
    int ball_points_per_axis = 9;
    double x_min = -5.0;
    double x_max = 5.0;
    int x_points = 41;
    double t_min = 0.0;
    double t_max = 5.0;
    int t_points = 11;
};

struct HypothesisCheck {
    std::string id;
    std::string description;
    double margin = std::numeric_limits<double>::infinity();
    bool pass = true;
};

struct AuditReport {
    std::vector<HypothesisCheck> checks;
    double min_speed = std::numeric_limits<double>::infinity();
    double max_speed = -std::numeric_limits<double>::infinity();
    double max_abs_speed = 0.0;
    long samples = 0;

    bool all_pass() const;
    const HypothesisCheck& check(std::string_view id) const;
};

/// Numerical spot-audit of the structural hypotheses on the sampled window.
///
/// Margins: separation and nonresonance report min gap − A⁻¹; the uniform
/// bound reports A − max norm; the φ-integral reports ω − ∫φ; every envelope
/// hypothesis reports min(envelope / |quantity|) − 1, which is +∞ when the
/// quantity vanishes identically. A check passes iff its margin is positive.
AuditReport audit_assumptions(const SystemModel& model, const AssumptionProfile& profile,
                              const DomainBall& ball, const SamplingPlan& plan);

using Params = std::map<std::string, double>;
using UserSystemFactory = std::function<SystemModel(const Params&)>;

/// burgers_inhom, p_system, advection_var, or user_defined (which requires
/// `user`). Throws UnknownSystem / InvalidParams.
SystemModel builtin_system(std::string_view name, const Params& params = {},
                           const UserSystemFactory& user = {});

/// Parameters of a built-in with defaults filled in (unknown keys rejected).
Params builtin_params(std::string_view name, const Params& params);

/// Envelopes for a built-in that satisfy every hypothesis on `ball`, built
/// from analytic bounds with 10% slack.
AssumptionProfile default_profile(std::string_view name, const Params& params,
                                  const DomainBall& ball, double A_const = 5.0);

}  // namespace glimm
