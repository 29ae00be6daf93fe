#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "glimm/scheme.hpp"

namespace glimm {

/// One elementary wave on a time level: fan location, family, signed strength.
struct WaveRecord {
    long r = 0;
    int family = 0;
    double strength = 0.0;
    WaveKind kind = WaveKind::Null;
    bool genuinely_nonlinear = true;
};

/// Non-null waves of every fan in the strip, ordered left to right.
std::vector<WaveRecord> level_waves(const SystemModel& model, const StripSolution& strip);

/// Waves of a single fan located at r (non-null only).
std::vector<WaveRecord> fan_waves(const SystemModel& model, const WaveFan& fan, long r = 0);

/// Left wave `a` and right wave `b` approach iff a.family > b.family, or the
/// families agree, are genuinely nonlinear and at least one wave is a shock.
bool approaching(const WaveRecord& a, const WaveRecord& b);

double functional_L(const std::vector<WaveRecord>& waves);
// Waves must be ordered left to right. O(N n).
double functional_Q(const std::vector<WaveRecord>& waves);
double functional_G(const std::vector<WaveRecord>& waves, double C0);

/// Diamond Δ^r_s (r + s odd): the part α of the fan at (x_{r-1}, t_s) right
/// of y^{r-1}_{s+1}, the part β of the fan at (x_{r+1}, t_s) left of
/// y^{r+1}_{s+1}, and the outgoing fan ε at (x_r, t_{s+1}).
struct Diamond {
    long r = 0;
    long s = 0;
    WaveFan alpha;
    WaveFan beta;
    WaveFan epsilon;
};

/// D(Δ) = Σ |α_i β_j| over approaching pairs.
double diamond_interaction(const SystemModel& model, const Diamond& d);
double interaction_amount(const SystemModel& model, const WaveFan& left, const WaveFan& right);

/// |ε − (α + β)|₁.
double wave_balance_residual(const Diamond& d);

/// α as Ω(W^r_s; U^{r-1}_{s+1}) and β as Ω(U^{r+1}_{s+1}; V^r_s), with the
/// flux frozen at the parent mesh points. Requires 0 < k < fans.size() - 1
/// in the sense k-1, k+1 index fans of `strip` around r; `epsilon` is left
/// null.
Diamond incoming_fans(const SystemModel& model, const StripSolution& strip,
                      const LevelStates& next, std::size_t left_fan,
                      const RiemannOptions& opts = {});

struct TvSup {
    double tv = 0.0;
    double sup = 0.0;
};

/// TV and sup of the exact piecewise-constant profile at t_s+, including the
/// vertical jumps between neighbouring fans. Euclidean norm for jumps/values.
TvSup tv_and_sup(const StripSolution& strip);

struct TheoremConstants {
    double C1 = 2.0;
    double C2 = 2.0;
    double sigma_prefactor = 1.0;
};

struct BoundCheck {
    double sigma = 0.0;
    double tv_bound = 0.0;
    double tv_margin = 0.0;
    double sup_bound = 0.0;
    double sup_margin = 0.0;
    bool pass = true;
};

/// TV ≤ C₁e^σ(TV U₀ + ω) and sup ≤ sup U₀ + C₂e^σ(TV U₀ + ω) with
/// σ = sigma_prefactor · ω · ‖ψ‖₁. Margins are bound − value.
BoundCheck check_theorem_bounds(const TvSup& now, double tv0, double sup0,
                                const AssumptionProfile& profile, const TheoremConstants& c);

struct FunctionalReport {
    long s = 0;
    double t = 0.0;
    double L = 0.0;
    double Q = 0.0;
    double G = 0.0;
    double D_total = 0.0;
    long diamonds = 0;
    // Largest |ε − (α+β)| / (h(|α|+|β|) + h² + D) over the strip; NaN if not
    // computed.
    double balance_ratio_max = std::numeric_limits<double>::quiet_NaN();
    double balance_residual_max = std::numeric_limits<double>::quiet_NaN();
    double TV = 0.0;
    double sup_norm = 0.0;
    BoundCheck bounds;
};

struct DiagnosticsOptions {
    double C0 = 5.0;
    bool functionals = true;
    bool diamonds = true;
    bool balance = true;
    bool theorem = true;
    TheoremConstants constants;
};

/// Empirical constants of G(J_{s+1}) ≤ G(J_s) + K h ψ(t_{s+1}).
///
/// cumulative: Σ max(ΔG, 0) / (h Σ ψ(t_{s+1})) over all steps.
/// peak: max ΔG / (h ψ(t_{s+1})) over steps with ψ(t_{s+1}) ≥ psi_floor.
struct IncrementConstants {
    double cumulative = 0.0;
    double peak = 0.0;
    double max_increase = 0.0;  // largest raw ΔG
    long steps = 0;
};

/// Per-strip observer producing FunctionalReports (one strip behind, because
/// diamond outputs live on the next strip). Call finish() after the run.
class DiagnosticsMonitor {
public:
    DiagnosticsMonitor(const SystemModel& model, const Problem& problem,
                       const AssumptionProfile& profile, DiagnosticsOptions opts = {});

    void observe(const StripSolution& strip, const LevelStates& next);
    StripMonitor hook();
    void finish();

    // Receives each report as soon as it is complete.
    std::function<void(const FunctionalReport&)> sink;

    const std::vector<FunctionalReport>& reports() const { return reports_; }
    IncrementConstants increments(double psi_floor = 1e-3) const;
    double total_interaction() const { return total_D_; }
    double max_tv() const;

private:
    struct PendingDiamond {
        long r;
        State sum;  // α + β
        double size;  // |α| + |β|
        double D;
    };

    void flush_pending(const StripSolution* outgoing);

    const SystemModel& model_;
    const Problem& problem_;
    AssumptionProfile profile_;
    DiagnosticsOptions opts_;
    std::vector<FunctionalReport> reports_;
    std::vector<FunctionalReport> held_;
    std::vector<PendingDiamond> pending_;
    double total_D_ = 0.0;
};

/// Smooth compactly supported test function φ(x,t) = b((x−c)/w) b(t/T), with
/// b(z) = exp(−1/(1−z²)) on |z| < 1.
struct TestFunction {
    double center = 0.0;
    double width = 1.0;
    double t_support = 1.0;

    double value(double x, double t) const;
    double dx(double x, double t) const;
    double dt(double x, double t) const;
};

/// Default family of five bumps centred across [lo, hi].
std::vector<TestFunction> default_test_functions(double lo, double hi, double t_support);

/// Accumulates ∫∫ (U φ_t + F(U,x,t) φ_x − G(U,x,t) φ) dx dt + ∫ U₀ φ(·,0) dx
/// for each test function (Euclidean norm of the vector residual), by
/// two-point Gauss in t per strip and the midpoint rule in x with
/// `points_per_h` points per cell.
class WeakResidualMonitor {
public:
    WeakResidualMonitor(const SystemModel& model, const Problem& problem,
                        std::vector<TestFunction> tests, int points_per_h = 4);

    void observe(const StripSolution& strip, const LevelStates& next);
    StripMonitor hook();

    std::vector<double> residuals() const;
    double max_residual() const;

private:
    const SystemModel& model_;
    const Problem& problem_;
    std::vector<TestFunction> tests_;
    int points_per_h_;
    std::vector<State> acc_;
};

}  // namespace glimm
