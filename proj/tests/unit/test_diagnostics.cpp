#include <doctest.h>

#include <cmath>

#include "glimm/diagnostics.hpp"
#include "glimm/errors.hpp"

using namespace glimm;

namespace {

WaveRecord wave(long r, int family, double strength, WaveKind kind) {
    return {r, family, strength, kind, true};
}

StripSolution strip_of(std::vector<WaveFan> fans, double h = 0.1) {
    StripSolution st;
    st.h = h;
    st.r_first = 0;
    st.fans = std::move(fans);
    return st;
}

Problem burgers_problem(std::vector<double> breaks, std::vector<double> values, double t_final) {
    Problem p;
    p.grid = StaggeredGrid::make(0.02, 2.0, -1.0, 3.0);
    std::vector<State> states;
    for (double v : values) states.push_back(make_state({v}));
    p.initial = InitialProfile::piecewise(std::move(breaks), std::move(states));
    p.ball = {make_state({1.0}), 0.5};
    p.t_final = t_final;
    return p;
}

}  // namespace

TEST_CASE("level_waves") {
    const SystemModel b = builtin_system("burgers_inhom");
    const Frame f = b.frame(0, 0);
    SUBCASE("constant strip has no waves") {
        const WaveFan null = solve_riemann(b, make_state({1.0}), make_state({1.0}), f);
        CHECK(level_waves(b, strip_of({null, null, null})).empty());
    }
    SUBCASE("a single shock has strength equal to the jump") {
        const WaveFan null = solve_riemann(b, make_state({1.2}), make_state({1.2}), f);
        const WaveFan shock = solve_riemann(b, make_state({1.2}), make_state({0.9}), f);
        const WaveFan null2 = solve_riemann(b, make_state({0.9}), make_state({0.9}), f);
        const auto w = level_waves(b, strip_of({null, shock, null2}));
        REQUIRE(w.size() == 1);
        CHECK(std::abs(w[0].strength) == doctest::Approx(0.3));
        CHECK(w[0].kind == WaveKind::Shock);
        CHECK(w[0].r == 2);
    }
    SUBCASE("p-system symmetric two-shock fan") {
        const SystemModel p = builtin_system("p_system", {{"gamma", 2.0}});
        const WaveFan fan =
            solve_riemann(p, make_state({1.0, 0.1}), make_state({1.0, -0.1}), p.frame(0, 0));
        const auto w = level_waves(p, strip_of({fan}));
        REQUIRE(w.size() == 2);
        CHECK(w[0].family == 0);
        CHECK(w[1].family == 1);
        CHECK(w[0].kind == WaveKind::Shock);
        CHECK(w[1].kind == WaveKind::Shock);
    }
}

TEST_CASE("functionals") {
    SUBCASE("single wave") {
        const std::vector<WaveRecord> w{wave(0, 0, -0.3, WaveKind::Shock)};
        CHECK(functional_L(w) == doctest::Approx(0.3));
        CHECK(functional_Q(w) == 0.0);
        CHECK(functional_G(w, 5.0) == doctest::Approx(0.3));
    }
    SUBCASE("1-wave left of a 2-wave does not approach") {
        const std::vector<WaveRecord> w{wave(-1, 0, -0.2, WaveKind::Shock),
                                        wave(1, 1, -0.1, WaveKind::Shock)};
        CHECK(functional_Q(w) == 0.0);
    }
    SUBCASE("2-wave left of a 1-wave approaches") {
        const std::vector<WaveRecord> w{wave(-1, 1, 0.2, WaveKind::Rarefaction),
                                        wave(1, 0, 0.1, WaveKind::Rarefaction)};
        CHECK(functional_Q(w) == doctest::Approx(0.02));
    }
    SUBCASE("two shocks of one genuinely nonlinear family") {
        const std::vector<WaveRecord> w{wave(-1, 0, -0.2, WaveKind::Shock),
                                        wave(1, 0, -0.3, WaveKind::Shock)};
        CHECK(functional_Q(w) == doctest::Approx(0.06));
        CHECK(functional_G(w, 5.0) == doctest::Approx(0.5 + 2 * 5.0 * 0.06));
    }
    SUBCASE("rarefactions of one family do not approach; contacts never self-approach") {
        std::vector<WaveRecord> w{wave(-1, 0, 0.2, WaveKind::Rarefaction),
                                  wave(1, 0, 0.3, WaveKind::Rarefaction)};
        CHECK(functional_Q(w) == 0.0);
        WaveRecord c1 = wave(0, 0, 0.2, WaveKind::Contact), c2 = wave(2, 0, -0.2, WaveKind::Contact);
        c1.genuinely_nonlinear = c2.genuinely_nonlinear = false;
        CHECK_FALSE(approaching(c1, c2));
    }
    SUBCASE("Q matches the pairwise definition and Q <= L^2/2") {
        std::vector<WaveRecord> w;
        const WaveKind kinds[] = {WaveKind::Shock, WaveKind::Rarefaction};
        for (int k = 0; k < 40; ++k) {
            w.push_back(wave(k, (k * 7) % 3, 0.01 * (1 + (k * 13) % 5) * ((k % 3) ? 1 : -1),
                             kinds[(k * 5) % 2]));
        }
        double q = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                if (approaching(w[i], w[j])) q += std::abs(w[i].strength * w[j].strength);
            }
        }
        CHECK(functional_Q(w) == doctest::Approx(q).epsilon(1e-12));
        const double L = functional_L(w);
        CHECK(functional_Q(w) <= L * L / 2.0);
    }
}

TEST_CASE("diamond interaction and wave balance") {
    const SystemModel b = builtin_system("burgers_inhom");
    const Frame f = b.frame(0, 0);
    const SystemModel p = builtin_system("p_system", {{"gamma", 2.0}});
    const Frame fp = p.frame(0, 0);
    SUBCASE("a null fan gives no interaction") {
        Diamond d;
        d.alpha = solve_riemann(b, make_state({1.0}), make_state({1.0}), f);
        d.beta = solve_riemann(b, make_state({1.0}), make_state({0.8}), f);
        CHECK(diamond_interaction(b, d) == 0.0);
    }
    SUBCASE("two shocks of the same family") {
        Diamond d;
        d.alpha = solve_riemann(b, make_state({1.2}), make_state({1.0}), f);
        d.beta = solve_riemann(b, make_state({1.0}), make_state({0.9}), f);
        CHECK(diamond_interaction(b, d) == doctest::Approx(0.2 * 0.1));
        d.epsilon = solve_riemann(b, make_state({1.2}), make_state({0.9}), f);
        CHECK(wave_balance_residual(d) <= 0.2 * 0.1);
    }
    SUBCASE("two rarefactions of the same family") {
        Diamond d;
        d.alpha = solve_riemann(b, make_state({0.8}), make_state({0.9}), f);
        d.beta = solve_riemann(b, make_state({0.9}), make_state({1.1}), f);
        CHECK(diamond_interaction(b, d) == 0.0);
    }
    SUBCASE("non-approaching system waves add exactly") {
        const State u0 = make_state({1.0, 0.0});
        const State u1 = wave_curve(p, 0, -0.04, u0, fp);
        const State u2 = wave_curve(p, 1, 0.03, u1, fp);
        Diamond d;
        d.alpha = solve_riemann(p, u0, u1, fp);
        d.beta = solve_riemann(p, u1, u2, fp);
        d.epsilon = solve_riemann(p, u0, u2, fp);
        CHECK(diamond_interaction(p, d) < 1e-15);
        CHECK(wave_balance_residual(d) <= 1e-10);
    }
    SUBCASE("null incoming fans give a null outgoing fan") {
        Diamond d;
        d.alpha = solve_riemann(p, make_state({1.0, 0.0}), make_state({1.0, 0.0}), fp);
        d.beta = d.alpha;
        d.epsilon = d.alpha;
        CHECK(wave_balance_residual(d) == 0.0);
    }
}

TEST_CASE("tv_and_sup counts fan jumps and vertical jumps") {
    const SystemModel b = builtin_system("burgers_inhom");
    const Frame f = b.frame(0, 0);
    const WaveFan a = solve_riemann(b, make_state({1.0}), make_state({1.2}), f);
    const WaveFan c = solve_riemann(b, make_state({1.1}), make_state({0.9}), f);
    const TvSup ts = tv_and_sup(strip_of({a, c}));
    CHECK(ts.tv == doctest::Approx(0.2 + 0.1 + 0.2));
    CHECK(ts.sup == doctest::Approx(1.2));
    const WaveFan null = solve_riemann(b, make_state({1.0}), make_state({1.0}), f);
    CHECK(tv_and_sup(strip_of({null, null})).tv == 0.0);
}

TEST_CASE("theorem bound check") {
    const AssumptionProfile prof = AssumptionProfile::make(
        5.0, 0.1, {PhiSpec::Kind::Sech2, 0.05}, {PsiSpec::Kind::Exponential, 1.0});
    const TheoremConstants c{2.0, 3.0, 1.0};
    const BoundCheck ok = check_theorem_bounds({0.3, 1.2}, 0.2, 1.1, prof, c);
    CHECK(ok.sigma == doctest::Approx(0.1));
    CHECK(ok.tv_bound == doctest::Approx(2.0 * std::exp(0.1) * 0.3));
    CHECK(ok.sup_bound == doctest::Approx(1.1 + 3.0 * std::exp(0.1) * 0.3));
    CHECK(ok.pass);
    const BoundCheck bad = check_theorem_bounds({5.0, 1.2}, 0.2, 1.1, prof, c);
    CHECK_FALSE(bad.pass);
    CHECK(bad.tv_margin < 0.0);
}

TEST_CASE("monitor on homogeneous Burgers: decay and bookkeeping") {
    const SystemModel b = builtin_system("burgers_inhom");
    Problem p = burgers_problem({0.0, 0.4}, {1.25, 1.0, 0.8}, 2.5);
    p.grid = StaggeredGrid::make(0.02, 2.0, -1.0, 5.0);
    const AssumptionProfile prof = default_profile("burgers_inhom", {}, p.ball);
    DiagnosticsOptions opts;
    opts.C0 = 5.0;
    DiagnosticsMonitor diag(b, p, prof, opts);
    run(b, p, {diag.hook()});
    diag.finish();
    const auto& reps = diag.reports();
    REQUIRE(reps.size() == static_cast<std::size_t>(p.grid.steps_to(p.t_final) + 1));
    for (std::size_t i = 0; i < reps.size(); ++i) {
        CHECK(reps[i].s == static_cast<long>(i));
        CHECK(reps[i].L >= 0.0);
        CHECK(reps[i].Q >= 0.0);
        CHECK(reps[i].D_total >= 0.0);
        CHECK(reps[i].G == reps[i].L + 2.0 * opts.C0 * reps[i].Q);
        CHECK(reps[i].Q <= reps[i].L * reps[i].L / 2.0 + 1e-15);
        if (i > 0) CHECK(reps[i].G <= reps[i - 1].G + 1e-12);
        CHECK(reps[i].bounds.pass);
    }
    // The two shocks merge, so interaction was registered somewhere.
    CHECK(diag.total_interaction() > 0.0);
    CHECK(reps.front().Q > 0.0);
    CHECK(reps.back().Q == 0.0);
    // Scalar waves add exactly in a homogeneous diamond.
    for (std::size_t i = 0; i + 1 < reps.size(); ++i) CHECK(reps[i].balance_residual_max <= 1e-12);
}

TEST_CASE("wave-strength TV and jump TV agree for scalar laws") {
    const SystemModel b = builtin_system("burgers_inhom");
    const Problem p = burgers_problem({0.0, 0.5}, {0.8, 1.2, 0.9}, 0.5);
    bool ok = true;
    run(b, p, {[&](const StripSolution& st, const LevelStates&) {
            const double L = functional_L(level_waves(b, st));
            ok = ok && std::abs(L - tv_and_sup(st).tv) <= 1e-12;
        }});
    CHECK(ok);
}

TEST_CASE("inhomogeneous monitor reports balance ratios") {
    const SystemModel b = builtin_system("burgers_inhom", {{"epsilon", 0.05}, {"kappa", 0.05}});
    Problem p = burgers_problem({-0.5, 0.5}, {1.0, 1.1, 1.0}, 1.0);
    p.grid = StaggeredGrid::make(0.02, 2.0, -12.0, 14.0);
    p.ball = {make_state({1.0}), 0.25};
    const AssumptionProfile prof =
        default_profile("burgers_inhom", {{"epsilon", 0.05}, {"kappa", 0.05}}, p.ball);
    DiagnosticsMonitor diag(b, p, prof);
    std::vector<FunctionalReport> streamed;
    diag.sink = [&](const FunctionalReport& r) { streamed.push_back(r); };
    run(b, p, {diag.hook()});
    diag.finish();
    REQUIRE(streamed.size() == diag.reports().size());
    for (std::size_t i = 0; i + 1 < streamed.size(); ++i) {
        CHECK(std::isfinite(streamed[i].balance_ratio_max));
        CHECK(streamed[i].balance_ratio_max < 50.0);
    }
    CHECK(std::isnan(streamed.back().balance_ratio_max));
    const IncrementConstants inc = diag.increments();
    CHECK(inc.steps == static_cast<long>(streamed.size()) - 1);
    CHECK(inc.peak >= 0.0);
}

TEST_CASE("weak residual") {
    SUBCASE("test functions vanish outside their support") {
        const TestFunction tf{0.5, 0.25, 2.0};
        CHECK(tf.value(0.76, 0.1) == 0.0);
        CHECK(tf.value(0.5, 2.0) == 0.0);
        CHECK(tf.value(0.5, 0.0) == doctest::Approx(std::exp(-2.0)));
        const double d = 1e-6;
        CHECK(tf.dx(0.6, 0.3) ==
              doctest::Approx((tf.value(0.6 + d, 0.3) - tf.value(0.6 - d, 0.3)) / (2 * d)).epsilon(1e-6));
        CHECK(tf.dt(0.6, 0.3) ==
              doctest::Approx((tf.value(0.6, 0.3 + d) - tf.value(0.6, 0.3 - d)) / (2 * d)).epsilon(1e-6));
        const auto five = default_test_functions(-1.0, 3.0, 1.0);
        CHECK(five.size() == 5);
        CHECK(five.front().center == -1.0);
        CHECK(five.back().center == 3.0);
    }
    SUBCASE("constant homogeneous data have vanishing residual") {
        const SystemModel b = builtin_system("burgers_inhom");
        Problem p = burgers_problem({}, {1.0}, 1.0);
        WeakResidualMonitor weak(b, p, default_test_functions(-0.5, 2.0, 1.0));
        run(b, p, {weak.hook()});
        CHECK(weak.max_residual() < 1e-6);
    }
    SUBCASE("a shock moving at the wrong speed would not be weak; the scheme's is") {
        const SystemModel b = builtin_system("burgers_inhom");
        std::vector<double> res;
        for (double h : {0.04, 0.02, 0.01}) {
            Problem p = burgers_problem({0.0}, {1.2, 0.8}, 1.0);
            p.grid = StaggeredGrid::make(h, 2.0, -1.0, 3.0);
            WeakResidualMonitor weak(b, p, default_test_functions(-0.5, 2.0, 1.0));
            run(b, p, {weak.hook()});
            res.push_back(weak.max_residual());
        }
        CHECK(res[2] < res[0]);
    }
}
