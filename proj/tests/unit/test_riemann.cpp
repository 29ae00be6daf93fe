#include <doctest.h>

#include <cmath>
#include <random>

#include "glimm/errors.hpp"
#include "glimm/riemann.hpp"

using namespace glimm;

namespace {

const SystemModel& burgers() {
    static const SystemModel m = builtin_system("burgers_inhom");
    return m;
}

const SystemModel& psys() {
    static const SystemModel m = builtin_system("p_system", {{"gamma", 2.0}});
    return m;
}

RiemannOptions wide() {
    RiemannOptions o;
    o.small_data_threshold = 5.0;
    return o;
}

}  // namespace

TEST_CASE("wave curve examples") {
    const Frame f = burgers().frame(0.0, 0.0);
    SUBCASE("zero strength returns the base state exactly") {
        const State u0 = make_state({0.37});
        CHECK(wave_curve(burgers(), 0, 0.0, u0, f) == u0);
        const State v0 = make_state({1.1, -0.05});
        const Frame fp = psys().frame(0.0, 0.0);
        CHECK(wave_curve(psys(), 0, 0.0, v0, fp) == v0);
        CHECK(wave_curve(psys(), 1, 0.0, v0, fp) == v0);
    }
    SUBCASE("Burgers rarefaction branch") {
        CHECK(wave_curve(burgers(), 0, 0.5, make_state({1.0}), f)(0) == doctest::Approx(1.5));
    }
    SUBCASE("Burgers shock branch") {
        CHECK(wave_curve(burgers(), 0, -0.5, make_state({1.0}), f)(0) == doctest::Approx(0.5));
        CHECK(shock_speed(burgers(), 0, -0.5, make_state({1.0}), f) == doctest::Approx(0.75));
    }
}

TEST_CASE("wave curves leave the base state along r_i") {
    const Frame f = psys().frame(0.0, 0.0);
    const State u0 = make_state({1.05, 0.02});
    const EigenStructure es = eigen_decompose(psys(), u0, f);
    for (int i = 0; i < 2; ++i) {
        const double d = 1e-5;
        const State deriv =
            (wave_curve(psys(), i, d, u0, f) - wave_curve(psys(), i, -d, u0, f)) / (2 * d);
        CHECK((deriv - es.right.col(i)).norm() <= 1e-5 * es.right.col(i).norm());
        // Strength is the eigen-coordinate from the base state.
        for (double tau : {-0.1, 0.1}) {
            const State u = wave_curve(psys(), i, tau, u0, f);
            CHECK(es.left.row(i).dot(u - u0) == doctest::Approx(tau).epsilon(1e-10));
        }
    }
}

TEST_CASE("solve_riemann examples") {
    const Frame f = burgers().frame(0.0, 0.0);
    SUBCASE("equal data give a null fan") {
        const WaveFan fan = solve_riemann(psys(), make_state({1.0, 0.1}), make_state({1.0, 0.1}),
                                          psys().frame(0, 0));
        CHECK(fan.is_null());
        CHECK(fan.strengths.norm() == 0.0);
        for (int i = 0; i < 2; ++i) CHECK(fan.kinds[i] == WaveKind::Null);
    }
    SUBCASE("Burgers 1 to 0 is a shock of strength -1 at speed 1/2") {
        const WaveFan fan = solve_riemann(burgers(), make_state({1.0}), make_state({0.0}), f, wide());
        CHECK(fan.kinds[0] == WaveKind::Shock);
        CHECK(fan.strengths(0) == doctest::Approx(-1.0));
        CHECK(fan.speed_lo[0] == doctest::Approx(0.5));
    }
    SUBCASE("p-system symmetric two-shock fan") {
        const Frame fp = psys().frame(0.0, 0.0);
        const WaveFan fan =
            solve_riemann(psys(), make_state({1.0, 0.1}), make_state({1.0, -0.1}), fp);
        CHECK(fan.kinds[0] == WaveKind::Shock);
        CHECK(fan.kinds[1] == WaveKind::Shock);
        CHECK(std::abs(fan.states[1](1)) < 1e-10);
        CHECK(fan.speed_lo[0] == doctest::Approx(-fan.speed_lo[1]).epsilon(1e-10));
        CHECK(fan.speed_hi[0] < 0.0);
        CHECK(fan.speed_lo[1] > 0.0);
    }
    SUBCASE("data beyond the small-data threshold are refused") {
        try {
            solve_riemann(burgers(), make_state({1.0}), make_state({0.0}), f);
            FAIL("expected SmallDataExceeded");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SmallDataExceeded);
        }
    }
}

TEST_CASE("round trip, Lax admissibility and ordering on random small data") {
    const DomainBall ball{make_state({1.0, 0.0}), 0.3};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int shocks = 0, rarefactions = 0;
    for (int k = 0; k < 1000; ++k) {
        State ul(2), ur(2);
        do {
            ul << 1.0 + 0.3 * unit(rng), 0.3 * unit(rng);
        } while (!ball.contains(ul));
        do {
            ur = ul + 0.07 * make_state({unit(rng), unit(rng)});
        } while (!ball.contains(ur));
        const Frame f = psys().frame(0.0, 0.0);
        const WaveFan fan = solve_riemann(psys(), ul, ur, f);
        CHECK((wave_fan_curve(psys(), fan.strengths, ul, f) - ur).lpNorm<Eigen::Infinity>() <= 1e-8);
        CHECK(fan.left() == ul);
        CHECK(fan.right() == ur);
        for (int i = 0; i < 2; ++i) {
            CHECK(fan.speed_lo[i] <= fan.speed_hi[i]);
            if (fan.kinds[i] == WaveKind::Shock) {
                ++shocks;
                const double lam_l = eigen_decompose(psys(), fan.states[i], f).lambdas(i);
                const double lam_r = eigen_decompose(psys(), fan.states[i + 1], f).lambdas(i);
                CHECK(lam_r < fan.speed_lo[i] + 1e-10);
                CHECK(fan.speed_lo[i] < lam_l + 1e-10);
            }
            if (fan.kinds[i] == WaveKind::Rarefaction) ++rarefactions;
        }
        CHECK(fan.speed_hi[0] <= fan.speed_lo[1]);
    }
    CHECK(shocks > 100);
    CHECK(rarefactions > 100);
}

TEST_CASE("sample_fan") {
    const Frame f = burgers().frame(0.0, 0.0);
    SUBCASE("outside the fan") {
        const WaveFan fan = solve_riemann(burgers(), make_state({0.8}), make_state({1.1}), f);
        CHECK(sample_fan(burgers(), fan, 0.5)(0) == 0.8);
        CHECK(sample_fan(burgers(), fan, 2.0)(0) == 1.1);
    }
    SUBCASE("inside a centred rarefaction") {
        const WaveFan fan =
            solve_riemann(burgers(), make_state({0.0}), make_state({1.0}), f, wide());
        CHECK(sample_fan(burgers(), fan, 0.3)(0) == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("shock tie goes left") {
        const WaveFan fan =
            solve_riemann(burgers(), make_state({1.0}), make_state({0.0}), f, wide());
        CHECK(sample_fan(burgers(), fan, 0.5)(0) == 1.0);
        CHECK(sample_fan(burgers(), fan, std::nextafter(0.5, 1.0))(0) == 0.0);
    }
    SUBCASE("monotone in xi for a convex scalar flux") {
        const WaveFan fan =
            solve_riemann(burgers(), make_state({0.7}), make_state({1.2}), f);
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double v = sample_fan(burgers(), fan, 0.5 + k * 0.002)(0);
            CHECK(v >= prev);
            prev = v;
        }
    }
    SUBCASE("system fan interior states and rarefaction interior") {
        const Frame fp = psys().frame(0.0, 0.0);
        const State ul = make_state({1.0, 0.0});
        const State ur = wave_curve(psys(), 1, 0.08, wave_curve(psys(), 0, -0.05, ul, fp), fp);
        const WaveFan fan = solve_riemann(psys(), ul, ur, fp);
        CHECK(fan.kinds[0] == WaveKind::Shock);
        CHECK(fan.kinds[1] == WaveKind::Rarefaction);
        CHECK(sample_fan(psys(), fan, 0.0) == fan.states[1]);
        const double mid = 0.5 * (fan.speed_lo[1] + fan.speed_hi[1]);
        const State um = sample_fan(psys(), fan, mid);
        CHECK(eigen_decompose(psys(), um, fp).lambdas(1) == doctest::Approx(mid).epsilon(1e-9));
    }
}

TEST_CASE("frozen frame matters for inhomogeneous flux") {
    const SystemModel m = builtin_system("burgers_inhom", {{"epsilon", 0.5}});
    const WaveFan at0 = solve_riemann(m, make_state({1.1}), make_state({1.0}), m.frame(0.0, 0.0));
    const WaveFan far = solve_riemann(m, make_state({1.1}), make_state({1.0}), m.frame(5.0, 0.0));
    CHECK(at0.speed_lo[0] > far.speed_lo[0]);
    CHECK(far.speed_lo[0] == doctest::Approx(1.05).epsilon(1e-4));
}
