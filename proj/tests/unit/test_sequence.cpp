#include <doctest.h>

#include <cmath>
#include <vector>

#include "glimm/errors.hpp"
#include "glimm/sequence.hpp"

using namespace glimm;

TEST_CASE("van der Corput first samples") {
    const SamplingSequence seq = SamplingSequence::van_der_corput();
    CHECK(next_sample(seq, 0) == 0.0);
    CHECK(next_sample(seq, 1) == -0.5);
    CHECK(next_sample(seq, 2) == 0.5);
    CHECK(next_sample(seq, 3) == -0.75);
    CHECK(radical_inverse2(1) == 0.5);
    CHECK(radical_inverse2(6) == 0.375);
}

TEST_CASE("samples stay inside (-1, 1)") {
    for (const SamplingSequence& seq :
         {SamplingSequence::van_der_corput(), SamplingSequence::prng(3)}) {
        for (long s = 0; s < 100000; ++s) {
            const double a = seq(s);
            REQUIRE(a > -1.0);
            REQUIRE(a < 1.0);
        }
    }
}

TEST_CASE("dyadic equidistribution of the first 4096 points") {
    const SamplingSequence seq = SamplingSequence::van_der_corput();
    std::vector<int> bins(64, 0);
    for (long s = 0; s < 4096; ++s) bins[static_cast<std::size_t>((seq(s) + 1.0) * 32.0)]++;
    for (int c : bins) CHECK(std::abs(c - 64) <= 12);
}

TEST_CASE("prng is roughly uniform and keyed by seed") {
    const SamplingSequence a = SamplingSequence::prng(1), b = SamplingSequence::prng(2);
    std::vector<int> bins(16, 0);
    const int n = 160000;
    int same = 0;
    for (long s = 0; s < n; ++s) {
        bins[static_cast<std::size_t>((a(s) + 1.0) * 8.0)]++;
        if (a(s) == b(s)) ++same;
    }
    for (int c : bins) CHECK(std::abs(c - n / 16) < 5 * std::sqrt(n / 16.0));
    CHECK(same == 0);
}

TEST_CASE("sequences are deterministic and order independent") {
    const SamplingSequence p = SamplingSequence::prng(42);
    std::vector<double> forward;
    for (long s = 0; s < 1000; ++s) forward.push_back(p(s));
    const SamplingSequence again(SequenceKind::Prng, 42);
    for (long s = 999; s >= 0; --s) CHECK(again(s) == forward[static_cast<std::size_t>(s)]);
    CHECK(SamplingSequence::van_der_corput()(777) == SamplingSequence::van_der_corput()(777));
}

TEST_CASE("sequence kind names") {
    CHECK(parse_sequence_kind("van_der_corput") == SequenceKind::VanDerCorput);
    CHECK(parse_sequence_kind("prng") == SequenceKind::Prng);
    CHECK(to_string(SequenceKind::Prng) == "prng");
    CHECK_THROWS_AS(parse_sequence_kind("sobol"), Error);
}
