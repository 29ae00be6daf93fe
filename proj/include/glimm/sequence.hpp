#pragma once

#include <cstdint>
#include <string_view>

namespace glimm {

enum class SequenceKind { VanDerCorput, Prng };

std::string_view to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(std::string_view name);

// Base-2 radical inverse of k.
double radical_inverse2(std::uint64_t k);

/// Equidistributed sampling points a_s in (-1, 1).
///
/// Stateless: the value at index s is a pure function of (kind, seed, s), so
/// levels may be generated in any order and from any thread.
class SamplingSequence {
public:
    SamplingSequence() = default;
    SamplingSequence(SequenceKind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

    static SamplingSequence van_der_corput() { return {SequenceKind::VanDerCorput, 0}; }
    static SamplingSequence prng(std::uint64_t seed) { return {SequenceKind::Prng, seed}; }

    SequenceKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    double operator()(long s) const;

private:
    SequenceKind kind_ = SequenceKind::VanDerCorput;
    std::uint64_t seed_ = 0;
};

inline double next_sample(const SamplingSequence& seq, long s) { return seq(s); }

}  // namespace glimm
