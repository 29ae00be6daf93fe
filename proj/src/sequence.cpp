#include "glimm/sequence.hpp"

#include "glimm/errors.hpp"

namespace glimm {

std::string_view to_string(SequenceKind kind) {
    return kind == SequenceKind::VanDerCorput ? "van_der_corput" : "prng";
}

SequenceKind parse_sequence_kind(std::string_view name) {
    if (name == "van_der_corput") return SequenceKind::VanDerCorput;
    if (name == "prng") return SequenceKind::Prng;
    throw Error(ErrorKind::ValidationError,
                "sequence.kind must be van_der_corput or prng, got '" + std::string(name) + "'");
}

double radical_inverse2(std::uint64_t k) {
    double result = 0.0;
    double scale = 0.5;
    while (k != 0) {
        if (k & 1u) result += scale;
        k >>= 1;
        scale *= 0.5;
    }
    return result;
}

namespace {

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double SamplingSequence::operator()(long s) const {
    if (kind_ == SequenceKind::VanDerCorput) {
        return 2.0 * radical_inverse2(static_cast<std::uint64_t>(s) + 1) - 1.0;
    }
    const std::uint64_t bits = mix(mix(seed_) ^ static_cast<std::uint64_t>(s));
    // Midpoint of a 2^-53 cell, so the value is never exactly 0 or 1.
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace glimm
