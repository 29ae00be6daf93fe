#pragma once

#include <Eigen/Dense>

namespace glimm {

// Systems up to this size are stored inline (no heap traffic in the stepping loop).
inline constexpr int kMaxDim = 4;

using State = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                             kMaxDim, kMaxDim>;

inline State make_state(std::initializer_list<double> values) {
    State u(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) u(i++) = v;
    return u;
}

inline bool all_finite(const State& u) { return u.allFinite(); }

}  // namespace glimm
