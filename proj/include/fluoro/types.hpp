// types.hpp — scalar and small fixed-size matrix aliases shared by all modules

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fluoro {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

// Two-level Hilbert space, basis ordering {|up>, |down>}.
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// Liouville space, basis ordering (sigma_+, sigma_-, pi_+, pi_-).
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

} // namespace fluoro
