// kernels.hpp — hot loops with a serial reference and an OpenMP variant.
//
// Both variants write each output element from a single iteration with a fixed
// summation order, so they agree bitwise.

#pragma once

#include <vector>

#include "fluoro/spectrum.hpp"
#include "fluoro/types.hpp"

namespace fluoro::kernels {

enum class Exec { serial, parallel };

// s[i] = sum over lines of line_value(line, grid[i])
std::vector<double> lorentzian_sum(const std::vector<spectrum::Line>& lines,
                                   const std::vector<double>& grid, Exec exec = Exec::parallel);

// S(D) = Re int_0^{tau_max} g(tau) e^{-eta tau} e^{-i D tau} dtau by the trapezoidal rule
// on the uniform grid tau_k = k * dtau.
std::vector<double> half_fourier(const std::vector<cplx>& g, double dtau,
                                 const std::vector<double>& grid, double eta = 0.0,
                                 Exec exec = Exec::parallel);

// Thread count used by parallel kernels; 0 leaves the OpenMP default.
void set_threads(int n);
int max_threads();

} // namespace fluoro::kernels
