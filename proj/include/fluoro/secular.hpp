// secular.hpp — secular-approximation rates, Floquet-basis steady state and the
// line-resolved spectrum built from three Lorentzian families plus delta lines.

#pragma once

#include <vector>

#include "fluoro/elements.hpp"
#include "fluoro/kernels.hpp"
#include "fluoro/spectrum.hpp"

namespace fluoro::secular {

struct SecularRates {
    double gamma_rel{0.0};
    double gamma_deph{0.0};
    double gamma_s{0.0};
    double rho_pp_ss{0.0};
    double rho_mm_ss{0.0};
};

// Throws NoRelaxationError when gamma_rel < 1e-14 kappa.
SecularRates rates(const elements::TransitionElements& elems, double kappa = 1.0);

// Lines with weight below 1e-12 of the largest weight are dropped.
spectrum::Spectrum secular_spectrum(const elements::TransitionElements& elems,
                                    const SecularRates& r, double splitting, double omega_z,
                                    const std::vector<double>& grid,
                                    kernels::Exec exec = kernels::Exec::parallel);

// Sum over l of all incoherent and coherent weights, straight from the elements.
double total_weight(const elements::TransitionElements& elems, const SecularRates& r);

// max over l of ||x_{++,l}| - |x_{++,-l}|| and ||x_{+-,l}|^2 rho_++ - |x_{-+,-l}|^2 rho_--|;
// zero exactly when the secular spectrum is mirror symmetric.
double mirror_condition_residual(const elements::TransitionElements& elems,
                                 const SecularRates& r);

} // namespace fluoro::secular
