// vanvleck.hpp — second-order Van Vleck treatment of the Floquet problem.
//
// The modulation is removed by the frame change exp(i Phi(t) sigma_z / 2) with
// Phi the phase integral of f, which dresses the drive with the Fourier
// amplitudes F_l of exp(i Phi(t)). Near-degenerate pairs |up, n>, |down, n+m>
// are then block-diagonalized to second order in Omega_x.

#pragma once

#include <string>
#include <vector>

#include "fluoro/elements.hpp"
#include "fluoro/model.hpp"
#include "fluoro/types.hpp"

namespace fluoro::vanvleck {

// Symmetric coefficient table c_l for l in [-l_max, l_max].
struct Harmonics {
    int l_max{0};
    std::vector<cplx> values;

    cplx operator()(int l) const noexcept {
        return (l < -l_max || l > l_max) ? cplx(0.0) : values[static_cast<std::size_t>(l + l_max)];
    }
};

// Integer-order Bessel function of the first kind, any sign of order and argument.
double bessel_j(int n, double x);

// True when F_l has a closed Bessel-sum form: at most two harmonics, one of them
// with multiple 1 when there are two.
bool has_bessel_form(const model::Modulation& mod);

// Theta = sum_k Omega_k / (p_k w) sin(phi_k)
double bessel_phase(const model::Modulation& mod);

// F_l = (1/T) int exp(i Phi(t) - i l w t) dt, Bessel sum when available and
// quadrature otherwise.
Harmonics fourier_amplitudes(const model::SystemParams& params, const model::Modulation& mod,
                             int l_max);

// Trapezoidal quadrature of the defining integral (spectrally accurate).
Harmonics fourier_amplitudes_quadrature(const model::Modulation& mod, int l_max,
                                        int samples = 4096);

// Phase of F_0: F_0 = e^{-i theta0} |F_0|.
double theta0(const model::SystemParams& params, const model::Modulation& mod);

struct VanVleckSolution {
    int m{0};                 // nearest integer to delta / omega_z
    Harmonics F;
    double Theta{0.0};
    double theta0{0.0};
    double Omega_m{0.0};      // quasienergy splitting
    double second_order_shift{0.0};
    cplx u{0.0};
    double v{0.0};
    double B{1.0};
    int j_max{0};
    Harmonics P;              // P(0) = 0
    Harmonics Q;              // Q(0) = 0
    double norm{1.0};
    double validity_margin{0.0};
    double omega_z{0.0};
    double omega_x{0.0};
    double detuning{0.0};
    std::vector<std::string> warnings;
};

inline constexpr int kDefaultJMax = 16;

// Throws ResonanceError when delta + j omega_z vanishes for some j != -m.
VanVleckSolution vanvleck_solution(const model::SystemParams& params,
                                   const model::Modulation& mod, int j_max = kDefaultJMax);

// <Psi'_{a,0}| sigma_+ |Psi'_{b,n}> from the closed-form bracket expressions.
cplx bracket(const VanVleckSolution& vv, int a, int b, int n);

// x_{ab,l} = sum_n F_{n+l} <Psi'_{a,0}|sigma_+|Psi'_{b,n}>
elements::TransitionElements vanvleck_elements(const VanVleckSolution& vv,
                                               int l_max = elements::kDefaultLMax);

} // namespace fluoro::vanvleck
