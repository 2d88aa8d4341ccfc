// elements.hpp — time-averaged transition matrix elements between Floquet modes
// and the generalized-parity analysis built on them.
//
//   x^{(+)}_{ab,l} = (1/T) int_0^T <u_a(t)|sigma_+|u_b(t)> e^{-i l w t} dt
//
// State index 0 is alpha = +, index 1 is alpha = -.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fluoro/floquet.hpp"
#include "fluoro/model.hpp"
#include "fluoro/types.hpp"

namespace fluoro::elements {

struct TransitionElements {
    int l_max{0};
    // x_plus[a][b][l + l_max]; x_minus likewise for sigma_-. x_minus may be
    // empty when the producer only has sigma_+ (analytic backend).
    std::array<std::array<std::vector<cplx>, 2>, 2> x_plus;
    std::array<std::array<std::vector<cplx>, 2>, 2> x_minus;
    std::size_t n_samples{0};
    std::string backend;

    // Zero outside [-l_max, l_max].
    cplx plus(int a, int b, int l) const noexcept;
    cplx minus(int a, int b, int l) const noexcept;

    // sum_{a,b,l} |x^{(+)}_{ab,l}|^2, equal to 1 for a complete mode basis.
    double parseval() const noexcept;
    bool has_minus() const noexcept { return !x_minus[0][0].empty(); }
};

inline constexpr int kDefaultLMax = 16;

// Throws CutoffError when more than 1e-6 of the sigma_+ energy sits beyond
// |l| > l_max - 2.
TransitionElements transition_elements(const floquet::FloquetSolution& sol,
                                       int l_max = kDefaultLMax);

// max over a, b, l of |x^{(+)}_{ab,l} - [x^{(-)}_{ba,-l}]^*|
double conjugation_residual(const TransitionElements& elems);

struct ParityReport {
    std::optional<double> lambda_plus;
    std::optional<double> lambda_minus;
    double lambda_residual{0.0};
    // max |x_{ab,l} - (-1)^l lambda_a lambda_b x_{ba,-l}^*|; set only with parity eigenvalues
    std::optional<double> mirror_identity_residual;
    // max ||x_{ab,l}| - |x_{ba,-l}||
    double magnitude_identity_residual{0.0};
    // x_{++,-l} = (-1)^l x_{++,l} and x_{-+,-l} = -(-1)^l e^{-2 i theta0} x_{+-,l}
    std::optional<std::array<double, 2>> evenp_residuals;
    // Relative mode phase absorbed when scoring the second even-p identity.
    std::optional<double> evenp_gauge_phase;
    std::optional<double> theta0;
};

inline constexpr double kLambdaSnapTolerance = 1e-8;

// lambda_a = <u_a(t)| sigma_x |u_a(t + T/2)> averaged over the grid; snapped
// to +-1 when the residual max_t ||sigma_x u_a(t+T/2) - lambda_a u_a(t)|| passes.
// Lambdas stay unset when `parity` reports no generalized parity.
ParityReport parity_eigenvalues(const floquet::FloquetSolution& sol,
                                const model::ParityClass& parity);

// Fills the identity residuals. The second even-p identity is phase sensitive;
// for numerically obtained modes the relative phase between the two modes is
// fitted, for the analytic backend it is scored as is.
ParityReport verify_identities(const TransitionElements& elems, ParityReport report,
                               const model::Modulation& mod,
                               const model::SystemParams& params);

} // namespace fluoro::elements
