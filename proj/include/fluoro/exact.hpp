// exact.hpp — numerically exact route: Liouville-space master equation in the
// (<sigma_+>, <sigma_->, <pi_+>, <pi_->) basis, periodic steady state,
// time-averaged first-order correlation by quantum regression, and its
// one-sided Fourier transform.

#pragma once

#include <array>
#include <vector>

#include "fluoro/kernels.hpp"
#include "fluoro/model.hpp"
#include "fluoro/spectrum.hpp"
#include "fluoro/types.hpp"

namespace fluoro::exact {

Mat4 liouvillian(const model::SystemParams& params, const model::Modulation& mod, double t);

// Half-period parity map in Liouville space: swaps sigma_+ and sigma_-, negates pi_+-.
Mat4 parity_matrix();

// Pi(t1, t0) by fixed-step RK4 with `steps` steps over [t0, t1].
// Throws IntegrationBlowup on non-finite entries.
Mat4 principal_matrix(const model::SystemParams& params, const model::Modulation& mod,
                      double t0, double t1, int steps);

// Pi(t0 + k T / samples, t0) for k = 0..samples, RK4 with steps_per_period steps
// per period; steps_per_period must be a multiple of samples.
std::vector<Mat4> period_propagators(const model::SystemParams& params,
                                     const model::Modulation& mod, double t0,
                                     int steps_per_period, int samples);

inline constexpr int kDefaultStepsPerPeriod = 4096;
inline constexpr int kDefaultSamplesPerPeriod = 64;
inline constexpr int kDefaultTPrime = 32;
inline constexpr double kDefaultTauMax = 60.0;

struct SteadyState {
    double period{0.0};
    int steps_per_period{0};
    std::vector<double> time_grid;   // samples per period, uniform on [0, T)
    std::vector<Vec4> rho;           // periodic steady trajectory
    std::vector<Mat4> propagators;   // Pi(t_k, 0), k = 0..samples (last is the monodromy)
    cplx eigenvalue{1.0};            // eigenvalue of the monodromy closest to 1

    const Mat4& monodromy() const { return propagators.back(); }
    double mean_pi_plus() const;
};

// Throws MonodromyConsistencyError when no monodromy eigenvalue lies within 1e-8 of 1.
SteadyState steady_state_exact(const model::SystemParams& params, const model::Modulation& mod,
                               int steps_per_period = kDefaultStepsPerPeriod,
                               int samples_per_period = kDefaultSamplesPerPeriod);

struct CorrelationOptions {
    int n_tprime{kDefaultTPrime};
    double tau_max{kDefaultTauMax};
    int steps_per_period{kDefaultStepsPerPeriod};
    int samples_per_period{kDefaultSamplesPerPeriod};  // tau resolution T / samples
    double window_tolerance{1e-6};

    void validate() const;
};

struct CorrelationTrace {
    std::vector<double> tau_grid;
    std::vector<cplx> g1;
    std::vector<cplx> g1_coherent;
    std::vector<cplx> g1_incoherent;
    double dtau{0.0};
    double omega_z{0.0};
    double mean_pi_plus{0.0};
    // Fourier coefficients a_l of the steady <sigma_+>(t), index l + coherent_l_max.
    int coherent_l_max{0};
    std::vector<cplx> coherent_amplitudes;
};

// One propagation per start time t'; the start times run concurrently with
// Exec::parallel. Throws WindowError when the incoherent part has not decayed.
CorrelationTrace correlation(const model::SystemParams& params, const model::Modulation& mod,
                             const SteadyState& steady, const CorrelationOptions& opts = {},
                             kernels::Exec exec = kernels::Exec::parallel);
CorrelationTrace correlation(const model::SystemParams& params, const model::Modulation& mod,
                             const CorrelationOptions& opts = {},
                             kernels::Exec exec = kernels::Exec::parallel);

// S_inc on the grid by trapezoidal quadrature with optional apodization exp(-eta tau);
// coherent delta lines at l omega_z with weight pi |a_l|^2.
spectrum::Spectrum exact_spectrum(const CorrelationTrace& trace, const std::vector<double>& grid,
                                  double eta = 0.0, kernels::Exec exec = kernels::Exec::parallel);

// Exact line decomposition from the Floquet exponents of the Liouville monodromy:
// the averaged correlation is a finite sum of damped exponentials, each reported
// with its position, width, absorptive weight and dispersive part.
struct LineDecomposition {
    std::vector<spectrum::Line> lines;                  // incoherent lines
    std::vector<spectrum::CoherentLine> coherent_lines; // from the unit Floquet multiplier
    std::array<cplx, 4> exponents{};                    // log(mu_k) / T, principal branch
    double total_weight{0.0};                           // sum of all weights, equals g1(0)
};

LineDecomposition exact_lines(const model::SystemParams& params, const model::Modulation& mod,
                              const SteadyState& steady, int l_max = 16,
                              int samples_per_period = 256);

// Residuals of the half-period parity chain: the Liouvillian, the steady
// trajectory, the principal matrix and the regression correlation.
struct ParityChain {
    double liouvillian{0.0};   // max_t |T L(t+T/2) T - L(t)|
    double steady_state{0.0};  // max_t |T rho(t+T/2) + rho(t)|
    double principal{0.0};     // max |T Pi(t+T/2, t'+T/2) T - Pi(t, t')|
    double correlation{0.0};   // max |g(t, t') - conj(g(t+T/2, t'+T/2))|
    double max() const noexcept;
};

ParityChain parity_chain(const model::SystemParams& params, const model::Modulation& mod,
                         const SteadyState& steady, int n_pairs = 8);

// Invariant checks used by tests and the acceptance suite.
double trace_defect(const SteadyState& steady);      // max |pi_+ + pi_- - 1|
double hermiticity_defect(const SteadyState& steady); // max |sigma_- - conj(sigma_+)|

} // namespace fluoro::exact
