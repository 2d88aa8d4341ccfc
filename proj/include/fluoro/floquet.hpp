// floquet.hpp — quasienergies and periodic Floquet modes of the rotating-frame
// Hamiltonian. Two independent backends:
//   * monodromy: RK4 propagation over one period, analytic 2x2 eigendecomposition
//   * sambe:     truncated extended-space matrix, in-house Jacobi diagonalization
//
// Conventions shared by both backends:
//   - each quasienergy is folded into [-omega_z/2, omega_z/2); alpha = + is the
//     larger one, so splitting = eps_+ - eps_- lies in [0, omega_z)
//   - gauge: the first non-negligible spinor component of each mode at t = 0 is
//     real and positive

#pragma once

#include <array>
#include <string>
#include <vector>

#include "fluoro/model.hpp"
#include "fluoro/types.hpp"

namespace fluoro::floquet {

enum class Backend { monodromy, sambe };

std::string to_string(Backend b);

inline constexpr int kPlus = 0;
inline constexpr int kMinus = 1;

struct FloquetSolution {
    double quasienergy_plus{0.0};
    double quasienergy_minus{0.0};
    double splitting{0.0};
    double omega_z{0.0};
    double period{0.0};
    std::vector<double> time_grid;          // N_t points, uniform on [0, T)
    std::array<std::vector<Vec2>, 2> modes; // modes[alpha][j] = |u_alpha(t_j)>
    int fourier_cutoff{0};
    Backend backend{Backend::monodromy};
    double unitarity_defect{0.0};           // monodromy backend only

    std::size_t samples() const noexcept { return time_grid.size(); }
};

inline constexpr int kDefaultStepsPerPeriod = 4096;
inline constexpr int kDefaultTimeSamples = 1024;

// Time-ordered propagator U(T, 0) from fixed-step RK4 without renormalization.
Mat2 monodromy(const model::SystemParams& params, const model::Modulation& mod,
               int steps_per_period = kDefaultStepsPerPeriod);

// max_ij |(U^dagger U - 1)_ij|
double unitarity_defect(const Mat2& u);

FloquetSolution solve_floquet(const model::SystemParams& params, const model::Modulation& mod,
                              int steps_per_period = kDefaultStepsPerPeriod,
                              int n_time_samples = kDefaultTimeSamples);

// Smallest harmonic cutoff accepted by solve_floquet_sambe.
int sambe_cutoff_floor(const model::Modulation& mod);

// Extended-space Hamiltonian on harmonics |n| <= cutoff, basis index 2 (n + N) + s
// with s = 0 (up), 1 (down).
Eigen::MatrixXcd sambe_hamiltonian(const model::SystemParams& params,
                                   const model::Modulation& mod, int cutoff);

FloquetSolution solve_floquet_sambe(const model::SystemParams& params,
                                    const model::Modulation& mod, int harmonic_cutoff,
                                    int n_time_samples = kDefaultTimeSamples);

// (1/T) int <u_a(t)|u_b(t)> dt on the shared grid. Grids must match.
cplx mode_overlap(const FloquetSolution& a, int alpha, const FloquetSolution& b, int beta);

} // namespace fluoro::floquet
