#include "fluoro/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluoro/errors.hpp"
#include "fluoro/linalg.hpp"

namespace fluoro::floquet {

using model::Modulation;
using model::SystemParams;

std::string to_string(Backend b) {
    return b == Backend::monodromy ? "monodromy" : "sambe";
}

namespace {

constexpr double kPi = std::numbers::pi;

Mat2 generator(const SystemParams& params, const Modulation& mod, double t) {
    return -I * model::effective_hamiltonian(params, mod, t);
}

// Propagates U from t = 0 over one period with `substeps` RK4 steps between
// consecutive samples; records U at each of the `samples` grid points and
// returns U(T, 0).
Mat2 propagate(const SystemParams& params, const Modulation& mod, int samples, int substeps,
               std::vector<Mat2>* record) {
    const double T = mod.period();
    const int steps = samples * substeps;
    const double h = T / steps;
    Mat2 u = Mat2::Identity();
    if (record) record->assign(static_cast<std::size_t>(samples), Mat2::Zero());
    for (int i = 0; i < steps; ++i) {
        if (record && i % substeps == 0) (*record)[static_cast<std::size_t>(i / substeps)] = u;
        const double t = h * i;
        const Mat2 k1 = generator(params, mod, t) * u;
        const Mat2 mid = generator(params, mod, t + 0.5 * h);
        const Mat2 k2 = mid * (u + 0.5 * h * k1);
        const Mat2 k3 = mid * (u + 0.5 * h * k2);
        const Mat2 k4 = generator(params, mod, t + h) * (u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!u.allFinite()) {
        throw IntegrationBlowup("monodromy: non-finite propagator");
    }
    return u;
}

double fold(double eps, double omega) {
    double q = std::fmod(eps + 0.5 * omega, omega);
    if (q < 0.0) q += omega;
    return q - 0.5 * omega;
}

// Unit phase that makes the first non-negligible component of v real positive.
cplx gauge_factor(const Vec2& v) {
    const double n = v.norm();
    for (int k = 0; k < 2; ++k) {
        if (std::abs(v(k)) > 1e-8 * n) return std::abs(v(k)) / v(k);
    }
    return 1.0;
}

void check_splitting(double splitting, double omega) {
    const double gap = std::min(splitting, omega - splitting);
    if (gap < 1e-12 * omega) {
        throw DegeneracyError("degenerate quasienergies (splitting " + std::to_string(splitting) +
                              "); perturb the drive or detuning");
    }
}

} // namespace

double unitarity_defect(const Mat2& u) {
    return (u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff();
}

Mat2 monodromy(const SystemParams& params, const Modulation& mod, int steps_per_period) {
    params.validate();
    if (steps_per_period < 256) throw ValidationError("steps_per_period must be >= 256");
    return propagate(params, mod, 1, steps_per_period, nullptr);
}

FloquetSolution solve_floquet(const SystemParams& params, const Modulation& mod,
                              int steps_per_period, int n_time_samples) {
    params.validate();
    if (steps_per_period < 256) throw ValidationError("steps_per_period must be >= 256");
    if (n_time_samples < 128 || (n_time_samples & (n_time_samples - 1)) != 0) {
        throw ValidationError("n_time_samples must be a power of two >= 128");
    }
    const int substeps = (steps_per_period + n_time_samples - 1) / n_time_samples;
    std::vector<Mat2> u_t;
    const Mat2 u = propagate(params, mod, n_time_samples, substeps, &u_t);

    const double T = mod.period();
    const double omega = mod.fundamental_freq();

    // Analytic eigendecomposition of the 2x2 monodromy matrix. The second
    // eigenvector is the orthogonal complement (U is unitary up to integration error).
    const cplx tr = u.trace();
    const cplx det = u.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx lam1 = 0.5 * (tr + disc);
    Vec2 va(u(0, 1), lam1 - u(0, 0));
    Vec2 vb(lam1 - u(1, 1), u(1, 0));
    Vec2 v1 = va.norm() >= vb.norm() ? va : vb;
    if (v1.norm() < 1e-300) v1 = Vec2(1.0, 0.0);  // U proportional to identity
    v1.normalize();
    Vec2 v2(-std::conj(v1(1)), std::conj(v1(0)));
    const cplx lam2 = v2.adjoint() * u * v2;

    auto quasienergy = [&](cplx lam) { return fold(-std::arg(lam) / T, omega); };
    double e1 = quasienergy(lam1);
    double e2 = quasienergy(lam2);
    if (e2 > e1) {
        std::swap(e1, e2);
        std::swap(v1, v2);
    }

    FloquetSolution sol;
    sol.quasienergy_plus = e1;
    sol.quasienergy_minus = e2;
    sol.splitting = e1 - e2;
    sol.omega_z = omega;
    sol.period = T;
    sol.backend = Backend::monodromy;
    sol.unitarity_defect = unitarity_defect(u);
    sol.fourier_cutoff = n_time_samples / 2 - 1;
    check_splitting(sol.splitting, omega);

    const std::array<Vec2, 2> psi0{gauge_factor(v1) * v1, gauge_factor(v2) * v2};
    const std::array<double, 2> eps{e1, e2};
    sol.time_grid.resize(static_cast<std::size_t>(n_time_samples));
    for (int a = 0; a < 2; ++a) sol.modes[a].resize(static_cast<std::size_t>(n_time_samples));
    for (int j = 0; j < n_time_samples; ++j) {
        const double t = T * j / n_time_samples;
        sol.time_grid[static_cast<std::size_t>(j)] = t;
        for (int a = 0; a < 2; ++a) {
            sol.modes[a][static_cast<std::size_t>(j)] =
                std::polar(1.0, eps[a] * t) * (u_t[static_cast<std::size_t>(j)] * psi0[a]);
        }
    }
    return sol;
}

int sambe_cutoff_floor(const Modulation& mod) {
    return static_cast<int>(std::ceil(2.0 * mod.amplitude_bound() / mod.fundamental_freq()));
}

Eigen::MatrixXcd sambe_hamiltonian(const SystemParams& params, const Modulation& mod,
                                   int cutoff) {
    const int blocks = 2 * cutoff + 1;
    const double omega = mod.fundamental_freq();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * blocks, 2 * blocks);
    auto idx = [cutoff](int n, int s) { return 2 * (n + cutoff) + s; };
    for (int n = -cutoff; n <= cutoff; ++n) {
        h(idx(n, 0), idx(n, 0)) = 0.5 * params.detuning + n * omega;
        h(idx(n, 1), idx(n, 1)) = -0.5 * params.detuning + n * omega;
        h(idx(n, 0), idx(n, 1)) = 0.5 * params.omega_x;
        h(idx(n, 1), idx(n, 0)) = 0.5 * params.omega_x;
    }
    // (A/2) cos(p w t + phi) sigma_z = (A/4) e^{i phi} e^{i p w t} sigma_z + h.c.
    for (const auto& harm : mod.harmonics()) {
        const cplx c = 0.25 * harm.amplitude * std::polar(1.0, harm.phase);
        for (int n = -cutoff; n <= cutoff; ++n) {
            const int m = n + harm.multiple;
            if (m > cutoff) continue;
            h(idx(m, 0), idx(n, 0)) += c;
            h(idx(m, 1), idx(n, 1)) -= c;
            h(idx(n, 0), idx(m, 0)) += std::conj(c);
            h(idx(n, 1), idx(m, 1)) -= std::conj(c);
        }
    }
    return h;
}

namespace {

struct SambeModes {
    std::array<double, 2> eps{};
    std::array<Eigen::VectorXcd, 2> coeffs;
};

SambeModes sambe_diagonalize(const SystemParams& params, const Modulation& mod, int cutoff) {
    const double omega = mod.fundamental_freq();
    const auto eig = linalg::jacobi_eigh(sambe_hamiltonian(params, mod, cutoff));
    const Eigen::Index dim = eig.values.size();

    struct Candidate {
        Eigen::Index k;
        double centre;
    };
    std::vector<Candidate> in_zone;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double e = eig.values(k);
        if (e < -0.5 * omega || e >= 0.5 * omega) continue;
        double centre = 0.0;
        for (int n = -cutoff; n <= cutoff; ++n) {
            const auto i = 2 * (n + cutoff);
            centre += n * (std::norm(eig.vectors(i, k)) + std::norm(eig.vectors(i + 1, k)));
        }
        in_zone.push_back({k, std::abs(centre)});
    }
    std::sort(in_zone.begin(), in_zone.end(),
              [](const Candidate& a, const Candidate& b) { return a.centre < b.centre; });
    if (in_zone.size() < 2) {
        throw CutoffError("sambe: fewer than two states in the first Brillouin zone");
    }

    SambeModes out;
    std::array<Eigen::Index, 2> pick{in_zone[0].k, in_zone[1].k};
    if (eig.values(pick[1]) > eig.values(pick[0])) std::swap(pick[0], pick[1]);
    for (int a = 0; a < 2; ++a) {
        out.eps[a] = eig.values(pick[a]);
        out.coeffs[a] = eig.vectors.col(pick[a]);
    }
    return out;
}

} // namespace

FloquetSolution solve_floquet_sambe(const SystemParams& params, const Modulation& mod,
                                    int harmonic_cutoff, int n_time_samples) {
    params.validate();
    if (harmonic_cutoff < sambe_cutoff_floor(mod)) {
        throw ValidationError("sambe harmonic cutoff below 2 * sum|Omega_k| / omega_z");
    }
    if (n_time_samples < 128 || (n_time_samples & (n_time_samples - 1)) != 0) {
        throw ValidationError("n_time_samples must be a power of two >= 128");
    }
    const double omega = mod.fundamental_freq();
    const SambeModes base = sambe_diagonalize(params, mod, harmonic_cutoff);
    const SambeModes wider = sambe_diagonalize(params, mod, harmonic_cutoff + 4);
    for (int a = 0; a < 2; ++a) {
        if (std::abs(base.eps[a] - wider.eps[a]) > 1e-8 * omega) {
            throw CutoffError("sambe: quasienergies not converged at cutoff " +
                              std::to_string(harmonic_cutoff));
        }
    }

    FloquetSolution sol;
    sol.quasienergy_plus = base.eps[0];
    sol.quasienergy_minus = base.eps[1];
    sol.splitting = base.eps[0] - base.eps[1];
    sol.omega_z = omega;
    sol.period = mod.period();
    sol.backend = Backend::sambe;
    sol.fourier_cutoff = std::min(harmonic_cutoff, n_time_samples / 2 - 1);
    check_splitting(sol.splitting, omega);

    const int n_t = n_time_samples;
    sol.time_grid.resize(static_cast<std::size_t>(n_t));
    for (int a = 0; a < 2; ++a) sol.modes[a].assign(static_cast<std::size_t>(n_t), Vec2::Zero());
    for (int j = 0; j < n_t; ++j) {
        const double t = sol.period * j / n_t;
        sol.time_grid[static_cast<std::size_t>(j)] = t;
        for (int a = 0; a < 2; ++a) {
            Vec2 v = Vec2::Zero();
            for (int n = -harmonic_cutoff; n <= harmonic_cutoff; ++n) {
                const auto i = 2 * (n + harmonic_cutoff);
                const cplx e = std::polar(1.0, 2.0 * kPi * static_cast<double>(n) * j / n_t);
                v(0) += base.coeffs[a](i) * e;
                v(1) += base.coeffs[a](i + 1) * e;
            }
            sol.modes[a][static_cast<std::size_t>(j)] = v;
        }
    }
    // Gauge: fix the phase from t = 0 and apply it along the whole trajectory.
    for (int a = 0; a < 2; ++a) {
        const cplx ph = gauge_factor(sol.modes[a][0]);
        for (auto& v : sol.modes[a]) v *= ph;
    }
    return sol;
}

cplx mode_overlap(const FloquetSolution& a, int alpha, const FloquetSolution& b, int beta) {
    if (a.samples() != b.samples()) throw ValidationError("mode_overlap: grid mismatch");
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.samples(); ++j) {
        s += a.modes[alpha][j].dot(b.modes[beta][j]);
    }
    return s / static_cast<double>(a.samples());
}

} // namespace fluoro::floquet
