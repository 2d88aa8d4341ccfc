#include "fluoro/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluoro/errors.hpp"
#include "fluoro/vanvleck.hpp"

namespace fluoro::elements {

namespace {

constexpr int kStates = 2;

double parity_sign(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

cplx sigma_plus(const Vec2& a, const Vec2& b) { return std::conj(a(0)) * b(1); }
cplx sigma_minus(const Vec2& a, const Vec2& b) { return std::conj(a(1)) * b(0); }

} // namespace

cplx TransitionElements::plus(int a, int b, int l) const noexcept {
    if (l < -l_max || l > l_max) return 0.0;
    return x_plus[a][b][static_cast<std::size_t>(l + l_max)];
}

cplx TransitionElements::minus(int a, int b, int l) const noexcept {
    if (l < -l_max || l > l_max || !has_minus()) return 0.0;
    return x_minus[a][b][static_cast<std::size_t>(l + l_max)];
}

double TransitionElements::parseval() const noexcept {
    double s = 0.0;
    for (const auto& row : x_plus)
        for (const auto& v : row)
            for (const auto& x : v) s += std::norm(x);
    return s;
}

TransitionElements transition_elements(const floquet::FloquetSolution& sol, int l_max) {
    const int n = static_cast<int>(sol.samples());
    if (l_max < 2) throw ValidationError("l_max must be >= 2");
    if (l_max > sol.fourier_cutoff) {
        throw ValidationError("l_max exceeds the Floquet solution's Fourier cutoff");
    }

    std::vector<cplx> twiddle(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
    }

    TransitionElements out;
    out.l_max = l_max;
    out.n_samples = sol.samples();
    out.backend = floquet::to_string(sol.backend);

    double total_energy = 0.0;
    double kept_energy = 0.0;
    std::vector<cplx> gp(static_cast<std::size_t>(n));
    std::vector<cplx> gm(static_cast<std::size_t>(n));
    for (int a = 0; a < kStates; ++a) {
        for (int b = 0; b < kStates; ++b) {
            for (int j = 0; j < n; ++j) {
                const auto& ua = sol.modes[a][static_cast<std::size_t>(j)];
                const auto& ub = sol.modes[b][static_cast<std::size_t>(j)];
                gp[static_cast<std::size_t>(j)] = sigma_plus(ua, ub);
                gm[static_cast<std::size_t>(j)] = sigma_minus(ua, ub);
                total_energy += std::norm(gp[static_cast<std::size_t>(j)]) / n;
            }
            auto& xp = out.x_plus[a][b];
            auto& xm = out.x_minus[a][b];
            xp.assign(static_cast<std::size_t>(2 * l_max + 1), 0.0);
            xm.assign(static_cast<std::size_t>(2 * l_max + 1), 0.0);
            for (int l = -l_max; l <= l_max; ++l) {
                cplx sp = 0.0;
                cplx sm = 0.0;
                const int step = ((l % n) + n) % n;
                int idx = 0;
                for (int j = 0; j < n; ++j) {
                    sp += gp[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>(idx)];
                    sm += gm[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>(idx)];
                    idx += step;
                    if (idx >= n) idx -= n;
                }
                xp[static_cast<std::size_t>(l + l_max)] = sp / static_cast<double>(n);
                xm[static_cast<std::size_t>(l + l_max)] = sm / static_cast<double>(n);
                if (std::abs(l) <= l_max - 2) kept_energy += std::norm(sp / static_cast<double>(n));
            }
        }
    }
    const double tail = std::max(0.0, total_energy - kept_energy);
    if (total_energy > 0.0 && tail / total_energy > 1e-6) {
        throw CutoffError("transition elements: " + std::to_string(tail / total_energy) +
                          " of the spectral energy lies beyond |l| > l_max - 2; raise l_max");
    }
    return out;
}

double conjugation_residual(const TransitionElements& elems) {
    if (!elems.has_minus()) throw ValidationError("conjugation_residual: no sigma_- elements");
    double r = 0.0;
    for (int a = 0; a < kStates; ++a)
        for (int b = 0; b < kStates; ++b)
            for (int l = -elems.l_max; l <= elems.l_max; ++l)
                r = std::max(r, std::abs(elems.plus(a, b, l) - std::conj(elems.minus(b, a, -l))));
    return r;
}

ParityReport parity_eigenvalues(const floquet::FloquetSolution& sol,
                                const model::ParityClass& parity) {
    const std::size_t n = sol.samples();
    if (n % 2 != 0) throw ValidationError("parity analysis needs an even number of samples");
    const std::size_t half = n / 2;

    Mat2 sx;
    sx << 0.0, 1.0, 1.0, 0.0;

    ParityReport report;
    std::array<cplx, 2> lambda{};
    double residual = 0.0;
    for (int a = 0; a < kStates; ++a) {
        cplx mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            mean += sol.modes[a][j].dot(sx * sol.modes[a][(j + half) % n]);
        }
        mean /= static_cast<double>(n);
        lambda[a] = mean;
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 d = sx * sol.modes[a][(j + half) % n] - mean * sol.modes[a][j];
            residual = std::max(residual, d.norm());
        }
    }
    report.lambda_residual = residual;
    if (parity.has_generalized_parity && residual < kLambdaSnapTolerance) {
        report.lambda_plus = lambda[0].real() >= 0.0 ? 1.0 : -1.0;
        report.lambda_minus = lambda[1].real() >= 0.0 ? 1.0 : -1.0;
    }
    return report;
}

ParityReport verify_identities(const TransitionElements& elems, ParityReport report,
                               const model::Modulation& mod,
                               const model::SystemParams& params) {
    const int lm = elems.l_max;
    for (int a = 0; a < kStates; ++a)
        for (int b = 0; b < kStates; ++b)
            for (int l = -lm; l <= lm; ++l)
                if (!std::isfinite(std::abs(elems.plus(a, b, l))))
                    throw ValidationError("verify_identities: non-finite transition element");

    double r_mag = 0.0;
    for (int a = 0; a < kStates; ++a)
        for (int b = 0; b < kStates; ++b)
            for (int l = -lm; l <= lm; ++l)
                r_mag = std::max(r_mag, std::abs(std::abs(elems.plus(a, b, l)) -
                                             std::abs(elems.plus(b, a, -l))));
    report.magnitude_identity_residual = r_mag;

    report.mirror_identity_residual.reset();
    if (report.lambda_plus && report.lambda_minus) {
        const std::array<double, 2> lam{*report.lambda_plus, *report.lambda_minus};
        double r_mirror = 0.0;
        for (int a = 0; a < kStates; ++a)
            for (int b = 0; b < kStates; ++b)
                for (int l = -lm; l <= lm; ++l)
                    r_mirror = std::max(r_mirror, std::abs(elems.plus(a, b, l) -
                                                 parity_sign(l) * lam[a] * lam[b] *
                                                     std::conj(elems.plus(b, a, -l))));
        report.mirror_identity_residual = r_mirror;
    }

    report.evenp_residuals.reset();
    report.evenp_gauge_phase.reset();
    report.theta0.reset();
    const auto parity = model::classify_parity(params, mod);
    if (parity.reflection_applicable()) {
        const double theta0 = vanvleck::theta0(params, mod);
        report.theta0 = theta0;
        double r25 = 0.0;
        for (int l = -lm; l <= lm; ++l)
            r25 = std::max(r25, std::abs(elems.plus(0, 0, -l) - parity_sign(l) * elems.plus(0, 0, l)));

        // a_l = x_{-+,-l}, b_l = (-1)^l e^{-2 i theta0} x_{+-,l}; identity: a_l = -gamma b_l
        const cplx rot = std::polar(1.0, -2.0 * theta0);
        cplx gamma = 1.0;
        if (elems.backend != "vanvleck") {
            cplx overlap = 0.0;
            for (int l = -lm; l <= lm; ++l) {
                const cplx b = parity_sign(l) * rot * elems.plus(0, 1, l);
                overlap += std::conj(b) * elems.plus(1, 0, -l);
            }
            if (std::abs(overlap) > 0.0) gamma = -overlap / std::abs(overlap);
            report.evenp_gauge_phase = std::arg(gamma);
        }
        double r26 = 0.0;
        for (int l = -lm; l <= lm; ++l) {
            const cplx b = parity_sign(l) * rot * elems.plus(0, 1, l);
            r26 = std::max(r26, std::abs(elems.plus(1, 0, -l) + gamma * b));
        }
        report.evenp_residuals = std::array<double, 2>{r25, r26};
    }
    return report;
}

} // namespace fluoro::elements
