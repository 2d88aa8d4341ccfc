#include "fluoro/vanvleck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluoro/errors.hpp"

namespace fluoro::vanvleck {

using model::Modulation;
using model::SystemParams;

namespace {

constexpr double kPi = std::numbers::pi;

// Padding beyond the largest index any consumer touches; the Bessel factors
// are below 1e-16 well before this for the arguments used in practice.
constexpr int kAmplitudePadding = 48;

Harmonics make_table(int l_max) {
    Harmonics h;
    h.l_max = l_max;
    h.values.assign(static_cast<std::size_t>(2 * l_max + 1), 0.0);
    return h;
}

void set(Harmonics& h, int l, cplx v) { h.values[static_cast<std::size_t>(l + h.l_max)] = v; }

} // namespace

double bessel_j(int n, double x) {
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? sign : 0.0;
    return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

bool has_bessel_form(const Modulation& mod) {
    const auto& h = mod.harmonics();
    if (h.size() <= 1) return true;
    if (h.size() == 2) return h[0].multiple == 1 || h[1].multiple == 1;
    return false;
}

double bessel_phase(const Modulation& mod) {
    double theta = 0.0;
    for (const auto& h : mod.harmonics()) {
        theta += h.amplitude / (h.multiple * mod.fundamental_freq()) * std::sin(h.phase);
    }
    return theta;
}

Harmonics fourier_amplitudes_quadrature(const Modulation& mod, int l_max, int samples) {
    Harmonics out = make_table(l_max);
    const double T = mod.period();
    std::vector<cplx> e(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        e[static_cast<std::size_t>(j)] = std::polar(1.0, mod.phase_integral(T * j / samples));
    }
    for (int l = -l_max; l <= l_max; ++l) {
        cplx s = 0.0;
        for (int j = 0; j < samples; ++j) {
            s += e[static_cast<std::size_t>(j)] *
                 std::polar(1.0, -2.0 * kPi * static_cast<double>(l) * j / samples);
        }
        set(out, l, s / static_cast<double>(samples));
    }
    return out;
}

Harmonics fourier_amplitudes(const SystemParams& params, const Modulation& mod, int l_max) {
    (void)params;
    if (!has_bessel_form(mod)) return fourier_amplitudes_quadrature(mod, l_max);

    Harmonics out = make_table(l_max);
    const double w = mod.fundamental_freq();
    const auto& hs = mod.harmonics();
    const cplx global = std::polar(1.0, -bessel_phase(mod));
    if (hs.empty()) {
        set(out, 0, 1.0);
        return out;
    }
    if (hs.size() == 1) {
        // exp(i a sin(p w t + phi)) = sum_n J_n(a) e^{i n phi} e^{i n p w t}
        const auto& h = hs[0];
        const double a = h.amplitude / (h.multiple * w);
        for (int l = -l_max; l <= l_max; ++l) {
            if (l % h.multiple != 0) continue;
            const int n = l / h.multiple;
            set(out, l, global * bessel_j(n, a) * std::polar(1.0, n * h.phase));
        }
        return out;
    }
    const auto& first = hs[0].multiple == 1 ? hs[0] : hs[1];
    const auto& second = hs[0].multiple == 1 ? hs[1] : hs[0];
    const int p = second.multiple;
    const double a = first.amplitude / w;
    const double b = second.amplitude / (p * w);
    // Truncate the k sum once J_k(b) is negligible; it decays superexponentially for |k| > |b|.
    int k_max = 0;
    while (k_max < 200 && (k_max <= std::abs(b) + 2 || std::abs(bessel_j(k_max, b)) > 1e-17)) {
        ++k_max;
    }
    for (int l = -l_max; l <= l_max; ++l) {
        cplx s = 0.0;
        for (int k = -k_max; k <= k_max; ++k) {
            const int n = l - k * p;
            s += bessel_j(k, b) * bessel_j(n, a) * std::polar(1.0, k * second.phase + n * first.phase);
        }
        set(out, l, global * s);
    }
    return out;
}

double theta0(const SystemParams& params, const Modulation& mod) {
    return -std::arg(fourier_amplitudes(params, mod, 0)(0));
}

VanVleckSolution vanvleck_solution(const SystemParams& params, const Modulation& mod,
                                   int j_max) {
    params.validate();
    if (j_max < 1) throw ValidationError("j_max must be >= 1");

    VanVleckSolution vv;
    const double w = mod.fundamental_freq();
    const double delta = params.detuning;
    vv.omega_z = w;
    vv.omega_x = params.omega_x;
    vv.detuning = delta;
    vv.j_max = j_max;
    vv.m = static_cast<int>(std::lround(delta / w));
    const int m = vv.m;
    if (std::abs(delta / w - m) > 0.4) {
        vv.warnings.push_back("detuning is close to a half-integer multiple of omega_z; "
                              "the nearest-integer block choice m is ambiguous");
    }

    const int lf = 2 * j_max + std::abs(m) + kAmplitudePadding;
    vv.F = fourier_amplitudes(params, mod, lf);
    vv.Theta = bessel_phase(mod);
    vv.theta0 = -std::arg(vv.F(0));

    double tail = 0.0;
    for (int l = -lf; l <= lf; ++l)
        if (std::abs(l) > lf - 8) tail += std::norm(vv.F(l));
    if (tail > 1e-12) {
        vv.warnings.push_back("Fourier amplitude tail exceeds 1e-12; increase j_max");
    }

    auto f = [&](int l) { return params.omega_x * vv.F(l); };
    auto denom = [&](int j) {
        const double d = delta + j * w;
        if (j != -m && std::abs(d) < 1e-12 * w) {
            throw ResonanceError("delta + j omega_z vanishes for j = " + std::to_string(j));
        }
        return d;
    };

    double shift = 0.0;
    double b_sum = 0.0;
    for (int j = -lf; j <= lf; ++j) {
        if (j == -m) continue;
        const double d = denom(j);
        shift += std::norm(f(j)) / (2.0 * d);
        b_sum += std::norm(f(j)) / (d * d);
    }
    vv.second_order_shift = shift;
    const double detune = delta - m * w + shift;
    const cplx fm = f(-m);
    vv.Omega_m = std::sqrt(detune * detune + std::norm(fm));
    const double ratio = vv.Omega_m > 0.0 ? detune / vv.Omega_m : 0.0;
    const cplx phase = std::abs(fm) > 0.0 ? fm / std::abs(fm) : cplx(1.0);
    vv.u = phase * std::sqrt(0.5 * (1.0 + ratio));
    vv.v = std::sqrt(0.5 * (1.0 - ratio));
    vv.B = 1.0 - b_sum / 8.0;

    vv.P = make_table(j_max);
    vv.Q = make_table(j_max);
    const cplx u = vv.u;
    const double v = vv.v;
    for (int j = -j_max; j <= j_max; ++j) {
        if (j == 0) continue;
        cplx sum_p = 0.0;
        cplx sum_q = 0.0;
        for (int k = -lf; k <= lf; ++k) {
            if (k == -m) continue;
            const double d = denom(k);
            sum_p += f(k + j) * std::conj(f(k)) / d;
            sum_q += std::conj(f(k - j)) * f(k) / d;
        }
        const double jw = j * w;
        const cplx pj = f(j - m) / (2.0 * denom(j - m)) * (v + u * std::conj(fm) / (2.0 * jw)) +
                        u / (4.0 * jw) * sum_p;
        const cplx qj = std::conj(f(-j - m)) / (2.0 * denom(-j - m)) * (u + v * fm / (2.0 * jw)) +
                        v / (4.0 * jw) * sum_q;
        set(vv.P, j, pj);
        set(vv.Q, j, qj);
    }
    double n2 = vv.B * vv.B;
    for (int j = -j_max; j <= j_max; ++j) n2 += std::norm(vv.P(j)) + std::norm(vv.Q(j));
    vv.norm = std::sqrt(n2);

    double margin = std::numeric_limits<double>::infinity();
    double max_f = 0.0;
    for (int l = -lf; l <= lf; ++l) {
        max_f = std::max(max_f, std::abs(f(l)));
        if (l == 0 || std::abs(l) > j_max) continue;
        margin = std::min(margin, std::abs(l * w) - 0.5 * std::abs(f(-l - m)));
    }
    vv.validity_margin = margin;
    if (margin < 2.0 * max_f) {
        vv.warnings.push_back("perturbative validity margin is small compared to max |f_l|");
    }
    return vv;
}

cplx bracket(const VanVleckSolution& vv, int a, int b, int n) {
    const int s = n + vv.m;
    const bool diag = (s == 0);
    const cplx u = vv.u;
    const cplx uc = std::conj(u);
    const double v = vv.v;
    const double B = vv.B;
    const auto& P = vv.P;
    const auto& Q = vv.Q;
    const int J = vv.j_max;
    cplx acc = 0.0;
    if (a == floquet::kPlus && b == floquet::kPlus) {
        if (diag) acc += uc * v * B * B;
        for (int j = -J; j <= J; ++j)
            if (j != 0 && j != s) acc -= std::conj(P(j)) * Q(j - s);
        if (!diag) acc += (uc * Q(-s) - v * std::conj(P(s))) * B;
    } else if (a == floquet::kPlus && b == floquet::kMinus) {
        if (diag) acc -= uc * uc * B * B;
        for (int j = -J; j <= J; ++j)
            if (j != 0 && j != s) acc -= std::conj(P(j)) * std::conj(P(s - j));
        if (!diag) acc += 2.0 * uc * std::conj(P(s)) * B;
    } else if (a == floquet::kMinus && b == floquet::kPlus) {
        if (diag) acc += v * v * B * B;
        for (int j = -J; j <= J; ++j)
            if (j != 0 && j != s) acc += Q(-j) * Q(j - s);
        if (!diag) acc += 2.0 * v * Q(-s) * B;
    } else {
        if (diag) acc -= uc * v * B * B;
        for (int j = -J; j <= J; ++j)
            if (j != 0 && j != s) acc += std::conj(P(j)) * Q(j - s);
        if (!diag) acc += (v * std::conj(P(s)) - uc * Q(-s)) * B;
    }
    return acc / (vv.norm * vv.norm);
}

elements::TransitionElements vanvleck_elements(const VanVleckSolution& vv, int l_max) {
    elements::TransitionElements out;
    out.l_max = l_max;
    out.backend = "vanvleck";
    const int span = 2 * vv.j_max;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            // Brackets vanish unless |n + m| <= 2 j_max.
            std::vector<cplx> br;
            for (int n = -vv.m - span; n <= -vv.m + span; ++n) br.push_back(bracket(vv, a, b, n));
            auto& x = out.x_plus[a][b];
            x.assign(static_cast<std::size_t>(2 * l_max + 1), 0.0);
            for (int l = -l_max; l <= l_max; ++l) {
                cplx s = 0.0;
                int i = 0;
                for (int n = -vv.m - span; n <= -vv.m + span; ++n, ++i) {
                    s += vv.F(n + l) * br[static_cast<std::size_t>(i)];
                }
                x[static_cast<std::size_t>(l + l_max)] = s;
            }
        }
    }
    return out;
}

} // namespace fluoro::vanvleck
