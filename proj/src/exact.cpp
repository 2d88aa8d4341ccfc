#include "fluoro/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fluoro/errors.hpp"

namespace fluoro::exact {

using model::Modulation;
using model::SystemParams;

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(const Mat4& m) { return m.allFinite(); }

// One RK4 step of dPi/dt = L(t) Pi.
Mat4 rk4_step(const SystemParams& params, const Modulation& mod, double t, double h,
              const Mat4& pi) {
    const Mat4 l0 = liouvillian(params, mod, t);
    const Mat4 lh = liouvillian(params, mod, t + 0.5 * h);
    const Mat4 l1 = liouvillian(params, mod, t + h);
    const Mat4 k1 = l0 * pi;
    const Mat4 k2 = lh * (pi + 0.5 * h * k1);
    const Mat4 k3 = lh * (pi + 0.5 * h * k2);
    const Mat4 k4 = l1 * (pi + h * k3);
    return pi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Expr>
double max_abs(const Eigen::MatrixBase<Expr>& m) {
    return m.cwiseAbs().maxCoeff();
}

Vec4 regression_start(const Vec4& rho) { return Vec4(rho(2), 0.0, 0.0, rho(1)); }

void check_divisible(int steps, int samples) {
    if (samples < 2 || steps < samples || steps % samples != 0) {
        throw ValidationError("steps_per_period must be a positive multiple of the sample count");
    }
}

} // namespace

Mat4 liouvillian(const SystemParams& params, const Modulation& mod, double t) {
    const double d = params.detuning + mod(t);
    const double k = params.kappa;
    const cplx a = 0.5 * I * params.omega_x;
    Mat4 l;
    l << I * d - 0.5 * k, 0.0, -a, a,
         0.0, -I * d - 0.5 * k, a, -a,
         -a, a, -k, 0.0,
         a, -a, k, 0.0;
    return l;
}

Mat4 parity_matrix() {
    Mat4 t = Mat4::Zero();
    t(0, 1) = 1.0;
    t(1, 0) = 1.0;
    t(2, 2) = -1.0;
    t(3, 3) = -1.0;
    return t;
}

Mat4 principal_matrix(const SystemParams& params, const Modulation& mod, double t0, double t1,
                      int steps) {
    if (t1 < t0) throw ValidationError("principal_matrix requires t1 >= t0");
    if (steps < 1) throw ValidationError("principal_matrix requires steps >= 1");
    Mat4 pi = Mat4::Identity();
    if (t1 == t0) return pi;
    const double h = (t1 - t0) / steps;
    for (int s = 0; s < steps; ++s) pi = rk4_step(params, mod, t0 + s * h, h, pi);
    if (!finite(pi)) throw IntegrationBlowup("non-finite principal matrix");
    return pi;
}

std::vector<Mat4> period_propagators(const SystemParams& params, const Modulation& mod,
                                     double t0, int steps_per_period, int samples) {
    check_divisible(steps_per_period, samples);
    const double h = mod.period() / steps_per_period;
    const int sub = steps_per_period / samples;
    std::vector<Mat4> out;
    out.reserve(static_cast<std::size_t>(samples + 1));
    Mat4 pi = Mat4::Identity();
    out.push_back(pi);
    for (int k = 0; k < samples; ++k) {
        for (int s = 0; s < sub; ++s) pi = rk4_step(params, mod, t0 + (k * sub + s) * h, h, pi);
        out.push_back(pi);
    }
    if (!finite(pi)) throw IntegrationBlowup("non-finite principal matrix");
    return out;
}

double SteadyState::mean_pi_plus() const {
    double s = 0.0;
    for (const auto& r : rho) s += r(2).real();
    return s / static_cast<double>(rho.size());
}

SteadyState steady_state_exact(const SystemParams& params, const Modulation& mod,
                               int steps_per_period, int samples_per_period) {
    params.validate();
    if (samples_per_period % 2 != 0) throw ValidationError("samples per period must be even");
    SteadyState ss;
    ss.period = mod.period();
    ss.steps_per_period = steps_per_period;
    ss.propagators = period_propagators(params, mod, 0.0, steps_per_period, samples_per_period);
    const Mat4& m = ss.monodromy();

    Eigen::ComplexEigenSolver<Mat4> es(m, false);
    const auto& ev = es.eigenvalues();
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(ev(i) - 1.0) < std::abs(ev(best) - 1.0)) best = i;
    ss.eigenvalue = ev(best);
    if (std::abs(ss.eigenvalue - 1.0) > 1e-8) {
        throw MonodromyConsistencyError("no Liouville monodromy eigenvalue within 1e-8 of 1");
    }

    // (M - 1) x = 0 has rank 3 (trace is conserved), so the last row is replaced
    // by the normalization <pi_+> + <pi_-> = 1.
    Mat4 a = m - Mat4::Identity();
    a.row(3) << 0.0, 0.0, 1.0, 1.0;
    Vec4 b(0.0, 0.0, 0.0, 1.0);
    Vec4 x = a.partialPivLu().solve(b);
    if (!x.allFinite() || (m * x - x).cwiseAbs().maxCoeff() > 1e-8) {
        throw MonodromyConsistencyError("steady-state fixed point of the monodromy is ill-defined");
    }
    const cplx sp = 0.5 * (x(0) + std::conj(x(1)));
    x(0) = sp;
    x(1) = std::conj(sp);
    x(2) = x(2).real();
    x(3) = x(3).real();

    const int n = samples_per_period;
    ss.time_grid.resize(static_cast<std::size_t>(n));
    ss.rho.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        ss.time_grid[static_cast<std::size_t>(k)] = ss.period * k / n;
        ss.rho[static_cast<std::size_t>(k)] = ss.propagators[static_cast<std::size_t>(k)] * x;
    }
    return ss;
}

void CorrelationOptions::validate() const {
    if (n_tprime < 1) throw ValidationError("n_tprime must be positive");
    if (samples_per_period % n_tprime != 0) {
        throw ValidationError("tau samples per period must be a multiple of n_tprime");
    }
    if (samples_per_period % 2 != 0) throw ValidationError("tau samples per period must be even");
    check_divisible(steps_per_period, samples_per_period);
    if (!(tau_max > 0.0)) throw ValidationError("tau_max must be positive");
}

CorrelationTrace correlation(const SystemParams& params, const Modulation& mod,
                             const CorrelationOptions& opts, kernels::Exec exec) {
    opts.validate();
    const auto steady =
        steady_state_exact(params, mod, opts.steps_per_period, opts.samples_per_period);
    return correlation(params, mod, steady, opts, exec);
}

CorrelationTrace correlation(const SystemParams& params, const Modulation& mod,
                             const SteadyState& steady, const CorrelationOptions& opts,
                             kernels::Exec exec) {
    opts.validate();
    const int ns = opts.samples_per_period;
    if (static_cast<int>(steady.rho.size()) != ns || steady.steps_per_period != opts.steps_per_period) {
        throw ValidationError("steady state sampling does not match the correlation options");
    }
    const double T = mod.period();
    const double dtau = T / ns;
    const long n_tau = static_cast<long>(std::ceil(opts.tau_max / dtau - 1e-9)) + 1;
    const int nt = opts.n_tprime;
    const int stride = ns / nt;

    // Each start time t'_j = j T / n_tprime owns one row of `per_start`.
    std::vector<std::vector<cplx>> per_start(static_cast<std::size_t>(nt));
    auto run_one = [&](int j) {
        const double t0 = T * j / nt;
        const auto props = period_propagators(params, mod, t0, opts.steps_per_period, ns);
        const Mat4& mono = props.back();
        Vec4 v = regression_start(steady.rho[static_cast<std::size_t>(j * stride)]);
        auto& out = per_start[static_cast<std::size_t>(j)];
        out.resize(static_cast<std::size_t>(n_tau));
        for (long k = 0; k < n_tau; ++k) {
            const long r = k % ns;
            if (k > 0 && r == 0) v = mono * v;
            out[static_cast<std::size_t>(k)] = props[static_cast<std::size_t>(r)].row(0) * v;
        }
    };
    if (exec == kernels::Exec::serial) {
        for (int j = 0; j < nt; ++j) run_one(j);
    } else {
        std::vector<std::string> errors(static_cast<std::size_t>(nt));
#pragma omp parallel for schedule(dynamic, 1)
        for (int j = 0; j < nt; ++j) {
            try {
                run_one(j);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(j)] = e.what();
            }
        }
        for (const auto& e : errors)
            if (!e.empty()) throw IntegrationBlowup(e);
    }

    CorrelationTrace tr;
    tr.dtau = dtau;
    tr.omega_z = mod.fundamental_freq();
    tr.mean_pi_plus = steady.mean_pi_plus();
    tr.tau_grid.resize(static_cast<std::size_t>(n_tau));
    tr.g1.assign(static_cast<std::size_t>(n_tau), 0.0);
    tr.g1_coherent.assign(static_cast<std::size_t>(n_tau), 0.0);
    tr.g1_incoherent.resize(static_cast<std::size_t>(n_tau));
    for (long k = 0; k < n_tau; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        tr.tau_grid[ks] = k * dtau;
        cplx g = 0.0;
        cplx c = 0.0;
        for (int j = 0; j < nt; ++j) {
            g += per_start[static_cast<std::size_t>(j)][ks];
            const auto a0 = steady.rho[static_cast<std::size_t>(j * stride)](0);
            const auto at = steady.rho[static_cast<std::size_t>((j * stride + k) % ns)](0);
            c += at * std::conj(a0);
        }
        tr.g1[ks] = g / static_cast<double>(nt);
        tr.g1_coherent[ks] = c / static_cast<double>(nt);
        tr.g1_incoherent[ks] = tr.g1[ks] - tr.g1_coherent[ks];
    }

    tr.coherent_l_max = ns / 2 - 1;
    tr.coherent_amplitudes.resize(static_cast<std::size_t>(2 * tr.coherent_l_max + 1));
    for (int l = -tr.coherent_l_max; l <= tr.coherent_l_max; ++l) {
        cplx s = 0.0;
        for (int k = 0; k < ns; ++k) {
            s += steady.rho[static_cast<std::size_t>(k)](0) * std::polar(1.0, -2.0 * kPi * l * k / ns);
        }
        tr.coherent_amplitudes[static_cast<std::size_t>(l + tr.coherent_l_max)] = s / static_cast<double>(ns);
    }

    const double tail = std::abs(tr.g1_incoherent.back());
    if (tail >= opts.window_tolerance * std::abs(tr.g1.front())) {
        throw WindowError("correlation has not decayed at tau_max = " + std::to_string(opts.tau_max) +
                          "; try tau_max >= " + std::to_string(2.0 * opts.tau_max));
    }
    return tr;
}

spectrum::Spectrum exact_spectrum(const CorrelationTrace& trace, const std::vector<double>& grid,
                                  double eta, kernels::Exec exec) {
    spectrum::Spectrum out;
    out.delta_grid = grid;
    out.s_inc = kernels::half_fourier(trace.g1_incoherent, trace.dtau, grid, eta, exec);
    double wmax = 0.0;
    for (const auto& a : trace.coherent_amplitudes) wmax = std::max(wmax, std::norm(a));
    for (int l = -trace.coherent_l_max; l <= trace.coherent_l_max; ++l) {
        const double w = std::norm(trace.coherent_amplitudes[static_cast<std::size_t>(l + trace.coherent_l_max)]);
        if (w > 1e-12 * wmax && w > 0.0) out.coherent_lines.push_back({l * trace.omega_z, kPi * w, l});
    }
    return out;
}

LineDecomposition exact_lines(const SystemParams& params, const Modulation& mod,
                              const SteadyState& steady, int l_max, int samples_per_period) {
    const int ns = samples_per_period;
    const double T = mod.period();
    const double w = mod.fundamental_freq();
    const auto W = period_propagators(params, mod, 0.0, steady.steps_per_period, ns);
    const Mat4& m0 = W.back();
    Eigen::ComplexEigenSolver<Mat4> es(m0);
    const Mat4 R = es.eigenvectors();
    const Mat4 Rinv = R.inverse();
    const auto& mu = es.eigenvalues();

    LineDecomposition out;
    int unit = 0;
    for (int k = 0; k < 4; ++k) {
        out.exponents[static_cast<std::size_t>(k)] = std::log(mu(k)) / T;
        if (std::abs(mu(k) - 1.0) < std::abs(mu(unit) - 1.0)) unit = k;
    }

    // Regression start vectors on this grid: steady state propagated from t = 0.
    const Vec4 rho0 = steady.rho.front();
    std::vector<Vec4> g0(static_cast<std::size_t>(ns));
    std::vector<Mat4> winv(static_cast<std::size_t>(ns));
    for (int j = 0; j < ns; ++j) {
        g0[static_cast<std::size_t>(j)] = regression_start(W[static_cast<std::size_t>(j)] * rho0);
        winv[static_cast<std::size_t>(j)] = W[static_cast<std::size_t>(j)].inverse();
    }

    const int lm = std::min(l_max, ns / 2 - 1);
    for (int k = 0; k < 4; ++k) {
        const cplx lam = out.exponents[static_cast<std::size_t>(k)];
        std::vector<cplx> p(static_cast<std::size_t>(ns));
        std::vector<cplx> q(static_cast<std::size_t>(ns));
        for (int j = 0; j < ns; ++j) {
            const double t = T * j / ns;
            const auto js = static_cast<std::size_t>(j);
            p[js] = std::exp(-lam * t) * (W[js].row(0) * R.col(k))(0);
            q[js] = std::exp(lam * t) * (Rinv.row(k) * winv[js] * g0[js])(0);
        }
        for (int l = -lm; l <= lm; ++l) {
            cplx pl = 0.0;
            cplx ql = 0.0;
            for (int j = 0; j < ns; ++j) {
                const cplx e = std::polar(1.0, 2.0 * kPi * l * j / ns);
                pl += p[static_cast<std::size_t>(j)] * std::conj(e);
                ql += q[static_cast<std::size_t>(j)] * e;
            }
            const cplx c = pl * ql / (static_cast<double>(ns) * ns);
            out.total_weight += c.real();
            const double pos = l * w + lam.imag();
            if (k == unit) {
                out.coherent_lines.push_back({pos, kPi * c.real(), l});
                continue;
            }
            spectrum::Family fam = spectrum::Family::central;
            if (std::abs(lam.imag()) > 1e-9 * w) {
                fam = lam.imag() > 0.0 ? spectrum::Family::sideband_plus : spectrum::Family::sideband_minus;
            }
            out.lines.push_back({pos, c.real(), -lam.real(), fam, l, c.imag()});
        }
    }
    return out;
}

double ParityChain::max() const noexcept {
    return std::max({liouvillian, steady_state, principal, correlation});
}

ParityChain parity_chain(const SystemParams& params, const Modulation& mod,
                         const SteadyState& steady, int n_pairs) {
    ParityChain pc;
    const Mat4 Tm = parity_matrix();
    const double T = mod.period();
    const int ns = static_cast<int>(steady.rho.size());
    for (int k = 0; k < ns; ++k) {
        const double t = steady.time_grid[static_cast<std::size_t>(k)];
        pc.liouvillian = std::max(pc.liouvillian,
                                  max_abs(Tm * liouvillian(params, mod, t + 0.5 * T) * Tm -
                                          liouvillian(params, mod, t)));
        const Vec4& half = steady.rho[static_cast<std::size_t>((k + ns / 2) % ns)];
        pc.steady_state = std::max(pc.steady_state, max_abs(Tm * half + steady.rho[static_cast<std::size_t>(k)]));
    }
    // Start times on the steady grid, elapsed times spread over up to 1.5 periods.
    const int steps = steady.steps_per_period;
    for (int i = 0; i < n_pairs; ++i) {
        const int j = (i * 7) % ns;
        const double tp = steady.time_grid[static_cast<std::size_t>(j)];
        const double tau = T * (0.1 + 1.4 * (i + 0.5) / n_pairs);
        const int n = std::max(1, static_cast<int>(std::lround(tau / T * steps)));
        const Mat4 a = principal_matrix(params, mod, tp, tp + tau, n);
        const Mat4 b = principal_matrix(params, mod, tp + 0.5 * T, tp + 0.5 * T + tau, n);
        pc.principal = std::max(pc.principal, max_abs(Tm * b * Tm - a));
        const cplx g = (a * regression_start(steady.rho[static_cast<std::size_t>(j)]))(0);
        const cplx gh =
            (b * regression_start(steady.rho[static_cast<std::size_t>((j + ns / 2) % ns)]))(0);
        pc.correlation = std::max(pc.correlation, std::abs(g - std::conj(gh)));
    }
    return pc;
}

double trace_defect(const SteadyState& steady) {
    double d = 0.0;
    for (const auto& r : steady.rho) d = std::max(d, std::abs(r(2) + r(3) - 1.0));
    for (const auto& p : steady.propagators) {
        // Row (0, 0, 1, 1) is a left fixed vector of every propagator.
        const Eigen::RowVector4cd tr = p.row(2) + p.row(3);
        d = std::max(d, (tr - Eigen::RowVector4cd(0.0, 0.0, 1.0, 1.0)).cwiseAbs().maxCoeff());
    }
    return d;
}

double hermiticity_defect(const SteadyState& steady) {
    double d = 0.0;
    for (const auto& r : steady.rho) d = std::max(d, std::abs(r(1) - std::conj(r(0))));
    return d;
}

} // namespace fluoro::exact
