#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fluoro/elements.hpp"
#include "fluoro/errors.hpp"
#include "fluoro/exact.hpp"
#include "fluoro/floquet.hpp"
#include "fluoro/secular.hpp"

using namespace fluoro;
using model::Modulation;
using model::SystemParams;

namespace {
constexpr double kPi = std::numbers::pi;

Modulation fig_mod(int p, double phi) { return Modulation::biharmonic(40.0, 40.0, p, 1.0, phi); }

// exp(L t) for a constant Liouvillian via its eigendecomposition.
Mat4 expm(const Mat4& l, double t) {
    Eigen::ComplexEigenSolver<Mat4> es(l);
    const Mat4 v = es.eigenvectors();
    Vec4 e;
    for (int i = 0; i < 4; ++i) e(i) = std::exp(es.eigenvalues()(i) * t);
    return v * e.asDiagonal() * v.inverse();
}
} // namespace

TEST_CASE("Liouvillian conserves the trace and has the bare-decay spectrum") {
    const SystemParams sp{7.0, 1.3, 1.0};
    const auto mod = fig_mod(2, 0.4);
    for (double t : {0.0, 0.05, 0.11}) {
        const Mat4 l = exact::liouvillian(sp, mod, t);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(l(2, c) + l(3, c)) < 1e-15);
    }
    const Mat4 l0 = exact::liouvillian({0.0, 0.0, 1.0}, Modulation::none(1.0), 0.0);
    Eigen::ComplexEigenSolver<Mat4> es(l0);
    std::vector<double> ev;
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-15);
        ev.push_back(es.eigenvalues()(i).real());
    }
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(-0.5));
    CHECK(ev[2] == doctest::Approx(-0.5));
    CHECK(std::abs(ev[3]) < 1e-15);
}

TEST_CASE("half-period parity of the Liouvillian") {
    const SystemParams sp{10.0, 0.0, 1.0};
    const auto mod = fig_mod(3, 0.3);
    const Mat4 T = exact::parity_matrix();
    for (double t : {0.0, 0.01, 0.07, 0.12}) {
        const Mat4 d = T * exact::liouvillian(sp, mod, t + 0.5 * mod.period()) * T - exact::liouvillian(sp, mod, t);
        CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("principal matrix: identity, flow composition, matrix-exponential oracle") {
    const SystemParams sp{7.0, 2.0, 1.0};
    const auto mod = fig_mod(2, 0.4);
    CHECK((exact::principal_matrix(sp, mod, 0.3, 0.3, 10) - Mat4::Identity()).norm() == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.3);
    for (int i = 0; i < 4; ++i) {
        double t[3] = {u(rng), u(rng), u(rng)};
        std::sort(t, t + 3);
        const double h = 1e-4;
        auto steps = [&](double a, double b) { return std::max(1, static_cast<int>(std::lround((b - a) / h))); };
        const Mat4 a = exact::principal_matrix(sp, mod, t[0], t[2], steps(t[0], t[2]));
        const Mat4 b = exact::principal_matrix(sp, mod, t[1], t[2], steps(t[1], t[2])) *
                       exact::principal_matrix(sp, mod, t[0], t[1], steps(t[0], t[1]));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
    }
    const SystemParams st{6.0, 1.5, 1.0};
    const auto none = Modulation::none(10.0);
    const Mat4 pi = exact::principal_matrix(st, none, 0.0, 2.0, 4000);
    CHECK((pi - expm(exact::liouvillian(st, none, 0.0), 2.0)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("steady state: undriven, static-drive oracle and parity") {
    const auto z = exact::steady_state_exact({0.0, 3.0, 1.0}, fig_mod(3, 0.0));
    for (const auto& r : z.rho) {
        CHECK(std::abs(r(0)) < 1e-12);
        CHECK(std::abs(r(2)) < 1e-12);
        CHECK(std::abs(r(3) - 1.0) < 1e-12);
    }
    // Static drive: null vector of L from a full-pivot LU kernel.
    const SystemParams st{4.0, 1.5, 1.0};
    const auto none = Modulation::none(10.0);
    const auto s = exact::steady_state_exact(st, none);
    Eigen::FullPivLU<Mat4> lu(exact::liouvillian(st, none, 0.0));
    Vec4 k = lu.kernel().col(0);
    k /= (k(2) + k(3));
    CHECK((s.rho[0] - k).cwiseAbs().maxCoeff() < 1e-10);
    const double pe = 0.25 * 16.0 / (1.5 * 1.5 + 0.25 + 0.5 * 16.0);
    CHECK(s.rho[0](2).real() == doctest::Approx(pe).epsilon(1e-10));

    const auto p = exact::steady_state_exact({10.0, 0.0, 1.0}, fig_mod(3, 0.0));
    const auto chain = exact::parity_chain({10.0, 0.0, 1.0}, fig_mod(3, 0.0), p);
    CHECK(chain.steady_state < 1e-8);
    CHECK(exact::trace_defect(p) < 1e-9);
    CHECK(exact::hermiticity_defect(p) < 1e-9);
    for (const auto& r : p.rho) {
        CHECK(r(2).real() >= 0.0);
        CHECK(r(2).real() <= 1.0);
        CHECK(std::norm(r(0)) <= r(2).real() * r(3).real() + 1e-12);
    }
}

TEST_CASE("steady population agrees with the secular reconstruction at strong splitting") {
    const SystemParams sp{10.0, 0.0, 1.0};
    const auto mod = fig_mod(3, 0.0);
    const auto ss = exact::steady_state_exact(sp, mod);
    const auto sol = floquet::solve_floquet(sp, mod);
    const auto r = secular::rates(elements::transition_elements(sol));
    double rec = 0.0;
    for (std::size_t j = 0; j < sol.samples(); ++j) {
        rec += r.rho_pp_ss * std::norm(sol.modes[0][j](0)) + r.rho_mm_ss * std::norm(sol.modes[1][j](0));
    }
    rec /= static_cast<double>(sol.samples());
    CHECK(std::abs(ss.mean_pi_plus() - rec) < 0.02 * rec);
}

TEST_CASE("correlation trace: initial value, reality under parity, serial equals parallel") {
    const SystemParams sp{10.0, 0.0, 1.0};
    const auto mod = fig_mod(3, 0.0);
    const auto ss = exact::steady_state_exact(sp, mod);
    const auto par = exact::correlation(sp, mod, ss, {}, kernels::Exec::parallel);
    const auto ser = exact::correlation(sp, mod, ss, {}, kernels::Exec::serial);
    CHECK(std::abs(par.g1[0] - ss.mean_pi_plus()) < 1e-10);
    double im = 0.0;
    for (const auto& g : par.g1) im = std::max(im, std::abs(g.imag()));
    CHECK(im < 1e-8 * par.g1[0].real());
    REQUIRE(par.g1.size() == ser.g1.size());
    bool same = true;
    for (std::size_t i = 0; i < par.g1.size(); ++i) same = same && par.g1[i] == ser.g1[i];
    CHECK(same);
    CHECK(std::abs(par.g1_incoherent.back()) < 1e-6 * par.g1[0].real());

    const auto broken = exact::correlation(sp, fig_mod(2, 0.0));
    double imb = 0.0;
    for (const auto& g : broken.g1) imb = std::max(imb, std::abs(g.imag()));
    CHECK(imb > 1e-3 * broken.g1[0].real());
}

TEST_CASE("correlation window and option validation") {
    exact::CorrelationOptions o;
    o.tau_max = 10.0;
    CHECK_THROWS_AS(exact::correlation({10.0, 0.0, 1.0}, fig_mod(3, 0.0), o), WindowError);
    exact::CorrelationOptions bad;
    bad.n_tprime = 24;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("Mollow triplet peaks from the exact route") {
    const SystemParams sp{10.0, 0.0, 1.0};
    const auto none = Modulation::none(40.0);
    const auto grid = spectrum::symmetric_grid(20.0, 801);
    const auto spec = exact::exact_spectrum(exact::correlation(sp, none), grid);
    const double h = grid[1] - grid[0];
    auto peak_near = [&](double x) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i] - x) < 3.0 && (best == 0 || spec.s_inc[i] > spec.s_inc[best])) best = i;
        return grid[best];
    };
    for (double x : {-10.0, 0.0, 10.0}) CHECK(std::abs(peak_near(x) - x) <= h * (1.0 + 1e-9));
    CHECK(spectrum::asymmetry(spec.s_inc) < 1e-8);
}

TEST_CASE("exact line decomposition reproduces g1(0) and the spectrum") {
    const SystemParams sp{10.0, 5.0, 1.0};
    const auto mod = fig_mod(2, 0.0);
    const auto ss = exact::steady_state_exact(sp, mod);
    const auto tr = exact::correlation(sp, mod, ss);
    const auto dec = exact::exact_lines(sp, mod, ss);
    CHECK(std::abs(dec.total_weight - tr.g1[0].real()) < 1e-8);
    const auto grid = spectrum::symmetric_grid(160.0, 801);
    const auto spec = exact::exact_spectrum(tr, grid);
    const auto sum = kernels::lorentzian_sum(dec.lines, grid);
    double peak = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        peak = std::max(peak, spec.s_inc[i]);
        d = std::max(d, std::abs(spec.s_inc[i] - sum[i]));
    }
    CHECK(d < 1e-3 * peak);
    // Coherent lines from the unit multiplier match the steady-state Fourier amplitudes.
    double cd = 0.0;
    for (const auto& c : dec.coherent_lines) {
        for (const auto& e : spec.coherent_lines)
            if (std::abs(e.position - c.position) < 1e-6) cd = std::max(cd, std::abs(e.weight - c.weight));
    }
    CHECK(cd < 1e-8);
}

TEST_CASE("exact and secular spectra agree at line centers for a large splitting") {
    const SystemParams sp{80.0, 0.0, 1.0};
    const auto mod = Modulation::biharmonic(200.0, 200.0, 3, 1.0, 0.0);
    const auto sol = floquet::solve_floquet(sp, mod);
    REQUIRE(sol.splitting >= 50.0);
    const auto el = elements::transition_elements(sol);
    const auto r = secular::rates(el);
    const auto grid = spectrum::symmetric_grid(800.0, 4001);
    const auto sec = secular::secular_spectrum(el, r, sol.splitting, 200.0, grid);
    const auto ex = exact::exact_spectrum(exact::correlation(sp, mod), grid);
    double peak = 0.0;
    for (double v : sec.s_inc) peak = std::max(peak, v);
    double worst = 0.0;
    for (const auto& ln : sec.line_table) {
        if (ln.weight < 0.01 * 0.25 || std::abs(ln.position) > 790.0) continue;
        const double s_sec = kernels::lorentzian_sum(sec.line_table, {ln.position})[0];
        const double s_ex = kernels::half_fourier(exact::correlation(sp, mod).g1_incoherent,
                                                  2.0 * kPi / 200.0 / 64.0, {ln.position})[0];
        worst = std::max(worst, std::abs(s_sec - s_ex));
    }
    CHECK(worst < 0.05 * peak);
    (void)ex;
}

TEST_CASE("parity chain: symmetric and broken cases") {
    const SystemParams sp{10.0, 0.0, 1.0};
    const auto sym = fig_mod(3, 0.0);
    const auto c = exact::parity_chain(sp, sym, exact::steady_state_exact(sp, sym));
    CHECK(c.liouvillian < 1e-8);
    CHECK(c.steady_state < 1e-8);
    CHECK(c.principal < 1e-8);
    CHECK(c.correlation < 1e-8);
    const auto brk = fig_mod(2, 0.0);
    const auto b = exact::parity_chain(sp, brk, exact::steady_state_exact(sp, brk));
    CHECK(b.max() > 1e-3);
}
