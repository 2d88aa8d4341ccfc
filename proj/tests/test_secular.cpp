#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluoro/elements.hpp"
#include "fluoro/errors.hpp"
#include "fluoro/floquet.hpp"
#include "fluoro/secular.hpp"

using namespace fluoro;
using model::Modulation;
using model::SystemParams;
using spectrum::Family;

namespace {
constexpr double kPi = std::numbers::pi;

Modulation fig_mod(int p, double phi) { return Modulation::biharmonic(40.0, 40.0, p, 1.0, phi); }

struct Run {
    floquet::FloquetSolution sol;
    elements::TransitionElements el;
    secular::SecularRates r;
    spectrum::Spectrum s;
};

Run run(const SystemParams& sp, const Modulation& mod, double grid_max = 160.0) {
    auto sol = floquet::solve_floquet(sp, mod);
    auto el = elements::transition_elements(sol);
    auto r = secular::rates(el);
    auto s = secular::secular_spectrum(el, r, sol.splitting, mod.fundamental_freq(),
                                       spectrum::symmetric_grid(grid_max, 8001));
    return {std::move(sol), std::move(el), r, std::move(s)};
}
} // namespace

TEST_CASE("Mollow limit rates and line table") {
    const auto m = run({10.0, 0.0, 1.0}, Modulation::none(40.0));
    CHECK(m.r.gamma_rel == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(m.r.gamma_deph == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(m.r.rho_pp_ss == doctest::Approx(0.5).epsilon(1e-10));
    REQUIRE(m.s.line_table.size() == 3);
    for (const auto& ln : m.s.line_table) {
        if (ln.family == Family::central) {
            CHECK(std::abs(ln.position) < 1e-12);
            CHECK(ln.weight == doctest::Approx(0.25).epsilon(1e-10));
            CHECK(ln.width == doctest::Approx(0.5).epsilon(1e-10));
        } else {
            CHECK(std::abs(std::abs(ln.position) - 10.0) < 1e-9);
            CHECK(ln.weight == doctest::Approx(0.125).epsilon(1e-10));
            CHECK(ln.width == doctest::Approx(0.75).epsilon(1e-10));
        }
    }
    CHECK(m.s.coherent_lines.empty());
}

TEST_CASE("bare decay of the upper state") {
    const auto m = run({0.0, 2.0, 1.0}, Modulation::none(40.0));
    CHECK(m.r.gamma_rel == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r.gamma_deph == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.r.gamma_s <= m.r.gamma_rel);
    CHECK(std::abs(m.r.rho_pp_ss) < 1e-12);
}

TEST_CASE("parity-symmetric parameters give a mirror-symmetric secular spectrum") {
    for (double phi : {0.0, 0.25 * kPi, 0.5 * kPi}) {
        const auto m = run({10.0, 0.0, 1.0}, fig_mod(3, phi));
        CHECK(std::abs(m.r.rho_pp_ss - 0.5) < 1e-8);
        CHECK(spectrum::asymmetry(m.s.s_inc) < 1e-8);
    }
    const auto even = run({10.0, 0.0, 1.0}, fig_mod(2, 0.5 * kPi));
    CHECK(spectrum::asymmetry(even.s.s_inc) < 1e-8);
}

TEST_CASE("mirror symmetry holds exactly when the element conditions hold") {
    for (auto [p, delta, phi] : {std::tuple{3, 0.0, 0.0}, std::tuple{2, 0.0, 0.5 * kPi},
                                 std::tuple{3, 5.0, 0.0}, std::tuple{2, 0.0, 0.0}, std::tuple{2, 5.0, 0.3}}) {
        const auto m = run({10.0, delta, 1.0}, fig_mod(p, phi));
        const bool cond = secular::mirror_condition_residual(m.el, m.r) < 1e-8;
        const bool sym = spectrum::asymmetry(m.s.s_inc) < 1e-8;
        CHECK(cond == sym);
    }
}

TEST_CASE("rate invariants and nonnegativity") {
    for (auto [p, delta, phi] : {std::tuple{3, 5.0, 0.0}, std::tuple{2, 0.0, 0.0}, std::tuple{4, -3.0, 1.0}}) {
        const auto m = run({7.0, delta, 1.0}, fig_mod(p, phi));
        CHECK(m.r.gamma_s <= m.r.gamma_rel);
        CHECK(m.r.gamma_deph >= 0.5 * m.r.gamma_rel);
        double s_pp = 0.0;
        for (int l = -m.el.l_max; l <= m.el.l_max; ++l) s_pp += std::norm(m.el.plus(0, 0, l));
        CHECK(m.r.gamma_deph == doctest::Approx(0.5 * m.r.gamma_rel + 2.0 * s_pp).epsilon(1e-12));
        double mn = 0.0;
        for (double v : m.s.s_inc) mn = std::min(mn, v);
        CHECK(mn >= -1e-12);
    }
}

TEST_CASE("weight bookkeeping matches direct summation") {
    const auto m = run({10.0, 5.0, 1.0}, fig_mod(2, 0.0));
    double sum = 0.0;
    for (const auto& ln : m.s.line_table) sum += ln.weight;
    for (const auto& c : m.s.coherent_lines) sum += c.weight / kPi;
    CHECK(sum == doctest::Approx(secular::total_weight(m.el, m.r)).epsilon(1e-10));
}

TEST_CASE("integrated spectrum over the grid equals the analytic windowed line areas") {
    const auto m = run({10.0, 5.0, 1.0}, fig_mod(2, 0.0));
    const auto& g = m.s.delta_grid;
    const double h = g[1] - g[0];
    double trap = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        trap += (i == 0 || i + 1 == g.size() ? 0.5 : 1.0) * m.s.s_inc[i];
    }
    trap *= h;
    double exact = 0.0;
    for (const auto& ln : m.s.line_table) exact += spectrum::line_integral(ln, g.front(), g.back());
    CHECK(std::abs(trap - exact) < 1e-6 * exact);
}

TEST_CASE("no relaxation is an error") {
    elements::TransitionElements el;
    el.l_max = 2;
    for (auto& row : el.x_plus)
        for (auto& v : row) v.assign(5, 0.0);
    el.x_plus[0][0][2] = 1.0;
    CHECK_THROWS_AS(secular::rates(el), NoRelaxationError);
}

TEST_CASE("secular validity warning when the splitting is comparable to the rates") {
    const auto m = run({2.0, 0.0, 1.0}, Modulation::none(40.0));
    CHECK_FALSE(m.s.warnings.empty());
    const auto ok = run({10.0, 0.0, 1.0}, Modulation::none(40.0));
    CHECK(ok.s.warnings.empty());
}
