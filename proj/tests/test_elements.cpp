#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fluoro/elements.hpp"
#include "fluoro/errors.hpp"
#include "fluoro/floquet.hpp"
#include "fluoro/vanvleck.hpp"

using namespace fluoro;
using model::Modulation;
using model::SystemParams;

namespace {
constexpr double kPi = std::numbers::pi;

Modulation fig_mod(int p, double phi) { return Modulation::biharmonic(40.0, 40.0, p, 1.0, phi); }

struct Setup {
    SystemParams sp;
    Modulation mod;
    floquet::FloquetSolution sol;
    elements::TransitionElements el;
    elements::ParityReport report;
};

Setup make(const SystemParams& sp, const Modulation& mod) {
    auto sol = floquet::solve_floquet(sp, mod);
    auto el = elements::transition_elements(sol);
    auto rep = elements::parity_eigenvalues(sol, model::classify_parity(sp, mod));
    rep = elements::verify_identities(el, rep, mod, sp);
    return {sp, mod, std::move(sol), std::move(el), rep};
}

floquet::FloquetSolution rephase(floquet::FloquetSolution sol, double a, double b) {
    for (auto& v : sol.modes[0]) v *= std::polar(1.0, a);
    for (auto& v : sol.modes[1]) v *= std::polar(1.0, b);
    return sol;
}
} // namespace

TEST_CASE("Mollow limit elements") {
    const auto s = make({10.0, 0.0, 1.0}, Modulation::none(40.0));
    CHECK(std::abs(s.el.plus(0, 0, 0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(s.el.plus(0, 1, 0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(s.el.plus(1, 0, 0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(s.el.plus(1, 1, 0)) == doctest::Approx(0.5).epsilon(1e-10));
    for (int l = 1; l <= 3; ++l) CHECK(std::abs(s.el.plus(0, 0, l)) < 1e-10);
}

TEST_CASE("Parseval and sigma_+/sigma_- conjugation hold across parity classes") {
    for (auto [p, delta, phi] : {std::tuple{3, 0.0, 0.0}, std::tuple{3, 5.0, 0.25 * kPi},
                                 std::tuple{2, 0.0, 0.5 * kPi}, std::tuple{2, 5.0, 0.0}}) {
        const auto s = make({10.0, delta, 1.0}, fig_mod(p, phi));
        CHECK(std::abs(s.el.parseval() - 1.0) < 1e-8);
        CHECK(elements::conjugation_residual(s.el) < 1e-12);
    }
}

TEST_CASE("element magnitudes agree between the monodromy and Sambe backends") {
    const SystemParams sp{10.0, 5.0, 1.0};
    const auto mod = fig_mod(2, 0.3);
    const auto a = elements::transition_elements(floquet::solve_floquet(sp, mod));
    const auto b = elements::transition_elements(floquet::solve_floquet_sambe(sp, mod, 24));
    double d = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int l = -a.l_max; l <= a.l_max; ++l)
                d = std::max(d, std::abs(std::abs(a.plus(x, y, l)) - std::abs(b.plus(x, y, l))));
    CHECK(d < 1e-8);
}

TEST_CASE("generalized parity: lambda eigenvalues and the phase-sensitive identity") {
    for (double phi : {0.0, 0.25 * kPi, 0.5 * kPi}) {
        const auto s = make({10.0, 0.0, 1.0}, fig_mod(3, phi));
        REQUIRE(s.report.lambda_plus.has_value());
        REQUIRE(s.report.lambda_minus.has_value());
        CHECK(std::abs(*s.report.lambda_plus) == 1.0);
        CHECK(std::abs(*s.report.lambda_minus) == 1.0);
        CHECK(s.report.lambda_residual < 1e-8);
        REQUIRE(s.report.mirror_identity_residual.has_value());
        CHECK(*s.report.mirror_identity_residual < 1e-8);
        CHECK(s.report.magnitude_identity_residual < 1e-8);
    }
}

TEST_CASE("detuning breaks the magnitude identity and leaves lambda undefined") {
    const auto s = make({10.0, 5.0, 1.0}, fig_mod(3, 0.0));
    CHECK_FALSE(s.report.lambda_plus.has_value());
    CHECK_FALSE(s.report.mirror_identity_residual.has_value());
    CHECK(s.report.magnitude_identity_residual > 1e-3);
}

TEST_CASE("even-p identities at zero detuning with phase pi/2") {
    const auto s = make({10.0, 0.0, 1.0}, fig_mod(2, 0.5 * kPi));
    REQUIRE(s.report.evenp_residuals.has_value());
    CHECK((*s.report.evenp_residuals)[0] < 1e-8);
    CHECK((*s.report.evenp_residuals)[1] < 1e-8);
    REQUIRE(s.report.theta0.has_value());
    // Same identities hold for the analytic elements without any phase fitting.
    const auto vv = vanvleck::vanvleck_solution(s.sp, s.mod);
    const auto ve = vanvleck::vanvleck_elements(vv);
    const auto vr = elements::verify_identities(ve, {}, s.mod, s.sp);
    REQUIRE(vr.evenp_residuals.has_value());
    CHECK((*vr.evenp_residuals)[0] < 1e-12);
    CHECK((*vr.evenp_residuals)[1] < 1e-12);
    CHECK_FALSE(vr.evenp_gauge_phase.has_value());
    // Not applicable for phi = 0.
    const auto z = make({10.0, 0.0, 1.0}, fig_mod(2, 0.0));
    CHECK_FALSE(z.report.evenp_residuals.has_value());
}

TEST_CASE("gauge robustness of all residuals under random mode phases") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    for (auto [p, phi] : {std::pair{3, 0.0}, std::pair{2, 0.5 * kPi}}) {
        const SystemParams sp{10.0, 0.0, 1.0};
        const auto mod = fig_mod(p, phi);
        const auto parity = model::classify_parity(sp, mod);
        const auto base = make(sp, mod);
        for (int trial = 0; trial < 3; ++trial) {
            const auto sol = rephase(base.sol, ph(rng), ph(rng));
            const auto el = elements::transition_elements(sol);
            auto rep = elements::parity_eigenvalues(sol, parity);
            rep = elements::verify_identities(el, rep, mod, sp);
            CHECK(std::abs(rep.magnitude_identity_residual - base.report.magnitude_identity_residual) < 1e-10);
            CHECK(rep.lambda_plus == base.report.lambda_plus);
            CHECK(rep.lambda_minus == base.report.lambda_minus);
            if (base.report.mirror_identity_residual) CHECK(*rep.mirror_identity_residual < 1e-8);
            if (base.report.evenp_residuals) {
                CHECK((*rep.evenp_residuals)[0] < 1e-8);
                CHECK((*rep.evenp_residuals)[1] < 1e-8);
            }
        }
    }
}

TEST_CASE("aliasing guard rejects an l_max that truncates the elements") {
    const auto sol = floquet::solve_floquet({10.0, 0.0, 1.0}, fig_mod(3, 0.0));
    CHECK_THROWS_AS(elements::transition_elements(sol, 2), CutoffError);
    CHECK_THROWS_AS(elements::transition_elements(sol, 1), ValidationError);
}
