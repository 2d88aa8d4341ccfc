#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fluoro/errors.hpp"
#include "fluoro/model.hpp"

using namespace fluoro;
using model::Modulation;
using model::ParityCase;
using model::SystemParams;

namespace {
constexpr double kPi = std::numbers::pi;

Modulation fig_mod(int p, double phi) { return Modulation::biharmonic(40.0, 40.0, p, 1.0, phi); }
} // namespace

TEST_CASE("rotating-frame Hamiltonian is Hermitian with the expected entries") {
    const SystemParams sp{3.0, 1.5, 1.0};
    const auto mod = fig_mod(3, 0.3);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double t = u(rng);
        const Mat2 h = model::effective_hamiltonian(sp, mod, t);
        CHECK((h - h.adjoint()).norm() < 1e-15);
        const double f = 40.0 * std::cos(40.0 * t) + 40.0 * std::cos(120.0 * t + 0.3);
        CHECK(h(0, 0).real() == doctest::Approx(0.5 * (1.5 + f)).epsilon(1e-13));
        CHECK(h(1, 1).real() == doctest::Approx(-0.5 * (1.5 + f)).epsilon(1e-13));
        CHECK(h(0, 1).real() == doctest::Approx(1.5));
    }
}

TEST_CASE("modulation has zero mean and its phase integral is periodic with derivative f") {
    const Modulation mod(7.0, {{1, 3.0, 0.2}, {2, 1.0, -1.1}, {5, 0.5, 2.0}});
    const double T = mod.period();
    const int n = 4096;
    double mean = 0.0;
    for (int k = 0; k < n; ++k) mean += mod(T * k / n);
    CHECK(std::abs(mean / n) < 1e-13);
    CHECK(std::abs(mod.phase_integral(T)) < 1e-13);
    for (double t : {0.01, 0.3, 0.77}) {
        const double h = 1e-5;
        const double d = (mod.phase_integral(t + h) - mod.phase_integral(t - h)) / (2 * h);
        CHECK(d == doctest::Approx(mod(t)).epsilon(1e-8));
    }
    CHECK(mod.amplitude_bound() == doctest::Approx(4.5));
}

TEST_CASE("modulation rejects constant terms and bad frequencies") {
    CHECK_THROWS_AS(Modulation(1.0, {{0, 1.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(Modulation(1.0, {{-2, 1.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(Modulation(0.0, {}), ValidationError);
    CHECK_THROWS_AS((SystemParams{-1.0, 0.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SystemParams{1.0, 0.0, 0.0}.validate()), ValidationError);
}

TEST_CASE("parity classification of the four symmetry cases") {
    const auto odd = fig_mod(3, 0.0);
    const auto even = fig_mod(2, 0.0);
    CHECK(model::classify_parity({10, 0, 1}, odd).case_label == ParityCase::parity);
    CHECK(model::classify_parity({10, 0, 1}, odd).has_generalized_parity);
    CHECK(model::classify_parity({10, 5, 1}, odd).case_label == ParityCase::detuned_only);
    CHECK(model::classify_parity({10, 0, 1}, even).case_label == ParityCase::waveform_only);
    CHECK(model::classify_parity({10, 5, 1}, even).case_label == ParityCase::both_broken);
    CHECK_FALSE(model::classify_parity({10, 5, 1}, even).has_generalized_parity);
    // No modulation at zero detuning is trivially parity symmetric.
    CHECK(model::classify_parity({10, 0, 1}, Modulation::none(40)).has_generalized_parity);
}

TEST_CASE("odd-only multiharmonic waveforms keep parity, any even harmonic breaks it") {
    const Modulation odd3(10.0, {{1, 5.0, 0.1}, {3, 2.0, 0.7}, {5, 1.0, -0.4}});
    const Modulation mixed(10.0, {{1, 5.0, 0.1}, {2, 2.0, 0.7}, {3, 1.0, -0.4}});
    CHECK(model::classify_parity({4, 0, 1}, odd3).has_generalized_parity);
    const auto pc = model::classify_parity({4, 0, 1}, mixed);
    CHECK_FALSE(pc.has_generalized_parity);
    CHECK(pc.waveform_residual > 1.0);
}

TEST_CASE("reflection symmetry singles out even p with phase pi/2") {
    const SystemParams sp{10, 0, 1};
    CHECK(model::classify_parity(sp, fig_mod(2, 0.5 * kPi)).reflection_applicable());
    CHECK(model::classify_parity(sp, fig_mod(4, 1.5 * kPi)).reflection_applicable());
    CHECK_FALSE(model::classify_parity(sp, fig_mod(2, 0.0)).reflection_applicable());
    CHECK_FALSE(model::classify_parity({10, 5, 1}, fig_mod(2, 0.5 * kPi)).reflection_applicable());
    // Parity-symmetric cases are handled by the parity identities instead.
    CHECK_FALSE(model::classify_parity(sp, fig_mod(3, 0.0)).reflection_applicable());
}

TEST_CASE("default parity tolerance scales with the problem frequencies") {
    const auto mod = fig_mod(3, 0.0);
    CHECK(model::default_parity_tolerance({10, 2, 1}, mod) == doctest::Approx(1e-9 * (2 + 80 + 40)));
    const auto strict = model::classify_parity({10, 1e-6, 1}, mod);
    CHECK_FALSE(strict.has_generalized_parity);
    const auto loose = model::classify_parity({10, 1e-6, 1}, mod, 1e-3);
    CHECK(loose.has_generalized_parity);
    CHECK(model::to_string(ParityCase::waveform_only) == "waveform_only");
}
