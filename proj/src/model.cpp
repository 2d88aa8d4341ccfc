#include "fluoro/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluoro/errors.hpp"

namespace fluoro::model {

void SystemParams::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw ValidationError("kappa must be positive and finite");
    }
    if (!(omega_x >= 0.0) || !std::isfinite(omega_x)) {
        throw ValidationError("omega_x must be non-negative and finite");
    }
    if (!std::isfinite(detuning)) {
        throw ValidationError("detuning must be finite");
    }
}

Modulation::Modulation(double fundamental_freq, std::vector<Harmonic> harmonics)
    : omega_z_(fundamental_freq), harmonics_(std::move(harmonics)) {
    if (!(omega_z_ > 0.0) || !std::isfinite(omega_z_)) {
        throw ValidationError("modulation fundamental frequency must be positive");
    }
    for (const auto& h : harmonics_) {
        if (h.multiple <= 0) {
            throw ValidationError("harmonic multiple must be a positive integer "
                                  "(constant offsets belong in the detuning)");
        }
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
            throw ValidationError("harmonic amplitude and phase must be finite");
        }
    }
}

Modulation Modulation::biharmonic(double omega_z, double amplitude, int p, double ratio,
                                  double phi) {
    return Modulation(omega_z, {{1, amplitude, 0.0}, {p, ratio * amplitude, phi}});
}

Modulation Modulation::none(double omega_z) { return Modulation(omega_z, {}); }

double Modulation::period() const noexcept { return 2.0 * std::numbers::pi / omega_z_; }

double Modulation::operator()(double t) const noexcept {
    double f = 0.0;
    for (const auto& h : harmonics_) {
        f += h.amplitude * std::cos(h.multiple * omega_z_ * t + h.phase);
    }
    return f;
}

double Modulation::phase_integral(double t) const noexcept {
    double phi = 0.0;
    for (const auto& h : harmonics_) {
        const double w = h.multiple * omega_z_;
        phi += h.amplitude / w * (std::sin(w * t + h.phase) - std::sin(h.phase));
    }
    return phi;
}

double Modulation::amplitude_bound() const noexcept {
    double s = 0.0;
    for (const auto& h : harmonics_) s += std::abs(h.amplitude);
    return s;
}

double eval_f(const Modulation& mod, double t) noexcept { return mod(t); }

Mat2 effective_hamiltonian(const SystemParams& params, const Modulation& mod,
                           double t) noexcept {
    const double z = 0.5 * (params.detuning + mod(t));
    const double x = 0.5 * params.omega_x;
    Mat2 h;
    h << z, x,
         x, -z;
    return h;
}

std::string to_string(ParityCase c) {
    switch (c) {
    case ParityCase::parity: return "parity";
    case ParityCase::detuned_only: return "detuned_only";
    case ParityCase::waveform_only: return "waveform_only";
    case ParityCase::both_broken: return "both_broken";
    }
    return "unknown";
}

double default_parity_tolerance(const SystemParams& params, const Modulation& mod) noexcept {
    return 1e-9 * (std::abs(params.detuning) + mod.amplitude_bound() + mod.fundamental_freq());
}

ParityClass classify_parity(const SystemParams& params, const Modulation& mod,
                            std::optional<double> tol) {
    const double tolerance = tol.value_or(default_parity_tolerance(params, mod));
    if (!(tolerance > 0.0)) throw ValidationError("parity tolerance must be positive");

    constexpr int kSamples = 4096;
    const double T = mod.period();
    double residual = 0.0;
    double reflection = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double t = T * i / kSamples;
        residual = std::max(residual, std::abs(mod(t) + mod(t + 0.5 * T)));
        reflection = std::max(reflection, std::abs(mod(t) + mod(0.5 * T - t)));
    }

    ParityClass out;
    out.waveform_residual = residual;
    out.detuning_residual = std::abs(params.detuning);
    out.reflection_residual = reflection;
    out.tolerance = tolerance;
    const bool wave_ok = residual <= tolerance;
    const bool det_ok = out.detuning_residual <= tolerance;
    out.has_generalized_parity = wave_ok && det_ok;
    if (wave_ok && det_ok) out.case_label = ParityCase::parity;
    else if (wave_ok) out.case_label = ParityCase::detuned_only;
    else if (det_ok) out.case_label = ParityCase::waveform_only;
    else out.case_label = ParityCase::both_broken;
    return out;
}

} // namespace fluoro::model
