// model.hpp — physical parameters, modulation waveform, rotating-frame Hamiltonian
// and the generalized-parity classifier.
//
// Units: kappa = 1 by convention. All frequencies are in units of kappa, all
// times in units of 1/kappa.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluoro/types.hpp"

namespace fluoro::model {

struct SystemParams {
    double omega_x{0.0};   // drive strength
    double detuning{0.0};  // delta = omega_0 - omega_x
    double kappa{1.0};     // radiative decay rate

    // Throws ValidationError unless kappa > 0 and omega_x >= 0.
    void validate() const;
};

// One term Omega_k * cos(p_k * omega_z * t + phi_k).
struct Harmonic {
    int multiple{1};
    double amplitude{0.0};
    double phase{0.0};
};

// Zero-mean periodic modulation f(t). A constant term is not representable:
// multiples must be positive, so an offset has to go into the detuning.
class Modulation {
public:
    Modulation(double fundamental_freq, std::vector<Harmonic> harmonics);

    // f(t) = Omega_z [cos(w t) + r cos(p w t + phi)]
    static Modulation biharmonic(double omega_z, double amplitude, int p,
                                 double ratio, double phi);
    static Modulation none(double omega_z);

    double fundamental_freq() const noexcept { return omega_z_; }
    double period() const noexcept;
    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    bool empty() const noexcept { return harmonics_.empty(); }

    double operator()(double t) const noexcept;

    // Phi(t) = int_0^t f(s) ds; periodic because f has zero mean.
    double phase_integral(double t) const noexcept;

    // Sum of |amplitude| over harmonics, an upper bound on max|f|.
    double amplitude_bound() const noexcept;

private:
    double omega_z_;
    std::vector<Harmonic> harmonics_;
};

double eval_f(const Modulation& mod, double t) noexcept;

// (Omega_x/2) sigma_x + (delta + f(t))/2 sigma_z in the {|up>, |down>} basis.
Mat2 effective_hamiltonian(const SystemParams& params, const Modulation& mod,
                           double t) noexcept;

enum class ParityCase { parity, detuned_only, waveform_only, both_broken };

std::string to_string(ParityCase c);

struct ParityClass {
    bool has_generalized_parity{false};
    ParityCase case_label{ParityCase::both_broken};
    double waveform_residual{0.0};  // max_t |f(t) + f(t + T/2)|
    double detuning_residual{0.0};  // |delta|
    // max_t |f(t) + f(T/2 - t)|; zero when the waveform admits the antiunitary
    // reflection symmetry behind the even-multiple identities.
    double reflection_residual{0.0};
    double tolerance{0.0};

    // delta = 0, reflection symmetric waveform, generalized parity broken.
    bool reflection_applicable() const noexcept {
        return !has_generalized_parity && detuning_residual <= tolerance &&
               reflection_residual <= tolerance;
    }
};

// 1e-9 * (|delta| + sum |Omega_k| + omega_z)
double default_parity_tolerance(const SystemParams& params, const Modulation& mod) noexcept;

// Waveform residual is sampled on 4096 points per period.
ParityClass classify_parity(const SystemParams& params, const Modulation& mod,
                            std::optional<double> tol = std::nullopt);

} // namespace fluoro::model
