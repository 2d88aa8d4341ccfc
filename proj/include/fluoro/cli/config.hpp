// config.hpp — JSON run configuration: parsing, field-level validation and the
// fully resolved form embedded in every output file.
//
// All physical numbers are in units of kappa; phases are in units of pi.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluoro/model.hpp"

namespace fluoro::cli {

enum class Route { exact, secular_monodromy, secular_sambe, secular_vanvleck };

std::string to_string(Route r);
Route route_from_string(const std::string& s);

struct HarmonicSpec {
    int multiple{1};
    double amplitude{0.0};
    double phase_pi{0.0};
};

struct Numerics {
    int steps_per_period{4096};
    int n_time_samples{1024};
    int l_max{16};
    double tau_max{60.0};
    int n_tprime{32};
    int tau_samples_per_period{64};
    int sambe_cutoff{0};      // 0 selects max(floor + 16, 24)
    int vv_j_max{16};
    double grid_max{0.0};     // 0 selects 4 omega_z
    int grid_points{8001};
    double apodization{0.0};
};

struct SweepSpec {
    std::string axis;
    std::vector<double> values;
};

struct RunConfig {
    model::SystemParams system;
    double omega_z{1.0};
    std::vector<HarmonicSpec> harmonics;
    std::vector<Route> routes;
    Numerics numerics;
    std::string prefix{"run"};
    std::vector<double> line_positions;   // Delta values where line weights are reported
    std::optional<SweepSpec> sweep;

    model::Modulation modulation() const;
    int sambe_cutoff() const;
    double grid_max() const;
    bool has_route(Route r) const;

    // Fully resolved configuration with every default filled in.
    nlohmann::json resolved() const;
};

// Throws ValidationError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes{"omega_x", "detuning", "phi", "r"};
    return axes;
}

// Returns a copy with `axis` set to `value`. phi is the phase of the second
// harmonic in units of pi; r scales the second amplitude relative to the first.
RunConfig with_axis(const RunConfig& cfg, const std::string& axis, double value);

} // namespace fluoro::cli
