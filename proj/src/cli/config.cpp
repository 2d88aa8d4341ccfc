#include "fluoro/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "fluoro/errors.hpp"
#include "fluoro/floquet.hpp"

namespace fluoro::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ValidationError(field + ": " + msg);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback,
                  bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(path, "required field missing");
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
}

int get_int(const json& obj, const std::string& key, const std::string& path, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(path, "must be an integer");
    return v.get<int>();
}

} // namespace

std::string to_string(Route r) {
    switch (r) {
    case Route::exact: return "exact";
    case Route::secular_monodromy: return "secular_monodromy";
    case Route::secular_sambe: return "secular_sambe";
    case Route::secular_vanvleck: return "secular_vanvleck";
    }
    return "unknown";
}

Route route_from_string(const std::string& s) {
    for (Route r : {Route::exact, Route::secular_monodromy, Route::secular_sambe,
                    Route::secular_vanvleck}) {
        if (to_string(r) == s) return r;
    }
    throw ValidationError("routes: unknown route '" + s + "'");
}

model::Modulation RunConfig::modulation() const {
    std::vector<model::Harmonic> hs;
    for (const auto& h : harmonics) {
        hs.push_back({h.multiple, h.amplitude, h.phase_pi * std::numbers::pi});
    }
    return model::Modulation(omega_z, std::move(hs));
}

int RunConfig::sambe_cutoff() const {
    if (numerics.sambe_cutoff > 0) return numerics.sambe_cutoff;
    return std::max(floquet::sambe_cutoff_floor(modulation()) + 16, 24);
}

double RunConfig::grid_max() const {
    return numerics.grid_max > 0.0 ? numerics.grid_max : 4.0 * omega_z;
}

bool RunConfig::has_route(Route r) const {
    return std::find(routes.begin(), routes.end(), r) != routes.end();
}

json RunConfig::resolved() const {
    json j;
    j["system"] = {{"omega_x", system.omega_x}, {"detuning", system.detuning}, {"kappa", system.kappa}};
    json hs = json::array();
    for (const auto& h : harmonics) {
        hs.push_back({{"multiple", h.multiple}, {"amplitude", h.amplitude}, {"phase", h.phase_pi}});
    }
    j["modulation"] = {{"omega_z", omega_z}, {"harmonics", hs}};
    json rs = json::array();
    for (auto r : routes) rs.push_back(to_string(r));
    j["routes"] = rs;
    const auto& n = numerics;
    j["numerics"] = {{"steps_per_period", n.steps_per_period},
                     {"n_time_samples", n.n_time_samples},
                     {"l_max", n.l_max},
                     {"tau_max", n.tau_max},
                     {"n_tprime", n.n_tprime},
                     {"tau_samples_per_period", n.tau_samples_per_period},
                     {"sambe_cutoff", sambe_cutoff()},
                     {"vv_j_max", n.vv_j_max},
                     {"apodization", n.apodization},
                     {"grid", {{"max", grid_max()}, {"points", n.grid_points}}}};
    j["outputs"] = {{"prefix", prefix}, {"line_positions", line_positions}};
    if (sweep) j["sweep"] = {{"axis", sweep->axis}, {"values", sweep->values}};
    return j;
}

RunConfig parse_config(const json& j) {
    check_keys(j, "", {"system", "modulation", "routes", "numerics", "outputs", "sweep"});
    RunConfig cfg;

    if (!j.contains("system")) fail("system", "required field missing");
    const auto& sys = j.at("system");
    check_keys(sys, "system", {"omega_x", "detuning", "kappa"});
    cfg.system.omega_x = get_number(sys, "omega_x", "system.omega_x", 0.0, true);
    cfg.system.detuning = get_number(sys, "detuning", "system.detuning", 0.0);
    const double kappa = get_number(sys, "kappa", "system.kappa", 1.0);
    if (kappa != 1.0) fail("system.kappa", "all rates are in units of kappa; kappa must be 1");
    if (cfg.system.omega_x < 0.0) fail("system.omega_x", "must be non-negative");

    if (!j.contains("modulation")) fail("modulation", "required field missing");
    const auto& mod = j.at("modulation");
    check_keys(mod, "modulation", {"omega_z", "harmonics"});
    cfg.omega_z = get_number(mod, "omega_z", "modulation.omega_z", 0.0, true);
    if (!(cfg.omega_z > 0.0)) fail("modulation.omega_z", "must be positive");
    if (mod.contains("harmonics")) {
        const auto& hs = mod.at("harmonics");
        if (!hs.is_array()) fail("modulation.harmonics", "must be an array");
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string path = "modulation.harmonics[" + std::to_string(i) + "]";
            check_keys(hs[i], path, {"multiple", "amplitude", "phase"});
            HarmonicSpec h;
            if (!hs[i].contains("multiple")) fail(path + ".multiple", "required field missing");
            h.multiple = get_int(hs[i], "multiple", path + ".multiple", 1);
            if (h.multiple <= 0) {
                fail(path + ".multiple", "must be a positive integer (a constant offset belongs in the detuning)");
            }
            h.amplitude = get_number(hs[i], "amplitude", path + ".amplitude", 0.0, true);
            h.phase_pi = get_number(hs[i], "phase", path + ".phase", 0.0);
            cfg.harmonics.push_back(h);
        }
    }

    if (!j.contains("routes")) fail("routes", "required field missing");
    const auto& rs = j.at("routes");
    if (!rs.is_array() || rs.empty()) fail("routes", "must be a non-empty array");
    for (const auto& r : rs) {
        if (!r.is_string()) fail("routes", "entries must be strings");
        const Route route = route_from_string(r.get<std::string>());
        if (!cfg.has_route(route)) cfg.routes.push_back(route);
    }

    if (j.contains("numerics")) {
        const auto& n = j.at("numerics");
        check_keys(n, "numerics", {"steps_per_period", "n_time_samples", "l_max", "tau_max",
                                   "n_tprime", "tau_samples_per_period", "sambe_cutoff",
                                   "vv_j_max", "grid", "apodization"});
        auto& o = cfg.numerics;
        o.steps_per_period = get_int(n, "steps_per_period", "numerics.steps_per_period", o.steps_per_period);
        o.n_time_samples = get_int(n, "n_time_samples", "numerics.n_time_samples", o.n_time_samples);
        o.l_max = get_int(n, "l_max", "numerics.l_max", o.l_max);
        o.tau_max = get_number(n, "tau_max", "numerics.tau_max", o.tau_max);
        o.n_tprime = get_int(n, "n_tprime", "numerics.n_tprime", o.n_tprime);
        o.tau_samples_per_period =
            get_int(n, "tau_samples_per_period", "numerics.tau_samples_per_period", o.tau_samples_per_period);
        o.sambe_cutoff = get_int(n, "sambe_cutoff", "numerics.sambe_cutoff", o.sambe_cutoff);
        o.vv_j_max = get_int(n, "vv_j_max", "numerics.vv_j_max", o.vv_j_max);
        o.apodization = get_number(n, "apodization", "numerics.apodization", o.apodization);
        if (n.contains("grid")) {
            const auto& g = n.at("grid");
            check_keys(g, "numerics.grid", {"max", "points"});
            o.grid_max = get_number(g, "max", "numerics.grid.max", o.grid_max);
            o.grid_points = get_int(g, "points", "numerics.grid.points", o.grid_points);
        }
    }
    const auto& o = cfg.numerics;
    if (o.steps_per_period < 64) fail("numerics.steps_per_period", "must be >= 64");
    if (o.n_time_samples < 128 || (o.n_time_samples & (o.n_time_samples - 1)) != 0) {
        fail("numerics.n_time_samples", "must be a power of two >= 128");
    }
    if (o.steps_per_period % o.n_time_samples != 0 && o.n_time_samples % o.steps_per_period != 0) {
        // monodromy backend rounds substeps up; keep grids commensurate for reproducibility
        fail("numerics.n_time_samples", "must divide steps_per_period or be a multiple of it");
    }
    if (o.l_max < 2) fail("numerics.l_max", "must be >= 2");
    if (o.l_max > o.n_time_samples / 2 - 1) fail("numerics.l_max", "must be below n_time_samples / 2");
    if (!(o.tau_max >= 10.0)) fail("numerics.tau_max", "must be >= 10 (units of 1/kappa)");
    if (o.n_tprime < 16) fail("numerics.n_tprime", "must be >= 16");
    if (o.tau_samples_per_period % 2 != 0 || o.tau_samples_per_period % o.n_tprime != 0) {
        fail("numerics.tau_samples_per_period", "must be even and a multiple of n_tprime");
    }
    if (o.steps_per_period % o.tau_samples_per_period != 0) {
        fail("numerics.steps_per_period", "must be a multiple of tau_samples_per_period");
    }
    if (o.sambe_cutoff < 0) fail("numerics.sambe_cutoff", "must be >= 0 (0 selects automatically)");
    if (o.vv_j_max < 1) fail("numerics.vv_j_max", "must be >= 1");
    if (o.apodization < 0.0) fail("numerics.apodization", "must be >= 0");
    if (o.grid_max < 0.0) fail("numerics.grid.max", "must be positive (0 selects 4 omega_z)");
    if (o.grid_points < 3 || o.grid_points % 2 == 0) {
        fail("numerics.grid.points", "must be odd and >= 3 so the grid is mirror symmetric");
    }

    if (j.contains("outputs")) {
        const auto& out = j.at("outputs");
        check_keys(out, "outputs", {"prefix", "line_positions"});
        if (out.contains("prefix")) {
            if (!out.at("prefix").is_string()) fail("outputs.prefix", "must be a string");
            cfg.prefix = out.at("prefix").get<std::string>();
            if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos) {
                fail("outputs.prefix", "must be a non-empty file name stem");
            }
        }
        if (out.contains("line_positions")) {
            const auto& lp = out.at("line_positions");
            if (!lp.is_array()) fail("outputs.line_positions", "must be an array of numbers");
            for (const auto& v : lp) {
                if (!v.is_number()) fail("outputs.line_positions", "must be an array of numbers");
                cfg.line_positions.push_back(v.get<double>());
            }
        }
    }

    if (j.contains("sweep")) {
        const auto& sw = j.at("sweep");
        check_keys(sw, "sweep", {"axis", "values"});
        SweepSpec s;
        if (!sw.contains("axis") || !sw.at("axis").is_string()) fail("sweep.axis", "must be a string");
        s.axis = sw.at("axis").get<std::string>();
        if (!sw.contains("values") || !sw.at("values").is_array()) fail("sweep.values", "must be an array");
        for (const auto& v : sw.at("values")) {
            if (!v.is_number()) fail("sweep.values", "must be numbers");
            s.values.push_back(v.get<double>());
        }
        // validates the axis name against this configuration
        if (!s.values.empty()) (void)with_axis(cfg, s.axis, s.values.front());
        cfg.sweep = s;
    }

    // Constructing the modulation validates the harmonics as a whole.
    (void)cfg.modulation();
    if (cfg.has_route(Route::secular_sambe) && cfg.numerics.sambe_cutoff > 0 &&
        cfg.numerics.sambe_cutoff < floquet::sambe_cutoff_floor(cfg.modulation())) {
        fail("numerics.sambe_cutoff", "below 2 * sum|amplitude| / omega_z");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open configuration file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
    return parse_config(j);
}

RunConfig with_axis(const RunConfig& cfg, const std::string& axis, double value) {
    RunConfig out = cfg;
    if (!std::isfinite(value)) fail("sweep.values", "must be finite");
    if (axis == "omega_x") {
        if (value < 0.0) fail("sweep.values", "omega_x must be non-negative");
        out.system.omega_x = value;
    } else if (axis == "detuning") {
        out.system.detuning = value;
    } else if (axis == "phi" || axis == "r") {
        if (out.harmonics.size() < 2) fail("sweep.axis", "'" + axis + "' needs at least two harmonics");
        if (axis == "phi") {
            out.harmonics[1].phase_pi = value;
        } else {
            out.harmonics[1].amplitude = value * out.harmonics[0].amplitude;
        }
    } else {
        fail("sweep.axis", "unknown axis '" + axis + "' (expected omega_x, detuning, phi or r)");
    }
    return out;
}

} // namespace fluoro::cli
