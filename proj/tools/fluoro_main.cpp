// fluoro — resonance-fluorescence spectra of a frequency-modulated two-level system.
//
//   fluoro run <config.json> [--out-dir DIR] [--threads N]
//   fluoro sweep <config.json> --axis NAME --values v1,v2,... [--out-dir DIR] [--threads N]
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluoro/cli/config.hpp"
#include "fluoro/cli/runner.hpp"
#include "fluoro/errors.hpp"
#include "fluoro/kernels.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    for (std::string tok; std::getline(ss, tok, ',');) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos) {
            throw fluoro::ValidationError("--values: cannot parse '" + tok + "' as a number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw fluoro::ValidationError("--values: no values given");
    return out;
}

// --threads wins over FLUO_THREADS; neither leaves the OpenMP default.
void configure_threads(int flag) {
    int n = flag;
    if (n <= 0) {
        if (const char* env = std::getenv("FLUO_THREADS")) n = std::atoi(env);
    }
    fluoro::kernels::set_threads(n);
}

void print_warnings(const fluoro::cli::RunResult& res) {
    for (const auto& rr : res.routes) {
        for (const auto& w : rr.spectrum.warnings) {
            std::cerr << "warning: route " << fluoro::cli::to_string(rr.route) << ": " << w << "\n";
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance-fluorescence spectra of a frequency-modulated two-level system"};
    app.fallthrough();  // global options may follow the subcommand
    app.require_subcommand(1);
    std::string out_dir = ".";
    int threads = 0;
    app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (overrides FLUO_THREADS)");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run all routes requested by a configuration");
    run->add_option("config", config_path, "JSON configuration")->required();

    std::string axis;
    std::string values;
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate results");
    sweep->add_option("config", config_path, "JSON configuration")->required();
    sweep->add_option("--axis", axis, "omega_x, detuning, phi or r");
    sweep->add_option("--values", values, "Comma-separated values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        configure_threads(threads);
        auto cfg = fluoro::cli::load_config(config_path);
        if (run->parsed()) {
            const auto res = fluoro::cli::execute(cfg);
            print_warnings(res);
            for (const auto& p : fluoro::cli::write_run(res, out_dir)) std::cout << p << "\n";
            return 0;
        }
        std::vector<double> vals;
        if (!values.empty()) {
            vals = parse_values(values);
        } else if (cfg.sweep) {
            vals = cfg.sweep->values;
        }
        if (axis.empty() && cfg.sweep) axis = cfg.sweep->axis;
        if (axis.empty()) throw fluoro::ValidationError("--axis: required (or give sweep.axis in the config)");
        if (vals.empty()) throw fluoro::ValidationError("--values: required (or give sweep.values in the config)");
        cfg.sweep = fluoro::cli::SweepSpec{axis, vals};
        const auto rows = fluoro::cli::run_sweep(cfg, axis, vals);
        int failures = 0;
        for (const auto& r : rows) {
            if (!r.error.empty()) {
                ++failures;
                std::cerr << "warning: " << axis << " = " << r.value << ": " << r.error << "\n";
            }
        }
        std::cout << fluoro::cli::write_sweep(cfg, axis, rows, out_dir) << "\n";
        if (failures > 0) std::cerr << failures << " of " << rows.size() << " sweep points failed\n";
        return 0;
    } catch (const fluoro::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const fluoro::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
