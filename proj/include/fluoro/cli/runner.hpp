// runner.hpp — executes the requested routes for one configuration, assembles
// the comparison report and writes CSV / JSON outputs.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluoro/cli/config.hpp"
#include "fluoro/elements.hpp"
#include "fluoro/kernels.hpp"
#include "fluoro/model.hpp"
#include "fluoro/secular.hpp"
#include "fluoro/spectrum.hpp"

namespace fluoro::cli {

struct RouteResult {
    Route route{Route::exact};
    spectrum::Spectrum spectrum;
    double asymmetry{0.0};
    std::optional<double> splitting;
    std::optional<elements::TransitionElements> elements;
    std::optional<secular::SecularRates> rates;
    std::optional<elements::ParityReport> parity;
    std::vector<double> line_weights;   // one per configured line position
    nlohmann::json extra;               // route-specific diagnostics
};

struct RunResult {
    RunConfig config;
    model::ParityClass parity;
    std::vector<RouteResult> routes;
};

// Runs every requested route. A failing route raises its error with the route
// name prepended, preserving the error category.
RunResult execute(const RunConfig& cfg, kernels::Exec exec = kernels::Exec::parallel);

nlohmann::json report_json(const RunResult& result);

// CSV with a '#'-prefixed provenance header, column header, %.12e values.
std::string spectrum_csv(const RunResult& result);

// Writes <prefix>_spectrum.csv and <prefix>_report.json; returns the paths.
std::vector<std::string> write_run(const RunResult& result, const std::string& out_dir);

struct SweepRow {
    double value{0.0};
    std::optional<RunResult> result;
    std::string error;
};

// Points run concurrently (each point uses serial kernels); rows keep sweep order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& axis,
                                const std::vector<double>& values);

std::string sweep_csv(const RunConfig& cfg, const std::string& axis,
                      const std::vector<SweepRow>& rows);

// Writes <prefix>_sweep_<axis>.csv; returns the path.
std::string write_sweep(const RunConfig& cfg, const std::string& axis,
                        const std::vector<SweepRow>& rows, const std::string& out_dir);

} // namespace fluoro::cli
