#include "fluoro/cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fluoro/errors.hpp"
#include "fluoro/exact.hpp"
#include "fluoro/floquet.hpp"
#include "fluoro/vanvleck.hpp"

namespace fluoro::cli {

using nlohmann::json;

namespace {

// Elements reported in sweep rows: x^{(+)}_{++,l} for these l.
constexpr int kReportedL[] = {-2, -1, 1, 2};

std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

double position_tolerance(const RunConfig& cfg) { return 1e-6 * cfg.omega_z; }

std::vector<double> line_weights(const RunConfig& cfg, const std::vector<spectrum::Line>& lines) {
    std::vector<double> w;
    for (double x : cfg.line_positions) w.push_back(spectrum::weight_at(lines, x, position_tolerance(cfg)));
    return w;
}

json parity_json(const elements::ParityReport& r) {
    json j;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    j["lambda_plus"] = opt(r.lambda_plus);
    j["lambda_minus"] = opt(r.lambda_minus);
    j["lambda_residual"] = r.lambda_residual;
    j["mirror_identity_residual"] = opt(r.mirror_identity_residual);
    j["magnitude_identity_residual"] = r.magnitude_identity_residual;
    j["evenp_residuals"] = r.evenp_residuals ? json(*r.evenp_residuals) : json(nullptr);
    j["evenp_gauge_phase"] = opt(r.evenp_gauge_phase);
    j["theta0"] = opt(r.theta0);
    return j;
}

json lines_json(const std::vector<spectrum::Line>& lines) {
    json a = json::array();
    for (const auto& ln : lines) {
        a.push_back({{"position", ln.position}, {"weight", ln.weight}, {"width", ln.width},
                     {"family", spectrum::to_string(ln.family)}, {"l", ln.l},
                     {"dispersive", ln.dispersive}});
    }
    return a;
}

json coherent_json(const std::vector<spectrum::CoherentLine>& lines) {
    json a = json::array();
    for (const auto& c : lines) a.push_back({{"position", c.position}, {"weight", c.weight}, {"l", c.l}});
    return a;
}

json elements_json(const elements::TransitionElements& e) {
    json j;
    const char* names[2][2] = {{"pp", "pm"}, {"mp", "mm"}};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            json arr = json::array();
            for (int l = -e.l_max; l <= e.l_max; ++l) {
                const cplx x = e.plus(a, b, l);
                arr.push_back({{"l", l}, {"re", x.real()}, {"im", x.imag()}});
            }
            j[names[a][b]] = arr;
        }
    }
    j["parseval"] = e.parseval();
    j["backend"] = e.backend;
    return j;
}

// Rethrows with the route name prepended, keeping the error category.
[[noreturn]] void rethrow_with_route(Route r, const std::exception& e) {
    const std::string msg = "route " + to_string(r) + ": " + e.what();
    if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(msg);
    throw NumericalError(msg);
}

RouteResult run_secular(const RunConfig& cfg, Route route, const model::ParityClass& parity,
                        const std::vector<double>& grid, kernels::Exec exec) {
    const auto mod = cfg.modulation();
    const auto& n = cfg.numerics;
    RouteResult rr;
    rr.route = route;
    elements::TransitionElements elems;
    elements::ParityReport report;
    double splitting = 0.0;
    if (route == Route::secular_vanvleck) {
        const auto vv = vanvleck::vanvleck_solution(cfg.system, mod, n.vv_j_max);
        elems = vanvleck::vanvleck_elements(vv, n.l_max);
        splitting = vv.Omega_m;
        rr.extra["m"] = vv.m;
        rr.extra["validity_margin"] = vv.validity_margin;
        rr.extra["theta0"] = vv.theta0;
        rr.extra["u"] = {vv.u.real(), vv.u.imag()};
        rr.extra["v"] = vv.v;
        rr.spectrum.warnings = vv.warnings;
    } else {
        const auto sol = route == Route::secular_monodromy
                             ? floquet::solve_floquet(cfg.system, mod, n.steps_per_period, n.n_time_samples)
                             : floquet::solve_floquet_sambe(cfg.system, mod, cfg.sambe_cutoff(), n.n_time_samples);
        elems = elements::transition_elements(sol, n.l_max);
        report = elements::parity_eigenvalues(sol, parity);
        splitting = sol.splitting;
        rr.extra["quasienergy_plus"] = sol.quasienergy_plus;
        rr.extra["quasienergy_minus"] = sol.quasienergy_minus;
        if (route == Route::secular_monodromy) rr.extra["unitarity_defect"] = sol.unitarity_defect;
    }
    report = elements::verify_identities(elems, report, mod, cfg.system);
    const auto rates = secular::rates(elems, cfg.system.kappa);
    auto spec = secular::secular_spectrum(elems, rates, splitting, cfg.omega_z, grid, exec);
    spec.warnings.insert(spec.warnings.begin(), rr.spectrum.warnings.begin(), rr.spectrum.warnings.end());
    rr.spectrum = std::move(spec);
    rr.asymmetry = spectrum::asymmetry(rr.spectrum.s_inc);
    rr.splitting = splitting;
    rr.elements = elems;
    rr.rates = rates;
    rr.parity = report;
    rr.line_weights = line_weights(cfg, rr.spectrum.line_table);
    return rr;
}

RouteResult run_exact(const RunConfig& cfg, const std::vector<double>& grid, kernels::Exec exec) {
    const auto mod = cfg.modulation();
    const auto& n = cfg.numerics;
    exact::CorrelationOptions opts;
    opts.n_tprime = n.n_tprime;
    opts.tau_max = n.tau_max;
    opts.steps_per_period = n.steps_per_period;
    opts.samples_per_period = n.tau_samples_per_period;
    const auto steady = exact::steady_state_exact(cfg.system, mod, n.steps_per_period, n.tau_samples_per_period);
    const auto trace = exact::correlation(cfg.system, mod, steady, opts, exec);
    const auto dec = exact::exact_lines(cfg.system, mod, steady, n.l_max);

    RouteResult rr;
    rr.route = Route::exact;
    rr.spectrum = exact::exact_spectrum(trace, grid, n.apodization, exec);
    rr.spectrum.line_table = dec.lines;
    rr.asymmetry = spectrum::asymmetry(rr.spectrum.s_inc);
    rr.line_weights = line_weights(cfg, dec.lines);
    double max_im = 0.0;
    for (const auto& g : trace.g1) max_im = std::max(max_im, std::abs(g.imag()));
    const auto chain = exact::parity_chain(cfg.system, mod, steady);
    json exps = json::array();
    for (const auto& e : dec.exponents) exps.push_back({e.real(), e.imag()});
    rr.extra = {{"mean_pi_plus", steady.mean_pi_plus()},
                {"g1_zero", trace.g1.front().real()},
                {"max_imag_g1_relative", max_im / std::abs(trace.g1.front())},
                {"decomposition_total_weight", dec.total_weight},
                {"floquet_exponents", exps},
                {"trace_defect", exact::trace_defect(steady)},
                {"hermiticity_defect", exact::hermiticity_defect(steady)},
                {"parity_chain",
                 {{"liouvillian", chain.liouvillian},
                  {"steady_state", chain.steady_state},
                  {"principal", chain.principal},
                  {"correlation", chain.correlation}}}};
    return rr;
}

std::string provenance(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# fluoro resolved configuration\n";
    std::istringstream lines(cfg.resolved().dump(2));
    for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

RunResult execute(const RunConfig& cfg, kernels::Exec exec) {
    RunResult res;
    res.config = cfg;
    const auto mod = cfg.modulation();
    res.parity = model::classify_parity(cfg.system, mod);
    const auto grid = spectrum::symmetric_grid(cfg.grid_max(), cfg.numerics.grid_points);
    for (Route r : cfg.routes) {
        try {
            if (r == Route::exact) {
                res.routes.push_back(run_exact(cfg, grid, exec));
            } else {
                res.routes.push_back(run_secular(cfg, r, res.parity, grid, exec));
            }
        } catch (const std::exception& e) {
            rethrow_with_route(r, e);
        }
    }
    return res;
}

json report_json(const RunResult& result) {
    const auto& cfg = result.config;
    json j;
    j["config"] = cfg.resolved();
    j["parity_classification"] = {{"has_generalized_parity", result.parity.has_generalized_parity},
                                  {"case", model::to_string(result.parity.case_label)},
                                  {"waveform_residual", result.parity.waveform_residual},
                                  {"detuning_residual", result.parity.detuning_residual},
                                  {"reflection_residual", result.parity.reflection_residual},
                                  {"tolerance", result.parity.tolerance}};
    json routes = json::object();
    for (const auto& rr : result.routes) {
        json r;
        r["asymmetry"] = rr.asymmetry;
        r["splitting"] = rr.splitting ? json(*rr.splitting) : json(nullptr);
        if (rr.rates) {
            r["rates"] = {{"gamma_rel", rr.rates->gamma_rel}, {"gamma_deph", rr.rates->gamma_deph},
                          {"gamma_s", rr.rates->gamma_s}, {"rho_pp_ss", rr.rates->rho_pp_ss},
                          {"rho_mm_ss", rr.rates->rho_mm_ss}};
        }
        if (rr.parity) r["parity_report"] = parity_json(*rr.parity);
        if (rr.elements) r["elements"] = elements_json(*rr.elements);
        r["line_table"] = lines_json(rr.spectrum.line_table);
        r["coherent_lines"] = coherent_json(rr.spectrum.coherent_lines);
        json lw = json::array();
        for (std::size_t i = 0; i < cfg.line_positions.size(); ++i) {
            lw.push_back({{"position", cfg.line_positions[i]}, {"weight", rr.line_weights[i]}});
        }
        r["line_weights"] = lw;
        r["warnings"] = rr.spectrum.warnings;
        if (!rr.extra.is_null()) r["diagnostics"] = rr.extra;
        routes[to_string(rr.route)] = r;
    }
    j["routes"] = routes;

    // Pairwise max |S_a - S_b| relative to max S_a.
    json dev = json::object();
    for (std::size_t a = 0; a < result.routes.size(); ++a) {
        for (std::size_t b = a + 1; b < result.routes.size(); ++b) {
            const auto& sa = result.routes[a].spectrum.s_inc;
            const auto& sb = result.routes[b].spectrum.s_inc;
            double d = 0.0;
            double peak = 0.0;
            for (std::size_t i = 0; i < sa.size(); ++i) {
                d = std::max(d, std::abs(sa[i] - sb[i]));
                peak = std::max(peak, std::abs(sa[i]));
            }
            dev[to_string(result.routes[a].route) + "_vs_" + to_string(result.routes[b].route)] =
                peak > 0.0 ? d / peak : 0.0;
        }
    }
    j["cross_route_max_deviation"] = dev;
    return j;
}

std::string spectrum_csv(const RunResult& result) {
    std::ostringstream os;
    os << provenance(result.config);
    os << "delta";
    for (const auto& rr : result.routes) os << ",s_inc_" << to_string(rr.route);
    os << "\n";
    if (result.routes.empty()) return os.str();
    const auto& grid = result.routes.front().spectrum.delta_grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt(grid[i]);
        for (const auto& rr : result.routes) os << "," << fmt(rr.spectrum.s_inc[i]);
        os << "\n";
    }
    return os.str();
}

std::vector<std::string> write_run(const RunResult& result, const std::string& out_dir) {
    const auto& prefix = result.config.prefix;
    const auto csv = join_path(out_dir, prefix + "_spectrum.csv");
    const auto rep = join_path(out_dir, prefix + "_report.json");
    write_file(csv, spectrum_csv(result));
    write_file(rep, report_json(result).dump(2) + "\n");
    return {csv, rep};
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& axis,
                                const std::vector<double>& values) {
    // Validate the axis up front so a bad axis is a configuration error, not per-row noise.
    if (!values.empty()) (void)with_axis(cfg, axis, values.front());
    const long n = static_cast<long>(values.size());
    std::vector<SweepRow> rows(values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        row.value = values[static_cast<std::size_t>(i)];
        try {
            row.result = execute(with_axis(cfg, axis, row.value), kernels::Exec::serial);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    return rows;
}

std::string sweep_csv(const RunConfig& cfg, const std::string& axis,
                      const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << provenance(cfg);
    os << "# sweep axis: " << axis << "\n";
    os << axis;
    for (Route r : cfg.routes) {
        const std::string name = to_string(r);
        os << ",asymmetry_" << name;
        if (r != Route::exact) {
            os << ",splitting_" << name;
            for (int l : kReportedL) os << ",abs_x_pp_" << (l < 0 ? "m" : "p") << std::abs(l) << "_" << name;
        }
        for (std::size_t k = 0; k < cfg.line_positions.size(); ++k) os << ",weight_" << k << "_" << name;
    }
    os << ",status\n";
    for (const auto& row : rows) {
        os << fmt(row.value);
        for (Route r : cfg.routes) {
            const RouteResult* rr = nullptr;
            if (row.result) {
                for (const auto& x : row.result->routes)
                    if (x.route == r) rr = &x;
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            os << "," << fmt(rr ? rr->asymmetry : nan);
            if (r != Route::exact) {
                os << "," << fmt(rr && rr->splitting ? *rr->splitting : nan);
                for (int l : kReportedL) {
                    os << "," << fmt(rr && rr->elements ? std::abs(rr->elements->plus(0, 0, l)) : nan);
                }
            }
            for (std::size_t k = 0; k < cfg.line_positions.size(); ++k) {
                os << "," << fmt(rr ? rr->line_weights[k] : nan);
            }
        }
        if (row.error.empty()) {
            os << ",ok\n";
        } else {
            std::string msg = row.error;
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            os << ",error: " << msg << "\n";
        }
    }
    return os.str();
}

std::string write_sweep(const RunConfig& cfg, const std::string& axis,
                        const std::vector<SweepRow>& rows, const std::string& out_dir) {
    const auto path = join_path(out_dir, cfg.prefix + "_sweep_" + axis + ".csv");
    write_file(path, sweep_csv(cfg, axis, rows));
    return path;
}

} // namespace fluoro::cli
