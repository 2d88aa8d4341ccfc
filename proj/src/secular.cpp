#include "fluoro/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluoro/errors.hpp"
#include "fluoro/floquet.hpp"

namespace fluoro::secular {

using elements::TransitionElements;
using floquet::kMinus;
using floquet::kPlus;

SecularRates rates(const TransitionElements& elems, double kappa) {
    double s_pm = 0.0, s_mp = 0.0, s_pp = 0.0;
    for (int l = -elems.l_max; l <= elems.l_max; ++l) {
        s_pm += std::norm(elems.plus(kPlus, kMinus, l));
        s_mp += std::norm(elems.plus(kMinus, kPlus, l));
        s_pp += std::norm(elems.plus(kPlus, kPlus, l));
    }
    SecularRates r;
    r.gamma_rel = kappa * (s_pm + s_mp);
    r.gamma_deph = 0.5 * kappa * (s_pm + s_mp + 4.0 * s_pp);
    r.gamma_s = kappa * s_mp;
    if (r.gamma_rel < 1e-14 * kappa) {
        throw NoRelaxationError("relaxation rate vanishes; the secular route does not apply");
    }
    r.rho_pp_ss = r.gamma_s / r.gamma_rel;
    r.rho_mm_ss = 1.0 - r.rho_pp_ss;
    return r;
}

spectrum::Spectrum secular_spectrum(const TransitionElements& elems, const SecularRates& r,
                                    double splitting, double omega_z,
                                    const std::vector<double>& grid, kernels::Exec exec) {
    using spectrum::Family;
    spectrum::Spectrum out;
    out.delta_grid = grid;
    if (!(splitting > 10.0 * std::max(r.gamma_rel, r.gamma_deph))) {
        out.warnings.push_back("splitting is not large compared to the relaxation rates; "
                               "the secular approximation may be inaccurate");
    }
    const double rpp = r.rho_pp_ss;
    const double rmm = r.rho_mm_ss;
    std::vector<spectrum::Line> lines;
    std::vector<spectrum::CoherentLine> coherent;
    for (int l = -elems.l_max; l <= elems.l_max; ++l) {
        const double xpp = std::norm(elems.plus(kPlus, kPlus, l));
        const double xpm = std::norm(elems.plus(kPlus, kMinus, l));
        const double xmp = std::norm(elems.plus(kMinus, kPlus, l));
        const double lw = l * omega_z;
        lines.push_back({lw, 4.0 * xpp * rpp * rmm, r.gamma_rel, Family::central, l, 0.0});
        lines.push_back({lw + splitting, xpm * rpp, r.gamma_deph, Family::sideband_plus, l, 0.0});
        lines.push_back({lw - splitting, xmp * rmm, r.gamma_deph, Family::sideband_minus, l, 0.0});
        coherent.push_back({lw, std::numbers::pi * xpp * (rpp - rmm) * (rpp - rmm), l});
    }
    double wmax = 0.0;
    for (const auto& ln : lines) wmax = std::max(wmax, ln.weight);
    for (const auto& c : coherent) wmax = std::max(wmax, c.weight);
    const double cut = 1e-12 * wmax;
    for (const auto& ln : lines)
        if (ln.weight > cut) out.line_table.push_back(ln);
    for (const auto& c : coherent)
        if (c.weight > cut) out.coherent_lines.push_back(c);
    out.s_inc = kernels::lorentzian_sum(out.line_table, grid, exec);
    return out;
}

double total_weight(const TransitionElements& elems, const SecularRates& r) {
    const double rpp = r.rho_pp_ss;
    const double rmm = r.rho_mm_ss;
    double s = 0.0;
    for (int l = -elems.l_max; l <= elems.l_max; ++l) {
        const double xpp = std::norm(elems.plus(kPlus, kPlus, l));
        s += 4.0 * xpp * rpp * rmm + std::norm(elems.plus(kPlus, kMinus, l)) * rpp +
             std::norm(elems.plus(kMinus, kPlus, l)) * rmm + xpp * (rpp - rmm) * (rpp - rmm);
    }
    return s;
}

double mirror_condition_residual(const TransitionElements& elems, const SecularRates& r) {
    double res = 0.0;
    for (int l = -elems.l_max; l <= elems.l_max; ++l) {
        res = std::max(res, std::abs(std::abs(elems.plus(kPlus, kPlus, l)) -
                                     std::abs(elems.plus(kPlus, kPlus, -l))));
        res = std::max(res, std::abs(std::norm(elems.plus(kPlus, kMinus, l)) * r.rho_pp_ss -
                                     std::norm(elems.plus(kMinus, kPlus, -l)) * r.rho_mm_ss));
    }
    return res;
}

} // namespace fluoro::secular
