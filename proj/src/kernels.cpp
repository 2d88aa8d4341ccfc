#include "fluoro/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fluoro::kernels {

namespace {

double lorentz_point(const std::vector<spectrum::Line>& lines, double d) {
    double s = 0.0;
    for (const auto& ln : lines) s += spectrum::line_value(ln, d);
    return s;
}

// Phase resynchronization interval for the rotation recurrence.
constexpr std::size_t kResync = 64;

double fourier_point(const std::vector<cplx>& g, double dtau, double d, double eta) {
    const std::size_t n = g.size();
    if (n < 2) return 0.0;
    const cplx step = std::polar(std::exp(-eta * dtau), -d * dtau);
    cplx rot = 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k % kResync == 0) {
            const double tau = static_cast<double>(k) * dtau;
            rot = std::polar(std::exp(-eta * tau), -d * tau);
        }
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        acc += w * (g[k] * rot).real();
        rot *= step;
    }
    return acc * dtau;
}

} // namespace

std::vector<double> lorentzian_sum(const std::vector<spectrum::Line>& lines,
                                   const std::vector<double>& grid, Exec exec) {
    const long n = static_cast<long>(grid.size());
    std::vector<double> out(grid.size());
    if (exec == Exec::serial) {
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lorentz_point(lines, grid[static_cast<std::size_t>(i)]);
    } else {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lorentz_point(lines, grid[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<double> half_fourier(const std::vector<cplx>& g, double dtau,
                                 const std::vector<double>& grid, double eta, Exec exec) {
    const long n = static_cast<long>(grid.size());
    std::vector<double> out(grid.size());
    if (exec == Exec::serial) {
        for (long i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = fourier_point(g, dtau, grid[static_cast<std::size_t>(i)], eta);
    } else {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = fourier_point(g, dtau, grid[static_cast<std::size_t>(i)], eta);
    }
    return out;
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace fluoro::kernels
