// Serial reference vs OpenMP kernels: wall time and agreement.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "fluoro/exact.hpp"
#include "fluoro/kernels.hpp"
#include "fluoro/model.hpp"

using namespace fluoro;

namespace {
double seconds(const std::function<void()>& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-16s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical=%s\n", name, serial,
                parallel, serial / parallel, identical ? "yes" : "no");
}
} // namespace

int main() {
    std::printf("threads: %d\n", kernels::max_threads());

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-160.0, 160.0);
    std::vector<spectrum::Line> lines;
    for (int i = 0; i < 200; ++i) lines.push_back({u(rng), 0.01, 0.75, spectrum::Family::central, 0, 0.001});
    const auto grid = spectrum::symmetric_grid(160.0, 8001);
    std::vector<double> a, b;
    const double ls = seconds([&] { a = kernels::lorentzian_sum(lines, grid, kernels::Exec::serial); }, 5);
    const double lp = seconds([&] { b = kernels::lorentzian_sum(lines, grid, kernels::Exec::parallel); }, 5);
    report("lorentzian_sum", ls, lp, a == b);

    const model::SystemParams sp{10.0, 0.0, 1.0};
    const auto mod = model::Modulation::biharmonic(40.0, 40.0, 3, 1.0, 0.0);
    const auto steady = exact::steady_state_exact(sp, mod);
    exact::CorrelationTrace ts, tp;
    const double cs = seconds([&] { ts = exact::correlation(sp, mod, steady, {}, kernels::Exec::serial); }, 1);
    const double cp = seconds([&] { tp = exact::correlation(sp, mod, steady, {}, kernels::Exec::parallel); }, 1);
    report("correlation", cs, cp, ts.g1 == tp.g1);

    const double fs = seconds([&] { a = kernels::half_fourier(ts.g1_incoherent, ts.dtau, grid, 0.0, kernels::Exec::serial); }, 2);
    const double fp = seconds([&] { b = kernels::half_fourier(ts.g1_incoherent, ts.dtau, grid, 0.0, kernels::Exec::parallel); }, 2);
    report("half_fourier", fs, fp, a == b);
    return 0;
}
