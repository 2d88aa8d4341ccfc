#include "fluoro/spectrum.hpp"

#include <cmath>

#include "fluoro/errors.hpp"

namespace fluoro::spectrum {

std::string to_string(Family f) {
    switch (f) {
    case Family::central: return "central";
    case Family::sideband_plus: return "sideband_plus";
    case Family::sideband_minus: return "sideband_minus";
    }
    return "unknown";
}

std::vector<double> symmetric_grid(double max, int points) {
    if (!(max > 0.0) || !std::isfinite(max)) throw ValidationError("grid max must be positive");
    if (points < 3 || points % 2 == 0) throw ValidationError("grid points must be odd and >= 3");
    const int half = (points - 1) / 2;
    const double h = max / half;
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = (i - half) * h;
    return g;
}

double asymmetry(const std::vector<double>& s) {
    const std::size_t n = s.size();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += std::abs(s[i] - s[n - 1 - i]);
        den += std::abs(s[i] + s[n - 1 - i]);
    }
    return den > 0.0 ? num / den : 0.0;
}

double line_value(const Line& line, double d) noexcept {
    const double x = d - line.position;
    const double den = line.width * line.width + x * x;
    return (line.weight * line.width + line.dispersive * x) / den;
}

double line_integral(const Line& line, double a, double b) noexcept {
    const double g = line.width;
    const double xa = a - line.position;
    const double xb = b - line.position;
    double v = line.weight * (std::atan(xb / g) - std::atan(xa / g));
    v += 0.5 * line.dispersive * std::log((g * g + xb * xb) / (g * g + xa * xa));
    return v;
}

double weight_at(const std::vector<Line>& lines, double x, double tol) {
    double w = 0.0;
    for (const auto& ln : lines)
        if (std::abs(ln.position - x) <= tol) w += ln.weight;
    return w;
}

} // namespace fluoro::spectrum
