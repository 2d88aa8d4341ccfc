// spectrum.hpp — spectrum container shared by the secular and exact routes.
//
// S(D) is normalized as Re int_0^inf g(tau) e^{-i D tau} dtau, so a line
// w * G / (G^2 + (D - D0)^2) has coefficient w (area pi * w) and a delta line
// c * delta(D - D0) carries weight c.

#pragma once

#include <string>
#include <vector>

namespace fluoro::spectrum {

enum class Family { central, sideband_plus, sideband_minus };

std::string to_string(Family f);

struct Line {
    double position{0.0};
    double weight{0.0};      // Lorentzian coefficient; integrated area is pi * weight
    double width{0.0};       // half width at half maximum
    Family family{Family::central};
    int l{0};
    double dispersive{0.0};  // coefficient of the antisymmetric (D - D0) / (G^2 + ...) part
};

struct CoherentLine {
    double position{0.0};
    double weight{0.0};
    int l{0};
};

struct Spectrum {
    std::vector<double> delta_grid;
    std::vector<double> s_inc;
    std::vector<CoherentLine> coherent_lines;
    std::vector<Line> line_table;
    std::vector<std::string> warnings;
};

// Odd number of points D_i = (i - (n - 1)/2) * h spanning [-max, max], exactly
// mirror symmetric. Throws ValidationError for even n or max <= 0.
std::vector<double> symmetric_grid(double max, int points);

inline constexpr int kDefaultGridPoints = 8001;
inline constexpr double kDefaultGridSpan = 4.0;  // in units of omega_z

// A = sum |S(D) - S(-D)| / sum |S(D) + S(-D)| on a mirror-symmetric grid.
double asymmetry(const std::vector<double>& s);

// Value of a single line (Lorentzian plus dispersive part) at D.
double line_value(const Line& line, double d) noexcept;

// Analytic integral of a line over [a, b].
double line_integral(const Line& line, double a, double b) noexcept;

// Sum of the weights of all lines positioned within tol of x.
double weight_at(const std::vector<Line>& lines, double x, double tol);

} // namespace fluoro::spectrum
