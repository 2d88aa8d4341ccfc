#include "fluoro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "fluoro/errors.hpp"

namespace fluoro::linalg {

namespace {

double off_norm2(const Eigen::MatrixXcd& a) {
    double s = 0.0;
    const auto n = a.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

} // namespace

HermitianEigen jacobi_eigh(const Eigen::MatrixXcd& input, double tol, int max_sweeps) {
    if (input.rows() != input.cols()) {
        throw ValidationError("jacobi_eigh: matrix must be square");
    }
    const Eigen::Index n = input.rows();
    Eigen::MatrixXcd a = 0.5 * (input + input.adjoint());
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);

    const double scale2 = a.squaredNorm();
    const double target = tol * tol * std::max(scale2, 1e-300);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm2(a) <= target) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const std::complex<double> apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Skip rotations that cannot change the diagonal at working precision.
                if (sweep > 3 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                // Phase-reduce to a real symmetric 2x2 problem, then a classic rotation.
                const std::complex<double> phase = apq / mag;  // e^{i theta}
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // J = diag(1, e^{-i theta}) * [[c, s], [-s, c]]
                const std::complex<double> jpp = c;
                const std::complex<double> jpq = s;
                const std::complex<double> jqp = -s * std::conj(phase);
                const std::complex<double> jqq = c * std::conj(phase);

                // A <- A J (columns p, q)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto akp = a(k, p);
                    const auto akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                // A <- J^H A (rows p, q)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto apk = a(p, k);
                    const auto aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                // V <- V J
                for (Eigen::Index k = 0; k < n; ++k) {
                    const auto vkp = v(k, p);
                    const auto vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    if (off_norm2(a) > target * 1e4) {
        throw NumericalError("jacobi_eigh: no convergence within sweep limit");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    out.sweeps = sweep;
    return out;
}

} // namespace fluoro::linalg
