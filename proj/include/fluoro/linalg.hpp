// linalg.hpp — cyclic Jacobi eigensolver for small dense complex Hermitian matrices

#pragma once

#include <Eigen/Dense>

namespace fluoro::linalg {

struct HermitianEigen {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns, vectors.col(k) <-> values(k)
    int sweeps{0};
};

// Cyclic-by-row Jacobi. Iterates until the off-diagonal Frobenius norm drops
// below tol * ||A||_F. Only the Hermitian part of `a` is used.
HermitianEigen jacobi_eigh(const Eigen::MatrixXcd& a, double tol = 1e-15,
                           int max_sweeps = 60);

} // namespace fluoro::linalg
