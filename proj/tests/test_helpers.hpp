#pragma once

#include "phaselab/linalg.hpp"

#include <random>

// Shared test utilities. Every randomized input uses an explicit fixed seed.

namespace phaselab::testing {

inline ComplexMatrix random_matrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937& rng) {
    const ComplexMatrix m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_unitary(int n, std::mt19937& rng) {
    return unitarize(random_matrix(n, rng));
}

// Independent oracle for exp(-i H dt): scaling-and-squaring around a 40-term
// Taylor series, no eigendecomposition involved.
inline ComplexMatrix taylor_expm_oracle(const ComplexMatrix& h, double dt) {
    const Complex minus_i(0.0, -1.0);
    ComplexMatrix a = minus_i * dt * h;
    int squarings = 0;
    while (a.cwiseAbs().maxCoeff() * a.rows() > 0.25) {
        a *= 0.5;
        ++squarings;
    }
    ComplexMatrix term = ComplexMatrix::Identity(h.rows(), h.cols());
    ComplexMatrix sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = ComplexMatrix(term * a) / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Independent polar-factor oracle: Newton iteration W <- (W + W^-dagger)/2.
inline ComplexMatrix newton_polar_oracle(const ComplexMatrix& m) {
    ComplexMatrix w = m;
    for (int it = 0; it < 60; ++it) {
        const ComplexMatrix next = 0.5 * (w + w.inverse().adjoint());
        if ((next - w).norm() < 1e-15 * next.norm()) return next;
        w = next;
    }
    return w;
}

}  // namespace phaselab::testing
