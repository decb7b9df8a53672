#pragma once

// Test-only generators and oracles. The oracles use Eigen's eigensolver so they
// stay independent of the Jacobi code under test.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dipolarqc/correlations.hpp"
#include "dipolarqc/model.hpp"
#include "dipolarqc/qmat.hpp"

namespace dqc::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t dim, double scale = 1.0) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = uniform(rng, -scale, scale);
        for (std::size_t j = i + 1; j < dim; ++j) {
            m(i, j) = cplx{uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

// Gram-Schmidt on a random complex matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
    for (auto& c : cols)
        for (auto& z : c) z = {g(rng), g(rng)};
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += std::conj(cols[j][i]) * cols[k][i];
            for (std::size_t i = 0; i < dim; ++i) cols[k][i] -= dot * cols[j][i];
        }
        double norm = 0.0;
        for (const auto& z : cols[k]) norm += std::norm(z);
        for (auto& z : cols[k]) z /= std::sqrt(norm);
    }
    ComplexMatrix u(dim);
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i) u(i, k) = cols[k][i];
    return u;
}

inline ModelParams random_params(Rng& rng) {
    return {uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, 0, 4), uniform(rng, 0.1, 5)};
}

inline BlochVector random_direction(Rng& rng) {
    std::normal_distribution<double> g;
    return BlochVector(g(rng), g(rng), g(rng));
}

inline ComplexMatrix pure_state(std::vector<cplx> amplitudes) {
    double norm = 0.0;
    for (const auto& a : amplitudes) norm += std::norm(a);
    for (auto& a : amplitudes) a /= std::sqrt(norm);
    return ComplexMatrix::outer(amplitudes);
}

inline ComplexMatrix singlet() { return pure_state({0.0, 1.0, -1.0, 0.0}); }

inline ComplexMatrix local_observable(const BlochVector& r) {
    return kron(bloch_observable(r), ComplexMatrix::identity(2));
}

template <typename Scalar>
using EMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
EMatrix<Scalar> to_eigen(const ComplexMatrix& m) {
    EMatrix<Scalar> out(m.dim(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            out(i, j) = {static_cast<Scalar>(m(i, j).real()), static_cast<Scalar>(m(i, j).imag())};
    return out;
}

inline std::vector<double> eigen_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<EMatrix<double>> solver(to_eigen(m));
    const auto& v = solver.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

// exp(-H/T) / Tr via Eigen.
inline ComplexMatrix eigen_gibbs(const ComplexMatrix& h, double temperature) {
    Eigen::SelfAdjointEigenSolver<EMatrix<double>> solver(to_eigen(h));
    const auto& lam = solver.eigenvalues();
    Eigen::VectorXd w = (-(lam.array() - lam.minCoeff()) / temperature).exp();
    w /= w.sum();
    const EMatrix<double> g = solver.eigenvectors() * w.cast<std::complex<double>>().asDiagonal() *
                              solver.eigenvectors().adjoint();
    ComplexMatrix out(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) out(i, j) = g(i, j);
    return out;
}

// QFI from the Bures fidelity between rho and e^{iH theta} rho e^{-iH theta}, for
// H = (sigma . r) (x) 1 with H^2 = 1:  F ~ 2 (1 - Tr sqrt(sqrt(rho) rho_theta sqrt(rho))) / theta^2.
// Evaluated in long double to keep the 1 - fidelity difference accurate.
inline double bures_qfi(const ComplexMatrix& rho, const BlochVector& r, double theta = 1e-4) {
    using LD = long double;
    using M = EMatrix<LD>;
    const M p = to_eigen<LD>(rho);
    const M h = to_eigen<LD>(local_observable(r));
    const std::complex<LD> i_sin{0.0L, std::sin(static_cast<LD>(theta))};
    const M u = M::Identity(4, 4) * std::cos(static_cast<LD>(theta)) + h * i_sin;
    const M rotated = u * p * u.adjoint();

    Eigen::SelfAdjointEigenSolver<M> root_solver(p);
    const M root = root_solver.operatorSqrt();
    const M inner = root * rotated * root;
    Eigen::SelfAdjointEigenSolver<M> inner_solver((inner + inner.adjoint()) / 2.0L);
    LD fidelity = 0.0L;
    for (Eigen::Index k = 0; k < inner_solver.eigenvalues().size(); ++k)
        fidelity += std::sqrt(std::max<LD>(inner_solver.eigenvalues()(k), 0.0L));
    return static_cast<double>(2.0L * (1.0L - fidelity) / (static_cast<LD>(theta) * static_cast<LD>(theta)));
}

}  // namespace dqc::testing
