#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dipolarqc/errors.hpp"
#include "dipolarqc/model.hpp"
#include "support.hpp"

using namespace dqc;
using namespace dqc::testing;
using namespace std::complex_literals;

namespace {

bool is_unitary(const ComplexMatrix& u, double tol) {
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.dim())) <= tol;
}

// Orthogonal projector onto `rank` random orthonormal vectors.
ComplexMatrix random_projector(Rng& rng, std::size_t dim, std::size_t rank) {
    const auto u = random_unitary(rng, dim);
    std::vector<double> ones(dim, 0.0);
    std::fill(ones.begin(), ones.begin() + static_cast<std::ptrdiff_t>(rank), 1.0);
    return reconstruct(u, ones);
}

}  // namespace

TEST_CASE("pauli matrices") {
    const auto x = pauli(PauliAxis::x), y = pauli(PauliAxis::y), z = pauli(PauliAxis::z);
    CHECK(z == ComplexMatrix::diagonal({1.0, -1.0}));
    CHECK(pauli(PauliAxis::identity) == ComplexMatrix::identity(2));
    CHECK(x * x == ComplexMatrix::identity(2));
    CHECK(commutator(x, y) == 2i * z);
    for (const auto& s : {x, y, z}) {
        CHECK(s.is_hermitian());
        CHECK(s.trace() == cplx{0.0});
        CHECK(s * s == ComplexMatrix::identity(2));
    }
}

TEST_CASE("kron") {
    CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
    CHECK(kron(pauli(PauliAxis::z), ComplexMatrix::identity(2)) == ComplexMatrix::diagonal({1.0, 1.0, -1.0, -1.0}));

    Rng rng(7);
    SUBCASE("index layout, row blocks from A") {
        const auto a = random_hermitian(rng, 2), b = random_hermitian(rng, 3);
        const auto k = kron(a, b);
        REQUIRE(k.dim() == 6);
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t q = 0; q < 3; ++q)
                    for (std::size_t s = 0; s < 3; ++s) CHECK(k(3 * p + q, 3 * r + s) == a(p, r) * b(q, s));
    }
    SUBCASE("trace is multiplicative") {
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = random_hermitian(rng, 2), b = random_hermitian(rng, 2);
            CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
        }
    }
    SUBCASE("associative") {
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = random_hermitian(rng, 2), b = random_hermitian(rng, 2), c = random_hermitian(rng, 2);
            CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) <= 1e-12);
        }
    }
}

TEST_CASE("BlochVector normalizes and rejects zero") {
    const BlochVector r(3.0, 0.0, 4.0);
    CHECK(r.x() == doctest::Approx(0.6));
    CHECK(r.z() == doctest::Approx(0.8));
    const double norm = std::sqrt(r.x() * r.x() + r.y() * r.y() + r.z() * r.z());
    CHECK(std::abs(norm - 1.0) <= 1e-12);
    CHECK_THROWS_AS(BlochVector(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK(bloch_observable(BlochVector(0, 0, 1)) == pauli(PauliAxis::z));
}

TEST_CASE("hermitian_eig on textbook inputs") {
    SUBCASE("diagonal") {
        const auto eig = hermitian_eig(ComplexMatrix::diagonal({3.0, 1.0, 2.0}));
        CHECK(eig.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});
    }
    SUBCASE("pauli x") {
        const auto eig = hermitian_eig(pauli(PauliAxis::x));
        CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
        const double r = 1.0 / std::sqrt(2.0);
        // Up to a global phase: (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2.
        const auto v0 = eig.column(0), v1 = eig.column(1);
        CHECK(std::abs(std::abs(v0[0] * r - v0[1] * r) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(v1[0] * r + v1[1] * r) - 1.0) < 1e-12);
    }
    SUBCASE("zero matrix") {
        const auto eig = hermitian_eig(ComplexMatrix(4));
        CHECK(eig.eigenvalues == std::vector<double>(4, 0.0));
        CHECK(eig.eigenvectors == ComplexMatrix::identity(4));
    }
    SUBCASE("dipolar Hamiltonian matches the closed-form spectrum") {
        const ModelParams p{2.0, 2.0, 1.0, 1.0};
        const auto eig = hermitian_eig(build_hamiltonian(p));
        auto expected = closed_form_spectrum(p).eigenvalues;
        std::sort(expected.begin(), expected.end());
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(eig.eigenvalues[k] - expected[k]) <= 1e-10);
    }
    SUBCASE("rejects non-Hermitian input") {
        ComplexMatrix m(2);
        m(0, 1) = 1.0;
        CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
    }
}

TEST_CASE("hermitian_eig invariants on 1000 random 4x4 matrices") {
    Rng rng(2024);
    double worst_recon = 0.0, worst_trace = 0.0, worst_vs_eigen = 0.0, worst_unitary = 0.0, worst_residual = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_hermitian(rng, 4, trial % 3 == 0 ? 10.0 : 1.0);
        const auto eig = hermitian_eig(a);
        const double scale = 1.0 + a.max_abs();
        CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
        worst_recon = std::max(worst_recon, max_abs_diff(a, reconstruct(eig.eigenvectors, eig.eigenvalues)) / scale);
        const double sum = std::accumulate(eig.eigenvalues.begin(), eig.eigenvalues.end(), 0.0);
        worst_trace = std::max(worst_trace, std::abs(sum - a.trace().real()));
        worst_unitary = std::max(worst_unitary,
                                 max_abs_diff(eig.eigenvectors.adjoint() * eig.eigenvectors, ComplexMatrix::identity(4)));
        const auto reference = eigen_eigenvalues(a);
        for (std::size_t k = 0; k < 4; ++k) {
            worst_vs_eigen = std::max(worst_vs_eigen, std::abs(reference[k] - eig.eigenvalues[k]) / scale);
            const auto v = eig.column(k);
            double residual = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                cplx row = 0.0;
                for (std::size_t j = 0; j < 4; ++j) row += a(i, j) * v[j];
                residual += std::norm(row - eig.eigenvalues[k] * v[i]);
            }
            worst_residual = std::max(worst_residual, std::sqrt(residual) / scale);
        }
    }
    CHECK(worst_recon <= 1e-10);
    CHECK(worst_trace <= 1e-10);
    CHECK(worst_unitary <= 1e-10);
    CHECK(worst_vs_eigen <= 1e-10);
    CHECK(worst_residual <= 1e-10);
}

TEST_CASE("hermitian_eig is deterministic and handles degeneracy") {
    Rng rng(3);
    const auto a = random_hermitian(rng, 4);
    const auto e1 = hermitian_eig(a), e2 = hermitian_eig(a);
    CHECK(e1.eigenvalues == e2.eigenvalues);
    CHECK(e1.eigenvectors == e2.eigenvectors);

    // Two-fold degenerate spectrum in a random basis.
    const auto u = random_unitary(rng, 4);
    const std::vector<double> values{-1.0, 2.0, 2.0, 5.0};
    const auto m = reconstruct(u, values);
    const auto eig = hermitian_eig((m + m.adjoint()) * 0.5);
    for (std::size_t k = 0; k < 4; ++k) CHECK(eig.eigenvalues[k] == doctest::Approx(values[k]).epsilon(1e-12));
    CHECK(is_unitary(eig.eigenvectors, 1e-12));
}

TEST_CASE("matrix_sqrt_psd") {
    CHECK(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::identity(4)), ComplexMatrix::identity(4)) <= 1e-15);
    CHECK(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::diagonal({4.0, 9.0, 0.0, 1.0})),
                       ComplexMatrix::diagonal({2.0, 3.0, 0.0, 1.0})) <= 1e-15);

    SUBCASE("thermal state squares back") {
        const auto rho = thermal_state({2.0, 2.0, 0.0, 1.0}).rho;
        const auto s = matrix_sqrt_psd(rho);
        CHECK(s.is_hermitian());
        CHECK(max_abs_diff(s * s, rho) <= 1e-9 * (1.0 + rho.max_abs()));
        CHECK(hermitian_eig(s).eigenvalues.front() >= 0.0);
    }
    SUBCASE("random PSD matrices") {
        Rng rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const auto b = random_hermitian(rng, 4);
            const auto a = b * b;
            const auto s = matrix_sqrt_psd(a);
            CHECK(max_abs_diff(s * s, a) <= 1e-9 * (1.0 + a.max_abs()));
        }
    }
    SUBCASE("projectors are their own square roots") {
        Rng rng(5);
        for (std::size_t rank = 0; rank <= 4; ++rank)
            for (int trial = 0; trial < 20; ++trial) {
                const auto p = random_projector(rng, 4, rank);
                // Rounding-level eigenvalues of 1e-16 map to ~1e-8 under sqrt.
                CHECK(max_abs_diff(matrix_sqrt_psd(p), p) <= 1e-7);
            }
    }
    SUBCASE("small negative eigenvalues are clamped, larger ones rejected") {
        CHECK(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::diagonal({1.0, -1e-13})),
                           ComplexMatrix::diagonal({1.0, 0.0})) == 0.0);
        CHECK_THROWS_AS(matrix_sqrt_psd(ComplexMatrix::diagonal({1.0, -1e-3})), NotPSD);
    }
}

TEST_CASE("arithmetic dimension checks") {
    CHECK_THROWS_AS(ComplexMatrix(2) + ComplexMatrix(3), DimensionMismatch);
    CHECK_THROWS_AS(ComplexMatrix(2) * ComplexMatrix(4), DimensionMismatch);
    ComplexMatrix bad(2);
    bad(0, 0) = std::nan("");
    CHECK_FALSE(bad.is_finite());
    CHECK_FALSE(bad.is_hermitian());
}
