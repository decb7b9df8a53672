#pragma once

// Skew-information and Fisher-information correlation measures for a qubit
// (the measured side) coupled to an n-level partner, so rho has dimension 2n.
// Local observables are H = (sigma . r) (x) 1_n with |r| = 1.

#include <array>
#include <cstddef>
#include <vector>

#include "dipolarqc/model.hpp"
#include "dipolarqc/qmat.hpp"

namespace dqc {

enum class MeasureKind { lqu, lqfi };

const char* to_string(MeasureKind kind);

struct CorrelationResult {
    double value;                            // 1 - max(matrix_eigenvalues)
    std::array<double, 3> matrix_eigenvalues;  // of W (LQU) or M (lQFI), ascending
    BlochVector optimal_direction;           // eigenvector of the largest eigenvalue
    MeasureKind kind;
};

// I(rho, H) = -1/2 Tr([sqrt rho, H]^2) = Tr(rho H^2) - Tr(sqrt rho H sqrt rho H).
double skew_information(const ComplexMatrix& rho, const ComplexMatrix& h);

// F(rho, H) = 1/2 sum_{i != j} (p_i - p_j)^2 / (p_i + p_j) |<i|H|j>|^2, i.e. Tr(rho L^2)/4.
// Pairs with p_i + p_j <= 1e-15 are dropped.
double qfi(const ComplexMatrix& rho, const ComplexMatrix& h);

CorrelationResult lqu(const ComplexMatrix& rho);
// Uses the state's closed-form populations and eigenbasis for sqrt(rho).
CorrelationResult lqu(const ThermalState& state);

CorrelationResult lqfi(const ComplexMatrix& rho);
CorrelationResult lqfi(const ThermalState& state);

CorrelationResult measure(const ThermalState& state, MeasureKind kind);

// Deterministic Fibonacci lattice on the upper hemisphere (z > 0).
std::vector<BlochVector> fibonacci_hemisphere(std::size_t n);

struct OracleMinimum {
    double value;
    BlochVector direction;
    std::size_t index;  // lattice index of the minimum
};

// Minimizes skew_information or qfi at H = (sigma . r) (x) 1 over a Fibonacci
// lattice of n_directions points. Functionals are even in r, so the upper
// hemisphere covers all observables. Requires n_directions >= 100.
OracleMinimum brute_force_minimize(const ComplexMatrix& rho, MeasureKind kind, std::size_t n_directions);

// Throws NotDensityMatrix unless rho is Hermitian, PSD and unit-trace to 1e-10.
void require_density_matrix(const ComplexMatrix& rho);

}  // namespace dqc
