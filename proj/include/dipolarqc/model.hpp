#pragma once

// Two spin-1/2 particles with dipolar coupling and a z-axis
// Dzyaloshinsky-Moriya term, and their Gibbs state (k_B = 1).
//
//   H = -(1/3) S1 . diag(delta - 3 eps, delta + 3 eps, -2 delta) . S2 + D (S1 x S2)_z,   S = sigma / 2
//
// Basis order is |00>, |01>, |10>, |11> with |0> the sigma_z = +1 state.

#include <array>

#include "dipolarqc/qmat.hpp"

namespace dqc {

inline constexpr double kMinTemperature = 1e-3;
// exp() arguments above this are rejected as overflow.
inline constexpr double kMaxExponent = 700.0;

struct ModelParams {
    double delta = 0.0;
    double epsilon = 0.0;
    double dm = 0.0;
    double temperature = 1.0;

    bool operator==(const ModelParams&) const = default;
};

struct ClosedFormSpectrum {
    // Ordered as lambda_1..lambda_4:
    //   lambda_{1,4} = (delta +- 3 eps) / 6      on (|11> +- |00>) / sqrt2
    //   lambda_{2,3} = (-delta +- eta) / 6       on the |01>, |10> block
    // with eta = sqrt(9 D^2 + delta^2).
    std::array<double, 4> eigenvalues;
    ComplexMatrix eigenvectors;  // column k <-> eigenvalues[k]
    double eta;
};

struct ThermalState {
    ComplexMatrix rho;
    std::array<double, 4> probs;  // descending
    ComplexMatrix basis;          // column k is the eigenvector of rho for probs[k]
    ComplexMatrix hamiltonian;
    ModelParams params;
    double partition;
};

ComplexMatrix build_hamiltonian(const ModelParams& p);

ClosedFormSpectrum closed_form_spectrum(const ModelParams& p);

// Z = 2 e^{-b delta/6} cosh(b eps/2) + 2 e^{b delta/6} cosh(b eta/6).
// Throws InvalidTemperature for T <= 0 and Overflow when an exponent would exceed 700.
double partition_function(const ModelParams& p);

// Builds the X-shaped Gibbs matrix in closed form and cross-checks it against
// V diag(e^{-b lambda}/Z) V^dagger from the numerically diagonalized Hamiltonian.
// Throws InvalidTemperature below kMinTemperature, Overflow, or NumericError if
// the two constructions disagree by more than 1e-10.
ThermalState thermal_state(const ModelParams& p);

// exp(-H/T)/Z from hermitian_eig alone.
ComplexMatrix numeric_gibbs_state(const ModelParams& p);

}  // namespace dqc
