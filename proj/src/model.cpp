#include "dipolarqc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dipolarqc/errors.hpp"

namespace dqc {

namespace {

using namespace std::complex_literals;

constexpr std::size_t k00 = 0, k01 = 1, k10 = 2, k11 = 3;

void require_finite(const ModelParams& p) {
    if (!std::isfinite(p.delta) || !std::isfinite(p.epsilon) || !std::isfinite(p.dm) ||
        !std::isfinite(p.temperature))
        throw NumericError("model parameters must be finite");
}

double eta_of(const ModelParams& p) { return std::hypot(3.0 * p.dm, p.delta); }

// The exponents b*delta/6, b*eps/2, b*eta/6 that appear in the Gibbs weights.
struct Exponents {
    double dipolar;  // b delta / 6
    double outer;    // b eps / 2
    double inner;    // b eta / 6
};

Exponents checked_exponents(const ModelParams& p) {
    require_finite(p);
    if (!(p.temperature > 0.0)) throw InvalidTemperature("temperature must be positive");
    const double beta = 1.0 / p.temperature;
    const Exponents e{beta * p.delta / 6.0, beta * p.epsilon / 2.0, beta * eta_of(p) / 6.0};
    // Each Gibbs weight is e^{+-dipolar} times e^{+-outer} or e^{+-inner}.
    const double worst = std::abs(e.dipolar) + std::max(std::abs(e.outer), std::abs(e.inner));
    if (!(worst <= kMaxExponent)) {
        std::ostringstream os;
        os << "Gibbs weight exponent " << worst << " exceeds " << kMaxExponent << " (T = " << p.temperature
           << ")";
        throw Overflow(os.str());
    }
    return e;
}

}  // namespace

ComplexMatrix build_hamiltonian(const ModelParams& p) {
    const double d6 = p.delta / 6.0;
    ComplexMatrix h(4);
    h(k00, k00) = d6;
    h(k11, k11) = d6;
    h(k01, k01) = -d6;
    h(k10, k10) = -d6;
    h(k00, k11) = p.epsilon / 2.0;
    h(k11, k00) = p.epsilon / 2.0;
    h(k01, k10) = -d6 + 0.5i * p.dm;
    h(k10, k01) = -d6 - 0.5i * p.dm;
    return h;
}

ClosedFormSpectrum closed_form_spectrum(const ModelParams& p) {
    const double eta = eta_of(p);
    ClosedFormSpectrum out{{(p.delta + 3.0 * p.epsilon) / 6.0, (-p.delta + eta) / 6.0, (-p.delta - eta) / 6.0,
                            (p.delta - 3.0 * p.epsilon) / 6.0},
                           ComplexMatrix(4),
                           eta};
    const double r = 1.0 / std::sqrt(2.0);
    auto& v = out.eigenvectors;
    v(k00, 0) = r;
    v(k11, 0) = r;
    v(k00, 3) = -r;
    v(k11, 3) = r;

    // Middle block [[-delta/6, c], [conj c, -delta/6]] with c = (-delta + 3iD)/6:
    // eigenvectors (+-c/|c|, 1)/sqrt2 for eigenvalues -delta/6 +- |c|.
    const cplx c = cplx{-p.delta, 3.0 * p.dm};
    const cplx phase = eta > 0.0 ? c / eta : cplx{1.0};
    v(k01, 1) = r * phase;
    v(k10, 1) = r;
    v(k01, 2) = -r * phase;
    v(k10, 2) = r;
    return out;
}

double partition_function(const ModelParams& p) {
    const auto e = checked_exponents(p);
    return 2.0 * std::exp(-e.dipolar) * std::cosh(e.outer) + 2.0 * std::exp(e.dipolar) * std::cosh(e.inner);
}

ComplexMatrix numeric_gibbs_state(const ModelParams& p) {
    checked_exponents(p);
    const auto eig = hermitian_eig(build_hamiltonian(p));
    const double beta = 1.0 / p.temperature;
    const double ground = eig.eigenvalues.front();
    std::vector<double> weights(eig.eigenvalues.size());
    for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = std::exp(-beta * (eig.eigenvalues[k] - ground));
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
    return reconstruct(eig.eigenvectors, weights);
}

ThermalState thermal_state(const ModelParams& p) {
    require_finite(p);
    if (!(p.temperature >= kMinTemperature)) {
        std::ostringstream os;
        os << "temperature " << p.temperature << " is below the floor " << kMinTemperature;
        throw InvalidTemperature(os.str());
    }
    const auto e = checked_exponents(p);
    const double eta = eta_of(p);

    const double rho11 = std::exp(-e.dipolar) * std::cosh(e.outer);
    const double rho14 = -std::exp(-e.dipolar) * std::sinh(e.outer);
    const double rho22 = std::exp(e.dipolar) * std::cosh(e.inner);
    // Off-diagonal of the |01>,|10> block carries the phase of -delta/6 + iD/2.
    const cplx rho23 = eta > 0.0 ? std::exp(e.dipolar) * std::sinh(e.inner) * cplx{p.delta, -3.0 * p.dm} / eta
                                 : cplx{};
    const double z = 2.0 * rho11 + 2.0 * rho22;

    ComplexMatrix rho(4);
    rho(k00, k00) = rho11 / z;
    rho(k11, k11) = rho11 / z;
    rho(k00, k11) = rho14 / z;
    rho(k11, k00) = rho14 / z;
    rho(k01, k01) = rho22 / z;
    rho(k10, k10) = rho22 / z;
    rho(k01, k10) = rho23 / z;
    rho(k10, k01) = std::conj(rho23) / z;

    // rho11 +- rho14 = e^{-b delta/6 -+ b eps/2}, rho22 +- |rho23| = e^{b delta/6 +- b eta/6};
    // written without the cosh - sinh cancellation.
    std::array<double, 4> probs{std::exp(-e.dipolar - e.outer) / z, std::exp(e.dipolar - e.inner) / z,
                                std::exp(e.dipolar + e.inner) / z, std::exp(-e.dipolar + e.outer) / z};
    std::sort(probs.begin(), probs.end(), std::greater<>());

    ComplexMatrix h = build_hamiltonian(p);
    auto eig = hermitian_eig(h);

    // Independent construction from the numeric spectrum.
    const double ground = eig.eigenvalues.front();
    std::array<double, 4> weights{};
    for (std::size_t k = 0; k < 4; ++k) weights[k] = std::exp(-(eig.eigenvalues[k] - ground) / p.temperature);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
    const ComplexMatrix numeric = reconstruct(eig.eigenvectors, weights);

    const double gap = max_abs_diff(rho, numeric);
    double prob_gap = 0.0;
    for (std::size_t k = 0; k < 4; ++k) prob_gap = std::max(prob_gap, std::abs(probs[k] - weights[k]));
    if (gap > 1e-10 || prob_gap > 1e-10) {
        std::ostringstream os;
        os << "thermal_state: closed-form and numeric Gibbs states differ by " << std::max(gap, prob_gap)
           << " at delta=" << p.delta << " epsilon=" << p.epsilon << " D=" << p.dm << " T=" << p.temperature;
        throw NumericError(os.str());
    }

    return ThermalState{std::move(rho), probs, std::move(eig.eigenvectors), std::move(h), p, z};
}

}  // namespace dqc
