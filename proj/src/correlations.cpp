#include "dipolarqc/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dipolarqc/errors.hpp"

namespace dqc {

namespace {

constexpr double kPairCutoff = 1e-15;
constexpr std::array<PauliAxis, 3> kAxes{PauliAxis::x, PauliAxis::y, PauliAxis::z};

std::size_t partner_dim(const ComplexMatrix& rho) {
    if (rho.dim() < 2 || rho.dim() % 2 != 0) {
        std::ostringstream os;
        os << "state of dimension " << rho.dim() << " has no qubit factor";
        throw DimensionMismatch(os.str());
    }
    return rho.dim() / 2;
}

// sigma_axis (x) 1_n
std::array<ComplexMatrix, 3> local_paulis(std::size_t n) {
    const auto id = ComplexMatrix::identity(n);
    return {kron(pauli(kAxes[0]), id), kron(pauli(kAxes[1]), id), kron(pauli(kAxes[2]), id)};
}

void require_same_dim(const ComplexMatrix& rho, const ComplexMatrix& h) {
    if (rho.dim() != h.dim()) {
        std::ostringstream os;
        os << "state dimension " << rho.dim() << " does not match observable dimension " << h.dim();
        throw DimensionMismatch(os.str());
    }
    if (!h.is_hermitian()) throw NotHermitian("observable is not Hermitian");
}

double skew_with_root(const ComplexMatrix& rho, const ComplexMatrix& root, const ComplexMatrix& h) {
    const ComplexMatrix rh = root * h;
    return ((rho * h) * h).trace().real() - (rh * rh).trace().real();
}

// h_eig is the observable expressed in the eigenbasis of rho.
double qfi_in_eigenbasis(std::span<const double> probs, const ComplexMatrix& h_eig) {
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (i == j) continue;
            const double total = probs[i] + probs[j];
            if (total <= kPairCutoff) continue;
            const double diff = probs[i] - probs[j];
            sum += diff * diff / total * std::norm(h_eig(i, j));
        }
    return 0.5 * sum;
}

std::vector<double> clamped(std::vector<double> probs) {
    for (auto& p : probs) p = std::max(p, 0.0);
    return probs;
}

// Symmetrizes a 3x3 matrix that should be real symmetric and returns its real part.
ComplexMatrix real_symmetric_part(const ComplexMatrix& m, const char* name) {
    const ComplexMatrix sym = (m + m.transpose()) * 0.5;
    ComplexMatrix out(3);
    double residue = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            out(i, j) = sym(i, j).real();
            residue = std::max(residue, std::abs(sym(i, j).imag()));
        }
    if (residue > 1e-12) {
        std::ostringstream os;
        os << name << " matrix has imaginary residue " << residue;
        throw NumericError(os.str());
    }
    return out;
}

CorrelationResult result_from_matrix(const ComplexMatrix& m, MeasureKind kind) {
    const auto eig = hermitian_eig(m);
    const auto top = eig.column(2);
    return CorrelationResult{1.0 - eig.eigenvalues[2],
                             {eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]},
                             BlochVector(top[0].real(), top[1].real(), top[2].real()),
                             kind};
}

// w_ij = Tr[sqrt(rho) A_i sqrt(rho) A_j]
CorrelationResult lqu_from_root(const ComplexMatrix& root) {
    const auto a = local_paulis(partner_dim(root));
    std::array<ComplexMatrix, 3> sa{root * a[0], root * a[1], root * a[2]};
    ComplexMatrix w(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) w(i, j) = (sa[i] * sa[j]).trace();
    return result_from_matrix(real_symmetric_part(w, "W"), MeasureKind::lqu);
}

// M_lk = sum_{i,j} 2 p_i p_j / (p_i + p_j) <i|A_l|j><j|A_k|i>. The i = j terms
// (weight p_i) make 1 - r.M.r equal the QFI for every unit r.
CorrelationResult lqfi_from_spectrum(std::span<const double> probs, const ComplexMatrix& basis) {
    const auto a = local_paulis(partner_dim(basis));
    const ComplexMatrix vdag = basis.adjoint();
    std::array<ComplexMatrix, 3> s{vdag * a[0] * basis, vdag * a[1] * basis, vdag * a[2] * basis};
    ComplexMatrix m(3);
    const std::size_t n = probs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double total = probs[i] + probs[j];
            if (total <= kPairCutoff) continue;
            const double weight = 2.0 * probs[i] * probs[j] / total;
            if (weight == 0.0) continue;
            for (std::size_t l = 0; l < 3; ++l)
                for (std::size_t k = 0; k < 3; ++k) m(l, k) += weight * s[l](i, j) * s[k](j, i);
        }
    return result_from_matrix(real_symmetric_part(m, "M"), MeasureKind::lqfi);
}

}  // namespace

const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::lqu:
            return "lqu";
        case MeasureKind::lqfi:
            return "lqfi";
    }
    return "?";
}

void require_density_matrix(const ComplexMatrix& rho) {
    if (rho.dim() == 0) throw NotDensityMatrix("empty matrix is not a density matrix");
    if (!rho.is_hermitian()) throw NotDensityMatrix("density matrix is not Hermitian");
    const cplx tr = rho.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "density matrix trace is " << tr << ", expected 1";
        throw NotDensityMatrix(os.str());
    }
    const auto eig = hermitian_eig(rho);
    if (eig.eigenvalues.front() < -1e-10) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << eig.eigenvalues.front();
        throw NotDensityMatrix(os.str());
    }
}

double skew_information(const ComplexMatrix& rho, const ComplexMatrix& h) {
    require_same_dim(rho, h);
    require_density_matrix(rho);
    return skew_with_root(rho, matrix_sqrt_psd(rho), h);
}

double qfi(const ComplexMatrix& rho, const ComplexMatrix& h) {
    require_same_dim(rho, h);
    require_density_matrix(rho);
    const auto eig = hermitian_eig(rho);
    const ComplexMatrix h_eig = eig.eigenvectors.adjoint() * h * eig.eigenvectors;
    return qfi_in_eigenbasis(clamped(eig.eigenvalues), h_eig);
}

CorrelationResult lqu(const ComplexMatrix& rho) {
    partner_dim(rho);
    require_density_matrix(rho);
    return lqu_from_root(matrix_sqrt_psd(rho));
}

CorrelationResult lqu(const ThermalState& state) {
    std::array<double, 4> roots{};
    std::transform(state.probs.begin(), state.probs.end(), roots.begin(), [](double p) { return std::sqrt(p); });
    return lqu_from_root(reconstruct(state.basis, roots));
}

CorrelationResult lqfi(const ComplexMatrix& rho) {
    partner_dim(rho);
    require_density_matrix(rho);
    const auto eig = hermitian_eig(rho);
    return lqfi_from_spectrum(clamped(eig.eigenvalues), eig.eigenvectors);
}

CorrelationResult lqfi(const ThermalState& state) { return lqfi_from_spectrum(state.probs, state.basis); }

CorrelationResult measure(const ThermalState& state, MeasureKind kind) {
    return kind == MeasureKind::lqu ? lqu(state) : lqfi(state);
}

std::vector<BlochVector> fibonacci_hemisphere(std::size_t n) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<BlochVector> points;
    points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const double radius = std::sqrt(1.0 - z * z);
        const double phi = golden_angle * static_cast<double>(k);
        points.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
    return points;
}

OracleMinimum brute_force_minimize(const ComplexMatrix& rho, MeasureKind kind, std::size_t n_directions) {
    if (n_directions < 100) throw std::invalid_argument("brute_force_minimize: need at least 100 directions");
    const std::size_t n = partner_dim(rho);
    require_density_matrix(rho);

    const auto a = local_paulis(n);
    const auto lattice = fibonacci_hemisphere(n_directions);

    ComplexMatrix root;
    HermitianEigenSystem eig;
    std::vector<double> probs;
    std::array<ComplexMatrix, 3> a_eig;
    if (kind == MeasureKind::lqu) {
        root = matrix_sqrt_psd(rho);
    } else {
        eig = hermitian_eig(rho);
        probs = clamped(eig.eigenvalues);
        const ComplexMatrix vdag = eig.eigenvectors.adjoint();
        for (std::size_t l = 0; l < 3; ++l) a_eig[l] = vdag * a[l] * eig.eigenvectors;
    }

    auto evaluate = [&](const BlochVector& r) {
        if (kind == MeasureKind::lqu) {
            const ComplexMatrix h = a[0] * r.x() + a[1] * r.y() + a[2] * r.z();
            return skew_with_root(rho, root, h);
        }
        const ComplexMatrix h = a_eig[0] * r.x() + a_eig[1] * r.y() + a_eig[2] * r.z();
        return qfi_in_eigenbasis(probs, h);
    };

    struct Best {
        double value;
        std::size_t index;
    };
    auto scan = [&](std::size_t begin, std::size_t end) {
        Best best{evaluate(lattice[begin]), begin};
        for (std::size_t k = begin + 1; k < end; ++k) {
            const double v = evaluate(lattice[k]);
            if (v < best.value) best = {v, k};
        }
        return best;
    };

    // Chunked parallel scan; chunks are reduced in index order so ties go to the lowest index.
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, n_directions / 1000));
    std::vector<Best> partial(workers, Best{0.0, 0});
    if (workers == 1) {
        partial[0] = scan(0, n_directions);
    } else {
        std::vector<std::jthread> threads;
        const std::size_t chunk = (n_directions + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk, end = std::min(n_directions, begin + chunk);
            threads.emplace_back([&, w, begin, end] { partial[w] = scan(begin, end); });
        }
    }
    Best best = partial[0];
    for (std::size_t w = 1; w < workers; ++w)
        if (partial[w].value < best.value) best = partial[w];
    return OracleMinimum{best.value, lattice[best.index], best.index};
}

}  // namespace dqc
