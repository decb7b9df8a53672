#include "dipolarqc/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dipolarqc/errors.hpp"

namespace dqc {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != dim_) throw std::invalid_argument("ComplexMatrix: rows must form a square matrix");
        std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
        ++i;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix::is_hermitian() const {
    if (!is_finite()) return false;
    const double tol = 1e-12 * (1.0 + max_abs());
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

namespace {
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw DimensionMismatch(os.str());
    }
}
}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    require_same_dim(lhs, rhs, "operator*");
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(i, k);
            if (a == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    return (a - b).max_abs();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix pauli(PauliAxis axis) {
    using namespace std::complex_literals;
    switch (axis) {
        case PauliAxis::identity:
            return ComplexMatrix::identity(2);
        case PauliAxis::x:
            return {{0.0, 1.0}, {1.0, 0.0}};
        case PauliAxis::y:
            return {{0.0, -1i}, {1i, 0.0}};
        case PauliAxis::z:
            return {{1.0, 0.0}, {0.0, -1.0}};
    }
    throw std::invalid_argument("pauli: unknown axis");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t p = 0; p < na; ++p)
        for (std::size_t r = 0; r < na; ++r) {
            const cplx apr = a(p, r);
            for (std::size_t q = 0; q < nb; ++q)
                for (std::size_t s = 0; s < nb; ++s) out(nb * p + q, nb * r + s) = apr * b(q, s);
        }
    return out;
}

BlochVector::BlochVector(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 1e-300) || !std::isfinite(n)) throw std::invalid_argument("BlochVector: zero or non-finite vector");
    r_ = {x / n, y / n, z / n};
}

ComplexMatrix bloch_observable(const BlochVector& r) {
    return pauli(PauliAxis::x) * r.x() + pauli(PauliAxis::y) * r.y() + pauli(PauliAxis::z) * r.z();
}

std::vector<cplx> HermitianEigenSystem::column(std::size_t k) const {
    std::vector<cplx> v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// A <- U^dagger A U and V <- V U, where U acts on coordinates (p, q) only.
void apply_rotation(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q,
                    const std::array<cplx, 4>& u) {
    const auto [upp, upq, uqp, uqq] = u;
    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * upp + akq * uqp;
        a(k, q) = akp * upq + akq * uqq;
        const cplx vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * upp + vkq * uqp;
        v(k, q) = vkp * upq + vkq * uqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
        a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

// Rotate each eigenvector so its largest component is real and positive.
void fix_phases(ComplexMatrix& v) {
    const std::size_t n = v.dim();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v(i, k)) > std::abs(v(best, k)) + 1e-12) best = i;
        const double mag = std::abs(v(best, k));
        if (mag == 0.0) continue;
        const cplx phase = std::conj(v(best, k)) / mag;
        for (std::size_t i = 0; i < n; ++i) v(i, k) *= phase;
        v(best, k) = std::abs(v(best, k));
    }
}

}  // namespace

HermitianEigenSystem hermitian_eig(const ComplexMatrix& input) {
    if (!input.is_hermitian()) throw NotHermitian("hermitian_eig: input is not Hermitian");
    const std::size_t n = input.dim();

    // Work on the exactly Hermitian part.
    ComplexMatrix a = (input + input.adjoint()) * 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);

    constexpr int kMaxSweeps = 100;
    const double threshold = 1e-13 * a.frobenius_norm();
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double mag = std::abs(b);
                if (mag == 0.0) continue;
                const cplx phase = std::conj(b) / mag;  // e^{-i arg b}
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // U = diag(1, e^{-i arg b}) * [[c, s], [-s, c]]
                apply_rotation(a, v, p, q, {cplx{c}, cplx{s}, -s * phase, c * phase});
            }
    }
    if (!converged && off_diagonal_norm(a) > threshold)
        throw NoConvergence("hermitian_eig: Jacobi iteration did not converge in 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    fix_phases(out.eigenvectors);
    return out;
}

ComplexMatrix reconstruct(const ComplexMatrix& basis, std::span<const double> values) {
    const std::size_t n = basis.dim();
    if (values.size() != n) throw DimensionMismatch("reconstruct: eigenvalue count does not match basis");
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (values[k] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = basis(i, k) * values[k];
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(basis(j, k));
        }
    }
    return out;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a) {
    auto eig = hermitian_eig(a);
    const double floor = -1e-10 * a.max_abs();
    if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < floor) {
        std::ostringstream os;
        os << "matrix_sqrt_psd: minimum eigenvalue " << eig.eigenvalues.front() << " is negative";
        throw NotPSD(os.str());
    }
    for (auto& lambda : eig.eigenvalues) lambda = std::sqrt(std::max(lambda, 0.0));
    const ComplexMatrix s = reconstruct(eig.eigenvectors, eig.eigenvalues);
    return (s + s.adjoint()) * 0.5;
}

}  // namespace dqc
