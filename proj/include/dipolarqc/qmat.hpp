#pragma once

// Small dense complex linear algebra for 2x2 and 4x4 Hermitian problems.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dqc {

using cplx = std::complex<double>;

class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    // Row-major nested initializer; must be square.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix diagonal(std::initializer_list<double> values);
    // |v><v| for a column vector v.
    static ComplexMatrix outer(std::span<const cplx> v);

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    bool is_finite() const;
    // max|A_ij - conj(A_ji)| <= 1e-12 (1 + max_abs(A))
    bool is_hermitian() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

    bool operator==(const ComplexMatrix&) const = default;

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

// max_ij |A_ij - B_ij|; throws DimensionMismatch on different dims.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

enum class PauliAxis { identity, x, y, z };

ComplexMatrix pauli(PauliAxis axis);

// Kronecker product with row blocks indexed by A.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Unit-norm real 3-vector.
class BlochVector {
  public:
    // Normalizes the input; throws std::invalid_argument for a (near) zero vector.
    BlochVector(double x, double y, double z);
    explicit BlochVector(const std::array<double, 3>& r) : BlochVector(r[0], r[1], r[2]) {}

    double x() const { return r_[0]; }
    double y() const { return r_[1]; }
    double z() const { return r_[2]; }
    const std::array<double, 3>& components() const { return r_; }
    BlochVector operator-() const { return {-r_[0], -r_[1], -r_[2]}; }

  private:
    std::array<double, 3> r_;
};

// sigma . r
ComplexMatrix bloch_observable(const BlochVector& r);

struct HermitianEigenSystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k <-> eigenvalues[k]

    std::vector<cplx> column(std::size_t k) const;
};

// Cyclic complex Jacobi. Throws NotHermitian or NoConvergence.
HermitianEigenSystem hermitian_eig(const ComplexMatrix& a);

// V diag(values) V^dagger
ComplexMatrix reconstruct(const ComplexMatrix& basis, std::span<const double> values);

// Hermitian PSD square root. Eigenvalues in [-1e-10 max|A|, 0) are clamped to 0;
// anything more negative throws NotPSD.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a);

}  // namespace dqc
