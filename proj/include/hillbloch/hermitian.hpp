#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hillbloch/error.hpp"

namespace hillbloch {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Entries are validated finite on
/// construction from data.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> d);
    /// Builds from nested rows; all rows must have the same length.
    static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    ComplexMatrix adjoint() const;
    std::vector<cplx> column(std::size_t j) const;

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cplx s) const;
    std::vector<cplx> operator*(std::span<const cplx> v) const;

    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column j pairs with values[j]; empty when values-only
};

struct EigenOptions {
    double hermitian_tol = 1e-12;  // relative to max |a_ij|
    int max_iterations = 60;       // implicit QL sweeps per eigenvalue
    double cluster_tol = 1e-13;    // relative to max |λ|; groups degenerate clusters
};

/// ‖A − A†‖_max. Throws NonSquare.
double hermitian_check(const ComplexMatrix& a);

/// Full Hermitian eigendecomposition: Householder reduction to a real
/// tridiagonal matrix followed by implicit QL. Eigenvalues ascending; within a
/// numerically degenerate cluster the basis is fixed by Gram-Schmidt of the
/// standard basis in index order, and every vector has its first nonzero
/// component real positive.
EigenDecomposition eig_hermitian(const ComplexMatrix& a, const EigenOptions& opt = {});

/// Eigenvalues only (ascending); skips all eigenvector work.
std::vector<double> eigvals_hermitian(const ComplexMatrix& a, const EigenOptions& opt = {});

double vector_norm(std::span<const cplx> v);
/// Σ conj(a_i) b_i
cplx inner(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace hillbloch
