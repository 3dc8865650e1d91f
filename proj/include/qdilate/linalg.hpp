#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qdilate/error.hpp"

namespace qdilate {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Shared tolerance policy. eps_residual bounds absolute Frobenius-norm
/// residuals, eps_rank is the relative cutoff for singular values and
/// eigenvalues.
struct Tolerance {
  double eps_residual = 1e-9;
  double eps_rank = 1e-8;

  void validate() const {
    require(eps_residual > 0.0 && eps_rank > 0.0, ErrorCode::InvalidInput,
            "tolerances must be strictly positive");
    require(eps_rank < 1.0, ErrorCode::InvalidInput, "eps_rank must be < 1");
  }
};

/// Dense complex matrix, row-major. Plain value type; entries are mutable
/// through operator() and the type itself carries no tolerance state.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {
    require(rows >= 1 && cols >= 1, ErrorCode::InvalidInput, "matrix dimensions must be >= 1");
  }
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix identity(std::size_t n);
  /// Matrix unit E_nm = |n><m| in dimension d.
  static CMatrix unit(std::size_t d, std::size_t n, std::size_t m);
  static CMatrix from_column(const CVector& v);
  /// Outer product |u><v|.
  static CMatrix outer(const CVector& u, const CVector& v);
  static CMatrix diagonal(const std::vector<double>& values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<Complex>& entries() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  CVector column(std::size_t c) const;
  CVector row_vector(std::size_t r) const;
  void set_column(std::size_t c, const CVector& v);

  CMatrix operator+(const CMatrix& other) const;
  CMatrix operator-(const CMatrix& other) const;
  CMatrix operator*(const CMatrix& other) const;
  CMatrix operator*(Complex scalar) const;
  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);

  CVector apply(const CVector& v) const;

  bool operator==(const CMatrix& other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// vector helpers
Complex vdot(const CVector& a, const CVector& b);  // conjugate-linear in a
double vec_norm(const CVector& v);
CVector operator*(Complex scalar, const CVector& v);
CVector vec_add(const CVector& a, const CVector& b);
CVector vec_sub(const CVector& a, const CVector& b);
/// Tensor product of vectors, first-factor-major index ordering:
/// (u ox v)[i * dim(v) + j] = u[i] v[j].
CVector vec_kron(const CVector& u, const CVector& v);
CVector canonical_basis_vector(std::size_t dim, std::size_t index);

struct EigenSystem {
  std::vector<double> eigenvalues;  // descending
  CMatrix eigenvectors;             // orthonormal columns, same order
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Deterministic: fixed sweep order, eigenvalues sorted
/// descending, each eigenvector scaled so its first component of largest
/// modulus is real and non-negative, exact eigenvalue ties broken by
/// lexicographically descending eigenvector entries.
EigenSystem hermitian_eigendecompose(const CMatrix& a, const Tolerance& tol = {});

/// Extends a pairwise-orthonormal list to a full orthonormal basis of C^dim
/// by orthogonalizing canonical basis vectors in index order, skipping
/// candidates whose post-projection norm falls below eps_rank.
std::vector<CVector> orthonormal_complete(const std::vector<CVector>& partial, std::size_t dim,
                                          const Tolerance& tol = {});

/// Number of singular values above eps_rank times the largest one
/// (0 for the zero matrix).
std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol = {});

/// Kronecker product; pair index (i, j) maps to i * dim_B + j
/// (first factor major) project-wide.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial trace over the second factor of a (d*k)-dimensional square matrix.
CMatrix partial_trace_second(const CMatrix& m, std::size_t d, std::size_t k);

/// Positive-semidefinite square root via eigendecomposition; negative
/// eigenvalues within tolerance are clamped to zero.
CMatrix hermitian_sqrt_psd(const CMatrix& a, const Tolerance& tol = {});

/// Largest singular value.
double operator_two_norm(const CMatrix& a, const Tolerance& tol = {});

double hermitian_residual(const CMatrix& a);

}  // namespace qdilate
