#include "qdilate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qdilate {

namespace {

bool all_finite(const std::vector<Complex>& entries) {
  for (const auto& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(rows >= 1 && cols >= 1, ErrorCode::InvalidInput, "matrix dimensions must be >= 1");
  require(data_.size() == rows * cols, ErrorCode::InvalidInput,
          "entry count does not match rows * cols");
  require(all_finite(data_), ErrorCode::InvalidInput, "matrix entries must be finite");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::unit(std::size_t d, std::size_t n, std::size_t m) {
  require(n < d && m < d, ErrorCode::InvalidInput, "matrix unit index out of range");
  CMatrix e(d, d);
  e(n, m) = 1.0;
  return e;
}

CMatrix CMatrix::from_column(const CVector& v) {
  require(!v.empty(), ErrorCode::InvalidInput, "empty column");
  CMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

CMatrix CMatrix::outer(const CVector& u, const CVector& v) {
  require(!u.empty() && !v.empty(), ErrorCode::InvalidInput, "empty vector in outer product");
  CMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<double>& values) {
  require(!values.empty(), ErrorCode::InvalidInput, "empty diagonal");
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

CMatrix CMatrix::conj() const {
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
  return out;
}

Complex CMatrix::trace() const {
  require(is_square(), ErrorCode::NotSquare, "trace of non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

CVector CMatrix::row_vector(std::size_t r) const {
  CVector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
  return v;
}

void CMatrix::set_column(std::size_t c, const CVector& v) {
  require(v.size() == rows_, ErrorCode::DimensionMismatch, "column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix CMatrix::operator+(const CMatrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorCode::DimensionMismatch,
          "matrix addition shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorCode::DimensionMismatch,
          "matrix subtraction shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& other) const {
  require(cols_ == other.rows_, ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  CMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex aik = (*this)(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
    }
  }
  return out;
}

CMatrix CMatrix::operator*(Complex scalar) const {
  CMatrix out = *this;
  for (auto& z : out.data_) z *= scalar;
  return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  *this = *this + other;
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  *this = *this - other;
  return *this;
}

CVector CMatrix::apply(const CVector& v) const {
  require(v.size() == cols_, ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  CVector out(rows_, Complex(0.0, 0.0));
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Complex vdot(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dot product length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double vec_norm(const CVector& v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

CVector operator*(Complex scalar, const CVector& v) {
  CVector out = v;
  for (auto& z : out) z *= scalar;
  return out;
}

CVector vec_add(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector add length mismatch");
  CVector out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

CVector vec_sub(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector sub length mismatch");
  CVector out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

CVector vec_kron(const CVector& u, const CVector& v) {
  CVector out(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i * v.size() + j] = u[i] * v[j];
  return out;
}

CVector canonical_basis_vector(std::size_t dim, std::size_t index) {
  require(index < dim, ErrorCode::InvalidInput, "basis index out of range");
  CVector v(dim, Complex(0.0, 0.0));
  v[index] = 1.0;
  return v;
}

double hermitian_residual(const CMatrix& a) {
  return (a - a.adjoint()).frobenius_norm();
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = 0; q < a.cols(); ++q)
      if (p != q) sum += std::norm(a(p, q));
  return std::sqrt(sum);
}

// Lexicographic comparison of phase-fixed eigenvector columns, entrywise by
// (real, imag). Returns true when u sorts before v (descending order).
bool column_lex_before(const CVector& u, const CVector& v) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].real() != v[i].real()) return u[i].real() > v[i].real();
    if (u[i].imag() != v[i].imag()) return u[i].imag() > v[i].imag();
  }
  return false;
}

void fix_column_phase(CVector& v) {
  std::size_t best = 0;
  double best_mod = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > best_mod) {
      best_mod = m;
      best = i;
    }
  }
  if (best_mod == 0.0) return;
  const Complex phase = std::conj(v[best]) / best_mod;
  for (auto& z : v) z *= phase;
  v[best] = Complex(best_mod, 0.0);
}

}  // namespace

EigenSystem hermitian_eigendecompose(const CMatrix& a_in, const Tolerance& tol) {
  tol.validate();
  require(a_in.is_square(), ErrorCode::NotSquare, "eigendecomposition needs a square matrix");
  const double scale = a_in.frobenius_norm();
  require(hermitian_residual(a_in) <= tol.eps_residual * (1.0 + scale), ErrorCode::NotHermitian,
          "symmetry residual exceeded");

  const std::size_t n = a_in.rows();
  CMatrix a = (a_in + a_in.adjoint()) * Complex(0.5, 0.0);
  CMatrix v = CMatrix::identity(n);

  const double stop = 1e-14 * (1.0 + scale);
  const double skip = n > 1 ? stop / static_cast<double>(n) : stop;
  constexpr int kMaxSweeps = 64;

  bool converged = (n == 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= stop) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double m = std::abs(apq);
        if (m <= skip) continue;

        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * m);
        const double t =
            tau == 0.0 ? 1.0 : std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase = apq / m;
        const Complex sigma = s * phase;

        // columns: col_p <- c col_p - conj(sigma) col_q; col_q <- sigma col_p + c col_q
        for (std::size_t j = 0; j < n; ++j) {
          const Complex ajp = a(j, p), ajq = a(j, q);
          a(j, p) = c * ajp - std::conj(sigma) * ajq;
          a(j, q) = sigma * ajp + c * ajq;
        }
        // rows: row_p <- c row_p - sigma row_q; row_q <- conj(sigma) row_p + c row_q
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - sigma * aqj;
          a(q, j) = std::conj(sigma) * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        for (std::size_t j = 0; j < n; ++j) {
          const Complex vjp = v(j, p), vjq = v(j, q);
          v(j, p) = c * vjp - std::conj(sigma) * vjq;
          v(j, q) = sigma * vjp + c * vjq;
        }
      }
    }
  }
  require(converged || off_diagonal_norm(a) <= stop, ErrorCode::NoConvergence,
          "Jacobi sweeps exhausted");

  std::vector<double> values(n);
  std::vector<CVector> columns(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = a(i, i).real();
    columns[i] = v.column(i);
    fix_column_phase(columns[i]);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (values[i] != values[j]) return values[i] > values[j];
    return column_lex_before(columns[i], columns[j]);
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    out.eigenvectors.set_column(k, columns[order[k]]);
  }
  return out;
}

std::vector<CVector> orthonormal_complete(const std::vector<CVector>& partial, std::size_t dim,
                                          const Tolerance& tol) {
  tol.validate();
  require(dim >= 1, ErrorCode::InvalidInput, "dimension must be >= 1");
  require(partial.size() <= dim, ErrorCode::TooManyVectors,
          "more input vectors than the dimension");
  for (const auto& v : partial)
    require(v.size() == dim, ErrorCode::DimensionMismatch, "input vector length mismatch");

  if (!partial.empty()) {
    double gram_residual = 0.0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
      for (std::size_t j = 0; j < partial.size(); ++j) {
        const Complex g = vdot(partial[i], partial[j]) - (i == j ? 1.0 : 0.0);
        gram_residual += std::norm(g);
      }
    }
    require(std::sqrt(gram_residual) <=
                tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(partial.size()))),
            ErrorCode::NotOrthonormal, "input vectors are not pairwise orthonormal");
  }

  std::vector<CVector> basis = partial;
  basis.reserve(dim);
  for (std::size_t j = 0; j < dim && basis.size() < dim; ++j) {
    CVector r = canonical_basis_vector(dim, j);
    // two orthogonalization passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const Complex coeff = vdot(b, r);
        for (std::size_t i = 0; i < dim; ++i) r[i] -= coeff * b[i];
      }
    }
    const double nrm = vec_norm(r);
    if (nrm < tol.eps_rank) continue;
    for (auto& z : r) z /= nrm;
    basis.push_back(std::move(r));
  }
  require(basis.size() == dim, ErrorCode::TheoremViolation,
          "orthonormal completion failed to reach full dimension");
  return basis;
}

std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol) {
  tol.validate();
  if (a.max_abs() == 0.0) return 0;
  // Gram matrix of the smaller side keeps the eigenproblem as small as possible.
  const CMatrix gram = a.rows() <= a.cols() ? a * a.adjoint() : a.adjoint() * a;
  // Relax the Hermitian gate: the Gram product is Hermitian by construction
  // up to roundoff that can exceed a caller's very tight eps_residual.
  Tolerance gram_tol = tol;
  gram_tol.eps_residual = std::max(tol.eps_residual, 1e-12);
  const EigenSystem es = hermitian_eigendecompose(gram, gram_tol);
  const double top = std::sqrt(std::max(es.eigenvalues.front(), 0.0));
  if (top == 0.0) return 0;
  std::size_t rank = 0;
  for (double lambda : es.eigenvalues) {
    const double sigma = std::sqrt(std::max(lambda, 0.0));
    if (sigma > tol.eps_rank * top) ++rank;
  }
  return rank;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  }
  return out;
}

CMatrix partial_trace_second(const CMatrix& m, std::size_t d, std::size_t k) {
  require(m.is_square(), ErrorCode::DimensionMismatch, "partial trace needs a square matrix");
  require(m.rows() == d * k, ErrorCode::DimensionMismatch,
          "matrix dimension is not the product of the factor dimensions");
  CMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < k; ++b) acc += m(i * k + b, j * k + b);
      out(i, j) = acc;
    }
  return out;
}

CMatrix hermitian_sqrt_psd(const CMatrix& a, const Tolerance& tol) {
  const EigenSystem es = hermitian_eigendecompose(a, tol);
  const std::size_t n = a.rows();
  // the square root amplifies roundoff near zero, so eigenvalues at the
  // noise floor are treated as exact zeros
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::max(es.eigenvalues.front(), 0.0));
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = es.eigenvalues[k] <= floor ? 0.0 : es.eigenvalues[k];
    if (lambda == 0.0) continue;
    const double root = std::sqrt(lambda);
    const CVector v = es.eigenvectors.column(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += root * v[i] * std::conj(v[j]);
  }
  return out;
}

double operator_two_norm(const CMatrix& a, const Tolerance& tol) {
  if (a.max_abs() == 0.0) return 0.0;
  const CMatrix gram = a.rows() <= a.cols() ? a * a.adjoint() : a.adjoint() * a;
  Tolerance gram_tol = tol;
  gram_tol.eps_residual = std::max(tol.eps_residual, 1e-12);
  const EigenSystem es = hermitian_eigendecompose(gram, gram_tol);
  return std::sqrt(std::max(es.eigenvalues.front(), 0.0));
}

}  // namespace qdilate
