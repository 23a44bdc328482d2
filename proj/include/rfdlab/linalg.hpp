#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rfdlab {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

// Default absolute entrywise tolerance for approximate comparisons.
inline constexpr double kDefaultTol = 1e-9;

/// Dense complex matrix, row-major storage, value semantics.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols);  // zero-filled
  CMatrix(int rows, int cols, std::vector<cplx> entries);

  static CMatrix identity(int n);
  static CMatrix scalar(int n, cplx v);
  /// Build from nested initializer rows, e.g. {{1,0},{0,1}}.
  static CMatrix from_rows(const std::vector<std::vector<cplx>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& at(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(cplx s) const;
  CMatrix operator-() const;
  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);

  CMatrix adjoint() const;
  CMatrix transpose() const;

  cplx trace() const;
  /// Trace divided by dimension; tr(I) = 1.
  cplx normalized_trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  /// Largest singular value.
  double operator_norm() const;

  bool approx_equal(const CMatrix& o, double tol = kDefaultTol) const;
  bool approx_zero(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;
  bool is_hermitian(double tol = kDefaultTol) const;
  /// Hermitian with all eigenvalues >= -tol.
  bool is_positive_semidefinite(double tol = kDefaultTol) const;

  /// Smallest eigenvalue of a hermitian matrix.
  double min_eigenvalue() const;

  /// Eigenvalues (ascending) and an orthonormal eigenbasis (columns) of a
  /// hermitian matrix.
  std::pair<std::vector<double>, CMatrix> hermitian_eigensystem() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

/// Kronecker product; entry a(i,j)*b(k,l) lands at row i*rows(b)+k,
/// column j*cols(b)+l.
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// Entrywise complex conjugate (no transpose).
CMatrix conjugate(const CMatrix& a);

/// Block-diagonal direct sum.
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// Integer power of a square matrix; negative exponents use the adjoint and
/// require a unitary argument.
CMatrix matrix_power(const CMatrix& a, std::int64_t e);

struct IntertwinerSpace {
  int dimension = 0;
  std::vector<CMatrix> basis;  // orthonormal under the Frobenius inner product
};

/// Solves T a_x = b_x T for all x over matching-length families; returns an
/// orthonormal basis of the solution space. Nullspace vectors are kept when
/// their singular value is below 1e-10 times the largest one, with the scale
/// floored at one so noise-level systems keep their full solution space.
IntertwinerSpace intertwiner_space(const std::vector<CMatrix>& a,
                                   const std::vector<CMatrix>& b);

/// Dimension of {T : T m = m T for all m in mats}; 1 iff the family is
/// irreducible.
int commutant_dimension(const std::vector<CMatrix>& mats);

// Deterministic random generators for tests and sampling.
cplx random_cplx(Rng& rng);
CMatrix random_matrix(int rows, int cols, Rng& rng);
CMatrix random_unitary(int n, Rng& rng);
/// Random hermitian with entries O(1).
CMatrix random_hermitian(int n, Rng& rng);

}  // namespace rfdlab
