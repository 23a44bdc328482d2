#include "rfdlab/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>

namespace rfdlab {

namespace {

using EMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EMat> as_eigen(const CMatrix& m) {
  return Eigen::Map<const EMat>(m.data().data(), m.rows(), m.cols());
}

CMatrix from_eigen(const EMat& e) {
  CMatrix out(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  Eigen::Map<EMat>(out.data().data(), e.rows(), e.cols()) = e;
  return out;
}

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
}

}  // namespace

CMatrix::CMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      data_(static_cast<size_t>(rows) * cols, cplx(0.0, 0.0)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
}

CMatrix::CMatrix(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
  if (data_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("entry count does not match shape");
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::scalar(int n, cplx v) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = v;
  return m;
}

CMatrix CMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
  if (rows.empty()) return CMatrix();
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  require_same_shape(*this, o);
  CMatrix out = *this;
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  require_same_shape(*this, o);
  CMatrix out = *this;
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
  return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("inner dimension mismatch");
  CMatrix out(rows_, o.cols_);
  Eigen::Map<EMat>(out.data().data(), rows_, o.cols_) =
      as_eigen(*this) * as_eigen(o);
  return out;
}

CMatrix CMatrix::operator*(cplx s) const {
  CMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

CMatrix CMatrix::operator-() const { return *this * cplx(-1.0, 0.0); }

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

cplx CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

cplx CMatrix::normalized_trace() const {
  if (rows_ == 0) throw std::invalid_argument("trace of empty matrix");
  return trace() / static_cast<double>(rows_);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::operator_norm() const {
  if (empty()) return 0.0;
  Eigen::JacobiSVD<EMat> svd(as_eigen(*this));
  return svd.singularValues()(0);
}

bool CMatrix::approx_equal(const CMatrix& o, double tol) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t k = 0; k < data_.size(); ++k)
    if (std::abs(data_[k] - o.data_[k]) > tol) return false;
  return true;
}

bool CMatrix::approx_zero(double tol) const { return max_abs() <= tol; }

bool CMatrix::is_unitary(double tol) const {
  if (!is_square()) return false;
  return (adjoint() * *this).approx_equal(identity(rows_), tol);
}

bool CMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  return approx_equal(adjoint(), tol);
}

double CMatrix::min_eigenvalue() const {
  if (!is_square() || rows_ == 0)
    throw std::invalid_argument("eigenvalues need a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<EMat> es(as_eigen(*this),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool CMatrix::is_positive_semidefinite(double tol) const {
  if (!is_hermitian(tol)) return false;
  return min_eigenvalue() >= -tol;
}

std::pair<std::vector<double>, CMatrix> CMatrix::hermitian_eigensystem() const {
  if (!is_square() || rows_ == 0)
    throw std::invalid_argument("eigensystem needs a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<EMat> es(as_eigen(*this));
  std::vector<double> evals(rows_);
  for (int i = 0; i < rows_; ++i) evals[i] = es.eigenvalues()(i);
  CMatrix vecs(rows_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < rows_; ++j) vecs.at(i, j) = es.eigenvectors()(i, j);
  return {std::move(evals), std::move(vecs)};
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx av = a.at(i, j);
      if (av == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = av * b.at(k, l);
    }
  return out;
}

CMatrix conjugate(const CMatrix& a) {
  CMatrix out = a;
  for (auto& v : out.data()) v = std::conj(v);
  return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      out.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return out;
}

CMatrix matrix_power(const CMatrix& a, std::int64_t e) {
  if (!a.is_square()) throw std::invalid_argument("power of non-square matrix");
  if (e < 0) {
    if (!a.is_unitary(1e-8))
      throw std::invalid_argument("negative power needs a unitary matrix");
    return matrix_power(a.adjoint(), -e);
  }
  CMatrix acc = CMatrix::identity(a.rows());
  CMatrix base = a;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

namespace {

// Orthonormal basis of the nullspace of m, thresholded at 1e-10 times the
// largest singular value. The scale is floored at one so a system that is
// entirely numerical noise has a full nullspace.
std::vector<std::vector<cplx>> nullspace(const EMat& m) {
  Eigen::JacobiSVD<EMat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int ncols = static_cast<int>(m.cols());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cut = std::max(smax, 1.0) * 1e-10;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  std::vector<std::vector<cplx>> out;
  for (int j = rank; j < ncols; ++j) {
    std::vector<cplx> v(ncols);
    for (int i = 0; i < ncols; ++i) v[i] = svd.matrixV()(i, j);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

IntertwinerSpace intertwiner_space(const std::vector<CMatrix>& a,
                                   const std::vector<CMatrix>& b) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("intertwiner_space needs two matching nonempty families");
  const int n = a[0].rows();
  const int m = b[0].rows();
  for (const auto& x : a)
    if (!x.is_square() || x.rows() != n)
      throw std::invalid_argument("first family must be square of equal size");
  for (const auto& x : b)
    if (!x.is_square() || x.rows() != m)
      throw std::invalid_argument("second family must be square of equal size");
  // T is m x n; constraint per family index: T a_x - b_x T = 0, linear in the
  // row-major vectorization of T via I (x) a^T - b (x) I.
  const int tdim = m * n;
  EMat sys(static_cast<Eigen::Index>(a.size()) * tdim, tdim);
  sys.setZero();
  for (size_t x = 0; x < a.size(); ++x) {
    const auto& ax = a[x];
    const auto& bx = b[x];
    const Eigen::Index base = static_cast<Eigen::Index>(x) * tdim;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::Index row = base + static_cast<Eigen::Index>(i) * n + j;
        // (T a_x)(i,j) = sum_k T(i,k) a_x(k,j)
        for (int k = 0; k < n; ++k) sys(row, i * n + k) += ax.at(k, j);
        // (b_x T)(i,j) = sum_k b_x(i,k) T(k,j)
        for (int k = 0; k < m; ++k) sys(row, k * n + j) -= bx.at(i, k);
      }
  }
  IntertwinerSpace out;
  for (auto& v : nullspace(sys)) {
    CMatrix t(m, n, std::move(v));
    out.basis.push_back(std::move(t));
  }
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

int commutant_dimension(const std::vector<CMatrix>& mats) {
  if (mats.empty())
    throw std::invalid_argument("commutant of an empty family");
  const int n = mats[0].rows();
  for (const auto& x : mats)
    if (!x.is_square() || x.rows() != n)
      throw std::invalid_argument("family must be square of equal size");
  const int tdim = n * n;
  EMat sys(static_cast<Eigen::Index>(mats.size()) * tdim, tdim);
  sys.setZero();
  for (size_t x = 0; x < mats.size(); ++x) {
    const auto& m = mats[x];
    const Eigen::Index base = static_cast<Eigen::Index>(x) * tdim;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::Index row = base + static_cast<Eigen::Index>(i) * n + j;
        for (int k = 0; k < n; ++k) {
          sys(row, i * n + k) += m.at(k, j);
          sys(row, k * n + j) -= m.at(i, k);
        }
      }
  }
  return static_cast<int>(nullspace(sys).size());
}

cplx random_cplx(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return cplx(g(rng), g(rng));
}

CMatrix random_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (auto& v : m.data()) v = random_cplx(rng);
  return m;
}

CMatrix random_unitary(int n, Rng& rng) {
  EMat g(n, n);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(d(rng), d(rng));
  Eigen::HouseholderQR<EMat> qr(g);
  EMat q = qr.householderQ() * EMat::Identity(n, n);
  // Fix the gauge so the factorization is unique: make R's diagonal positive.
  EMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d_j = r(j, j);
    const double a = std::abs(d_j);
    const cplx phase = a > 0 ? d_j / a : cplx(1.0, 0.0);
    for (int i = 0; i < n; ++i) q(i, j) *= phase;
  }
  return from_eigen(q);
}

CMatrix random_hermitian(int n, Rng& rng) {
  CMatrix a = random_matrix(n, n, rng);
  return (a + a.adjoint()) * cplx(0.5, 0.0);
}

}  // namespace rfdlab
