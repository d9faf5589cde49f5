#pragma once

// Dense linear algebra used across the library: small general matrices,
// symmetric matrices with a Jacobi eigensolver, PSD reports, Gram matrices,
// Cholesky and LU solves.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace admmlab::numkit {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_sq(std::span<const double> a);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scale(double s, std::span<const double> a);
// a + s*b
Vector axpy(std::span<const double> a, double s, std::span<const double> b);
bool all_finite(std::span<const double> a);

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector column(std::size_t j) const;

  Matrix transpose() const;
  Vector apply(std::span<const double> x) const;            // M x
  Vector apply_transpose(std::span<const double> y) const;  // M^T y
  bool is_zero() const;
  // True when every off-diagonal entry is exactly zero.
  bool is_diagonal() const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose_multiply(const Matrix& a, const Matrix& b);  // a^T b

// Dense symmetric matrix; every write is mirrored so (i,j) == (j,i) exactly.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n);
  // Symmetrizes (M + M^T)/2; throws InvalidInput on a non-square matrix.
  static SymMatrix from_matrix(const Matrix& m);
  static SymMatrix from_rows(const std::vector<Vector>& rows);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v);
  void add_to(std::size_t i, std::size_t j, double v);

  double trace() const;
  double frobenius_norm() const;
  bool all_finite() const;
  Matrix to_matrix() const;
  Vector apply(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct PsdReport {
  double min_eigenvalue = 0.0;
  bool is_psd = false;
  double tolerance_used = 0.0;
};

struct EigenDecomposition {
  Vector values;  // ascending
  Matrix vectors; // column j pairs with values[j]
};

inline constexpr std::size_t kMaxEigenDimension = 512;

// Cyclic Jacobi rotations. Throws InvalidInput when n is 0 or above 512.
EigenDecomposition eig_sym_full(const SymMatrix& m);
Vector eig_sym(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

// is_psd iff the smallest eigenvalue is >= -tol.
PsdReport psd_check(const SymMatrix& m, double tol);
// Uses default_psd_tolerance(m).
PsdReport psd_check(const SymMatrix& m);
// 1e-8 * (1 + ||M||_F).
double default_psd_tolerance(const SymMatrix& m);

// output(i,j) = <columns[i], columns[j]>.
SymMatrix gram(std::span<const Vector> columns);

// Lower-triangular L with M = L L^T, or nullopt if M is not positive definite.
std::optional<Matrix> cholesky(const SymMatrix& m);

// Diagonally pivoted Cholesky of a PSD matrix. Succeeds when every pivot is
// >= -tol and the Schur complement left after the last accepted pivot has no
// entry larger than tol in magnitude.
bool pivoted_cholesky_psd(const SymMatrix& m, double tol);

// Solves L y = b and L^T x = y for a Cholesky factor L.
Vector cholesky_solve(const Matrix& lower, std::span<const double> b);
// Inverse of an SPD matrix from its Cholesky factor.
SymMatrix cholesky_inverse(const Matrix& lower);

// Solves M x = rhs with partial pivoting LU. Throws InvalidInput on a
// singular matrix.
Vector lu_solve(Matrix m, Vector rhs);

}  // namespace admmlab::numkit
