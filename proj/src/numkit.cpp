#include "admmlab/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "admmlab/errors.hpp"

namespace admmlab::numkit {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

Vector add(std::span<const double> a, std::span<const double> b) { return axpy(a, 1.0, b); }

Vector sub(std::span<const double> a, std::span<const double> b) { return axpy(a, -1.0, b); }

Vector scale(double s, std::span<const double> a) {
  Vector out(a.begin(), a.end());
  for (double& v : out) v *= s;
  return out;
}

Vector axpy(std::span<const double> a, double s, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("axpy: length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidInput("Matrix::from_rows: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidInput("Matrix::apply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vector Matrix::apply_transpose(std::span<const double> y) const {
  if (y.size() != rows_) throw InvalidInput("Matrix::apply_transpose: dimension mismatch");
  Vector x(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) x[j] += (*this)(i, j) * y[i];
  return x;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0.0) return false;
  return true;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("multiply: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix transpose_multiply(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("transpose_multiply: dimension mismatch");
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  return c;
}

// ------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
  if (n == 0) throw InvalidInput("SymMatrix: dimension must be positive");
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("SymMatrix::from_matrix: matrix is not square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) throw InvalidInput("SymMatrix::from_rows: empty");
  const Matrix m = Matrix::from_rows(rows);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) throw InvalidInput("SymMatrix::from_rows: input is not symmetric");
  return from_matrix(m);
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] = v;
  data_[j * n_ + i] = v;
}

void SymMatrix::add_to(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] += v;
  if (i != j) data_[j * n_ + i] += v;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const { return norm(data_); }

bool SymMatrix::all_finite() const { return numkit::all_finite(data_); }

Matrix SymMatrix::to_matrix() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Vector SymMatrix::apply(std::span<const double> x) const {
  if (x.size() != n_) throw InvalidInput("SymMatrix::apply: dimension mismatch");
  Vector y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = dot({data_.data() + i * n_, n_}, x);
  return y;
}

// ---------------------------------------------------------------- Jacobi

namespace {

inline void rotate(Matrix& a, double s, double tau, std::size_t i, std::size_t j, std::size_t k,
                   std::size_t l) {
  const double g = a(i, j);
  const double h = a(k, l);
  a(i, j) = g - s * (h + g * tau);
  a(k, l) = h + s * (g - h * tau);
}

}  // namespace

EigenDecomposition eig_sym_full(const SymMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw InvalidInput("eig_sym: dimension 0");
  if (n > kMaxEigenDimension) throw InvalidInput("eig_sym: dimension above 512");
  if (!m.all_finite()) throw InvalidInput("eig_sym: non-finite entries");

  Matrix a = m.to_matrix();
  Matrix v = Matrix::identity(n);
  Vector d(n), b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = a(i, i);

  for (int sweep = 1; sweep <= 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) break;
    const double threshold = sweep < 4 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (sweep > 4 && std::abs(d[p]) + g == std::abs(d[p]) &&
            std::abs(d[q]) + g == std::abs(d[q])) {
          a(p, q) = 0.0;
          continue;
        }
        if (std::abs(a(p, q)) <= threshold) continue;

        double h = d[q] - d[p];
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = a(p, q) / h;
        } else {
          const double theta = 0.5 * h / a(p, q);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        h = t * a(p, q);
        z[p] -= h;
        z[q] += h;
        d[p] -= h;
        d[q] += h;
        a(p, q) = 0.0;
        for (std::size_t j = 0; j < p; ++j) rotate(a, s, tau, j, p, j, q);
        for (std::size_t j = p + 1; j < q; ++j) rotate(a, s, tau, p, j, j, q);
        for (std::size_t j = q + 1; j < n; ++j) rotate(a, s, tau, p, j, q, j);
        for (std::size_t j = 0; j < n; ++j) rotate(v, s, tau, j, p, j, q);
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      b[p] += z[p];
      d[p] = b[p];
      z[p] = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Vector eig_sym(const SymMatrix& m) { return eig_sym_full(m).values; }

double min_eigenvalue(const SymMatrix& m) { return eig_sym(m).front(); }

double default_psd_tolerance(const SymMatrix& m) { return 1e-8 * (1.0 + m.frobenius_norm()); }

PsdReport psd_check(const SymMatrix& m, double tol) {
  if (!m.all_finite()) throw InvalidInput("psd_check: non-finite entries");
  if (!(tol >= 0.0)) throw InvalidInput("psd_check: tolerance must be >= 0");
  PsdReport r;
  r.min_eigenvalue = min_eigenvalue(m);
  r.tolerance_used = tol;
  r.is_psd = r.min_eigenvalue >= -tol;
  return r;
}

PsdReport psd_check(const SymMatrix& m) {
  if (!m.all_finite()) throw InvalidInput("psd_check: non-finite entries");
  return psd_check(m, default_psd_tolerance(m));
}

SymMatrix gram(std::span<const Vector> columns) {
  if (columns.empty()) throw InvalidInput("gram: empty column list");
  const std::size_t len = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != len) throw InvalidInput("gram: columns differ in length");
  SymMatrix g(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i; j < columns.size(); ++j) g.set(i, j, dot(columns[i], columns[j]));
  return g;
}

// ---------------------------------------------------------- factorizations

std::optional<Matrix> cholesky(const SymMatrix& m) {
  const std::size_t n = m.size();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

bool pivoted_cholesky_psd(const SymMatrix& m, double tol) {
  const std::size_t n = m.size();
  Matrix s = m.to_matrix();
  std::vector<bool> used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && s(i, i) > best) {
        best = s(i, i);
        piv = i;
      }
    if (best < -tol) return false;
    if (best <= tol) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!used[i] && !used[j] && std::abs(s(i, j)) > tol) return false;
      return true;
    }
    used[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double f = s(i, piv) / best;
      for (std::size_t j = 0; j < n; ++j)
        if (!used[j]) s(i, j) -= f * s(piv, j);
    }
  }
  return true;
}

Vector cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw InvalidInput("cholesky_solve: dimension mismatch");
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= lower(k, ii) * y[k];
    y[ii] /= lower(ii, ii);
  }
  return y;
}

SymMatrix cholesky_inverse(const Matrix& lower) {
  const std::size_t n = lower.rows();
  // Invert L in place, then form L^{-T} L^{-1}.
  Matrix linv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / lower(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= lower(i, k) * linv(k, j);
      linv(i, j) = s / lower(i, i);
    }
  }
  SymMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < n; ++k) s += linv(k, i) * linv(k, j);
      inv.set(i, j, s);
    }
  return inv;
}

Vector lu_solve(Matrix m, Vector rhs) {
  const std::size_t n = m.rows();
  if (m.cols() != n || rhs.size() != n) throw InvalidInput("lu_solve: dimension mismatch");
  double scale_max = 0.0;
  for (double v : m.data()) scale_max = std::max(scale_max, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (std::abs(m(piv, k)) <= 1e-14 * scale_max || m(piv, k) == 0.0)
      throw InvalidInput("lu_solve: singular matrix at column " + std::to_string(k));
    if (piv != k) {
      std::swap_ranges(m.row(k).begin(), m.row(k).end(), m.row(piv).begin());
      std::swap(rhs[k], rhs[piv]);
    }
    const double pivot = m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / pivot;
      if (f == 0.0) continue;
      m(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * rhs[j];
    rhs[ii] = s / m(ii, ii);
  }
  return rhs;
}

}  // namespace admmlab::numkit
