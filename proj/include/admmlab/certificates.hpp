#pragma once

// Banded certificate matrices E(t,c) (size N+1), D(t,c) and F(t,c) (size N)
// whose positive semidefiniteness closes the dual-gap, primal-residual and
// dual-residual worst-case bounds, plus the master inequality along ADMM runs.

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "admmlab/admm.hpp"
#include "admmlab/numkit.hpp"

namespace admmlab {

using Rational = boost::multiprecision::cpp_rational;

enum class CertificateKind { E, D, F };

std::string to_string(CertificateKind k);
CertificateKind parse_certificate_kind(const std::string& tag);

struct CertificateMatrix {
  CertificateKind kind = CertificateKind::E;
  int N = 0;
  double t = 0.0;
  double c = 0.0;
  numkit::SymMatrix matrix{1};
};

// Throws InvalidInput for N < 4.
CertificateMatrix build_certificate(CertificateKind kind, int N, double t, double c);
// Same entries in exact arithmetic, as a dense row-major array.
std::vector<std::vector<Rational>> build_certificate_exact(CertificateKind kind, int N,
                                                           const Rational& t, const Rational& c);

struct SweepResult {
  CertificateKind kind = CertificateKind::E;
  int N = 0;
  double c = 0.0;
  std::vector<double> grid;
  std::vector<numkit::PsdReport> reports;
  bool pass = false;
  bool endpoints_pass = false;       // t = 0 and t = c
  bool upper_endpoint_definite = false;  // Cholesky of the t = c matrix succeeds
  // F has no standalone semidefiniteness proof; sweeps of F are checks, not proofs.
  bool checked_conjecture = false;
};

// Uniform grid over [0, c] including both ends; reports are in grid order.
// workers = 0 picks the hardware concurrency.
SweepResult psd_sweep(CertificateKind kind, int N, double c, int grid_points, unsigned workers = 0);

std::string sweep_to_json(const SweepResult& s);
std::string sweep_to_csv(const SweepResult& s);

struct RowReduction {
  CertificateKind kind = CertificateKind::E;
  int N = 0;
  std::vector<Rational> exact;  // diagonal of J
  std::vector<double> diagonal;
  bool upper_triangular = false;  // every entry below the diagonal is exactly 0
};

// Applies the elementary row operations that turn K = E(1,1) (N >= 4) or
// K = D(1,1) (N >= 5) into an upper triangular J, in exact rational arithmetic.
// Throws UnsupportedKind for F and InvalidInput when N is below the minimum.
RowReduction row_reduction_diagonal(CertificateKind kind, int N);

// Closed forms for the diagonal of J.
std::vector<Rational> closed_form_row_reduction(CertificateKind kind, int N);

struct MasterInequality {
  double lhs = 0.0;
  double scale = 0.0;  // sum of absolute values of all terms
};

// Evaluates the master inequality after the first N iterations of trace, in
// the frame translated so that (x*, z*) = (0, 0): A x^k and B z^k are replaced
// by A(x^k - x*) and B(z^k - z*); v is taken in that frame. c1 is the
// modulus of f relative to ||.||_A. Throws InvalidInput when N < 4, when
// A x* + B z* != b (to 1e-10), or on dimension mismatch.
MasterInequality master_inequality_check(const SeparableProblem& p, const AdmmTrace& trace,
                                         const OptimalPair& opt, std::span<const double> v,
                                         double c1);

}  // namespace admmlab
