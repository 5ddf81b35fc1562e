#pragma once

// Dense complex spectral calculus on small Hermitian operators.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qdisc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-10;

/// Relative cutoff separating positive eigenvalues from numerical zeros,
/// scaled by the operator norm of the argument.
inline constexpr double kEigZeroRelTol = 1e-10;

/// Self-adjoint d×d operator.
///
/// Construction from a general matrix checks the max-entry deviation
/// |A - A†| against a tolerance and then stores (A + A†)/2, so the stored
/// value is exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a, double tol = kHermitianTol);

  /// Averages a with its adjoint without any tolerance check.
  static HermitianMatrix symmetrize(const ComplexMatrix& a);
  static HermitianMatrix identity(Index dim);
  static HermitianMatrix zero(Index dim);
  static HermitianMatrix diagonal(const RealVector& values);
  /// |v⟩⟨v|
  static HermitianMatrix outer(const ComplexVector& v);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  HermitianMatrix operator-() const { return HermitianMatrix::symmetrize(-m_); }

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Eigenvalues sorted descending with matching orthonormal eigenvector
/// columns. Each eigenvector has its largest-magnitude component made real
/// and positive (first such index on ties).
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  /// Σ λ_i v_i v_i†
  ComplexMatrix reconstruct() const;
};

/// Throws DimensionError unless b is square (and non-empty).
void require_square(const ComplexMatrix& b, const char* what);

/// Throws DimensionError unless both operands are d×d with equal d.
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

bool all_finite(const ComplexMatrix& b);

/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const ComplexMatrix& a);

/// (L + L†)/2, Hermitian by construction.
HermitianMatrix real_part(const ComplexMatrix& l);

SpectralDecomposition eigh(const HermitianMatrix& a);

/// Eigenvalue threshold below which a spectral component of `a` is treated
/// as zero: kEigZeroRelTol·‖a‖_∞.
double eig_zero_cutoff(const SpectralDecomposition& s);

/// Σ_{λ > cutoff} λ Π_λ
HermitianMatrix positive_part(const HermitianMatrix& a);
/// Σ_{λ > cutoff} Π_λ
HermitianMatrix positive_projection(const HermitianMatrix& a);

/// Positive part, projection and Tr of the positive part from a single
/// eigendecomposition; Tr[A]_+ equals Tr(A·χ_+(A)) for the same cutoff.
struct PositiveSplit {
  HermitianMatrix part;
  HermitianMatrix projection;
  double trace = 0.0;
  double max_eigenvalue = 0.0;
};
PositiveSplit positive_split(const HermitianMatrix& a);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& b);
double trace_norm(const HermitianMatrix& a);

/// Largest singular value.
double operator_norm(const ComplexMatrix& b);
double operator_norm(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);
double max_eigenvalue(const HermitianMatrix& a);

/// True iff the smallest eigenvalue is ≥ -tol.
bool is_psd(const HermitianMatrix& a, double tol);

/// f(A) = Σ f(λ) Π_λ
HermitianMatrix apply_spectral(const HermitianMatrix& a, const std::function<double(double)>& f);

/// Inverse square root on the range of a PSD operator; zero on its kernel.
/// Eigenvalues at or below the zero cutoff are treated as kernel.
HermitianMatrix pinv_sqrt(const HermitianMatrix& a);

/// Projector onto the span of the given columns (numerical rank decided by
/// a relative cutoff on the Gram operator).
HermitianMatrix span_projector(const ComplexMatrix& columns, Index* rank = nullptr);

}  // namespace qdisc
