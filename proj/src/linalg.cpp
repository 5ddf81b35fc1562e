#include "qdisc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qdisc/errors.hpp"

namespace qdisc {

namespace {

std::string shape_of(const ComplexMatrix& b) {
  return std::to_string(b.rows()) + "x" + std::to_string(b.cols());
}

// Rotates each column so that its largest-magnitude entry is real positive.
void fix_phases(ComplexMatrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    double best = 0.0;
    for (Index r = 0; r < v.rows(); ++r) best = std::max(best, std::abs(v(r, c)));
    if (best == 0.0) continue;
    Index pivot = 0;
    for (Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) >= best * (1.0 - 1e-12)) {
        pivot = r;
        break;
      }
    }
    const Complex z = v(pivot, c);
    v.col(c) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a, double tol) {
  require_square(a, "HermitianMatrix");
  if (!all_finite(a)) throw NotHermitianError("HermitianMatrix: non-finite entry");
  const double dev = hermiticity_defect(a);
  if (dev > tol) {
    throw NotHermitianError("HermitianMatrix: |A - A^dagger| = " + std::to_string(dev) +
                            " exceeds tolerance " + std::to_string(tol));
  }
  m_ = (a + a.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::symmetrize(const ComplexMatrix& a) {
  require_square(a, "symmetrize");
  return HermitianMatrix((a + a.adjoint()) * 0.5, Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& values) {
  return HermitianMatrix(values.cast<Complex>().asDiagonal().toDenseMatrix(), Unchecked{});
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& v) {
  return symmetrize(v * v.adjoint());
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  require_same_dim(m_, o.m_, "HermitianMatrix +");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  require_same_dim(m_, o.m_, "HermitianMatrix -");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

void require_square(const ComplexMatrix& b, const char* what) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         shape_of(b));
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape_of(a) + " vs " +
                         shape_of(b));
  }
}

bool all_finite(const ComplexMatrix& b) {
  return b.real().allFinite() && b.imag().allFinite();
}

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix real_part(const ComplexMatrix& l) {
  require_square(l, "real_part");
  return HermitianMatrix::symmetrize(l);
}

SpectralDecomposition eigh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    // Eigen caps the QR sweep at 30 iterations per dimension.
    throw NumericalError("eigh: Hermitian eigensolver did not converge",
                         static_cast<std::size_t>(30 * a.dim()));
  }
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  fix_phases(out.eigenvectors);
  return out;
}

double eig_zero_cutoff(const SpectralDecomposition& s) {
  if (s.eigenvalues.size() == 0) return 0.0;
  return kEigZeroRelTol * s.eigenvalues.cwiseAbs().maxCoeff();
}

PositiveSplit positive_split(const HermitianMatrix& a) {
  const SpectralDecomposition s = eigh(a);
  const double cutoff = eig_zero_cutoff(s);
  const Index d = a.dim();
  ComplexMatrix part = ComplexMatrix::Zero(d, d);
  ComplexMatrix proj = ComplexMatrix::Zero(d, d);
  PositiveSplit out;
  out.max_eigenvalue = s.eigenvalues(0);
  for (Index i = 0; i < d; ++i) {
    const double lambda = s.eigenvalues(i);
    if (!(lambda > cutoff)) break;  // descending order
    const ComplexMatrix p = s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint();
    part += lambda * p;
    proj += p;
    out.trace += lambda;
  }
  out.part = HermitianMatrix::symmetrize(part);
  out.projection = HermitianMatrix::symmetrize(proj);
  return out;
}

HermitianMatrix positive_part(const HermitianMatrix& a) { return positive_split(a).part; }

HermitianMatrix positive_projection(const HermitianMatrix& a) {
  return positive_split(a).projection;
}

double trace_norm(const ComplexMatrix& b) {
  require_square(b, "trace_norm");
  Eigen::JacobiSVD<ComplexMatrix> svd(b);
  return svd.singularValues().sum();
}

double trace_norm(const HermitianMatrix& a) {
  return eigh(a).eigenvalues.cwiseAbs().sum();
}

double operator_norm(const ComplexMatrix& b) {
  require_square(b, "operator_norm");
  Eigen::JacobiSVD<ComplexMatrix> svd(b);
  return svd.singularValues()(0);
}

double operator_norm(const HermitianMatrix& a) {
  return eigh(a).eigenvalues.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const HermitianMatrix& a) {
  const SpectralDecomposition s = eigh(a);
  return s.eigenvalues(s.eigenvalues.size() - 1);
}

double max_eigenvalue(const HermitianMatrix& a) { return eigh(a).eigenvalues(0); }

bool is_psd(const HermitianMatrix& a, double tol) { return min_eigenvalue(a) >= -tol; }

HermitianMatrix apply_spectral(const HermitianMatrix& a,
                               const std::function<double(double)>& f) {
  const SpectralDecomposition s = eigh(a);
  RealVector fl(s.eigenvalues.size());
  for (Index i = 0; i < fl.size(); ++i) fl(i) = f(s.eigenvalues(i));
  return HermitianMatrix::symmetrize(s.eigenvectors * fl.cast<Complex>().asDiagonal() *
                                     s.eigenvectors.adjoint());
}

HermitianMatrix pinv_sqrt(const HermitianMatrix& a) {
  const SpectralDecomposition s = eigh(a);
  const double cutoff = eig_zero_cutoff(s);
  RealVector fl(s.eigenvalues.size());
  for (Index i = 0; i < fl.size(); ++i) {
    const double lambda = s.eigenvalues(i);
    fl(i) = lambda > cutoff ? 1.0 / std::sqrt(lambda) : 0.0;
  }
  return HermitianMatrix::symmetrize(s.eigenvectors * fl.cast<Complex>().asDiagonal() *
                                     s.eigenvectors.adjoint());
}

HermitianMatrix span_projector(const ComplexMatrix& columns, Index* rank) {
  const Index d = columns.rows();
  if (columns.cols() == 0) {
    if (rank) *rank = 0;
    return HermitianMatrix::zero(d);
  }
  const SpectralDecomposition s = eigh(HermitianMatrix::symmetrize(columns * columns.adjoint()));
  const double cutoff = eig_zero_cutoff(s);
  ComplexMatrix proj = ComplexMatrix::Zero(d, d);
  Index r = 0;
  for (Index i = 0; i < d && s.eigenvalues(i) > cutoff; ++i, ++r) {
    proj += s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint();
  }
  if (rank) *rank = r;
  return HermitianMatrix::symmetrize(proj);
}

}  // namespace qdisc
