#pragma once

// Optimality verdicts for a measurement: residuals of the condition
// Re(L) ≥ ρ_k and a two-sided interval on the gap P_opt - P_succ(M).

#include <cstddef>
#include <vector>

#include "qdisc/linalg.hpp"
#include "qdisc/model.hpp"

namespace qdisc {

/// Per-outcome defects D_k = ρ_k - Re(L).
struct ResidualReport {
  std::vector<HermitianMatrix> defects;
  /// χ_+(D_k), kept so a step can reuse it without a second eigensolve.
  std::vector<HermitianMatrix> positive_projections;
  /// t_k = Tr[D_k]_+
  std::vector<double> t;
  /// Largest eigenvalue of D_k.
  std::vector<double> lam;
  /// Lowest index attaining max_k t_k.
  std::size_t argmax_ell = 0;
  /// Smallest α ≥ 0 with Re(L) ≥ ρ_k - α for every k: max_k max(lam_k, 0).
  double alpha_scalar = 0.0;
  /// ‖L - L†‖_∞
  double antihermitian_norm = 0.0;
  double p_succ = 0.0;

  double t_max() const { return t.empty() ? 0.0 : t[argmax_ell]; }
};

ResidualReport residuals(const Ensemble& e, const Povm& m);

struct OptimalityVerdict {
  bool optimal = false;
  ResidualReport report;
};

/// Optimal iff max_k t_k ≤ tol.
OptimalityVerdict check_optimal(const Ensemble& e, const Povm& m, double tol);

/// (max_k t_k)²: P_succ(M) ≤ P_opt - lower.
double gap_lower_bound(const ResidualReport& r);

struct PDimensionProjector {
  /// Dimension of the selected span; an upper bound on the p-dimension.
  Index rank = 0;
  HermitianMatrix projector;
  /// Σ_k ‖(1-Π)ρ_k‖₁, evaluated exactly.
  double residual_bound = 0.0;
  /// Total eigenvalue mass of the excluded eigenpairs (≥ residual_bound, ≤ p).
  double tail_mass = 0.0;
};

/// Greedy subspace capturing all but mass p of the ensemble: pool the
/// eigenpairs of every ρ_k, keep the largest eigenvalues until the excluded
/// mass is at most p, project onto their span. p = 0 gives the joint support,
/// p = 1 the zero subspace.
PDimensionProjector p_dimension_projector(const Ensemble& e, double p);

/// Mass values at which the greedy projector changes, ascending, in [0, 1].
std::vector<double> p_dimension_breakpoints(const Ensemble& e);

struct GapCertificate {
  double lower = 0.0;
  double upper = 0.0;
  double p_used = 0.0;
  /// Upper bound on dim_p at p_used (rank of the greedy projector).
  Index dim_used = 0;
  /// Tr Π of the projector that attained `upper`, rounded.
  Index projector_rank = 0;
  double alpha_scalar = 0.0;
};

inline const std::vector<double> kDefaultPGrid = {0.0, 0.01, 0.02, 0.05, 0.1, 0.2};

/// gap ≤ α·Tr Π + 4·Σ_k ‖(1-Π)ρ_k‖₁ minimized over greedy projectors for
/// the p values in p_grid, then refined over the greedy breakpoints between
/// the grid neighbours of the best point.
GapCertificate gap_upper_bound(const Ensemble& e, const Povm& m, const ResidualReport& r,
                               const std::vector<double>& p_grid = kDefaultPGrid);

/// residuals + both gap bounds in one call.
GapCertificate certify(const Ensemble& e, const Povm& m,
                       const std::vector<double>& p_grid = kDefaultPGrid);

}  // namespace qdisc
