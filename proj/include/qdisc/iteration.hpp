#pragma once

// Barnett–Croke iteration: repeatedly push measurement weight toward the
// outcome whose condition-II defect is largest.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qdisc/model.hpp"
#include "qdisc/optimality.hpp"

namespace qdisc {

/// Tolerance for the 0 ≤ X ≤ 2·identity precondition of bc_modification.
inline constexpr double kModificationTol = 1e-10;

/// Completeness drift above which a step renormalizes Σ M_k back to identity.
inline constexpr double kDriftTol = 1e-10;

/// M_k(X, ℓ) = (1-X) M_k (1-X) + δ_kℓ (2X - X²).
/// Throws PreconditionError unless 0 ≤ X ≤ 2·identity and ℓ < m.size(),
/// NumericalError if the result fails POVM validation.
Povm bc_modification(const Povm& m, const HermitianMatrix& x, std::size_t ell);

struct StepRecord {
  std::size_t step_index = 0;
  double p_succ_before = 0.0;
  double p_succ_after = 0.0;
  std::size_t ell = 0;
  /// max_k Tr[D_k]_+ of the input measurement.
  double t_max = 0.0;
  /// Step length along χ_+(D_ℓ), in [0, 2].
  double alpha_used = 0.0;
  bool line_search = false;
  /// Whether Σ M_k was renormalized after the update.
  bool renormalized = false;
  std::chrono::duration<double, std::milli> wall_time{0};
};

struct StepResult {
  Povm povm;
  StepRecord record;
};

/// One iterate. With line_search the step length maximizes the exact
/// quadratic β ↦ P_succ(M(βΠ_+, ℓ)) over [0, 2]; otherwise it is
/// α = min(t_ℓ, 1).
StepResult iterate_step(const Ensemble& e, const Povm& m, bool line_search);

/// Same, reusing residuals already computed for (e, m).
StepResult iterate_step(const Ensemble& e, const Povm& m, const ResidualReport& r,
                        bool line_search);

/// S^{-1/2} M_k S^{-1/2} with S = Σ M_k.
Povm renormalize(const Povm& m);

struct IterationConfig {
  double tol = 1e-8;
  /// Defaults to ⌈tol⁻²⌉ capped at 10⁶.
  std::optional<std::size_t> max_iters;
  bool line_search = true;
  std::vector<double> p_grid = kDefaultPGrid;

  std::size_t effective_max_iters() const;
};

enum class Termination { tolerance_met, max_iters, theory_bound_exhausted };

std::string_view to_string(Termination t);

/// ⌈Δ⁻²⌉: the number of steps within which some iterate must reach
/// max_k t_k ≤ Δ.
std::size_t theory_budget(double delta);

struct IterationTrace {
  IterationConfig config;
  std::vector<StepRecord> steps;
  Povm final_povm;
  ResidualReport final_residuals;
  GapCertificate final_certificate;
  Termination termination = Termination::max_iters;

  double final_p_succ() const { return final_residuals.p_succ; }
  /// t_max of M^(n) for n = 0..steps.size().
  std::vector<double> t_max_sequence() const;
  /// Smallest n with t_max(M^(n)) ≤ delta, if any iterate got there.
  std::optional<std::size_t> first_step_below(double delta) const;
};

IterationTrace run(const Ensemble& e, const Povm& m0, const IterationConfig& cfg);

}  // namespace qdisc
