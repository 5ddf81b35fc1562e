#pragma once

// Ground truth for testing the optimizer. Nothing here calls into the
// iteration or optimality code; only linalg and the model types are shared.

#include <string>
#include <vector>

#include "qdisc/linalg.hpp"
#include "qdisc/model.hpp"

namespace qdisc::oracles {

struct HelstromResult {
  double p_opt = 0.0;
  Povm povm;
};

/// Two prior-weighted states: P_opt = ½(1 + ‖ρ1 - ρ2‖₁), measured by
/// (χ_+(ρ1 - ρ2), 1 - χ_+(ρ1 - ρ2)). Throws ValidationError unless
/// Tr ρ1 + Tr ρ2 = 1 within 1e-9.
HelstromResult helstrom_two_state(const HermitianMatrix& rho1, const HermitianMatrix& rho2);

/// Best success probability over two-outcome projective qubit measurements
/// {P_n, 1 - P_n}, n on a spherical Fibonacci grid of ⌈resolution²/2⌉ points
/// plus the six coordinate axes, each projector assigned to its best label.
/// Also considers the trivial measurement that always guesses one label.
/// A lower bound on P_opt. Throws DimensionError unless dim = 2.
double qubit_grid_search(const Ensemble& e, int angular_resolution);

struct ConvergedLReport {
  double antihermitian_norm = 0.0;  // ‖L - L†‖_∞
  double min_margin = 0.0;          // min_k λ_min(Re(L) - ρ_k)
  double trace_mismatch = 0.0;      // |Tr L - Σ_k Tr(M_k ρ_k)|
  bool hermitian_ok = false;
  bool dominance_ok = false;
  bool trace_ok = false;

  bool passed() const { return hermitian_ok && dominance_ok && trace_ok; }
  std::string summary() const;
};

/// At a claimed optimum L = L† and Re(L) ≥ ρ_k for all k. Checks
/// ‖L - L†‖_∞ ≤ d·tol, λ_min(Re(L) - ρ_k) ≥ -tol and that Tr L agrees with
/// the success probability summed outcome by outcome to 1e-10.
ConvergedLReport certify_converged_L(const Ensemble& e, const Povm& m, double tol);

}  // namespace qdisc::oracles
