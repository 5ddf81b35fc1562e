#pragma once

// Problem data for minimum-error discrimination: prior-weighted ensembles,
// measurements, the Lagrange operator L = Σ M_k ρ_k and P_succ = Tr L.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qdisc/linalg.hpp"

namespace qdisc {

struct Tolerances {
  double psd = 1e-9;
  double trace_sum = 1e-9;
  double completeness = 1e-9;
};

/// States ρ_k carry their prior in the trace: Tr ρ_k = p_k.
class Ensemble {
 public:
  /// Throws DimensionError on an empty list, mixed dimensions or a label
  /// count that does not match.
  explicit Ensemble(std::vector<HermitianMatrix> states, std::vector<std::string> labels = {});

  /// Builds ρ_k = p_k·σ_k from unit-trace density matrices σ_k.
  static Ensemble from_priors(const std::vector<std::pair<HermitianMatrix, double>>& weighted,
                              std::vector<std::string> labels = {});

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return states_.size(); }
  const HermitianMatrix& state(std::size_t k) const { return states_.at(k); }
  const std::vector<HermitianMatrix>& states() const noexcept { return states_; }
  /// Empty when the ensemble was built without labels.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(std::size_t k) const;
  double prior(std::size_t k) const { return states_.at(k).trace(); }

  /// Σ_k ρ_k
  HermitianMatrix average_state() const;

 private:
  Index dim_ = 0;
  std::vector<HermitianMatrix> states_;
  std::vector<std::string> labels_;
};

class Povm {
 public:
  explicit Povm(std::vector<HermitianMatrix> elements);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const HermitianMatrix& element(std::size_t k) const { return elements_.at(k); }
  const std::vector<HermitianMatrix>& elements() const noexcept { return elements_; }

  HermitianMatrix total() const;

 private:
  Index dim_ = 0;
  std::vector<HermitianMatrix> elements_;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  /// Measured violation (0 when the invariant holds exactly).
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const;
  /// First failing check, or nullptr.
  const CheckResult* first_failure() const;
  std::string summary() const;
};

ValidationReport validate(const Ensemble& e, const Tolerances& tol = {});
ValidationReport validate(const Povm& m, const Tolerances& tol = {});

/// Throws DimensionError unless e and m have the same dimension and count.
void require_compatible(const Ensemble& e, const Povm& m);

/// L = Σ_k M_k ρ_k (measurement on the left). Not Hermitian in general.
ComplexMatrix lagrange_operator(const Ensemble& e, const Povm& m);

/// Tr L, with round-off below zero clamped to 0.
double success_probability(const Ensemble& e, const Povm& m);

/// M_k = identity/m
Povm uniform_povm(Index dim, std::size_t outcomes);

/// Pretty-good measurement S^{-1/2} ρ_k S^{-1/2}, S = Σ ρ_k, pseudo-inverse
/// on ker S. The kernel projector is added to the first element.
Povm square_root_measurement(const Ensemble& e);

/// ρ_k = |k⟩⟨k|/m on C^m.
Ensemble shifted_basis_ensemble(std::size_t m);
/// M_k = |k+1⟩⟨k+1| (mod m): every guess is wrong on the shifted-basis ensemble.
Povm shifted_basis_povm(std::size_t m);
/// Three pure qubit states with Bloch vectors 120° apart in the x–z plane,
/// equal priors.
Ensemble qubit_trine();

}  // namespace qdisc
