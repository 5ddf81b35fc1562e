#include "qdisc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {

namespace {

Index common_dim(const std::vector<HermitianMatrix>& ms, const char* what) {
  if (ms.empty()) throw DimensionError(std::string(what) + ": no operators given");
  const Index d = ms.front().dim();
  if (d == 0) throw DimensionError(std::string(what) + ": zero-dimensional operator");
  for (const auto& m : ms) {
    if (m.dim() != d) {
      throw DimensionError(std::string(what) + ": operators of dimension " + std::to_string(d) +
                           " and " + std::to_string(m.dim()) + " mixed");
    }
  }
  return d;
}

CheckResult check(std::string name, double residual, double tol, std::string detail = {}) {
  return CheckResult{std::move(name), residual <= tol, residual, std::move(detail)};
}

}  // namespace

Ensemble::Ensemble(std::vector<HermitianMatrix> states, std::vector<std::string> labels)
    : dim_(common_dim(states, "Ensemble")), states_(std::move(states)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != states_.size()) {
    throw DimensionError("Ensemble: " + std::to_string(labels_.size()) + " labels for " +
                         std::to_string(states_.size()) + " states");
  }
}

Ensemble Ensemble::from_priors(const std::vector<std::pair<HermitianMatrix, double>>& weighted,
                               std::vector<std::string> labels) {
  std::vector<HermitianMatrix> states;
  states.reserve(weighted.size());
  for (const auto& [sigma, prior] : weighted) states.push_back(prior * sigma);
  return Ensemble(std::move(states), std::move(labels));
}

std::string Ensemble::label(std::size_t k) const {
  if (k < labels_.size()) return labels_[k];
  return std::to_string(k);
}

HermitianMatrix Ensemble::average_state() const {
  HermitianMatrix s = HermitianMatrix::zero(dim_);
  for (const auto& rho : states_) s += rho;
  return s;
}

Povm::Povm(std::vector<HermitianMatrix> elements)
    : dim_(common_dim(elements, "Povm")), elements_(std::move(elements)) {}

HermitianMatrix Povm::total() const {
  HermitianMatrix s = HermitianMatrix::zero(dim_);
  for (const auto& m : elements_) s += m;
  return s;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "ok   " : "FAIL ") << c.name << " residual=" << c.residual;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

ValidationReport validate(const Ensemble& e, const Tolerances& tol) {
  ValidationReport rep;
  rep.checks.push_back(CheckResult{"state_count", e.size() >= 2, e.size() >= 2 ? 0.0 : 1.0,
                                   std::to_string(e.size()) + " states, need at least 2"});
  double total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double lo = min_eigenvalue(e.state(k));
    rep.checks.push_back(check("psd[" + e.label(k) + "]", std::max(0.0, -lo), tol.psd,
                               "min eigenvalue " + std::to_string(lo)));
    total += e.prior(k);
  }
  const double deficit = 1.0 - total;
  std::ostringstream detail;
  detail << "priors sum to " << total << ", deficit " << deficit;
  rep.checks.push_back(check("trace_sum", std::abs(deficit), tol.trace_sum, detail.str()));
  return rep;
}

ValidationReport validate(const Povm& m, const Tolerances& tol) {
  ValidationReport rep;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double lo = min_eigenvalue(m.element(k));
    rep.checks.push_back(check("psd[" + std::to_string(k) + "]", std::max(0.0, -lo), tol.psd,
                               "min eigenvalue " + std::to_string(lo)));
  }
  const double resid = operator_norm(m.total() - HermitianMatrix::identity(m.dim()));
  rep.checks.push_back(check("completeness", resid, tol.completeness,
                             "|sum M_k - identity|_inf"));
  return rep;
}

void require_compatible(const Ensemble& e, const Povm& m) {
  if (e.dim() != m.dim()) {
    throw DimensionError("ensemble dimension " + std::to_string(e.dim()) +
                         " does not match POVM dimension " + std::to_string(m.dim()));
  }
  if (e.size() != m.size()) {
    throw DimensionError("ensemble has " + std::to_string(e.size()) + " states but POVM has " +
                         std::to_string(m.size()) + " outcomes");
  }
}

ComplexMatrix lagrange_operator(const Ensemble& e, const Povm& m) {
  require_compatible(e, m);
  ComplexMatrix l = ComplexMatrix::Zero(e.dim(), e.dim());
  for (std::size_t k = 0; k < e.size(); ++k) l.noalias() += m.element(k).matrix() * e.state(k).matrix();
  return l;
}

double success_probability(const Ensemble& e, const Povm& m) {
  return std::max(0.0, lagrange_operator(e, m).trace().real());
}

Povm uniform_povm(Index dim, std::size_t outcomes) {
  if (dim <= 0 || outcomes == 0) throw DimensionError("uniform_povm: need dim >= 1 and m >= 1");
  return Povm(std::vector<HermitianMatrix>(
      outcomes, HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(outcomes))));
}

Povm square_root_measurement(const Ensemble& e) {
  const HermitianMatrix s = e.average_state();
  const HermitianMatrix w = pinv_sqrt(s);
  std::vector<HermitianMatrix> elems;
  elems.reserve(e.size());
  HermitianMatrix range_proj = HermitianMatrix::zero(e.dim());
  for (const auto& rho : e.states()) {
    elems.push_back(HermitianMatrix::symmetrize(w.matrix() * rho.matrix() * w.matrix()));
    range_proj += elems.back();
  }
  // identity - Σ M_k is the projector onto ker S (up to round-off).
  elems.front() += HermitianMatrix::identity(e.dim()) - range_proj;
  return Povm(std::move(elems));
}

Ensemble shifted_basis_ensemble(std::size_t m) {
  if (m < 2) throw PreconditionError("shifted_basis_ensemble: need m >= 2");
  const auto d = static_cast<Index>(m);
  std::vector<HermitianMatrix> states;
  for (Index k = 0; k < d; ++k) {
    RealVector diag = RealVector::Zero(d);
    diag(k) = 1.0 / static_cast<double>(m);
    states.push_back(HermitianMatrix::diagonal(diag));
  }
  return Ensemble(std::move(states));
}

Povm shifted_basis_povm(std::size_t m) {
  if (m < 2) throw PreconditionError("shifted_basis_povm: need m >= 2");
  const auto d = static_cast<Index>(m);
  std::vector<HermitianMatrix> elems;
  for (Index k = 0; k < d; ++k) {
    RealVector diag = RealVector::Zero(d);
    diag((k + 1) % d) = 1.0;
    elems.push_back(HermitianMatrix::diagonal(diag));
  }
  return Povm(std::move(elems));
}

Ensemble qubit_trine() {
  std::vector<HermitianMatrix> states;
  for (int k = 0; k < 3; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 3.0;
    ComplexVector psi(2);
    psi << std::cos(theta / 2.0), std::sin(theta / 2.0);
    states.push_back(HermitianMatrix::outer(psi) * (1.0 / 3.0));
  }
  return Ensemble(std::move(states), {"trine0", "trine1", "trine2"});
}

}  // namespace qdisc
