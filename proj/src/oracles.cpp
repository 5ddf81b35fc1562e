#include "qdisc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc::oracles {

namespace {

// Unit vectors on S² from the Fibonacci lattice, plus ±x, ±y, ±z.
std::vector<Eigen::Vector3d> sphere_points(int n) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n) + 6);
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    v(axis) = 1.0;
    pts.push_back(v);
    pts.push_back(-v);
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

// Tr(ρ (1 + n·σ)/2) for a 2×2 Hermitian ρ.
double projector_weight(const ComplexMatrix& rho, const Eigen::Vector3d& n) {
  const double tr = (rho(0, 0) + rho(1, 1)).real();
  const double sx = 2.0 * rho(0, 1).real();
  const double sy = -2.0 * rho(0, 1).imag();
  const double sz = (rho(0, 0) - rho(1, 1)).real();
  return 0.5 * (tr + n(0) * sx + n(1) * sy + n(2) * sz);
}

}  // namespace

HelstromResult helstrom_two_state(const HermitianMatrix& rho1, const HermitianMatrix& rho2) {
  require_same_dim(rho1.matrix(), rho2.matrix(), "helstrom_two_state");
  const double total = rho1.trace() + rho2.trace();
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("helstrom_two_state: priors sum to " + std::to_string(total));
  }
  const HermitianMatrix diff = rho1 - rho2;
  const HermitianMatrix p = positive_projection(diff);
  const HermitianMatrix q = HermitianMatrix::identity(rho1.dim()) - p;
  return {0.5 * (1.0 + trace_norm(diff)), Povm({p, q})};
}

double qubit_grid_search(const Ensemble& e, int angular_resolution) {
  if (e.dim() != 2) {
    throw DimensionError("qubit_grid_search: needs dimension 2, got " + std::to_string(e.dim()));
  }
  if (angular_resolution < 1) throw PreconditionError("qubit_grid_search: resolution must be >= 1");

  double best = 0.0;
  for (const auto& rho : e.states()) best = std::max(best, rho.trace());

  const int n = (angular_resolution * angular_resolution + 1) / 2;
  for (const Eigen::Vector3d& dir : sphere_points(n)) {
    double up = 0.0;
    double down = 0.0;
    for (const auto& rho : e.states()) {
      const double w = projector_weight(rho.matrix(), dir);
      up = std::max(up, w);
      down = std::max(down, rho.trace() - w);
    }
    best = std::max(best, up + down);
  }
  return best;
}

std::string ConvergedLReport::summary() const {
  std::ostringstream os;
  os << "hermitian " << (hermitian_ok ? "ok" : "FAIL") << " (|L - L^dagger| = "
     << antihermitian_norm << "), dominance " << (dominance_ok ? "ok" : "FAIL")
     << " (min margin " << min_margin << "), trace " << (trace_ok ? "ok" : "FAIL")
     << " (mismatch " << trace_mismatch << ")";
  return os.str();
}

ConvergedLReport certify_converged_L(const Ensemble& e, const Povm& m, double tol) {
  if (e.dim() != m.dim() || e.size() != m.size()) {
    throw DimensionError("certify_converged_L: ensemble and POVM do not match");
  }
  const Index d = e.dim();
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  double p_succ = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    l += m.element(k).matrix() * e.state(k).matrix();
    // Tr(M ρ) = Σ_ij M_ij ρ_ji
    p_succ += m.element(k).matrix().cwiseProduct(e.state(k).matrix().transpose()).sum().real();
  }

  ConvergedLReport rep;
  rep.antihermitian_norm = operator_norm(ComplexMatrix(l - l.adjoint()));
  rep.hermitian_ok = rep.antihermitian_norm <= static_cast<double>(d) * tol;

  const HermitianMatrix re_l = HermitianMatrix::symmetrize(l);
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& rho : e.states()) {
    rep.min_margin = std::min(rep.min_margin, min_eigenvalue(re_l - rho));
  }
  rep.dominance_ok = rep.min_margin >= -tol;

  rep.trace_mismatch = std::abs(l.trace().real() - p_succ);
  rep.trace_ok = rep.trace_mismatch <= 1e-10;
  return rep;
}

}  // namespace qdisc::oracles
