#include "qdisc/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdisc/errors.hpp"

namespace qdisc {

namespace {

struct Eigenpair {
  double mass;
  ComplexVector vec;
};

// All eigenpairs of all states above the per-state zero cutoff, sorted by
// mass descending; ties keep (state, eigen-index) order.
std::vector<Eigenpair> pooled_eigenpairs(const Ensemble& e) {
  std::vector<Eigenpair> pool;
  for (const auto& rho : e.states()) {
    const SpectralDecomposition s = eigh(rho);
    const double cutoff = eig_zero_cutoff(s);
    for (Index i = 0; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues(i) > cutoff) pool.push_back({s.eigenvalues(i), s.eigenvectors.col(i)});
    }
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.mass > b.mass; });
  return pool;
}

// tails[n] = mass excluded when keeping the first n pooled eigenpairs.
std::vector<double> tail_masses(const std::vector<Eigenpair>& pool) {
  std::vector<double> tails(pool.size() + 1, 0.0);
  for (std::size_t i = pool.size(); i-- > 0;) tails[i] = tails[i + 1] + pool[i].mass;
  return tails;
}

double excluded_trace_norm(const Ensemble& e, const HermitianMatrix& projector) {
  const ComplexMatrix complement =
      ComplexMatrix::Identity(e.dim(), e.dim()) - projector.matrix();
  double total = 0.0;
  for (const auto& rho : e.states()) total += trace_norm(ComplexMatrix(complement * rho.matrix()));
  return total;
}

}  // namespace

ResidualReport residuals(const Ensemble& e, const Povm& m) {
  const ComplexMatrix l = lagrange_operator(e, m);
  const HermitianMatrix re_l = real_part(l);

  ResidualReport r;
  r.p_succ = std::max(0.0, l.trace().real());
  r.antihermitian_norm = operator_norm(ComplexMatrix(l - l.adjoint()));
  r.defects.reserve(e.size());
  double best = -1.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    HermitianMatrix d = e.state(k) - re_l;
    PositiveSplit split = positive_split(d);
    r.defects.push_back(std::move(d));
    r.positive_projections.push_back(std::move(split.projection));
    r.t.push_back(split.trace);
    r.lam.push_back(split.max_eigenvalue);
    r.alpha_scalar = std::max(r.alpha_scalar, std::max(split.max_eigenvalue, 0.0));
    if (split.trace > best) {
      best = split.trace;
      r.argmax_ell = k;
    }
  }
  return r;
}

OptimalityVerdict check_optimal(const Ensemble& e, const Povm& m, double tol) {
  OptimalityVerdict v;
  v.report = residuals(e, m);
  v.optimal = v.report.t_max() <= tol;
  return v;
}

double gap_lower_bound(const ResidualReport& r) {
  const double t = r.t_max();
  return t * t;
}

PDimensionProjector p_dimension_projector(const Ensemble& e, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError("p_dimension_projector: p must lie in [0, 1], got " +
                            std::to_string(p));
  }
  const std::vector<Eigenpair> pool = pooled_eigenpairs(e);
  const std::vector<double> tails = tail_masses(pool);

  std::size_t keep = 0;
  while (keep < pool.size() && tails[keep] > p) ++keep;

  ComplexMatrix columns(e.dim(), static_cast<Index>(keep));
  for (std::size_t i = 0; i < keep; ++i) columns.col(static_cast<Index>(i)) = pool[i].vec;

  PDimensionProjector out;
  out.projector = span_projector(columns, &out.rank);
  out.tail_mass = tails[keep];
  out.residual_bound = excluded_trace_norm(e, out.projector);
  return out;
}

std::vector<double> p_dimension_breakpoints(const Ensemble& e) {
  std::vector<double> tails = tail_masses(pooled_eigenpairs(e));
  for (double& t : tails) t = std::clamp(t, 0.0, 1.0);
  std::sort(tails.begin(), tails.end());
  tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
  return tails;
}

GapCertificate gap_upper_bound(const Ensemble& e, const Povm& m, const ResidualReport& r,
                               const std::vector<double>& p_grid) {
  require_compatible(e, m);
  if (r.defects.size() != e.size()) {
    throw DimensionError("gap_upper_bound: residual report does not match the ensemble");
  }
  std::vector<double> grid = p_grid.empty() ? kDefaultPGrid : p_grid;
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw PreconditionError("gap_upper_bound: p_grid entries must lie in [0, 1]");
    }
  }
  std::sort(grid.begin(), grid.end());

  GapCertificate cert;
  cert.lower = gap_lower_bound(r);
  cert.alpha_scalar = r.alpha_scalar;
  cert.upper = std::numeric_limits<double>::infinity();

  auto consider = [&](double p) {
    const PDimensionProjector proj = p_dimension_projector(e, p);
    const double bound = r.alpha_scalar * proj.projector.trace() + 4.0 * proj.residual_bound;
    if (bound < cert.upper) {
      cert.upper = bound;
      cert.p_used = p;
      cert.dim_used = proj.rank;
      cert.projector_rank = static_cast<Index>(std::lround(proj.projector.trace()));
    }
  };

  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double before = cert.upper;
    consider(grid[i]);
    if (cert.upper < before) best = i;
  }

  const double lo = best > 0 ? grid[best - 1] : 0.0;
  const double hi = best + 1 < grid.size() ? grid[best + 1] : 1.0;
  for (double p : p_dimension_breakpoints(e)) {
    if (p >= lo && p <= hi) consider(p);
  }
  cert.upper = std::max(cert.upper, 0.0);
  return cert;
}

GapCertificate certify(const Ensemble& e, const Povm& m, const std::vector<double>& p_grid) {
  return gap_upper_bound(e, m, residuals(e, m), p_grid);
}

}  // namespace qdisc
