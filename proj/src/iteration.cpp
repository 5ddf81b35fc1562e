#include "qdisc/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdisc/errors.hpp"

namespace qdisc {

namespace {

using Clock = std::chrono::steady_clock;

// A line-search candidate must beat the default step by more than round-off.
constexpr double kLineSearchMinGain = 1e-14;

// Coefficients of P_succ(M(βΠ, ℓ)) = p0 + b·β + a·β².
struct StepQuadratic {
  double p0 = 0.0;
  double b = 0.0;
  double a = 0.0;

  double operator()(double beta) const { return p0 + beta * (b + beta * a); }
};

StepQuadratic step_quadratic(const Ensemble& e, const Povm& m, const ResidualReport& r,
                             const HermitianMatrix& proj, std::size_t ell) {
  const ComplexMatrix& pi = proj.matrix();
  StepQuadratic q;
  q.p0 = r.p_succ;
  q.b = 2.0 * (pi * r.defects[ell].matrix()).trace().real();
  double curvature = -(pi * e.state(ell).matrix()).trace().real();
  for (std::size_t k = 0; k < e.size(); ++k) {
    curvature += (pi * m.element(k).matrix() * pi * e.state(k).matrix()).trace().real();
  }
  q.a = curvature;
  return q;
}

}  // namespace

Povm bc_modification(const Povm& m, const HermitianMatrix& x, std::size_t ell) {
  if (x.dim() != m.dim()) {
    throw DimensionError("bc_modification: X has dimension " + std::to_string(x.dim()) +
                         ", POVM has " + std::to_string(m.dim()));
  }
  if (ell >= m.size()) {
    throw PreconditionError("bc_modification: outcome index " + std::to_string(ell) +
                            " out of range");
  }
  const HermitianMatrix id = HermitianMatrix::identity(m.dim());
  const SpectralDecomposition s = eigh(x);
  const double lo = s.eigenvalues(s.eigenvalues.size() - 1);
  const double hi = s.eigenvalues(0);
  if (lo < -kModificationTol || hi > 2.0 + kModificationTol) {
    throw PreconditionError("bc_modification: X must satisfy 0 <= X <= 2, spectrum is [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  const ComplexMatrix y = (id - x).matrix();
  std::vector<HermitianMatrix> out;
  out.reserve(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    out.push_back(HermitianMatrix::symmetrize(y * m.element(k).matrix() * y));
  }
  out[ell] += HermitianMatrix::symmetrize(2.0 * x.matrix() - x.matrix() * x.matrix());

  Povm result(std::move(out));
  const ValidationReport rep = validate(result);
  if (!rep.ok()) {
    throw NumericalError("bc_modification: result is not a valid POVM: " +
                             rep.first_failure()->name,
                         0);
  }
  return result;
}

Povm renormalize(const Povm& m) {
  const HermitianMatrix w = pinv_sqrt(m.total());
  std::vector<HermitianMatrix> out;
  out.reserve(m.size());
  for (const auto& el : m.elements()) {
    out.push_back(HermitianMatrix::symmetrize(w.matrix() * el.matrix() * w.matrix()));
  }
  return Povm(std::move(out));
}

StepResult iterate_step(const Ensemble& e, const Povm& m, bool line_search) {
  return iterate_step(e, m, residuals(e, m), line_search);
}

StepResult iterate_step(const Ensemble& e, const Povm& m, const ResidualReport& r,
                        bool line_search) {
  const auto start = Clock::now();
  require_compatible(e, m);

  StepRecord rec;
  rec.p_succ_before = r.p_succ;
  rec.ell = r.argmax_ell;
  rec.t_max = r.t_max();
  rec.line_search = line_search;

  if (rec.t_max <= 0.0) {
    // Condition II holds: X = 0 and the measurement is a fixed point.
    rec.p_succ_after = r.p_succ;
    rec.wall_time = Clock::now() - start;
    return {m, rec};
  }

  const HermitianMatrix& proj = r.positive_projections[rec.ell];
  double step = std::min(rec.t_max, 1.0);
  if (line_search) {
    const StepQuadratic q = step_quadratic(e, m, r, proj, rec.ell);
    double best = q(step);
    std::vector<double> candidates = {2.0};
    if (q.a < 0.0) candidates.push_back(std::clamp(-q.b / (2.0 * q.a), 0.0, 2.0));
    for (double beta : candidates) {
      if (q(beta) > best + kLineSearchMinGain) {
        best = q(beta);
        step = beta;
      }
    }
  }
  rec.alpha_used = step;

  Povm next = bc_modification(m, step * proj, rec.ell);
  const double drift = operator_norm(next.total() - HermitianMatrix::identity(m.dim()));
  if (drift > kDriftTol) {
    next = renormalize(next);
    rec.renormalized = true;
  }
  rec.p_succ_after = success_probability(e, next);
  rec.wall_time = Clock::now() - start;
  return {std::move(next), rec};
}

std::size_t IterationConfig::effective_max_iters() const {
  if (max_iters) return *max_iters;
  return std::min<std::size_t>(theory_budget(tol), 1'000'000);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::tolerance_met: return "tolerance_met";
    case Termination::max_iters: return "max_iters";
    case Termination::theory_bound_exhausted: return "theory_bound_exhausted";
  }
  return "unknown";
}

std::size_t theory_budget(double delta) {
  if (!(delta > 0.0)) throw PreconditionError("theory_budget: delta must be positive");
  const double n = std::ceil(1.0 / (delta * delta));
  if (n >= static_cast<double>(std::numeric_limits<std::size_t>::max())) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(n);
}

std::vector<double> IterationTrace::t_max_sequence() const {
  std::vector<double> seq;
  seq.reserve(steps.size() + 1);
  for (const auto& s : steps) seq.push_back(s.t_max);
  seq.push_back(final_residuals.t_max());
  return seq;
}

std::optional<std::size_t> IterationTrace::first_step_below(double delta) const {
  const std::vector<double> seq = t_max_sequence();
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if (seq[n] <= delta) return n;
  }
  return std::nullopt;
}

IterationTrace run(const Ensemble& e, const Povm& m0, const IterationConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw PreconditionError("run: tol must be positive");
  for (double p : cfg.p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("run: p_grid entries must lie in [0, 1]");
  }
  require_compatible(e, m0);

  IterationTrace trace{cfg, {}, m0, {}, {}, Termination::max_iters};
  const std::size_t max_iters = cfg.effective_max_iters();
  const std::size_t budget = theory_budget(cfg.tol);

  Povm current = m0;
  ResidualReport r = residuals(e, current);
  std::size_t n = 0;
  while (true) {
    if (r.t_max() <= cfg.tol) {
      trace.termination = Termination::tolerance_met;
      break;
    }
    if (n >= max_iters) {
      trace.termination = n >= budget ? Termination::theory_bound_exhausted : Termination::max_iters;
      break;
    }
    StepResult res = iterate_step(e, current, r, cfg.line_search);
    res.record.step_index = n++;
    trace.steps.push_back(res.record);
    current = std::move(res.povm);
    r = residuals(e, current);
  }

  trace.final_certificate = gap_upper_bound(e, current, r, cfg.p_grid);
  trace.final_residuals = std::move(r);
  trace.final_povm = std::move(current);
  return trace;
}

}  // namespace qdisc
