// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every tolerance below is fixed; nothing is calibrated at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/iteration.hpp"
#include "qdisc/linalg.hpp"
#include "qdisc/model.hpp"
#include "qdisc/optimality.hpp"
#include "qdisc/oracles.hpp"
#include "support/random.hpp"

using namespace qdisc;
using qdisc::testing::Rng;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double time_limit_s;  // <= 0: no runtime requirement
  std::function<void(Verdict&)> body;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Corpus shared by the step and budget criteria: d ≤ 4, m ≤ 5.
struct Case {
  Ensemble ensemble;
  Povm povm;
};

std::vector<Case> random_corpus(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Case> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Index d = rng.integer(1, 4);
    const auto m = static_cast<std::size_t>(rng.integer(2, 5));
    Ensemble e = rng.ensemble(d, m);
    Povm p = rng.povm(d, m);
    out.push_back({std::move(e), std::move(p)});
  }
  return out;
}

void paper_example(Verdict& v) {
  for (std::size_t m : {2u, 4u, 8u}) {
    const Ensemble e = shifted_basis_ensemble(m);
    const Povm povm = shifted_basis_povm(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    const ResidualReport r = residuals(e, povm);
    const std::string tag = "m=" + std::to_string(m);
    v.require(success_probability(e, povm) == 0.0, tag + " P_succ != 0");
    v.require(std::abs(r.alpha_scalar - inv_m) <= 1e-12, tag + " alpha = " + fmt(r.alpha_scalar));
    v.require(std::abs(gap_lower_bound(r) - inv_m * inv_m) <= 1e-12, tag + " gap_lower");
  }
  v.note << "alpha = 1/m and gap_lower = 1/m^2 for m in {2,4,8}";
}

void convergence_to_known_optimum(Verdict& v) {
  const Ensemble e = shifted_basis_ensemble(4);
  IterationConfig cfg;
  cfg.tol = 1e-6;
  const IterationTrace t = run(e, uniform_povm(4, 4), cfg);
  const oracles::ConvergedLReport rep = oracles::certify_converged_L(e, t.final_povm, 1e-5);
  v.require(t.final_p_succ() >= 1.0 - 1e-4, "P_succ = " + fmt(t.final_p_succ()));
  v.require(rep.passed(), rep.summary());
  v.note << "P_succ = " << t.final_p_succ() << " after " << t.steps.size() << " steps";
}

void helstrom_agreement(Verdict& v) {
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 70; ++i) {
    const Index d = i < 50 ? 2 : 3;
    const Ensemble e = rng.ensemble(d, 2);
    IterationConfig cfg;
    cfg.tol = 1e-8;
    const IterationTrace t = run(e, uniform_povm(d, 2), cfg);
    const double p_opt = oracles::helstrom_two_state(e.state(0), e.state(1)).p_opt;
    worst = std::max(worst, std::abs(t.final_p_succ() - p_opt));
  }
  v.require(worst <= 1e-6, "max deviation " + fmt(worst));
  v.note << "max |P_succ - P_helstrom| = " << fmt(worst) << " over 50 qubit + 20 qutrit pairs";
}

void step_inequality(Verdict& v) {
  Tolerances strict;
  strict.psd = 1e-8;
  strict.completeness = 1e-8;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const Case& c : random_corpus(404, 200)) {
    const StepResult s = iterate_step(c.ensemble, c.povm, false);
    const double slack = (s.record.p_succ_after - s.record.p_succ_before) - s.record.t_max * s.record.t_max;
    worst_slack = std::min(worst_slack, slack);
    v.require(slack >= -1e-9, "increment below t_max^2 by " + fmt(-slack));
    v.require(validate(s.povm, strict).ok(), "output POVM invalid at 1e-8");
  }
  v.note << "min (increment - t_max^2) = " << fmt(worst_slack) << " over 200 steps";
}

void iteration_budget(Verdict& v) {
  std::size_t worst_02 = 0;
  std::size_t worst_01 = 0;
  for (const Case& c : random_corpus(505, 100)) {
    IterationConfig cfg;
    cfg.tol = 0.1;
    cfg.line_search = false;
    const IterationTrace t = run(c.ensemble, c.povm, cfg);
    for (double delta : {0.2, 0.1}) {
      const auto first = t.first_step_below(delta);
      v.require(first.has_value(), "never reached t_max <= " + fmt(delta));
      if (!first) continue;
      v.require(*first <= theory_budget(delta), "first step " + std::to_string(*first) + " > budget");
      (delta == 0.2 ? worst_02 : worst_01) = std::max(delta == 0.2 ? worst_02 : worst_01, *first);
    }
  }
  v.note << "worst first-hit step: " << worst_02 << " <= 25 (delta 0.2), " << worst_01
         << " <= 100 (delta 0.1)";
}

void gap_sandwich(Verdict& v) {
  std::size_t two_state = 0;
  for (const Case& c : random_corpus(606, 200)) {
    const GapCertificate cert = certify(c.ensemble, c.povm);
    v.require(cert.lower <= cert.upper + 1e-8, "lower " + fmt(cert.lower) + " > upper " + fmt(cert.upper));
    if (c.ensemble.size() == 2) {
      ++two_state;
      const double gap = oracles::helstrom_two_state(c.ensemble.state(0), c.ensemble.state(1)).p_opt -
                         success_probability(c.ensemble, c.povm);
      v.require(gap >= cert.lower - 1e-8 && gap <= cert.upper + 1e-8,
                "true gap " + fmt(gap) + " outside [" + fmt(cert.lower) + ", " + fmt(cert.upper) + "]");
    }
  }
  v.require(two_state >= 20, "too few two-state cases");
  v.note << "200 pairs, " << two_state << " with exact P_opt";
}

void fixed_point(Verdict& v) {
  std::vector<Case> optima;
  Rng rng(707);
  for (int i = 0; i < 40; ++i) {
    const Index d = rng.integer(2, 4);
    Ensemble e = rng.ensemble(d, 2);
    Povm p = oracles::helstrom_two_state(e.state(0), e.state(1)).povm;
    optima.push_back({std::move(e), std::move(p)});
  }
  optima.push_back({qubit_trine(), square_root_measurement(qubit_trine())});
  optima.push_back({shifted_basis_ensemble(4), square_root_measurement(shifted_basis_ensemble(4))});

  double worst_move = 0.0;
  double worst_t = 0.0;
  for (const Case& c : optima) {
    v.require(oracles::certify_converged_L(c.ensemble, c.povm, 1e-8).passed(), "fixture is not certified optimal");
    for (bool ls : {false, true}) {
      const StepResult s = iterate_step(c.ensemble, c.povm, ls);
      for (std::size_t k = 0; k < c.povm.size(); ++k) {
        worst_move = std::max(worst_move, testing::max_entry_diff(s.povm.element(k).matrix(),
                                                                  c.povm.element(k).matrix()));
      }
      worst_t = std::max(worst_t, s.record.t_max);
    }
  }
  v.require(worst_move <= 1e-10, "POVM moved by " + fmt(worst_move));
  v.require(worst_t <= 1e-10, "t_max = " + fmt(worst_t));
  v.note << optima.size() << " certified optima, max entry change " << fmt(worst_move);
}

void trine(Verdict& v) {
  const Ensemble e = qubit_trine();
  const IterationTrace t = run(e, uniform_povm(2, 3), IterationConfig{});
  const double grid = oracles::qubit_grid_search(e, 720);
  v.require(std::abs(t.final_p_succ() - 2.0 / 3.0) <= 1e-4, "P_succ = " + fmt(t.final_p_succ()));
  v.require(grid <= t.final_p_succ() + 1e-6, "grid " + fmt(grid) + " beats iteration");
  v.note << "P_succ = " << t.final_p_succ() << ", projective grid = " << grid;
}

void spectral_kernel(Verdict& v) {
  Rng rng(909);
  for (int i = 0; i < 1000; ++i) {
    const Index d = rng.integer(1, 16);
    const double dd = static_cast<double>(d);
    const HermitianMatrix a = rng.hermitian(d, 0.1 + 2.0 * rng.uniform());
    const HermitianMatrix plus = positive_part(a);
    const HermitianMatrix minus = positive_part(-a);
    const HermitianMatrix proj = positive_projection(a);
    const double tn = trace_norm(a.matrix());

    v.require(std::abs(a.trace() - (plus.trace() - minus.trace())) <= 1e-8 * dd, "Jordan trace identity");
    v.require(std::abs(tn - (plus.trace() + minus.trace())) <= 1e-8 * dd, "trace norm split");
    v.require(operator_norm(ComplexMatrix(proj.matrix() * proj.matrix() - proj.matrix())) <= 1e-8,
              "projector idempotence");
    v.require(std::abs(a.trace()) <= tn + 1e-12 * dd, "|Tr A| <= |A|_1");

    const ComplexMatrix b = rng.ginibre(d, d);
    const ComplexMatrix c = rng.ginibre(d, d);
    const double lhs = trace_norm(ComplexMatrix(b * c));
    const double rhs = trace_norm(b) * operator_norm(c);
    v.require(lhs <= rhs * (1.0 + 1e-12), "Holder |BC|_1 <= |B|_1 |C|_inf");

    const SpectralDecomposition s = eigh(a);
    const double spectral_tol = 1e-10 * dd;
    v.require(operator_norm(ComplexMatrix(s.reconstruct() - a.matrix())) <= spectral_tol * operator_norm(a),
              "eigh reconstruction");
    v.require(operator_norm(ComplexMatrix(s.eigenvectors.adjoint() * s.eigenvectors -
                                          ComplexMatrix::Identity(d, d))) <= spectral_tol,
              "eigh orthonormality");
  }
  v.note << "1000 random matrices, d <= 16";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "paper example reproduction", 1.0, paper_example},
      {"AC2", "convergence to known optimum", 5.0, convergence_to_known_optimum},
      {"AC3", "Helstrom agreement", 60.0, helstrom_agreement},
      {"AC4", "single-step increment >= t_max^2", 0.0, step_inequality},
      {"AC5", "first hit of t_max <= delta within ceil(delta^-2) steps", 0.0, iteration_budget},
      {"AC6", "gap sandwich", 0.0, gap_sandwich},
      {"AC7", "optimal POVMs are fixed points", 0.0, fixed_point},
      {"AC8", "symmetric trine", 0.0, trine},
      {"AC9", "spectral kernel properties", 0.0, spectral_kernel},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& ex) {
      v.require(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0) {
      v.require(secs < c.time_limit_s, "runtime " + fmt(secs) + " s over limit");
    }
    std::printf("[%s] %s %s (%.3f s) %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title, secs, v.note.str().c_str());
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
