#include <doctest.h>

#include <cmath>

#include "qdisc/errors.hpp"
#include "qdisc/optimality.hpp"
#include "qdisc/oracles.hpp"
#include "support/random.hpp"

using namespace qdisc;
using qdisc::testing::Rng;

namespace {

Povm computational_basis(Index d) {
  std::vector<HermitianMatrix> elems;
  for (Index k = 0; k < d; ++k) {
    RealVector v = RealVector::Zero(d);
    v(k) = 1.0;
    elems.push_back(HermitianMatrix::diagonal(v));
  }
  return Povm(std::move(elems));
}

Ensemble diagonal_ensemble(const std::vector<double>& priors) {
  const auto d = static_cast<Index>(priors.size());
  std::vector<HermitianMatrix> states;
  for (Index k = 0; k < d; ++k) {
    RealVector v = RealVector::Zero(d);
    v(k) = priors[static_cast<std::size_t>(k)];
    states.push_back(HermitianMatrix::diagonal(v));
  }
  return Ensemble(std::move(states));
}

}  // namespace

TEST_CASE("residuals") {
  SUBCASE("shifted basis, m = 4") {
    const ResidualReport r = residuals(shifted_basis_ensemble(4), shifted_basis_povm(4));
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(r.t[k] == doctest::Approx(0.25).epsilon(1e-14));
      CHECK(r.lam[k] == doctest::Approx(0.25).epsilon(1e-14));
    }
    CHECK(r.alpha_scalar == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.argmax_ell == 0);
    CHECK(r.p_succ == 0.0);
  }
  SUBCASE("orthogonal states in their own basis") {
    const ResidualReport r = residuals(diagonal_ensemble({0.3, 0.7}), computational_basis(2));
    for (double t : r.t) CHECK(t == 0.0);
    CHECK(r.alpha_scalar == 0.0);
  }
  SUBCASE("random qubit ensembles") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
      const Ensemble e = rng.ensemble(2, static_cast<std::size_t>(rng.integer(2, 4)));
      const ResidualReport r = residuals(e, rng.povm(2, e.size()));
      double t_best = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) {
        CHECK(r.t[k] >= std::max(r.lam[k], 0.0) - 1e-14);
        CHECK(max_eigenvalue(r.defects[k]) <= r.t[k] + 1e-10);
        t_best = std::max(t_best, r.t[k]);
      }
      CHECK(r.t_max() == t_best);
      for (std::size_t k = 0; k < r.argmax_ell; ++k) CHECK(r.t[k] < r.t_max());
    }
  }
}

TEST_CASE("check_optimal") {
  CHECK(check_optimal(diagonal_ensemble({0.5, 0.25, 0.25}), computational_basis(3), 1e-8).optimal);

  const OptimalityVerdict shifted = check_optimal(shifted_basis_ensemble(4), shifted_basis_povm(4), 1e-3);
  CHECK_FALSE(shifted.optimal);
  CHECK(shifted.report.t_max() == doctest::Approx(0.25));

  Rng rng(37);
  const Ensemble e = Ensemble::from_priors({{rng.density(2, 1), 0.5}, {rng.density(2, 1), 0.5}});
  const Povm uniform = uniform_povm(2, 2);
  CHECK_FALSE(check_optimal(e, uniform, 1e-8).optimal);
  CHECK(oracles::helstrom_two_state(e.state(0), e.state(1)).p_opt > success_probability(e, uniform) + 1e-3);
}

TEST_CASE("condition II residual agrees with the semidefinite order") {
  Rng rng(41);
  for (int i = 0; i < 40; ++i) {
    const Index d = rng.integer(2, 3);
    const Ensemble e = rng.ensemble(d, 2);
    const bool at_optimum = i % 2 == 0;
    const Povm m = at_optimum ? oracles::helstrom_two_state(e.state(0), e.state(1)).povm : rng.povm(d, 2);
    const ResidualReport r = residuals(e, m);
    const HermitianMatrix re_l = real_part(lagrange_operator(e, m));
    bool dominates = true;
    for (const auto& rho : e.states()) dominates = dominates && is_psd(re_l - rho, 1e-8);
    CHECK((r.t_max() <= 1e-8) == dominates);
    CHECK(dominates == at_optimum);
  }
}

TEST_CASE("gap_lower_bound") {
  CHECK(gap_lower_bound(residuals(shifted_basis_ensemble(4), shifted_basis_povm(4))) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(gap_lower_bound(residuals(diagonal_ensemble({0.5, 0.5}), computational_basis(2))) == 0.0);
  const double lower = gap_lower_bound(residuals(shifted_basis_ensemble(2), shifted_basis_povm(2)));
  CHECK(lower == doctest::Approx(0.25));
  CHECK(lower <= 1.0);  // true gap: P_opt = 1, P_succ = 0
}

TEST_CASE("p_dimension_projector") {
  SUBCASE("shifted basis, p = 1/4 drops one direction") {
    const PDimensionProjector p = p_dimension_projector(shifted_basis_ensemble(4), 0.25);
    CHECK(p.rank == 3);
    CHECK(p.projector.trace() == doctest::Approx(3.0));
    CHECK(p.tail_mass == doctest::Approx(0.25));
    CHECK(p.residual_bound == doctest::Approx(0.25));
  }
  SUBCASE("p = 1 allows the zero subspace") {
    const PDimensionProjector p = p_dimension_projector(shifted_basis_ensemble(4), 1.0);
    CHECK(p.rank == 0);
    CHECK(p.projector.matrix().isZero());
    CHECK(p.residual_bound == doctest::Approx(1.0));
  }
  SUBCASE("p = 0 spans the joint support") {
    Rng rng(43);
    const Ensemble full = Ensemble::from_priors({{rng.density(2), 0.5}, {rng.density(2), 0.5}});
    CHECK(p_dimension_projector(full, 0.0).rank == 2);
    const Ensemble thin = Ensemble::from_priors({{rng.density(4, 1), 0.5}, {rng.density(4, 1), 0.5}});
    const PDimensionProjector p = p_dimension_projector(thin, 0.0);
    CHECK(p.rank == 2);
    CHECK(p.residual_bound < 1e-10);
  }
  SUBCASE("identical pure states share one direction") {
    Rng rng(47);
    const HermitianMatrix psi = rng.density(3, 1);
    const Ensemble e = Ensemble::from_priors({{psi, 0.5}, {psi, 0.5}});
    CHECK(p_dimension_projector(e, 0.0).rank == 1);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(p_dimension_projector(shifted_basis_ensemble(2), -0.1), PreconditionError);
    CHECK_THROWS_AS(p_dimension_projector(shifted_basis_ensemble(2), 1.5), PreconditionError);
  }
  SUBCASE("residual within tail mass within p, monotone rank") {
    Rng rng(53);
    for (int i = 0; i < 30; ++i) {
      const Ensemble e = rng.ensemble(rng.integer(2, 5), static_cast<std::size_t>(rng.integer(2, 4)));
      Index prev_rank = e.dim() + 1;
      for (double p : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
        const PDimensionProjector proj = p_dimension_projector(e, p);
        CHECK(proj.residual_bound <= proj.tail_mass + 1e-10);
        CHECK(proj.tail_mass <= p + 1e-15);
        CHECK(proj.rank <= prev_rank);
        CHECK(operator_norm(ComplexMatrix(proj.projector.matrix() * proj.projector.matrix() -
                                          proj.projector.matrix())) < 1e-8);
        prev_rank = proj.rank;
      }
    }
  }
}

TEST_CASE("gap_upper_bound") {
  SUBCASE("optimal measurement") {
    const Ensemble e = diagonal_ensemble({0.5, 0.25, 0.25});
    const Povm m = computational_basis(3);
    const GapCertificate c = gap_upper_bound(e, m, residuals(e, m));
    CHECK(c.upper == 0.0);
    CHECK(c.lower == 0.0);
    CHECK(c.p_used == 0.0);
  }
  SUBCASE("shifted basis, m = 4 matches the true gap of 1") {
    const Ensemble e = shifted_basis_ensemble(4);
    const Povm m = shifted_basis_povm(4);
    const GapCertificate c = gap_upper_bound(e, m, residuals(e, m));
    CHECK(c.upper == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.lower == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(c.alpha_scalar == doctest::Approx(0.25));
    CHECK(c.p_used == 0.0);
    CHECK(c.dim_used == 4);
    CHECK(c.projector_rank == 4);
  }
  SUBCASE("p-grid validation") {
    const Ensemble e = shifted_basis_ensemble(2);
    const Povm m = shifted_basis_povm(2);
    CHECK_THROWS_AS(gap_upper_bound(e, m, residuals(e, m), {0.0, 2.0}), PreconditionError);
  }
  SUBCASE("refinement is never worse than the grid alone") {
    Rng rng(59);
    for (int i = 0; i < 30; ++i) {
      const Index d = rng.integer(2, 4);
      const Ensemble e = rng.ensemble(d, 3);
      const Povm m = rng.povm(d, 3);
      const ResidualReport r = residuals(e, m);
      const GapCertificate c = gap_upper_bound(e, m, r);
      for (double p : kDefaultPGrid) {
        const PDimensionProjector proj = p_dimension_projector(e, p);
        CHECK(c.upper <= r.alpha_scalar * proj.projector.trace() + 4.0 * proj.residual_bound + 1e-12);
      }
    }
  }
}

TEST_CASE("gap sandwich against the Helstrom optimum") {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    const Index d = rng.integer(2, 4);
    const Ensemble e = rng.ensemble(d, 2);
    const Povm m = rng.povm(d, 2);
    const GapCertificate c = certify(e, m);
    const double gap = oracles::helstrom_two_state(e.state(0), e.state(1)).p_opt - success_probability(e, m);
    CHECK(c.lower <= c.upper + 1e-8);
    CHECK(gap >= c.lower - 1e-8);
    CHECK(gap <= c.upper + 1e-8);
  }
}
