#include "prospector/entropy_oracle.hpp"
#include "prospector/errors.hpp"
#include "prospector/netgen.hpp"
#include "prospector/table_constraints.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace prospector;

namespace {

// Cross-ratio of the (E1, E2) sub-table at fixed C.
double evidence_cross_ratio(const Cells& t, bool c) {
  return t[cell_index(0, 0, c)] * t[cell_index(1, 1, c)] /
         (t[cell_index(0, 1, c)] * t[cell_index(1, 0, c)]);
}

}  // namespace

TEST_CASE("update at the source base rates leaves the table unchanged") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = gen.positive_table();
    const auto r = base_rates(t);
    const auto u = mce_update(t, {r.p_e1, r.p_e2});
    CHECK((u.table.cells() - t.cells()).abs().maxCoeff() <= 1e-12);
    CHECK(std::abs(correct_posterior(t, {r.p_e1, r.p_e2}) - r.p_c) <= 1e-12);
  }
}

TEST_CASE("certain evidence conditions exactly") {
  testing::Gen gen(32);
  const auto t = gen.positive_table();
  const auto q = conditional_profile(t);
  const auto both = mce_update(t, {1.0, 1.0});
  CHECK(both.iterations == 0);
  CHECK(both.table.mass({.c = true}) == doctest::Approx(q.q_tt).epsilon(1e-14));
  CHECK(both.table.mass({.e1 = false}) == 0.0);
  CHECK(both.table.mass({.e2 = false}) == 0.0);
  CHECK(correct_posterior(t, {0.0, 0.0}) == doctest::Approx(q.q_ff).epsilon(1e-14));
  CHECK(correct_posterior(t, {0.0, 1.0}) == doctest::Approx(q.q_ft).epsilon(1e-14));
  CHECK(correct_posterior(t, {1.0, 0.0}) == doctest::Approx(q.q_tf).epsilon(1e-14));
}

TEST_CASE("case study 1 oracle values") {
  const auto t = case_study_one();
  CHECK(correct_posterior(t, {1.0, 1.0}) == doctest::Approx(0.9).epsilon(1e-12));
  // .9(.64) + .5(.16) + .5(.16) + .1(.04)
  CHECK(correct_posterior(t, {0.8, 0.8}) == doctest::Approx(0.74).epsilon(1e-10));
  CHECK(independent_closed_form(t, {0.8, 0.8}) == doctest::Approx(0.74).epsilon(1e-12));
  CHECK(independent_closed_form(t, {0.0, 0.0}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("mixed boundary and interior targets") {
  testing::Gen gen(33);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = gen.positive_table();
    const double x2 = gen.uniform(0.05, 0.95);
    const auto u = mce_update(t, {1.0, x2});
    CHECK(u.deviation_e1 <= 1e-10);
    CHECK(u.deviation_e2 <= 1e-10);
    CHECK(u.table.mass({.e1 = false}) == 0.0);
    // Within the E1-true slice the answer is the E2 mixture of P(C | E1, e2).
    const auto q = conditional_profile(t);
    CHECK(correct_posterior(t, {1.0, x2}) ==
          doctest::Approx(q.q_tf * (1 - x2) + q.q_tt * x2).epsilon(1e-10));
  }
}

TEST_CASE("property: interior updates match the brute-force minimizer") {
  testing::Gen gen(34);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = gen.positive_table();
    for (int k = 0; k < 5; ++k) {
      const EvidenceUpdate update{gen.uniform(0.01, 0.99), gen.uniform(0.01, 0.99)};
      const auto u = mce_update(t, update);
      const Cells reference =
          testing::brute_force_evidence_update(t.cells(), update.p_new_e1, update.p_new_e2);
      CHECK((u.table.cells() - reference).abs().maxCoeff() <= 1e-6);
      CHECK(u.deviation_e1 <= 1e-10);
      CHECK(u.deviation_e2 <= 1e-10);
      for (bool c : {false, true}) {
        CHECK(evidence_cross_ratio(u.table.cells(), c) ==
              doctest::Approx(evidence_cross_ratio(t.cells(), c)).epsilon(1e-9));
      }
    }
  }
  const auto t = gen.positive_table();
  const Cells reference = testing::brute_force_evidence_update(t.cells(), 0.8, 0.2);
  CHECK((mce_update(t, {0.8, 0.2}).table.cells() - reference).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("property: no feasible perturbation lowers the cross-entropy") {
  testing::Gen gen(35);
  const auto t = gen.positive_table();
  const EvidenceUpdate update{0.7, 0.15};
  const Cells q = mce_update(t, update).table.cells();
  const double best = testing::cross_entropy(q, t.cells());

  // Null space of the constraint rows (sum, E1 margin, E2 margin).
  const auto system = testing::margin_system({Event{.e1 = true}, Event{.e2 = true}},
                                             {update.p_new_e1, update.p_new_e2});
  const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(system.a).kernel();
  REQUIRE(kernel.cols() == 5);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd coeffs(kernel.cols());
    for (int j = 0; j < coeffs.size(); ++j) coeffs[j] = gen.uniform(-1, 1);
    Eigen::VectorXd direction = kernel * coeffs;
    direction *= gen.uniform(1e-6, 1e-2) / direction.cwiseAbs().maxCoeff();
    const Cells candidate = q + direction.array();
    if ((candidate <= 0.0).any()) continue;
    ++checked;
    CHECK(testing::cross_entropy(candidate, t.cells()) >= best - 1e-9);
  }
  CHECK(checked > 900);
}

TEST_CASE("zero cells stay zero") {
  Cells cells;
  cells << 0.2, 0.0, 0.1, 0.15, 0.1, 0.15, 0.0, 0.3;
  const JointTable t(cells);
  const auto u = mce_update(t, {0.4, 0.6});
  CHECK(u.table[1] == 0.0);
  CHECK(u.table[6] == 0.0);
  CHECK(u.deviation_e1 <= 1e-10);
  CHECK(u.deviation_e2 <= 1e-10);
}

TEST_CASE("infeasible updates") {
  Cells cells = Cells::Zero();
  cells[cell_index(false, false, true)] = 0.5;
  cells[cell_index(false, true, false)] = 0.5;
  const JointTable no_e1(cells);
  CHECK_THROWS_AS(mce_update(no_e1, {0.5, 0.5}), Infeasible);
  CHECK_THROWS_AS(mce_update(no_e1, {1.0, 0.5}), Infeasible);
  CHECK_NOTHROW(mce_update(no_e1, {0.0, 0.3}));

  // E2 true only together with E1 false: conditioning on E2 leaves no E1 mass.
  Cells split = Cells::Zero();
  split[cell_index(false, true, true)] = 0.4;
  split[cell_index(true, false, true)] = 0.6;
  CHECK_THROWS_AS(mce_update(JointTable(split), {0.5, 1.0}), Infeasible);

  CHECK_THROWS_AS(mce_update(JointTable(), {1.2, 0.5}), InvalidArgument);
}

TEST_CASE("structurally infeasible interior targets hit the iteration cap") {
  // E1 and E2 always agree, so P'(E1) != P'(E2) cannot be met.
  Cells cells = Cells::Zero();
  cells[cell_index(false, false, false)] = 0.5;
  cells[cell_index(true, true, true)] = 0.5;
  try {
    mce_update(JointTable(cells), {0.3, 0.7}, {1e-10, 50});
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.iterations() == 50);
    CHECK(e.deviation() > 0.1);
  }
}

TEST_CASE("closed form requires independent evidence") {
  testing::Gen gen(36);
  Cells cells = assemble_cells({0.4, 0.1, 0.1, 0.4}, {0.2, 0.4, 0.6, 0.8});
  CHECK_THROWS_AS(independent_closed_form(JointTable(cells), {0.5, 0.5}), NotIndependent);
}

TEST_CASE("property: oracle equals the closed-form mixture on independent tables") {
  GenerationConfig config{.count = 100, .seed = 37, .kind = EvidenceRelation::Independent};
  const double grid[] = {0.0, 0.2, 0.5, 0.8, 1.0};
  for (const auto& t : generate_independent(config)) {
    for (double x1 : grid) {
      for (double x2 : grid) {
        const double closed = independent_closed_form(t, {x1, x2});
        CHECK(std::abs(correct_posterior(t, {x1, x2}) - closed) <= 1e-9);
        CHECK(std::abs(testing::mixture_posterior(t.cells(), x1, x2) - closed) <= 1e-12);
      }
    }
  }
}
