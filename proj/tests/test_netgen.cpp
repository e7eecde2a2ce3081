#include "prospector/errors.hpp"
#include "prospector/netgen.hpp"
#include "prospector/network_io.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace prospector;

namespace {

// Conditional odds ratios of each variable pair at both levels of the third.
std::array<double, 6> conditional_odds_ratios(const Cells& t) {
  std::array<double, 6> out{};
  int k = 0;
  for (int level = 0; level < 2; ++level) {
    const bool z = level;
    out[k++] = t[cell_index(0, 0, z)] * t[cell_index(1, 1, z)] /
               (t[cell_index(0, 1, z)] * t[cell_index(1, 0, z)]);  // E1,E2 | C
    out[k++] = t[cell_index(0, z, 0)] * t[cell_index(1, z, 1)] /
               (t[cell_index(0, z, 1)] * t[cell_index(1, z, 0)]);  // E1,C | E2
    out[k++] = t[cell_index(z, 0, 0)] * t[cell_index(z, 1, 1)] /
               (t[cell_index(z, 0, 1)] * t[cell_index(z, 1, 0)]);  // E2,C | E1
  }
  return out;
}

std::string serialize(const std::vector<JointTable>& tables) {
  std::ostringstream out;
  write_networks(out, tables);
  return out.str();
}

double ks_uniform(std::vector<double> sample, double lo, double hi) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = (sample[i] - lo) / (hi - lo);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace

TEST_CASE("ipf_fit: already matching targets is a fixed point") {
  testing::Gen gen(1);
  const auto t = gen.positive_table();
  const auto r = base_rates(t);
  const auto fitted = ipf_fit(t, {r.p_e1, r.p_e2, r.p_c});
  CHECK((fitted.cells() - t.cells()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("ipf_fit: hits targets and matches the brute-force projection") {
  testing::Gen gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = gen.positive_table();
    const MarginTargets targets{0.3, 0.6, 0.5};
    const auto fitted = ipf_fit(t, targets);
    CHECK(margin_deviation(fitted, targets) <= 1e-10);
    CHECK(std::abs(fitted.cells().sum() - 1.0) <= 1e-12);

    const Cells reference = testing::brute_force_margin_fit(t.cells(), 0.3, 0.6, 0.5);
    CHECK((fitted.cells() - reference).abs().maxCoeff() <= 1e-6);

    const auto before = conditional_odds_ratios(t.cells());
    const auto after = conditional_odds_ratios(fitted.cells());
    for (int k = 0; k < 6; ++k) CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-9));
  }
}

TEST_CASE("ipf_fit: idempotent and independent of sweep order") {
  testing::Gen gen(3);
  const std::array<Variable, 3> orders[] = {{Variable::C, Variable::E2, Variable::E1},
                                            {Variable::E2, Variable::C, Variable::E1}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = gen.positive_table();
    const MarginTargets targets{gen.uniform(0.05, 0.95), gen.uniform(0.05, 0.95), gen.uniform(0.05, 0.95)};
    const auto once = ipf_fit(t, targets);
    const auto twice = ipf_fit(once, targets);
    CHECK((twice.cells() - once.cells()).abs().maxCoeff() <= 1e-12);
    for (const auto& order : orders) {
      const auto other = ipf_fit(t, targets, 1e-12, 10000, order);
      CHECK((other.cells() - once.cells()).abs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("ipf_fit: errors") {
  testing::Gen gen(4);
  const auto t = gen.positive_table();
  CHECK_THROWS_AS(ipf_fit(t, {0.0, 0.5, 0.5}), InvalidArgument);
  Cells zero = t.cells();
  zero[0] = 0.0;
  CHECK_THROWS_AS(ipf_fit(JointTable(zero / zero.sum()), {0.3, 0.5, 0.5}), InvalidArgument);
  try {
    ipf_fit(t, {0.01, 0.99, 0.5}, 1e-14, 1);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.deviation() > 1e-14);
  }
}

TEST_CASE("network streams are keyed by seed, index and attempt") {
  NetworkRng a(7, 3), b(7, 3), c(7, 4), d(8, 3), e(7, 3, 1);
  const double first = a.uniform();
  CHECK(first == b.uniform());
  CHECK(first != c.uniform());
  CHECK(first != d.uniform());
  CHECK(first != e.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform(0.25, 0.5);
    CHECK(u > 0.25);
    CHECK(u < 0.5);
  }
}

TEST_CASE("generate_associated") {
  GenerationConfig config{.count = 400, .seed = 42, .kind = EvidenceRelation::Associated};
  const auto tables = generate_associated(config);
  REQUIRE(tables.size() == 400);

  std::vector<double> e1, e2, c;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    CHECK(t.kind() == EvidenceRelation::Associated);
    REQUIRE(t.provenance());
    CHECK(t.provenance()->index == i);
    CHECK(validate(t).ok());

    // Replay the first three draws of the network's stream: the drawn targets.
    NetworkRng rng(config.seed, i, t.provenance()->resamples);
    const MarginTargets targets{rng.uniform(1e-3, 1 - 1e-3), rng.uniform(1e-3, 1 - 1e-3),
                                rng.uniform(1e-3, 1 - 1e-3)};
    CHECK(margin_deviation(t, targets) <= 1e-10);
    const auto r = base_rates(t);
    e1.push_back(r.p_e1);
    e2.push_back(r.p_e2);
    c.push_back(r.p_c);
  }

  // One-sample KS against U(guard, 1 - guard); 1% critical value 1.628 / sqrt(n).
  const double critical = 1.628 / std::sqrt(400.0);
  CHECK(ks_uniform(e1, 1e-3, 1 - 1e-3) < critical);
  CHECK(ks_uniform(e2, 1e-3, 1 - 1e-3) < critical);
  CHECK(ks_uniform(c, 1e-3, 1 - 1e-3) < critical);

  SUBCASE("deterministic regardless of worker count") {
    auto parallel = config;
    parallel.workers = 4;
    CHECK(serialize(tables) == serialize(generate_associated(config)));
    CHECK(serialize(tables) == serialize(generate_associated(parallel)));
  }
}

TEST_CASE("generate_associated resamples and finally aborts when IPF cannot converge") {
  GenerationConfig config{.count = 3, .seed = 5, .kind = EvidenceRelation::Associated};
  config.ipf_tolerance = 1e-300;
  config.ipf_iteration_cap = 2;
  config.max_attempts = 3;
  CHECK_THROWS_AS(generate_associated(config), NoConvergence);
}

TEST_CASE("generate_independent") {
  GenerationConfig config{.count = 400, .seed = 9, .kind = EvidenceRelation::Independent};
  const auto tables = generate_independent(config);
  REQUIRE(tables.size() == 400);
  double lo = 1.0, hi = 0.0;
  for (const auto& t : tables) {
    CHECK(t.kind() == EvidenceRelation::Independent);
    CHECK(validate(t).ok());
    CHECK(evidence_dependence(t) <= 1e-12);
    const double p_c = base_rates(t).p_c;
    lo = std::min(lo, p_c);
    hi = std::max(hi, p_c);
  }
  CHECK(hi - lo > 0.5);

  auto parallel = config;
  parallel.workers = 3;
  CHECK(serialize(tables) == serialize(generate_independent(parallel)));
}

TEST_CASE("independent_table with an even split gives flat conditionals") {
  const auto t = independent_table(0.3, 0.8, {0.5, 0.5, 0.5, 0.5});
  const auto q = conditional_profile(t);
  for (double v : {q.q_ff, q.q_ft, q.q_tf, q.q_tt}) CHECK(v == doctest::Approx(0.5));
  CHECK(evidence_dependence(t) <= 1e-12);
}

TEST_CASE("generation config validation") {
  GenerationConfig config;
  config.count = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config.count = 1;
  config.base_rate_guard = 0.5;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config.base_rate_guard = 1e-3;
  config.ipf_tolerance = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config.ipf_tolerance = 1e-10;
  config.kind = EvidenceRelation::Unspecified;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
}
