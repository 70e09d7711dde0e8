#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hdrelay/capacity.hpp"
#include "hdrelay/cutset.hpp"
#include "hdrelay/info.hpp"

using namespace hdrelay;

namespace {

EdgeDistribution source_edge(double q) {
  EdgeDistribution e{};
  e.p[0][2] = q / 3;
  e.p[1][2] = q / 3;
  e.p[2][2] = q / 3;
  e.p[2][0] = (1 - q) / 2;
  e.p[2][1] = (1 - q) / 2;
  return e;
}

EdgeDistribution interior_edge(double a, double b) {
  EdgeDistribution e{};
  e.p[0][2] = a;
  e.p[1][2] = a;
  e.p[2][2] = 1 - 2 * a - 2 * b;
  e.p[2][0] = b;
  e.p[2][1] = b;
  return e;
}

// Pairwise marginal p(X_{i-1}, X_i) recovered from a full joint table.
std::array<std::array<double, 3>, 3> pair_marginal(const FullJointPmf& joint,
                                                   int i) {
  std::array<std::array<double, 3>, 3> out{};
  int pow_prev = 1;
  for (int k = 0; k < i - 1; ++k) pow_prev *= 3;
  int states = 1;
  for (int k = 0; k <= joint.relay_count; ++k) states *= 3;
  for (int idx = 0; idx < states; ++idx) {
    int prev = (idx / pow_prev) % 3;
    int self = (idx / (pow_prev * 3)) % 3;
    out[static_cast<size_t>(prev)][static_cast<size_t>(self)] +=
        joint.prob[static_cast<size_t>(idx)];
  }
  return out;
}

}  // namespace

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(7);
  for (int i = 0; i < 200; ++i) {
    auto v = c.below(17);
    CHECK(v < 17);
  }
  Rng d(9);
  mpz_class big = (mpz_class(1) << 100) + 12345;
  for (int i = 0; i < 50; ++i) {
    mpz_class v = d.below(big);
    CHECK(v >= 0);
    CHECK(v < big);
  }
}

TEST_CASE("materialize expands a single edge exactly") {
  CapacityResult res = solve_single_relay(ModelVariant::Ternary);
  FullJointPmf joint = FullJointPmf::materialize(res.chain);
  joint.validate();
  auto pm = pair_marginal(joint, 1);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      CHECK(pm[static_cast<size_t>(r)][static_cast<size_t>(c)] ==
            doctest::Approx(res.chain.edges[0].p[static_cast<size_t>(r)]
                                               [static_cast<size_t>(c)])
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("materialize round-trips both edges of a two-relay chain") {
  ChainDistribution chain;
  chain.relay_count = 2;
  chain.edges.push_back(source_edge(2.0 / 3));
  chain.edges.push_back(interior_edge(1.0 / 6, 1.0 / 6));
  FullJointPmf joint = FullJointPmf::materialize(chain);
  joint.validate();
  for (int i = 1; i <= 2; ++i) {
    auto pm = pair_marginal(joint, i);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::fabs(pm[static_cast<size_t>(r)][static_cast<size_t>(c)] -
                        chain.edges[static_cast<size_t>(i) - 1]
                            .p[static_cast<size_t>(r)]
                              [static_cast<size_t>(c)]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("materialize rejects inconsistent chains and long cascades") {
  ChainDistribution bad;
  bad.relay_count = 2;
  bad.edges.push_back(source_edge(2.0 / 3));
  bad.edges.push_back(interior_edge(0.25, 0.1));
  CHECK_THROWS_AS(FullJointPmf::materialize(bad), std::invalid_argument);

  ChainDistribution big;
  big.relay_count = 6;
  big.edges.push_back(source_edge(0.5));
  double a = 0.25;
  for (int i = 2; i <= 6; ++i) {
    big.edges.push_back(interior_edge(a, 0.25));
    a = 0.25;
  }
  CHECK_THROWS_AS(FullJointPmf::materialize(big), std::invalid_argument);
}

TEST_CASE("single-source cut values on reference joints") {
  CapacityResult res = solve_single_relay(ModelVariant::Ternary);
  FullJointPmf joint = FullJointPmf::materialize(res.chain);

  // Empty cut: the sink alone, H(Y_2) = H(X_1).
  double empty = cut_value_single_source(joint, {});
  double h_x1 = entropy({res.chain.edges[0].self_marginal()[0],
                         res.chain.edges[0].self_marginal()[1],
                         res.chain.edges[0].self_marginal()[2]});
  CHECK(empty == doctest::Approx(h_x1).epsilon(1e-12));

  // Full cut {1}: H(Y_1|X_1), the capacity at the optimum.
  double full = cut_value_single_source(joint, {1});
  CHECK(full == doctest::Approx(1.13887247694922).epsilon(1e-9));
}

TEST_CASE("degenerate point-mass joint has zero cut values") {
  ChainDistribution chain;
  chain.relay_count = 2;
  EdgeDistribution e1{};
  e1.p[2][0] = 1.0;  // (X_0, X_1) = (N, 0)
  EdgeDistribution e2{};
  e2.p[0][2] = 1.0;  // (X_1, X_2) = (0, N)
  chain.edges = {e1, e2};
  FullJointPmf joint = FullJointPmf::materialize(chain);
  CHECK(cut_value_single_source(joint, {1, 2}) == doctest::Approx(0.0));
  CHECK(cut_value_single_source(joint, {}) == doctest::Approx(0.0));
}

TEST_CASE("mutual-information form equals the entropy form on random joints") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 1 + static_cast<int>(rng.below(3));  // m in {1,2,3}
    ChainDistribution chain = random_consistent_chain(m, rng);
    FullJointPmf joint = FullJointPmf::materialize(chain);
    for (int mask = 0; mask < (1 << m); ++mask) {
      CutSet s;
      for (int i = 1; i <= m; ++i) {
        if (mask & (1 << (i - 1))) s.push_back(i);
      }
      CHECK(std::abs(mutual_info_cut(joint, s) -
                     cut_value_single_source(joint, s)) < 1e-12);
    }
  }
}

TEST_CASE("ascending extension never exceeds the original cut") {
  Rng rng(321);
  for (int trial = 0; trial < 25; ++trial) {
    int m = 3 + static_cast<int>(rng.below(2));  // m in {3,4}
    ChainDistribution chain = random_consistent_chain(m, rng);
    FullJointPmf joint = FullJointPmf::materialize(chain);
    for (int mask = 1; mask < (1 << m); ++mask) {
      CutSet s;
      int lowest = 0;
      for (int i = 1; i <= m; ++i) {
        if (mask & (1 << (i - 1))) {
          s.push_back(i);
          if (lowest == 0) lowest = i;
        }
      }
      CutSet ascending;
      for (int i = lowest; i <= m; ++i) ascending.push_back(i);
      CHECK(cut_value_single_source(joint, ascending) <=
            cut_value_single_source(joint, s) + 1e-9);
    }
  }
}

TEST_CASE("ascending minimality holds for solver and random chains") {
  CapacityResult res = solve_cascade(3, ModelVariant::Ternary);
  CutCheckReport report = verify_ascending_minimality(res.chain, 100, 7);
  CHECK(report.trials == 101);
  CHECK(report.passed());
  CHECK(report.violations.empty());
  // m = 3: 8 subsets per chain.
  CHECK(report.subsets_checked == 101 * 8);
}

TEST_CASE("single-relay power set check is trivial but executed") {
  CapacityResult res = solve_single_relay(ModelVariant::Ternary);
  CutCheckReport report = verify_ascending_minimality(res.chain, 0, 1);
  CHECK(report.trials == 1);
  CHECK(report.subsets_checked == 2);
  CHECK(report.passed());
}

TEST_CASE("a non-Markov joint is caught by the formula check") {
  // Mass 1/2 on (0,N,0) and 1/2 on (1,N,1): X_2 reveals X_0, killing
  // H(Y_1,Y_2,Y_3|X_1,X_2) while the chain-style formula stays at 1 bit.
  FullJointPmf joint;
  joint.relay_count = 2;
  joint.prob.assign(27, 0.0);
  joint.prob[0 + 3 * 2 + 9 * 0] = 0.5;
  joint.prob[1 + 3 * 2 + 9 * 1] = 0.5;
  joint.validate();
  CutCheckReport report = check_ascending_single(joint);
  CHECK_FALSE(report.passed());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.kind == "formula_mismatch" && v.subset == CutSet{1, 2}) found = true;
  }
  CHECK(found);
}

TEST_CASE("two-source bounds at the single-relay optimum") {
  CapacityResult res = solve_single_relay(ModelVariant::Ternary);
  FullJointPmf joint = FullJointPmf::materialize(res.chain);
  TwoSourceBounds b = two_source_bounds(joint, 1);
  CHECK(b.r0_bound == doctest::Approx(1.13887247694922).epsilon(1e-9));
  // H(X_1 | X_0) at the optimal edge.
  CHECK(b.rr_bound == doctest::Approx(0.799981510972076).epsilon(1e-9));
  // Sum bound collapses to H(X_1), which the optimum balances with the
  // first cut.
  CHECK(b.sum_bound == doctest::Approx(1.13887247694922).epsilon(1e-9));
}

TEST_CASE("uniform relay marginal pushes the sum bound to log2 3") {
  // Source edge chosen so X_1 is uniform over {0,1,N}.
  ChainDistribution chain;
  chain.relay_count = 1;
  chain.edges.push_back(source_edge(1.0 / 3));
  FullJointPmf joint = FullJointPmf::materialize(chain);
  TwoSourceBounds b = two_source_bounds(joint, 1);
  CHECK(b.sum_bound == doctest::Approx(kLog2Of3).epsilon(1e-12));
  CHECK(b.r0_bound == doctest::Approx(kLog2Of3 / 3).epsilon(1e-12));
}

TEST_CASE("sum bound never exceeds the last-hop entropy") {
  Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));  // m in {2,3,4}
    ChainDistribution chain = random_consistent_chain(m, rng);
    FullJointPmf joint = FullJointPmf::materialize(chain);
    auto self = chain.edges.back().self_marginal();
    double h_last = entropy({self[0], self[1], self[2]});
    for (int r = 1; r <= m; ++r) {
      TwoSourceBounds b = two_source_bounds(joint, r);
      CHECK(b.sum_bound <= h_last + 1e-12);
    }
  }
}

TEST_CASE("two-source r0 bound degenerates to the single-source min cut") {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 2 + static_cast<int>(rng.below(2));  // m in {2,3}
    ChainDistribution chain = random_consistent_chain(m, rng);
    FullJointPmf joint = FullJointPmf::materialize(chain);
    auto cuts = cut_values(chain);
    double expect = *std::min_element(cuts.begin(), cuts.end() - 1);
    TwoSourceBounds b = two_source_bounds(joint, 1);
    CHECK(std::fabs(b.r0_bound - expect) <= 1e-10);
  }
}

TEST_CASE("two-source bounds reject an out-of-range relay source") {
  CapacityResult res = solve_single_relay(ModelVariant::Ternary);
  FullJointPmf joint = FullJointPmf::materialize(res.chain);
  CHECK_THROWS_AS(two_source_bounds(joint, 0), std::domain_error);
  CHECK_THROWS_AS(two_source_bounds(joint, 2), std::domain_error);
}

TEST_CASE("two-source ascending decomposition verified by enumeration") {
  SUBCASE("uniform-style chain, m=3, r=2") {
    ChainDistribution chain;
    chain.relay_count = 3;
    chain.edges.push_back(source_edge(2.0 / 3));
    chain.edges.push_back(interior_edge(1.0 / 6, 1.0 / 6));
    chain.edges.push_back(interior_edge(1.0 / 6, 1.0 / 6));
    CutCheckReport report = verify_two_source_ascending(chain, 2, 0, 1);
    CHECK(report.passed());
  }
  SUBCASE("m=1, r=1 is trivial") {
    CapacityResult res = solve_single_relay(ModelVariant::Ternary);
    CutCheckReport report = verify_two_source_ascending(res.chain, 1, 0, 1);
    CHECK(report.passed());
  }
  SUBCASE("random chains, m=4, r=2") {
    CapacityResult res = solve_cascade(4, ModelVariant::Ternary);
    CutCheckReport report = verify_two_source_ascending(res.chain, 2, 50, 11);
    CHECK(report.trials == 51);
    CHECK(report.passed());
  }
}

TEST_CASE("random consistent chains satisfy validation exactly") {
  Rng rng(2024);
  for (int m : {1, 2, 3, 4, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      ChainDistribution chain = random_consistent_chain(m, rng);
      chain.validate();
      CHECK(chain.relay_count == m);
      CHECK(chain.edges.size() == static_cast<size_t>(m));
    }
  }
}
