#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hdrelay/info.hpp"

using namespace hdrelay;

TEST_CASE("entropy of basic pmfs") {
  CHECK(entropy({1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy({1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(kLog2Of3).epsilon(1e-12));
  // Zero entries contribute nothing.
  CHECK(entropy({0.5, 0.5, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy rejects non-pmfs") {
  CHECK_THROWS_AS(entropy({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(entropy({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(entropy({1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("binary entropy values") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binary_entropy(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  // Symmetry.
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-12));
  // Frozen reference value at the single-relay optimum argument.
  CHECK(binary_entropy(0.7185) ==
        doctest::Approx(0.857486623681906).epsilon(1e-10));
}

TEST_CASE("three-point entropy reference values") {
  CHECK(entropy({0.7185, 0.1407, 0.1408}) ==
        doctest::Approx(1.13898659805677).epsilon(1e-10));
  CHECK(entropy({1.0 / 6, 1.0 / 6, 2.0 / 3}) ==
        doctest::Approx(1.25162916738782).epsilon(1e-10));
}

TEST_CASE("edge distribution marginals and conditional entropy") {
  // Single-relay optimal source edge: p(prev,self) with mass q/3 on
  // (0,N),(1,N),(N,N) and (1-q)/2 on (N,0),(N,1).
  const double q = 0.71854853123089;
  EdgeDistribution e{};
  e.p[0][2] = q / 3;
  e.p[1][2] = q / 3;
  e.p[2][2] = q / 3;
  e.p[2][0] = (1 - q) / 2;
  e.p[2][1] = (1 - q) / 2;
  e.validate();

  auto prev = e.prev_marginal();
  CHECK(prev[0] == doctest::Approx(q / 3).epsilon(1e-12));
  CHECK(prev[2] == doctest::Approx(1 - 2 * q / 3).epsilon(1e-12));
  auto self = e.self_marginal();
  CHECK(self[2] == doctest::Approx(q).epsilon(1e-12));

  // H(prev | self = N) = log2 3 restricted to the silent column, weighted by q.
  CHECK(cut_entropy_output_given_self(e) ==
        doctest::Approx(q * kLog2Of3).epsilon(1e-10));
  // Frozen capacity value: q* log2 3.
  CHECK(cut_entropy_output_given_self(e) ==
        doctest::Approx(1.13887247694922).epsilon(1e-9));
}

TEST_CASE("edge validation rejects bad mass") {
  EdgeDistribution e{};
  e.p[0][0] = 0.5;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
  e.p[0][0] = 0.5 + 1e-6;
  e.p[1][1] = 0.5;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
}

TEST_CASE("log2_binomial agrees with exact integers") {
  CHECK(log2_binomial(6, 2) == doctest::Approx(std::log2(15.0)).epsilon(1e-12));
  CHECK(log2_binomial(12, 5) ==
        doctest::Approx(std::log2(792.0)).epsilon(1e-12));
  CHECK(log2_binomial(640, 250) ==
        doctest::Approx(0.957464288387892 * 640).epsilon(1e-9));
  CHECK(exact_binomial(12, 5) == 792);
  CHECK(exact_binomial(4, 0) == 1);
  CHECK(exact_binomial(4, 4) == 1);
}

TEST_CASE("log2 of exact binomial matches floor from the big-integer path") {
  mpz_class v = exact_binomial(640, 320);
  double lg = log2_mpz(v);
  CHECK(std::floor(lg) == doctest::Approx(635.0));
  CHECK(log2_mpz(mpz_class(1) << 100) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_THROWS_AS(log2_mpz(mpz_class(0)), std::domain_error);
}

TEST_CASE("kahan summation survives adversarial ordering") {
  KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 10000000; ++i) s.add(1e-16);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-9).epsilon(1e-12));
}
