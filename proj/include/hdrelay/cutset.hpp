#pragma once

// Brute-force cut-set verification for small cascades.
//
// For every separating subset S of relays the cut value is
// H(Y_S, Y_{m+1} | X_S), computed by pushing each input tuple through the
// deterministic network.  The library's fast formulas only evaluate the
// "ascending" subsets {l..m}; the verifiers here enumerate the full power
// set and confirm the ascending family attains the minimum.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hdrelay/capacity.hpp"

namespace hdrelay {

// Deterministic uniform helpers on top of std::mt19937_64 (the standard
// distributions are implementation-defined; these are reproducible anywhere).
class Rng {
 public:
  explicit Rng(unsigned long seed) : eng_(seed) {}
  double uniform();                       // [0, 1)
  std::uint64_t below(std::uint64_t n);   // [0, n), unbiased
  mpz_class below(const mpz_class& n);    // [0, n), unbiased
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Dense joint table over (X_0, ..., X_m); index = sum_i digit(x_i) * 3^i
// with x_0 as the least-significant trit.
struct FullJointPmf {
  int relay_count = 0;        // m
  std::vector<double> prob;   // size 3^(m+1)

  void validate(double tol = kPmfMassTol) const;

  // Exact expansion p(x_0, x_1) * prod p(x_i | x_{i-1}).  Guarded at m <= 5.
  static FullJointPmf materialize(const ChainDistribution& chain);
};

using CutSet = std::vector<int>;  // subset of relay indices {1..m}, sorted

// H(Y_S, Y_{m+1} | X_S).
double cut_value_single_source(const FullJointPmf& joint, const CutSet& S);

// I(X_0, X_{S^c}; Y_S, Y_{m+1} | X_S) computed from distributions; equals
// the cut value for a deterministic network (used as an identity check).
double mutual_info_cut(const FullJointPmf& joint, const CutSet& S);

struct CutCheckViolation {
  int chain_index = 0;       // 0 = the explicitly supplied chain/joint
  std::string kind;          // "nonascending_min" or "formula_mismatch"
  CutSet subset;
  double brute_value = 0.0;
  double formula_value = 0.0;
};

struct CutCheckReport {
  int trials = 0;            // chains examined (supplied + random)
  long subsets_checked = 0;
  std::vector<CutCheckViolation> violations;
  bool passed() const { return violations.empty(); }
};

// Single-joint check: min over all 2^m subsets equals the min over the
// ascending sets {emptyset, {m}, {m-1..m}, ..., {1..m}}, and each ascending
// value equals the closed-form entry H(Y_l|X_l) (entry m+1 is H(X_m)).
CutCheckReport check_ascending_single(const FullJointPmf& joint,
                                      int chain_index = 0, double tol = 1e-9);

// The supplied chain plus `trials` random consistent chains.
CutCheckReport verify_ascending_minimality(const ChainDistribution& chain,
                                           int trials, unsigned long seed);

// Cut-set rate bounds evaluated on a fixed joint for relay source r:
//   R0_bound  = min{ H(Y_i|X_i) : 1 <= i <= m }
//   Rr_bound  = min{ H(Y_i | X_{r-1} [, X_i if i <= m]) : r+1 <= i <= m+1 }
//   sum_bound = min( down + up, H(Y_{m+1}) ) where
//     down = min{ H(Y_i|X_i) : i <= r-1 } (0 when r = 1) and
//     up   = min{ H(Y_k | [X_{r-1} if r >= 2] [, X_k if k <= m]) : k > r }.
struct TwoSourceBounds {
  double r0_bound = 0.0;
  double rr_bound = 0.0;
  double sum_bound = 0.0;
};
TwoSourceBounds two_source_bounds(const FullJointPmf& joint, int r);

// Sum-rate cut family check: enumerate all S = S^d u S^u over the power set
// of {1..r-1} u {r+1..m}; the minimum must be attained on ascending pairs
// ({i..r-1}, {k..m}) whose brute value matches the decomposition
// H(Y_i|X_i) + H(Y_k|X_{r-1}, X_k) (terms collapse per the conventions).
CutCheckReport check_ascending_two_source(const FullJointPmf& joint, int r,
                                          int chain_index = 0,
                                          double tol = 1e-9);

// The supplied chain plus `trials` random consistent chains (m <= 4).
CutCheckReport verify_two_source_ascending(const ChainDistribution& chain,
                                           int r, int trials,
                                           unsigned long seed);

// Full-support random chain: edge 1 uniform on the 9-simplex, then forward
// propagation with uniformly drawn conditional rows keeps consistency exact.
ChainDistribution random_consistent_chain(int m, Rng& rng);

}  // namespace hdrelay
