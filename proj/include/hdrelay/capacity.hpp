#pragma once

// Zero-error capacity of the noise-free half-duplex cascade.
//
// The capacity is a max-min of cut entropies over first-order Markov input
// chains:  C = max_p min{ H(Y_1|X_1), ..., H(Y_m|X_m), H(Y_{m+1}) }.
// The solvers search the support-restricted family (only pairs where at most
// one endpoint of a hop transmits carry mass, with 0/1 symmetry), which is
// optimal for m = 1 and for the infinite cascade.

#include <stdexcept>
#include <vector>

#include "hdrelay/channel.hpp"
#include "hdrelay/info.hpp"

namespace hdrelay {

// First-order Markov input chain: edges[i-1] is p(X_{i-1}, X_i), i = 1..m.
struct ChainDistribution {
  int relay_count = 0;                  // m
  std::vector<EdgeDistribution> edges;  // size m

  // Per-edge pmf validity plus adjacent-marginal consistency: the X_i
  // marginal of edge i must match the X_i marginal of edge i+1 entrywise.
  void validate(double pair_tol = 1e-7) const;
};

// The m+1 cut values: entries 1..m are H(Y_i|X_i) of each edge, entry m+1
// is H(X_m) (what the sink observes).
std::vector<double> cut_values(const ChainDistribution& chain);

struct CapacityResult {
  ModelVariant model = ModelVariant::Ternary;
  int relay_count = 0;
  double capacity_bits = 0.0;  // min of cut_values
  std::vector<double> cut_values;
  ChainDistribution chain;
  long solver_iterations = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_so_far)
      : std::runtime_error(what), best_so_far(best_so_far) {}
  double best_so_far;
};

// m = 1 closed forms.
//   Ternary: q log2 3 = H_b(q) + (1-q), capacity = q log2 3 (~1.1389).
//   Binary:  q = H_b(q) + (1-q),        capacity = q        (~0.8295).
CapacityResult solve_single_relay(ModelVariant model);

// General m.  Ternary: outer bisection on the max-min level with an exact
// interval-propagation feasibility oracle along the chain.  Binary: closed
// form (m = 1 as above; m >= 2 is 0.5 by alternating half-time silence,
// since adjacent silent-probabilities sum to at most 1).
CapacityResult solve_cascade(int m, ModelVariant model);

// The uniform assignment that achieves 1 bit/use on every interior cut for
// any length: each edge puts 1/6 on (0,N),(1,N),(N,0),(N,1) and 1/3 on (N,N).
ChainDistribution infinite_cascade_chain(int m);

// Unrestricted cross-check optimizer over full-support chains (marginal of
// X_0 plus per-hop transition rows, softmax-parametrized), maximizing a
// softmin of the cut values with annealing and multi-start.  Slower and only
// locally optimal; used to confirm the restricted family is not leaving
// capacity on the table.
struct FullSupportOptions {
  int restarts = 6;
  int steps_per_stage = 300;
  unsigned long seed = 1;
};
CapacityResult solve_cascade_full_support(int m, ModelVariant model,
                                          const FullSupportOptions& opts = {});

}  // namespace hdrelay
