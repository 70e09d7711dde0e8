#pragma once

// Two-source rate region (source node 0 plus one relay source): closed-form
// single-relay outer boundary, the sum-capacity threshold, asymptotic and
// finite-n achievable curves, and a numeric boundary tracer for small m.

#include <string>
#include <vector>

namespace hdrelay {

struct RatePoint {
  double r0 = 0.0;  // bits/use for source node 0
  double r1 = 0.0;  // bits/use for the relay source
};

struct RegionCurve {
  std::string label;  // outer_bound | sum_cap_line | achievable_finite_n | achievable_asymptotic
  std::vector<RatePoint> points;  // r0 strictly increasing
};

// Single-relay capacity C used as the boundary domain end (cached solve).
double single_relay_capacity();

// Piecewise outer boundary for m = 1:
//   r1 <= log2 3 - r0                                  for r0 <= (1/3) log2 3
//   r1 <= H_b(q) + (1 - q) - r0 with q = r0 / log2 3   for r0 <= C.
// Throws std::domain_error outside [0, C].
double outer_boundary_single_relay(double r0);

// Threshold of the achievable sum-capacity segment: bisection on
// (1 - beta) log2 3 = H_b(beta) over beta in (0.3, 0.5).
struct ThresholdResult {
  double beta = 0.0;
  double r0_min = 0.0;           // (1 - beta) log2 3
  double r1_at_threshold = 0.0;  // beta
};
ThresholdResult sum_capacity_threshold();

// Asymptotic achievable segment: for t on a grid over [0,1] solve
// (1 - beta) log2 3 = t beta + H_b(beta); emit ((1-beta) log2 3, (1-t) beta).
// t = 0 gives the threshold point, t = 1 gives (C, 0).
RegionCurve achievable_segment(int t_steps);

// Finite-n achievable Pareto frontier over integer slot splits:
// |W0| = min(3^(n-n1), 2^k0 C(n, n1)), |W1| = 2^(n1-k0).
RegionCurve finite_n_achievable(int n);  // 8 <= n <= 4096

// Frontier value at r0 by linear interpolation along the Pareto points
// (time-sharing between adjacent configurations); 0 beyond the last point.
double frontier_value_at(const RegionCurve& curve, double r0);

// Pointwise comparison of two frontiers on a shared r0 grid; `dips` counts
// grid points where `fine` falls more than `slack` below `coarse`.
struct DominationReport {
  int grid_points = 0;
  int dips = 0;
  double worst_dip = 0.0;
};
DominationReport check_domination(const RegionCurve& coarse,
                                  const RegionCurve& fine, int grid_points,
                                  double slack = 1e-9);

// Numeric outer-boundary tracer for 1 <= r <= m <= 3: weighted-sum
// scalarization over support-restricted chains (free source edge), each
// candidate evaluated through the brute-force two_source_bounds oracle.
RegionCurve general_region_bound(int m, int r, int weight_steps);

// Numeric confirmation that on the upper boundary interval the relay-rate
// constraint H(X_1|X_0) never binds (the closed form's implicit feasibility
// condition): returns the worst slack H(X_1|X_0) - boundary(r0) over a grid.
double upper_interval_feasibility_margin(int samples);

}  // namespace hdrelay
