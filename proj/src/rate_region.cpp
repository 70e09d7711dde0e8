#include "hdrelay/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hdrelay/capacity.hpp"
#include "hdrelay/cutset.hpp"
#include "hdrelay/info.hpp"

namespace hdrelay {

namespace {

constexpr int kZero = 0;
constexpr int kOne = 1;
constexpr int kN = 2;

template <typename F>
double bisect_first_nonneg(F f, double lo, double hi, int iters = 100) {
  for (int it = 0; it < iters; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

template <typename F>
double golden_max(F f, double lo, double hi, int iters = 70) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

// Solve (1 - beta) log2 3 = t*beta + H_b(beta); the left-minus-right side is
// strictly decreasing in beta on (0, 1/2].
double solve_beta(double t) {
  auto f = [t](double beta) {
    return -((1.0 - beta) * kLog2Of3 - t * beta - binary_entropy(beta));
  };
  return bisect_first_nonneg(f, 1e-12, 0.5, 200);
}

std::vector<RatePoint> pareto_frontier(std::vector<RatePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
    if (a.r0 != b.r0) return a.r0 > b.r0;
    return a.r1 > b.r1;
  });
  std::vector<RatePoint> keep;
  double best_r1 = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (p.r1 > best_r1) {
      keep.push_back(p);
      best_r1 = p.r1;
    }
  }
  std::reverse(keep.begin(), keep.end());
  return keep;
}

// ---- restricted-support chain for the numeric boundary tracer ----------
//
// Parameters: a1 (source mass on (0,N)/(1,N)), then b_1..b_m (mass on
// (N,0)/(N,1) of each edge); consistency forces a_{i+1} = b_i.

ChainDistribution tracer_chain(int m, const std::vector<double>& th) {
  ChainDistribution chain;
  chain.relay_count = m;
  double a = th[0];
  for (int i = 1; i <= m; ++i) {
    double b = th[static_cast<size_t>(i)];
    EdgeDistribution e{};
    e.p[kZero][kN] = a;
    e.p[kOne][kN] = a;
    e.p[kN][kN] = std::max(0.0, 1.0 - 2.0 * a - 2.0 * b);
    e.p[kN][kZero] = b;
    e.p[kN][kOne] = b;
    chain.edges.push_back(e);
    a = b;
  }
  return chain;
}

struct WeightEval {
  double value = -std::numeric_limits<double>::infinity();
  RatePoint point;
};

// Support function of {r0 <= A, r1 <= B, r0 + r1 <= S, r >= 0} in direction
// (lambda, 1 - lambda), reported with the attaining vertex.
WeightEval polytope_support(double A, double B, double S, double lambda) {
  WeightEval ev;
  auto consider = [&](double r0, double r1) {
    if (r0 < 0.0 || r1 < 0.0) return;
    double v = lambda * r0 + (1.0 - lambda) * r1;
    if (v > ev.value) {
      ev.value = v;
      ev.point = {r0, r1};
    }
  };
  consider(std::min(A, S), 0.0);
  consider(0.0, std::min(B, S));
  if (S - A >= 0.0 && S - A <= B) consider(A, S - A);
  if (S - B >= 0.0 && S - B <= A) consider(S - B, B);
  return ev;
}

WeightEval eval_tracer(int m, int r, double lambda,
                       const std::vector<double>& th) {
  ChainDistribution chain = tracer_chain(m, th);
  TwoSourceBounds tb =
      two_source_bounds(FullJointPmf::materialize(chain), r);
  return polytope_support(tb.r0_bound, tb.rr_bound, tb.sum_bound, lambda);
}

// Feasible interval of coordinate d with the others held fixed: each edge
// needs 2 a_i + 2 b_i <= 1.
std::pair<double, double> coord_range(int m, const std::vector<double>& th,
                                      int d) {
  double hi = 0.5;
  if (d == 0) {
    hi = (1.0 - 2.0 * th[1]) / 2.0;  // edge 1
  } else {
    double left = d == 1 ? th[0] : th[static_cast<size_t>(d) - 1];
    hi = (1.0 - 2.0 * left) / 2.0;  // edge d
    if (d < m) {
      hi = std::min(hi, (1.0 - 2.0 * th[static_cast<size_t>(d) + 1]) / 2.0);
    }
  }
  return {0.0, std::max(0.0, hi)};
}

std::vector<double> polish_tracer(int m, int r, double lambda,
                                  std::vector<double> th, int sweeps) {
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int d = 0; d <= m; ++d) {
      auto [lo, hi] = coord_range(m, th, d);
      if (hi - lo < 1e-12) continue;
      double best = golden_max(
          [&](double v) {
            std::vector<double> cand = th;
            cand[static_cast<size_t>(d)] = v;
            return eval_tracer(m, r, lambda, cand).value;
          },
          lo, hi);
      th[static_cast<size_t>(d)] = best;
    }
  }
  return th;
}

}  // namespace

double single_relay_capacity() {
  static const double c = solve_single_relay(ModelVariant::Ternary).capacity_bits;
  return c;
}

double outer_boundary_single_relay(double r0) {
  const double C = single_relay_capacity();
  if (r0 < -1e-12 || r0 > C + 1e-9) {
    throw std::domain_error("r0 outside [0, C]");
  }
  r0 = std::min(std::max(r0, 0.0), C);
  const double knee = kLog2Of3 / 3.0;
  if (r0 <= knee) return kLog2Of3 - r0;
  double q = r0 / kLog2Of3;
  return binary_entropy(q) + (1.0 - q) - r0;
}

ThresholdResult sum_capacity_threshold() {
  ThresholdResult t;
  t.beta = solve_beta(0.0);
  t.r0_min = (1.0 - t.beta) * kLog2Of3;
  t.r1_at_threshold = t.beta;
  return t;
}

RegionCurve achievable_segment(int t_steps) {
  if (t_steps < 2) throw std::invalid_argument("need at least two grid steps");
  RegionCurve curve;
  curve.label = "achievable_asymptotic";
  for (int j = 0; j < t_steps; ++j) {
    double t = static_cast<double>(j) / static_cast<double>(t_steps - 1);
    double beta = solve_beta(t);
    RatePoint p{(1.0 - beta) * kLog2Of3, (1.0 - t) * beta};
    if (!curve.points.empty() && p.r0 <= curve.points.back().r0 + 1e-12) {
      continue;
    }
    curve.points.push_back(p);
  }
  return curve;
}

RegionCurve finite_n_achievable(int n) {
  if (n < 8 || n > 4096) {
    throw std::invalid_argument("block length outside [8, 4096]");
  }
  std::vector<RatePoint> pts;
  mpz_class pow3;
  mpz_ui_pow_ui(pow3.get_mpz_t(), 3u, static_cast<unsigned long>(n - 1));
  for (int n1 = 1; n1 <= n - 1; ++n1) {
    // pow3 == 3^(n - n1)
    mpz_class binom = exact_binomial(n, n1);
    double log2_binom = log2_mpz(binom);
    double log2_pow3 = log2_mpz(pow3);
    mpz_class shifted = binom;  // 2^k0 * C(n, n1)
    bool capped = false;
    for (int k0 = 0; k0 <= n1; ++k0) {
      if (!capped && shifted >= pow3) capped = true;
      double log2_w0 =
          capped ? log2_pow3 : log2_binom + static_cast<double>(k0);
      pts.push_back({log2_w0 / n, static_cast<double>(n1 - k0) / n});
      if (!capped) shifted <<= 1;
    }
    mpz_divexact_ui(pow3.get_mpz_t(), pow3.get_mpz_t(), 3u);
  }
  RegionCurve curve;
  curve.label = "achievable_finite_n";
  curve.points = pareto_frontier(std::move(pts));
  return curve;
}

double frontier_value_at(const RegionCurve& curve, double r0) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  if (r0 <= pts.front().r0) return pts.front().r1;
  if (r0 > pts.back().r0) return 0.0;
  auto it = std::lower_bound(
      pts.begin(), pts.end(), r0,
      [](const RatePoint& p, double v) { return p.r0 < v; });
  if (it->r0 == r0) return it->r1;
  const RatePoint& hi = *it;
  const RatePoint& lo = *(it - 1);
  double w = (r0 - lo.r0) / (hi.r0 - lo.r0);
  return lo.r1 + w * (hi.r1 - lo.r1);
}

DominationReport check_domination(const RegionCurve& coarse,
                                  const RegionCurve& fine, int grid_points,
                                  double slack) {
  if (grid_points < 2) throw std::invalid_argument("need at least two points");
  DominationReport rep;
  rep.grid_points = grid_points;
  double r_max = coarse.points.empty() ? 0.0 : coarse.points.back().r0;
  for (int i = 0; i < grid_points; ++i) {
    double r0 = r_max * static_cast<double>(i) /
                static_cast<double>(grid_points - 1);
    double dip = frontier_value_at(coarse, r0) - frontier_value_at(fine, r0);
    if (dip > slack) {
      ++rep.dips;
      rep.worst_dip = std::max(rep.worst_dip, dip);
    }
  }
  return rep;
}

RegionCurve general_region_bound(int m, int r, int weight_steps) {
  if (m < 1 || m > 3 || r < 1 || r > m) {
    throw std::domain_error("tracer supports 1 <= r <= m <= 3");
  }
  if (weight_steps < 2) {
    throw std::invalid_argument("need at least two weights");
  }

  // Warm-startable initial points: the single-source optimum, the silent
  // source corner, and a flat interior assignment.
  std::vector<std::vector<double>> inits;
  {
    CapacityResult cap = solve_cascade(m, ModelVariant::Ternary);
    std::vector<double> th(static_cast<size_t>(m) + 1, 0.0);
    th[0] = cap.chain.edges.front().p[kZero][kN];
    for (int i = 1; i <= m; ++i) {
      th[static_cast<size_t>(i)] =
          cap.chain.edges[static_cast<size_t>(i) - 1].p[kN][kZero];
    }
    inits.push_back(th);

    std::vector<double> silent(static_cast<size_t>(m) + 1, 0.0);
    silent[0] = 0.0;
    for (int i = 1; i <= m; ++i) silent[static_cast<size_t>(i)] = 0.25;
    // Every edge needs a_i + b_i <= 1/2; 1/4 + 1/4 meets it for any length.
    inits.push_back(silent);

    std::vector<double> flat(static_cast<size_t>(m) + 1, 1.0 / 6.0);
    inits.push_back(flat);
  }

  std::vector<RatePoint> traced;
  std::vector<double> warm;
  for (int j = 0; j < weight_steps; ++j) {
    double lambda = static_cast<double>(j) / static_cast<double>(weight_steps - 1);
    WeightEval best;
    std::vector<double> best_th;
    std::vector<std::vector<double>> starts = inits;
    if (!warm.empty()) starts.push_back(warm);
    for (const auto& start : starts) {
      std::vector<double> th = polish_tracer(m, r, lambda, start, 10);
      WeightEval ev = eval_tracer(m, r, lambda, th);
      if (ev.value > best.value) {
        best = ev;
        best_th = th;
      }
    }
    warm = best_th;
    traced.push_back(best.point);
  }

  // Boundary points traced corner-first; keep the upper envelope.
  std::vector<RatePoint> frontier = pareto_frontier(std::move(traced));
  RegionCurve curve;
  curve.label = "outer_bound";
  curve.points = std::move(frontier);
  return curve;
}

double upper_interval_feasibility_margin(int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const double C = single_relay_capacity();
  const double knee = kLog2Of3 / 3.0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double r0 = knee + (C - knee) * (static_cast<double>(i) + 1.0) /
                           static_cast<double>(samples);
    double q = r0 / kLog2Of3;
    double bound = outer_boundary_single_relay(r0);
    // H(X_1 | X_0) for the boundary-attaining edge (uniform given silence).
    EdgeDistribution e{};
    e.p[kZero][kN] = q / 3.0;
    e.p[kOne][kN] = q / 3.0;
    e.p[kN][kN] = q / 3.0;
    e.p[kN][kZero] = (1.0 - q) / 2.0;
    e.p[kN][kOne] = (1.0 - q) / 2.0;
    double joint = 0.0;
    {
      double flat[9];
      int idx = 0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) flat[idx++] = e.p[a][b];
      }
      joint = entropy_unchecked(flat, 9);
    }
    auto prev = e.prev_marginal();
    double h_prev = entropy_unchecked(prev.data(), 3);
    double h_self_given_prev = joint - h_prev;
    worst = std::min(worst, h_self_given_prev - bound);
  }
  return worst;
}

}  // namespace hdrelay
