#include "hdrelay/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hdrelay {

namespace {

constexpr int kZero = 0;
constexpr int kOne = 1;
constexpr int kN = 2;

// Entropy of the symmetric ternary pmf (u, u, 1-2u), u in [0, 1/2].
// Concave, zero at u = 0, peak log2(3) at u = 1/3.
double g3(double u) {
  double p[3] = {u, u, 1.0 - 2.0 * u};
  return entropy_unchecked(p, 3);
}

// Cut entropy of a restricted interior edge with mass a on (0,N),(1,N) and
// b on (N,0),(N,1):  (1-2b) * g3(a / (1-2b)).  Non-increasing in b, concave.
double cut_ab(double a, double b) {
  double s = 1.0 - 2.0 * b;
  if (s <= 0.0) return 0.0;
  return s * g3(std::min(a / s, 0.5));
}

// Smallest x in [lo, hi] with f(x) >= 0, where f is increasing and
// f(lo) < 0 <= f(hi).
template <typename F>
double bisect_first_nonneg(F f, double lo, double hi) {
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Root of f on [lo, hi] with f(lo) < 0 < f(hi), f increasing.
template <typename F>
double bisect_root(F f, double lo, double hi) {
  return bisect_first_nonneg(f, lo, hi);
}

EdgeDistribution source_edge_uniform_given_n(double q) {
  // P(X_1 = N) = q with P(X_0 | X_1 = N) uniform over {0,1,N}.
  EdgeDistribution e{};
  e.p[kZero][kN] = q / 3.0;
  e.p[kOne][kN] = q / 3.0;
  e.p[kN][kN] = q / 3.0;
  e.p[kN][kZero] = (1.0 - q) / 2.0;
  e.p[kN][kOne] = (1.0 - q) / 2.0;
  return e;
}

EdgeDistribution interior_edge(double a, double b) {
  EdgeDistribution e{};
  e.p[kZero][kN] = a;
  e.p[kOne][kN] = a;
  e.p[kN][kN] = std::max(0.0, 1.0 - 2.0 * a - 2.0 * b);
  e.p[kN][kZero] = b;
  e.p[kN][kOne] = b;
  return e;
}

CapacityResult result_from_chain(ModelVariant model, int m,
                                 ChainDistribution chain, long iterations) {
  CapacityResult r;
  r.model = model;
  r.relay_count = m;
  r.chain = std::move(chain);
  r.cut_values = cut_values(r.chain);
  r.capacity_bits = *std::min_element(r.cut_values.begin(), r.cut_values.end());
  r.solver_iterations = iterations;
  return r;
}

// Feasibility of max-min level t for the restricted ternary cascade.
//
// Free parameters are q_1 = P(X_1 = N) and, per interior edge i, the silent
// overlap split (a_i, b_i) with a_{i+1} = b_i forced by consistency.  The
// cut of edge i is cut_ab(a_i, b_i), non-increasing in b_i and concave, so
// feasibility propagates backward as a single threshold per stage:
// L_{i} = least incoming a_i keeping stages i..m+1 satisfiable when the
// outgoing b_i sits at its own least admissible value L_{i+1}.
struct FeasibilityResult {
  bool ok = false;
  std::vector<double> thresholds;  // L_2..L_{m+1} (front = L_2)
};

FeasibilityResult feasible_level(int m, double t) {
  FeasibilityResult res;
  if (t <= 0.0) {
    res.ok = true;
    res.thresholds.assign(static_cast<size_t>(m), 0.0);
    return res;
  }
  if (t > kLog2Of3) return res;
  // Sink stage: need g3(b_m) >= t; least such b_m.
  if (g3(1.0 / 3.0) < t) return res;
  std::vector<double> L(static_cast<size_t>(m));  // L[i-2] = L_i for i=2..m+1
  double Lnext = bisect_first_nonneg([&](double b) { return g3(b) - t; }, 0.0,
                                     1.0 / 3.0);
  L[static_cast<size_t>(m) - 1] = Lnext;
  for (int i = m; i >= 2; --i) {
    double s = 1.0 - 2.0 * Lnext;
    if (s * kLog2Of3 < t) return res;  // even the peak over a_i falls short
    double a_peak = s / 3.0;
    double Li = bisect_first_nonneg(
        [&](double a) { return cut_ab(a, Lnext) - t; }, 0.0, a_peak);
    L[static_cast<size_t>(i) - 2] = Li;
    Lnext = Li;
  }
  // Source stage: q_1 >= t / log2(3) while (1 - q_1)/2 >= L_2.
  res.ok = t / kLog2Of3 <= 1.0 - 2.0 * Lnext + 1e-15;
  if (res.ok) res.thresholds = std::move(L);
  return res;
}

CapacityResult solve_cascade_ternary(int m) {
  const long kMaxIterations = 100000;
  double lo = 0.0, hi = kLog2Of3;
  FeasibilityResult best;
  long iterations = 0;
  while (hi - lo > 1e-9 && iterations < kMaxIterations) {
    ++iterations;
    double mid = 0.5 * (lo + hi);
    FeasibilityResult f = feasible_level(m, mid);
    if (f.ok) {
      lo = mid;
      best = std::move(f);
    } else {
      hi = mid;
    }
  }
  if (!best.ok) {
    throw SolverError("cascade solver failed to find a feasible level", lo);
  }
  // Reconstruct the balanced chain at level lo: the source takes the least
  // admissible silence and every stage sits on its threshold, which makes
  // all m+1 cuts equal to the level.
  double t = lo;
  double q1 = std::min(t / kLog2Of3, 1.0 - 2.0 * best.thresholds.front());
  ChainDistribution chain;
  chain.relay_count = m;
  chain.edges.push_back(source_edge_uniform_given_n(q1));
  double a = (1.0 - q1) / 2.0;
  for (int i = 2; i <= m; ++i) {
    double b = best.thresholds[static_cast<size_t>(i) - 1];  // L_{i+1}
    chain.edges.push_back(interior_edge(a, b));
    a = b;
  }
  return result_from_chain(ModelVariant::Ternary, m, std::move(chain),
                           iterations);
}

CapacityResult solve_cascade_binary(int m) {
  if (m == 1) return solve_single_relay(ModelVariant::Binary);
  // Adjacent silent events are disjoint (the hop pair (N,N) is excluded), so
  // min(cut_i, cut_{i+1}) <= min(q_i, q_{i+1}) <= 1/2; alternating half-time
  // silence attains it.  Every edge: 1/4 on (0,N),(1,N),(N,0),(N,1).
  ChainDistribution chain;
  chain.relay_count = m;
  for (int i = 1; i <= m; ++i) {
    EdgeDistribution e{};
    e.p[kZero][kN] = 0.25;
    e.p[kOne][kN] = 0.25;
    e.p[kN][kZero] = 0.25;
    e.p[kN][kOne] = 0.25;
    chain.edges.push_back(e);
  }
  return result_from_chain(ModelVariant::Binary, m, std::move(chain), 0);
}

}  // namespace

void ChainDistribution::validate(double pair_tol) const {
  if (relay_count < 1 || static_cast<int>(edges.size()) != relay_count) {
    throw std::invalid_argument("chain must carry one edge per relay");
  }
  for (const auto& e : edges) e.validate();
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    auto self = edges[i].self_marginal();
    auto prev = edges[i + 1].prev_marginal();
    for (int s = 0; s < 3; ++s) {
      if (std::abs(self[s] - prev[s]) > pair_tol) {
        throw std::invalid_argument(
            "chain edges " + std::to_string(i + 1) + "," +
            std::to_string(i + 2) + " disagree on the shared marginal");
      }
    }
  }
}

std::vector<double> cut_values(const ChainDistribution& chain) {
  chain.validate();
  std::vector<double> cuts;
  cuts.reserve(static_cast<size_t>(chain.relay_count) + 1);
  for (const auto& e : chain.edges) {
    cuts.push_back(cut_entropy_output_given_self(e));
  }
  auto last = chain.edges.back().self_marginal();
  cuts.push_back(entropy({last[0], last[1], last[2]}));
  return cuts;
}

CapacityResult solve_single_relay(ModelVariant model) {
  if (model == ModelVariant::Ternary) {
    // q log2 3 = H_b(q) + (1 - q): silent-slot entropy balances H(X_1).
    double q = bisect_root(
        [](double q) {
          return q * kLog2Of3 - binary_entropy(q) - (1.0 - q);
        },
        1e-12, 1.0 - 1e-12);
    ChainDistribution chain;
    chain.relay_count = 1;
    chain.edges.push_back(source_edge_uniform_given_n(q));
    return result_from_chain(model, 1, std::move(chain), 100);
  }
  // Binary: silence carries no information on the source hop, so the
  // conditional given X_1 = N is uniform over {0,1}; q = H_b(q) + (1 - q).
  double q = bisect_root(
      [](double q) { return 2.0 * q - 1.0 - binary_entropy(q); }, 1e-12,
      1.0 - 1e-12);
  EdgeDistribution e{};
  e.p[kZero][kN] = q / 2.0;
  e.p[kOne][kN] = q / 2.0;
  e.p[kN][kZero] = (1.0 - q) / 2.0;
  e.p[kN][kOne] = (1.0 - q) / 2.0;
  ChainDistribution chain;
  chain.relay_count = 1;
  chain.edges.push_back(e);
  return result_from_chain(model, 1, std::move(chain), 100);
}

CapacityResult solve_cascade(int m, ModelVariant model) {
  if (m < 1 || m > 64) {
    throw std::invalid_argument("solve_cascade: m outside [1, 64]");
  }
  return model == ModelVariant::Ternary ? solve_cascade_ternary(m)
                                        : solve_cascade_binary(m);
}

ChainDistribution infinite_cascade_chain(int m) {
  if (m < 1) throw std::invalid_argument("need at least one relay");
  ChainDistribution chain;
  chain.relay_count = m;
  for (int i = 0; i < m; ++i) {
    EdgeDistribution e{};
    e.p[kZero][kN] = 1.0 / 6.0;
    e.p[kOne][kN] = 1.0 / 6.0;
    e.p[kN][kN] = 1.0 / 3.0;
    e.p[kN][kZero] = 1.0 / 6.0;
    e.p[kN][kOne] = 1.0 / 6.0;
    chain.edges.push_back(e);
  }
  return chain;
}

namespace {

// ---- full-support cross-check optimizer -------------------------------

struct FullParams {
  int m = 0;
  ModelVariant model = ModelVariant::Ternary;
  std::vector<double> theta;  // 3 logits for mu0, then 9 per transition

  int dim() const { return 3 + 9 * m; }
};

void softmax3(const double* logits, double* out) {
  double mx = std::max({logits[0], logits[1], logits[2]});
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    out[i] = std::exp(logits[i] - mx);
    s += out[i];
  }
  for (int i = 0; i < 3; ++i) out[i] /= s;
}

ChainDistribution chain_from_params(const FullParams& p) {
  double mu[3];
  softmax3(p.theta.data(), mu);
  ChainDistribution chain;
  chain.relay_count = p.m;
  for (int e = 0; e < p.m; ++e) {
    EdgeDistribution edge{};
    double next[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
      double row[3];
      double logits[3];
      for (int b = 0; b < 3; ++b) logits[b] = p.theta[3 + 9 * e + 3 * a + b];
      if (p.model == ModelVariant::Binary && a == kN) {
        logits[kN] = -1e9;  // hop pair (N,N) excluded
      }
      softmax3(logits, row);
      for (int b = 0; b < 3; ++b) {
        edge.p[a][b] = mu[a] * row[b];
        next[b] += edge.p[a][b];
      }
    }
    chain.edges.push_back(edge);
    for (int b = 0; b < 3; ++b) mu[b] = next[b];
  }
  return chain;
}

double min_cut(const FullParams& p) {
  auto cuts = cut_values(chain_from_params(p));
  return *std::min_element(cuts.begin(), cuts.end());
}

double softmin_cut(const FullParams& p, double mu) {
  auto cuts = cut_values(chain_from_params(p));
  double cmin = *std::min_element(cuts.begin(), cuts.end());
  double s = 0.0;
  for (double c : cuts) s += std::exp(-(c - cmin) / mu);
  return cmin - mu * std::log(s);
}

}  // namespace

CapacityResult solve_cascade_full_support(int m, ModelVariant model,
                                          const FullSupportOptions& opts) {
  if (m < 1 || m > 8) {
    throw std::invalid_argument("full-support cross-check limited to m <= 8");
  }
  std::mt19937_64 eng(opts.seed);
  auto uni = [&]() {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  };

  // Seed one restart from the restricted solution.
  FullParams seeded;
  seeded.m = m;
  seeded.model = model;
  seeded.theta.assign(static_cast<size_t>(seeded.dim()), 0.0);
  {
    CapacityResult restricted = solve_cascade(m, model);
    auto safe_log = [](double v) { return std::log(std::max(v, 1e-12)); };
    auto mu0 = restricted.chain.edges.front().prev_marginal();
    for (int i = 0; i < 3; ++i) seeded.theta[static_cast<size_t>(i)] = safe_log(mu0[i]);
    for (int e = 0; e < m; ++e) {
      auto prev = restricted.chain.edges[static_cast<size_t>(e)].prev_marginal();
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          double cond = prev[a] > 1e-12
                            ? restricted.chain.edges[static_cast<size_t>(e)].p[a][b] / prev[a]
                            : 1.0 / 3.0;
          seeded.theta[static_cast<size_t>(3 + 9 * e + 3 * a + b)] = safe_log(cond);
        }
      }
    }
  }

  FullParams best = seeded;
  double best_value = min_cut(best);
  long iterations = 0;
  const double stages[] = {0.1, 0.03, 0.01, 0.003, 0.001};

  for (int restart = 0; restart <= opts.restarts; ++restart) {
    FullParams p = seeded;
    if (restart > 0) {
      for (auto& v : p.theta) v = 2.0 * uni() - 1.0;
    }
    for (double mu : stages) {
      double lr = 0.5;
      for (int step = 0; step < opts.steps_per_stage; ++step) {
        ++iterations;
        double f0 = softmin_cut(p, mu);
        std::vector<double> grad(p.theta.size());
        const double h = 1e-5;
        for (size_t d = 0; d < p.theta.size(); ++d) {
          double save = p.theta[d];
          p.theta[d] = save + h;
          double fp = softmin_cut(p, mu);
          p.theta[d] = save - h;
          double fm = softmin_cut(p, mu);
          p.theta[d] = save;
          grad[d] = (fp - fm) / (2.0 * h);
        }
        double norm = 0.0;
        for (double gv : grad) norm += gv * gv;
        norm = std::sqrt(norm);
        if (norm < 1e-12) break;
        FullParams trial = p;
        bool improved = false;
        for (int bt = 0; bt < 20; ++bt) {
          for (size_t d = 0; d < p.theta.size(); ++d) {
            trial.theta[d] = p.theta[d] + lr * grad[d] / norm;
          }
          if (softmin_cut(trial, mu) > f0) {
            p = trial;
            improved = true;
            lr = std::min(lr * 1.5, 1.0);
            break;
          }
          lr *= 0.5;
        }
        if (!improved && lr < 1e-10) break;
      }
    }
    double v = min_cut(p);
    if (v > best_value) {
      best_value = v;
      best = p;
    }
  }

  CapacityResult r = result_from_chain(model, m, chain_from_params(best),
                                       iterations);
  return r;
}

}  // namespace hdrelay
