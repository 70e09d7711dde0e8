#include "hdrelay/cutset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdrelay {

namespace {

constexpr int kN = 2;

long pow3(int k) {
  long v = 1;
  while (k-- > 0) v *= 3;
  return v;
}

inline int hop_out(int x_prev, int x_self) {
  return x_self == kN ? x_prev : x_self;
}

// Unpack a base-3 index into node symbols x[0..m] (x_0 least significant).
inline void unpack(long idx, int m, int* x) {
  for (int i = 0; i <= m; ++i) {
    x[i] = static_cast<int>(idx % 3);
    idx /= 3;
  }
}

// Entropy (bits) of masses accumulated into a dense table.
double table_entropy(const std::vector<double>& tab) {
  return entropy_unchecked(tab.data(), static_cast<int>(tab.size()));
}

// H(values keyed by key_a | values keyed by key_b) where key_b's digits are
// a suffix of key_a's.  Both tables carry the full joint mass.
struct KeyedAccumulator {
  std::vector<double> joint_tab;
  std::vector<double> cond_tab;

  KeyedAccumulator(int joint_digits, int cond_digits)
      : joint_tab(static_cast<size_t>(pow3(joint_digits)), 0.0),
        cond_tab(static_cast<size_t>(pow3(cond_digits)), 0.0) {}

  void add(long joint_key, long cond_key, double p) {
    joint_tab[static_cast<size_t>(joint_key)] += p;
    cond_tab[static_cast<size_t>(cond_key)] += p;
  }

  double conditional_entropy() const {
    return table_entropy(joint_tab) - table_entropy(cond_tab);
  }
};

// H(Y_out | X_c : c in conds).  `out` is an output index in 1..m+1.
double cond_output_entropy(const FullJointPmf& joint, int out,
                           const std::vector<int>& conds) {
  const int m = joint.relay_count;
  KeyedAccumulator acc(static_cast<int>(conds.size()) + 1,
                       static_cast<int>(conds.size()));
  int x[8];
  const long states = pow3(m + 1);
  for (long idx = 0; idx < states; ++idx) {
    double p = joint.prob[static_cast<size_t>(idx)];
    if (p <= 0.0) continue;
    unpack(idx, m, x);
    int y = out == m + 1 ? x[m] : hop_out(x[out - 1], x[out]);
    long ck = 0;
    for (int c : conds) ck = ck * 3 + x[c];
    acc.add(ck * 3 + y, ck, p);
  }
  return acc.conditional_entropy();
}

// H(X_A) for a set of node indices.
double marginal_entropy(const FullJointPmf& joint, const std::vector<int>& A) {
  const int m = joint.relay_count;
  std::vector<double> tab(static_cast<size_t>(pow3(static_cast<int>(A.size()))),
                          0.0);
  int x[8];
  const long states = pow3(m + 1);
  for (long idx = 0; idx < states; ++idx) {
    double p = joint.prob[static_cast<size_t>(idx)];
    if (p <= 0.0) continue;
    unpack(idx, m, x);
    long k = 0;
    for (int a : A) k = k * 3 + x[a];
    tab[static_cast<size_t>(k)] += p;
  }
  return table_entropy(tab);
}

// Pairwise hop marginal (X_{l-1}, X_l) of the joint.
EdgeDistribution hop_marginal(const FullJointPmf& joint, int l) {
  const int m = joint.relay_count;
  EdgeDistribution e{};
  int x[8];
  const long states = pow3(m + 1);
  for (long idx = 0; idx < states; ++idx) {
    double p = joint.prob[static_cast<size_t>(idx)];
    if (p <= 0.0) continue;
    unpack(idx, m, x);
    e.p[x[l - 1]][x[l]] += p;
  }
  return e;
}

CutSet mask_to_subset(unsigned mask, int m) {
  CutSet s;
  for (int i = 1; i <= m; ++i) {
    if (mask & (1u << (i - 1))) s.push_back(i);
  }
  return s;
}

void merge(CutCheckReport& into, const CutCheckReport& part) {
  into.subsets_checked += part.subsets_checked;
  into.violations.insert(into.violations.end(), part.violations.begin(),
                         part.violations.end());
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Rejection keeps the draw exactly uniform: accept r only below the
  // largest multiple of n representable in 64 bits.
  std::uint64_t t = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  for (;;) {
    std::uint64_t r = eng_();
    if (t == 0 || r <= std::numeric_limits<std::uint64_t>::max() - t) {
      return r % n;
    }
  }
}

mpz_class Rng::below(const mpz_class& n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  mpz_class mask = (mpz_class(1) << bits) - 1;
  for (;;) {
    mpz_class r = 0;
    for (size_t w = 0; w < words; ++w) {
      r <<= 64;
      r += static_cast<unsigned long>(eng_());
    }
    r &= mask;
    if (r < n) return r;
  }
}

void FullJointPmf::validate(double tol) const {
  if (relay_count < 1) {
    throw std::invalid_argument("joint needs at least one relay");
  }
  if (prob.size() != static_cast<size_t>(pow3(relay_count + 1))) {
    throw std::invalid_argument("joint table size does not match relay count");
  }
  KahanSum mass;
  for (double p : prob) {
    if (p < 0.0) throw std::invalid_argument("negative joint probability");
    mass.add(p);
  }
  if (std::abs(mass.value() - 1.0) > tol) {
    throw std::invalid_argument("joint mass differs from 1");
  }
}

FullJointPmf FullJointPmf::materialize(const ChainDistribution& chain) {
  const int m = chain.relay_count;
  if (m > 5) {
    throw std::invalid_argument(
        "brute-force joint limited to m <= 5 (3^(m+1) states)");
  }
  chain.validate();
  // Conditional rows p(x_i | x_{i-1}) for edges 2..m; rows over a silent
  // upstream marginal carry no mass and stay zero.
  std::vector<std::array<std::array<double, 3>, 3>> cond(
      static_cast<size_t>(m));
  for (int e = 1; e < m; ++e) {
    auto prev = chain.edges[static_cast<size_t>(e)].prev_marginal();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        cond[static_cast<size_t>(e)][static_cast<size_t>(a)]
            [static_cast<size_t>(b)] =
                prev[static_cast<size_t>(a)] > 0.0
                    ? chain.edges[static_cast<size_t>(e)]
                              .p[static_cast<size_t>(a)]
                               [static_cast<size_t>(b)] /
                          prev[static_cast<size_t>(a)]
                    : 0.0;
      }
    }
  }
  FullJointPmf joint;
  joint.relay_count = m;
  joint.prob.assign(static_cast<size_t>(pow3(m + 1)), 0.0);
  int x[8];
  for (long idx = 0; idx < static_cast<long>(joint.prob.size()); ++idx) {
    unpack(idx, m, x);
    double p = chain.edges[0].p[static_cast<size_t>(x[0])]
                               [static_cast<size_t>(x[1])];
    for (int i = 2; i <= m && p > 0.0; ++i) {
      p *= cond[static_cast<size_t>(i - 1)][static_cast<size_t>(x[i - 1])]
               [static_cast<size_t>(x[i])];
    }
    joint.prob[static_cast<size_t>(idx)] = p;
  }
  return joint;
}

double cut_value_single_source(const FullJointPmf& joint, const CutSet& S) {
  const int m = joint.relay_count;
  const int s = static_cast<int>(S.size());
  KeyedAccumulator acc(2 * s + 1, s);
  int x[8];
  int y[8];
  const long states = pow3(m + 1);
  for (long idx = 0; idx < states; ++idx) {
    double p = joint.prob[static_cast<size_t>(idx)];
    if (p <= 0.0) continue;
    unpack(idx, m, x);
    for (int i = 1; i <= m; ++i) y[i] = hop_out(x[i - 1], x[i]);
    y[m + 1] = x[m];
    long ck = 0;
    for (int i : S) ck = ck * 3 + x[i];
    long jk = ck;
    for (int i : S) jk = jk * 3 + y[i];
    jk = jk * 3 + y[m + 1];
    acc.add(jk, ck, p);
  }
  return acc.conditional_entropy();
}

double mutual_info_cut(const FullJointPmf& joint, const CutSet& S) {
  // I(X_0, X_{S^c}; Y_S, Y_{m+1} | X_S)
  //   = H(Y_S, Y_{m+1} | X_S) - H(Y_S, Y_{m+1} | X_0, ..., X_m).
  const int m = joint.relay_count;
  const int s = static_cast<int>(S.size());
  KeyedAccumulator full(m + 1 + s + 1, m + 1);
  int x[8];
  int y[8];
  const long states = pow3(m + 1);
  for (long idx = 0; idx < states; ++idx) {
    double p = joint.prob[static_cast<size_t>(idx)];
    if (p <= 0.0) continue;
    unpack(idx, m, x);
    for (int i = 1; i <= m; ++i) y[i] = hop_out(x[i - 1], x[i]);
    y[m + 1] = x[m];
    long jk = idx;
    for (int i : S) jk = jk * 3 + y[i];
    jk = jk * 3 + y[m + 1];
    full.add(jk, idx, p);
  }
  return cut_value_single_source(joint, S) - full.conditional_entropy();
}

CutCheckReport check_ascending_single(const FullJointPmf& joint,
                                      int chain_index, double tol) {
  joint.validate();
  const int m = joint.relay_count;
  CutCheckReport rep;
  rep.trials = 1;

  const unsigned total = 1u << m;
  std::vector<double> brute(total);
  for (unsigned mask = 0; mask < total; ++mask) {
    brute[mask] = cut_value_single_source(joint, mask_to_subset(mask, m));
  }
  rep.subsets_checked = total;

  // Ascending family (descending start index) plus the empty set, with the
  // simplified closed forms H(Y_l | X_l) and H(X_m).
  double asc_min = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= m + 1; ++l) {
    unsigned mask = l <= m ? ((total - 1u) & ~((1u << (l - 1)) - 1u)) : 0u;
    double formula = l <= m
                         ? cut_entropy_output_given_self(hop_marginal(joint, l))
                         : marginal_entropy(joint, {m});
    double bv = brute[mask];
    if (std::abs(bv - formula) > tol) {
      rep.violations.push_back({chain_index, "formula_mismatch",
                                mask_to_subset(mask, m), bv, formula});
    }
    asc_min = std::min(asc_min, bv);
  }

  unsigned argmin = 0;
  for (unsigned mask = 1; mask < total; ++mask) {
    if (brute[mask] < brute[argmin]) argmin = mask;
  }
  if (brute[argmin] < asc_min - tol) {
    rep.violations.push_back({chain_index, "nonascending_min",
                              mask_to_subset(argmin, m), brute[argmin],
                              asc_min});
  }
  return rep;
}

CutCheckReport verify_ascending_minimality(const ChainDistribution& chain,
                                           int trials, unsigned long seed) {
  CutCheckReport rep;
  merge(rep, check_ascending_single(FullJointPmf::materialize(chain), 0));
  Rng rng(seed);
  for (int t = 1; t <= trials; ++t) {
    ChainDistribution c = random_consistent_chain(chain.relay_count, rng);
    merge(rep, check_ascending_single(FullJointPmf::materialize(c), t));
  }
  rep.trials = 1 + trials;
  return rep;
}

TwoSourceBounds two_source_bounds(const FullJointPmf& joint, int r) {
  const int m = joint.relay_count;
  if (r < 1 || r > m) {
    throw std::domain_error("relay source index outside 1..m");
  }
  TwoSourceBounds b;

  b.r0_bound = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= m; ++i) {
    b.r0_bound = std::min(b.r0_bound, cond_output_entropy(joint, i, {i}));
  }

  // Relay-source bound always conditions on X_{r-1} (X_0 when r = 1).
  b.rr_bound = std::numeric_limits<double>::infinity();
  for (int i = r + 1; i <= m + 1; ++i) {
    std::vector<int> conds{r - 1};
    if (i <= m) conds.push_back(i);
    b.rr_bound = std::min(b.rr_bound, cond_output_entropy(joint, i, conds));
  }

  // Sum bound: downstream cuts + upstream cuts, capped by H(Y_{m+1}).
  // Here the X_{r-1} conditioning drops when r = 1 (index would be 0 < 1).
  double down = 0.0;
  if (r >= 2) {
    down = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= r - 1; ++i) {
      down = std::min(down, cond_output_entropy(joint, i, {i}));
    }
  }
  double up = std::numeric_limits<double>::infinity();
  for (int k = r + 1; k <= m + 1; ++k) {
    std::vector<int> conds;
    if (r >= 2) conds.push_back(r - 1);
    if (k <= m) conds.push_back(k);
    up = std::min(up, cond_output_entropy(joint, k, conds));
  }
  b.sum_bound = std::min(down + up, marginal_entropy(joint, {m}));
  return b;
}

CutCheckReport check_ascending_two_source(const FullJointPmf& joint, int r,
                                          int chain_index, double tol) {
  joint.validate();
  const int m = joint.relay_count;
  if (r < 1 || r > m) {
    throw std::domain_error("relay source index outside 1..m");
  }
  CutCheckReport rep;
  rep.trials = 1;

  // All subsets of {1..r-1} u {r+1..m}: submasks of `allowed`.
  const unsigned allowed = ((1u << m) - 1u) & ~(1u << (r - 1));
  double overall = std::numeric_limits<double>::infinity();
  CutSet overall_arg;
  unsigned sub = allowed;
  for (;;) {
    CutSet S = mask_to_subset(sub, m);
    double v = cut_value_single_source(joint, S);
    ++rep.subsets_checked;
    if (v < overall) {
      overall = v;
      overall_arg = S;
    }
    if (sub == 0) break;
    sub = (sub - 1) & allowed;
  }

  // Ascending pairs: S^d = {i..r-1} (empty when i = r) and S^u = {k..m}
  // (empty when k = m+1), with the matching closed-form decomposition.
  double asc_min = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= r; ++i) {
    for (int k = r + 1; k <= m + 1; ++k) {
      CutSet S;
      for (int v = i; v <= r - 1; ++v) S.push_back(v);
      for (int v = k; v <= m; ++v) S.push_back(v);
      double bv = cut_value_single_source(joint, S);
      double formula;
      if (i <= r - 1 && k <= m) {
        formula = cond_output_entropy(joint, i, {i}) +
                  cond_output_entropy(joint, k, {r - 1, k});
      } else if (i <= r - 1) {
        formula = cond_output_entropy(joint, i, {i}) +
                  cond_output_entropy(joint, m + 1, {r - 1});
      } else if (k <= m) {
        formula = cond_output_entropy(joint, k, {k});
      } else {
        formula = marginal_entropy(joint, {m});
      }
      if (std::abs(bv - formula) > tol) {
        rep.violations.push_back(
            {chain_index, "formula_mismatch", S, bv, formula});
      }
      asc_min = std::min(asc_min, bv);
    }
  }

  if (overall < asc_min - tol) {
    rep.violations.push_back(
        {chain_index, "nonascending_min", overall_arg, overall, asc_min});
  }
  return rep;
}

CutCheckReport verify_two_source_ascending(const ChainDistribution& chain,
                                           int r, int trials,
                                           unsigned long seed) {
  if (chain.relay_count > 4) {
    throw std::invalid_argument("two-source brute force limited to m <= 4");
  }
  CutCheckReport rep;
  merge(rep, check_ascending_two_source(FullJointPmf::materialize(chain), r));
  Rng rng(seed);
  for (int t = 1; t <= trials; ++t) {
    ChainDistribution c = random_consistent_chain(chain.relay_count, rng);
    merge(rep, check_ascending_two_source(FullJointPmf::materialize(c), r, t));
  }
  rep.trials = 1 + trials;
  return rep;
}

ChainDistribution random_consistent_chain(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("need at least one relay");
  auto exp1 = [&]() { return -std::log(1.0 - rng.uniform()); };
  ChainDistribution chain;
  chain.relay_count = m;

  // Edge 1: uniform over the 9-point simplex (normalized Exp(1) draws).
  EdgeDistribution first{};
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      first.p[a][b] = exp1();
      total += first.p[a][b];
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) first.p[a][b] /= total;
  }
  chain.edges.push_back(first);

  // Later edges: previous self-marginal times freshly drawn conditional
  // rows, so adjacent marginals agree exactly.
  for (int e = 2; e <= m; ++e) {
    auto marg = chain.edges.back().self_marginal();
    EdgeDistribution next{};
    for (int a = 0; a < 3; ++a) {
      double row[3];
      double rs = 0.0;
      for (int b = 0; b < 3; ++b) {
        row[b] = exp1();
        rs += row[b];
      }
      for (int b = 0; b < 3; ++b) {
        next.p[a][b] = marg[static_cast<size_t>(a)] * row[b] / rs;
      }
    }
    chain.edges.push_back(next);
  }
  return chain;
}

}  // namespace hdrelay
