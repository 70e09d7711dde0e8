#pragma once

// Entropy and combinatorial counting primitives shared by the solvers,
// the brute-force cut verifier and the coding layer.
//
// Conventions used throughout the library:
//   - all entropies are in bits (log base 2),
//   - 0 * log2(0) == 0,
//   - pmf mass must equal 1 within kPmfMassTol.

#include <array>
#include <vector>

#include <gmpxx.h>

namespace hdrelay {

inline constexpr double kLog2Of3 = 1.5849625007211562;
inline constexpr double kPmfMassTol = 1e-9;

// Compensated (Kahan) accumulator.  Entropy sums over brute-force joint
// tables run to ~3^6 terms; compensation keeps the 1e-12 identities honest.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Throws std::invalid_argument on a negative entry or mass != 1.
void validate_pmf(const std::vector<double>& p, double tol = kPmfMassTol);

// H(p) = -sum p_k log2 p_k.  Validates `p` first.
double entropy(const std::vector<double>& p);

// H_b(q); delegates to entropy({q, 1-q}) so the two agree bit-for-bit.
double binary_entropy(double q);

// Entropy of an already-validated pmf given as a raw range (no validation);
// used by hot loops that build distributions known to be normalized.
double entropy_unchecked(const double* p, int count);

// Joint distribution of one hop (X_{i-1}, X_i) over {0,1,N}.
// p[a][b] = P(X_{i-1} = a, X_i = b); symbol index order is (0, 1, N).
struct EdgeDistribution {
  std::array<std::array<double, 3>, 3> p{};

  // Throws std::invalid_argument unless entries are >= 0 and mass is 1.
  void validate(double tol = kPmfMassTol) const;

  std::array<double, 3> prev_marginal() const;  // marginal of X_{i-1}
  std::array<double, 3> self_marginal() const;  // marginal of X_i
};

// H(X_{i-1} | X_i).
double cond_entropy_prev_given_self(const EdgeDistribution& e);

// H(Y_i | X_i) for the half-duplex hop: while X_i transmits, Y_i = X_i is
// known, so only the silent state contributes:
//   H(Y_i | X_i) = P(X_i = N) * H(X_{i-1} | X_i = N).
double cut_entropy_output_given_self(const EdgeDistribution& e);

// log2 C(n, k) by summed logarithms (no Gamma approximation); ~1e-9 relative
// accuracy for n <= 10^4.  Throws std::domain_error for k < 0 or k > n.
double log2_binomial(int n, int k);

// Exact C(n, k) as a big integer (n <= 4096 by contract).
mpz_class exact_binomial(int n, int k);

// log2 of a positive big integer (double-precision result).
double log2_mpz(const mpz_class& v);

}  // namespace hdrelay
