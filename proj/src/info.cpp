#include "hdrelay/info.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdrelay {

namespace {

double plog2p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

void validate_pmf(const std::vector<double>& p, double tol) {
  KahanSum mass;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("pmf entry negative or NaN: " +
                                  std::to_string(v));
    }
    mass.add(v);
  }
  if (std::abs(mass.value() - 1.0) > tol) {
    throw std::invalid_argument("pmf mass " + std::to_string(mass.value()) +
                                " differs from 1 beyond tolerance");
  }
}

double entropy(const std::vector<double>& p) {
  validate_pmf(p);
  KahanSum h;
  for (double v : p) h.add(plog2p(v));
  return h.value();
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("binary_entropy argument outside [0,1]");
  }
  return entropy({q, 1.0 - q});
}

double entropy_unchecked(const double* p, int count) {
  KahanSum h;
  for (int i = 0; i < count; ++i) h.add(plog2p(p[i]));
  return h.value();
}

void EdgeDistribution::validate(double tol) const {
  std::vector<double> flat;
  flat.reserve(9);
  for (const auto& row : p)
    for (double v : row) flat.push_back(v);
  validate_pmf(flat, tol);
}

std::array<double, 3> EdgeDistribution::prev_marginal() const {
  std::array<double, 3> m{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[a] += p[a][b];
  return m;
}

std::array<double, 3> EdgeDistribution::self_marginal() const {
  std::array<double, 3> m{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[b] += p[a][b];
  return m;
}

double cond_entropy_prev_given_self(const EdgeDistribution& e) {
  e.validate();
  // H(X_prev | X_self) = H(X_prev, X_self) - H(X_self).
  KahanSum joint;
  for (const auto& row : e.p)
    for (double v : row) joint.add(plog2p(v));
  auto m = e.self_marginal();
  KahanSum marg;
  for (double v : m) marg.add(plog2p(v));
  return joint.value() - marg.value();
}

double cut_entropy_output_given_self(const EdgeDistribution& e) {
  e.validate();
  const int N = 2;
  double col = e.p[0][N] + e.p[1][N] + e.p[2][N];  // P(X_self = N)
  if (col <= 0.0) return 0.0;
  double cond[3] = {e.p[0][N] / col, e.p[1][N] / col, e.p[2][N] / col};
  return col * entropy_unchecked(cond, 3);
}

double log2_binomial(int n, int k) {
  if (k < 0 || k > n) {
    throw std::domain_error("log2_binomial: k outside [0, n]");
  }
  if (n < 0 || n > 10000) {
    throw std::invalid_argument("log2_binomial: n outside [0, 10^4]");
  }
  if (k > n - k) k = n - k;
  KahanSum s;
  for (int j = 1; j <= k; ++j) {
    s.add(std::log2(static_cast<double>(n - k + j)));
    s.add(-std::log2(static_cast<double>(j)));
  }
  return s.value();
}

mpz_class exact_binomial(int n, int k) {
  if (k < 0 || k > n) {
    throw std::domain_error("exact_binomial: k outside [0, n]");
  }
  if (n > 4096) {
    throw std::invalid_argument("exact_binomial: n exceeds 4096");
  }
  mpz_class result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

double log2_mpz(const mpz_class& v) {
  if (v <= 0) throw std::domain_error("log2_mpz: argument must be positive");
  signed long exp2 = 0;
  double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp2);
}

}  // namespace hdrelay
