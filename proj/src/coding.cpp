#include "hdrelay/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdrelay {

namespace {

mpz_class pow_ui(unsigned base, unsigned long exp) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), base, exp);
  return v;
}

std::vector<int> complement_positions(const SlotAllocation& z) {
  std::vector<int> free_slots;
  free_slots.reserve(static_cast<size_t>(z.n - z.count()));
  size_t j = 0;
  for (int t = 0; t < z.n; ++t) {
    if (j < z.positions.size() && z.positions[j] == t) {
      ++j;
    } else {
      free_slots.push_back(t);
    }
  }
  return free_slots;
}

// Payload bits most-significant first in ascending slot order.
void write_bits(Block& block, const std::vector<int>& pos,
                const mpz_class& payload, int nbits) {
  for (int j = 0; j < nbits; ++j) {
    int bit = mpz_tstbit(payload.get_mpz_t(),
                         static_cast<mp_bitcnt_t>(nbits - 1 - j));
    block[static_cast<size_t>(pos[static_cast<size_t>(j)])] =
        bit ? Symbol::One : Symbol::Zero;
  }
}

mpz_class read_bits(const Block& block, const std::vector<int>& pos) {
  mpz_class v = 0;
  for (int t : pos) {
    Symbol s = block[static_cast<size_t>(t)];
    if (s == Symbol::N) {
      throw IntegrityError("silent symbol where a payload bit was expected");
    }
    v <<= 1;
    v += s == Symbol::One ? 1 : 0;
  }
  return v;
}

void write_base3(Block& block, const std::vector<int>& pos,
                 const mpz_class& value) {
  std::vector<int> digits(pos.size(), 0);
  mpz_class tmp = value;
  for (size_t j = pos.size(); j-- > 0 && tmp > 0;) {
    mpz_class q, r;
    mpz_tdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), tmp.get_mpz_t(), 3u);
    digits[j] = static_cast<int>(r.get_ui());
    tmp = q;
  }
  static const Symbol digit_symbol[3] = {Symbol::Zero, Symbol::One, Symbol::N};
  for (size_t j = 0; j < pos.size(); ++j) {
    block[static_cast<size_t>(pos[j])] = digit_symbol[digits[j]];
  }
}

mpz_class read_base3(const Block& block, const std::vector<int>& pos) {
  mpz_class v = 0;
  for (int t : pos) {
    int digit = static_cast<int>(block[static_cast<size_t>(t)]);
    v *= 3;
    v += digit;
  }
  return v;
}

// Binary model: node i transmits on slots of parity (m - i) % 2, so every
// hop pairs one talker with one listener in every slot.
std::vector<int> parity_positions(int n, int m, int node) {
  int parity = (m - node) % 2;
  if (parity < 0) parity += 2;
  std::vector<int> pos;
  for (int t = parity; t < n; t += 2) pos.push_back(t);
  return pos;
}

}  // namespace

void SlotAllocation::validate() const {
  if (n < 0) throw std::invalid_argument("negative block length");
  int prev = -1;
  for (int p : positions) {
    if (p <= prev || p >= n) {
      throw std::invalid_argument("allocation positions must be strictly "
                                  "increasing within the block");
    }
    prev = p;
  }
}

mpz_class rank_allocation(const SlotAllocation& a) {
  a.validate();
  const int n = a.n;
  const int k = a.count();
  mpz_class rank = 0;
  int prev = -1;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < a.positions[static_cast<size_t>(j)]; ++v) {
      rank += exact_binomial(n - 1 - v, k - 1 - j);
    }
    prev = a.positions[static_cast<size_t>(j)];
  }
  return rank;
}

SlotAllocation unrank_allocation(const mpz_class& rank, int n, int k) {
  if (k < 0 || k > n) throw std::domain_error("subset size outside [0, n]");
  if (rank < 0 || rank >= exact_binomial(n, k)) {
    throw std::domain_error("allocation rank outside [0, C(n, k))");
  }
  SlotAllocation a;
  a.n = n;
  a.positions.reserve(static_cast<size_t>(k));
  mpz_class rest = rank;
  int v = 0;
  for (int j = 0; j < k; ++j) {
    for (;; ++v) {
      mpz_class block = exact_binomial(n - 1 - v, k - 1 - j);
      if (rest < block) break;
      rest -= block;
    }
    a.positions.push_back(v);
    ++v;
  }
  return a;
}

SlotAllocation embed_allocation(const SlotAllocation& s,
                                const SlotAllocation& z_next) {
  s.validate();
  z_next.validate();
  std::vector<int> free_slots = complement_positions(z_next);
  if (s.n != static_cast<int>(free_slots.size())) {
    throw std::domain_error(
        "effective length does not match the downstream complement");
  }
  SlotAllocation out;
  out.n = z_next.n;
  out.positions.reserve(s.positions.size());
  for (int p : s.positions) {
    out.positions.push_back(free_slots[static_cast<size_t>(p)]);
  }
  return out;
}

CodebookSpec CodebookSpec::make(int n, int m, std::vector<int> n_counts,
                                ModelVariant model) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  if (static_cast<int>(n_counts.size()) != m) {
    throw std::invalid_argument("need one binary-symbol budget per relay");
  }
  for (int i = 1; i <= m; ++i) {
    int own = n_counts[static_cast<size_t>(i) - 1];
    int next = i == m ? 0 : n_counts[static_cast<size_t>(i)];
    if (own < 0 || own > n - next) {
      throw std::invalid_argument(
          "budget of relay " + std::to_string(i) +
          " exceeds the slots left free by its downstream neighbor");
    }
  }
  if (model == ModelVariant::Binary) {
    if (n % 2 != 0) {
      throw std::invalid_argument("binary time-sharing needs an even n");
    }
    for (int c : n_counts) {
      if (c != n / 2) {
        throw std::invalid_argument(
            "binary time-sharing fixes every budget at n/2");
      }
    }
  }
  CodebookSpec spec;
  spec.n = n;
  spec.m = m;
  spec.n_counts = std::move(n_counts);
  spec.model = model;
  spec.message_count = spec.node_index_count(0);
  for (int i = 1; i <= m; ++i) {
    spec.message_count = std::min(spec.message_count, spec.node_index_count(i));
  }
  return spec;
}

mpz_class CodebookSpec::node_index_count(int i) const {
  if (i < 0 || i > m) throw std::invalid_argument("node index outside 0..m");
  if (model == ModelVariant::Binary) {
    return pow_ui(2, static_cast<unsigned long>(n / 2));
  }
  if (i == 0) {
    return pow_ui(3, static_cast<unsigned long>(n - n_counts[0]));
  }
  int own = n_counts[static_cast<size_t>(i) - 1];
  int next = i == m ? 0 : n_counts[static_cast<size_t>(i)];
  return pow_ui(2, static_cast<unsigned long>(own)) *
         exact_binomial(n - next, own);
}

double CodebookSpec::rate_bits_per_use() const {
  return log2_mpz(message_count) / static_cast<double>(n);
}

std::vector<SlotAllocation> block_allocations(const std::vector<mpz_class>& w,
                                              const CodebookSpec& spec) {
  if (static_cast<int>(w.size()) != spec.m) {
    throw std::invalid_argument("need one message per relay");
  }
  std::vector<SlotAllocation> z(static_cast<size_t>(spec.m));
  if (spec.model == ModelVariant::Binary) {
    for (int i = 1; i <= spec.m; ++i) {
      SlotAllocation a;
      a.n = spec.n;
      a.positions = parity_positions(spec.n, spec.m, i);
      z[static_cast<size_t>(i) - 1] = a;
    }
    return z;
  }
  SlotAllocation z_next;
  z_next.n = spec.n;
  for (int i = spec.m; i >= 1; --i) {
    const mpz_class& wi = w[static_cast<size_t>(i) - 1];
    if (wi < 0 || wi >= spec.node_index_count(i)) {
      throw std::domain_error("relay message outside the node's index range");
    }
    int own = spec.n_counts[static_cast<size_t>(i) - 1];
    mpz_class rank;
    mpz_tdiv_q_2exp(rank.get_mpz_t(), wi.get_mpz_t(),
                    static_cast<mp_bitcnt_t>(own));
    SlotAllocation s =
        unrank_allocation(rank, spec.n - z_next.count(), own);
    z_next = embed_allocation(s, z_next);
    z[static_cast<size_t>(i) - 1] = z_next;
  }
  return z;
}

Block encode_relay(const mpz_class& w, int i, const SlotAllocation& z_next,
                   const CodebookSpec& spec) {
  if (i < 1 || i > spec.m) throw std::invalid_argument("relay index");
  if (w < 0 || w >= spec.node_index_count(i)) {
    throw std::domain_error("message outside the node's index range");
  }
  Block block(static_cast<size_t>(spec.n), Symbol::N);
  int own = spec.n_counts[static_cast<size_t>(i) - 1];
  if (spec.model == ModelVariant::Binary) {
    write_bits(block, parity_positions(spec.n, spec.m, i), w, own);
    return block;
  }
  SlotAllocation down;
  down.n = spec.n;
  if (i < spec.m) {
    down = z_next;
    down.validate();
    if (down.n != spec.n ||
        down.count() != spec.n_counts[static_cast<size_t>(i)]) {
      throw std::invalid_argument(
          "downstream allocation inconsistent with the codebook");
    }
  }
  mpz_class rank, payload;
  mpz_tdiv_q_2exp(rank.get_mpz_t(), w.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(own));
  mpz_fdiv_r_2exp(payload.get_mpz_t(), w.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(own));
  SlotAllocation s = unrank_allocation(rank, spec.n - down.count(), own);
  SlotAllocation z = embed_allocation(s, down);
  write_bits(block, z.positions, payload, own);
  return block;
}

Block encode_source(const mpz_class& w0, const SlotAllocation& z1,
                    const CodebookSpec& spec) {
  if (w0 < 0 || w0 >= spec.node_index_count(0)) {
    throw std::domain_error("message outside the node's index range");
  }
  Block block(static_cast<size_t>(spec.n), Symbol::N);
  if (spec.model == ModelVariant::Binary) {
    write_bits(block, parity_positions(spec.n, spec.m, 0), w0, spec.n / 2);
    return block;
  }
  SlotAllocation z = z1;
  z.validate();
  if (z.n != spec.n || z.count() != spec.n_counts[0]) {
    throw std::invalid_argument(
        "relay-1 allocation inconsistent with the codebook");
  }
  write_base3(block, complement_positions(z), w0);
  return block;
}

mpz_class decode_at_node(const Block& received, int i,
                         const SlotAllocation& own_alloc,
                         const CodebookSpec& spec) {
  if (i < 1 || i > spec.m + 1) throw std::invalid_argument("node index");
  if (static_cast<int>(received.size()) != spec.n) {
    throw std::invalid_argument("received block has the wrong length");
  }

  if (spec.model == ModelVariant::Binary) {
    std::vector<int> up = parity_positions(spec.n, spec.m, i - 1);
    mpz_class w = read_bits(received, up);  // IntegrityError on silent slot
    if (w >= spec.node_index_count(i - 1)) {
      throw IntegrityError("decoded index outside the upstream range");
    }
    return w;
  }

  SlotAllocation own = own_alloc;
  own.n = spec.n;
  own.validate();
  int expected =
      i == spec.m + 1 ? 0 : spec.n_counts[static_cast<size_t>(i) - 1];
  if (own.count() != expected) {
    throw std::invalid_argument("own allocation inconsistent with the codebook");
  }
  std::vector<int> listening = complement_positions(own);

  if (i == 1) {
    // read_base3 over n - n_1 slots is bounded by the source's index range.
    return read_base3(received, listening);
  }

  // Upstream relay i-1: binary symbols mark its embedded allocation.
  int up_budget = spec.n_counts[static_cast<size_t>(i) - 2];
  SlotAllocation s;
  s.n = static_cast<int>(listening.size());
  std::vector<int> payload_slots;
  for (size_t j = 0; j < listening.size(); ++j) {
    if (received[static_cast<size_t>(listening[j])] != Symbol::N) {
      s.positions.push_back(static_cast<int>(j));
      payload_slots.push_back(listening[j]);
    }
  }
  if (s.count() != up_budget) {
    throw IntegrityError(
        "received block carries " + std::to_string(s.count()) +
        " binary symbols where the upstream budget is " +
        std::to_string(up_budget));
  }
  mpz_class w = rank_allocation(s);
  mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(),
               static_cast<mp_bitcnt_t>(up_budget));
  w += read_bits(received, payload_slots);
  if (w >= spec.node_index_count(i - 1)) {
    throw IntegrityError("decoded index outside the upstream range");
  }
  return w;
}

double slot_count_rate(int n, const std::vector<int>& n_counts) {
  const int m = static_cast<int>(n_counts.size());
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  double best = (static_cast<double>(n - n_counts[0]) / n) * kLog2Of3;
  for (int i = 1; i <= m; ++i) {
    int own = n_counts[static_cast<size_t>(i) - 1];
    int next = i == m ? 0 : n_counts[static_cast<size_t>(i)];
    if (own < 0 || own > n - next) {
      throw std::invalid_argument("invalid slot counts");
    }
    double term = (static_cast<double>(own) +
                   log2_binomial(n - next, own)) /
                  static_cast<double>(n);
    best = std::min(best, term);
  }
  return best;
}

CodebookSpec optimize_slot_counts(int n, int m) {
  if (n < 1 || n > 4096 || m < 1 || m > 16) {
    throw std::invalid_argument("optimizer supports n <= 4096, m <= 16");
  }
  // Kahan-accumulated log2 factorials make log2 C(a, b) an O(1) lookup.
  std::vector<double> lf(static_cast<size_t>(n) + 1, 0.0);
  {
    KahanSum acc;
    for (int i = 1; i <= n; ++i) {
      acc.add(std::log2(static_cast<double>(i)));
      lf[static_cast<size_t>(i)] = acc.value();
    }
  }
  auto log2c = [&](int a, int b) {
    return lf[static_cast<size_t>(a)] - lf[static_cast<size_t>(b)] -
           lf[static_cast<size_t>(a - b)];
  };
  auto term = [&](int own, int next) {
    return (static_cast<double>(own) + log2c(n - next, own)) /
           static_cast<double>(n);
  };

  // best[x] = highest achievable min over terms i..m given n_i = x;
  // choice[i-1][x] = the arg max n_{i+1} at that state.
  std::vector<double> best(static_cast<size_t>(n) + 1);
  std::vector<std::vector<int>> choice(
      static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(n) + 1, 0));
  for (int x = 0; x <= n; ++x) best[static_cast<size_t>(x)] = term(x, 0);
  for (int i = m - 1; i >= 1; --i) {
    std::vector<double> next_best(static_cast<size_t>(n) + 1,
                                  -std::numeric_limits<double>::infinity());
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n - x; ++y) {
        double v = std::min(term(x, y), best[static_cast<size_t>(y)]);
        if (v > next_best[static_cast<size_t>(x)]) {
          next_best[static_cast<size_t>(x)] = v;
          choice[static_cast<size_t>(i) - 1][static_cast<size_t>(x)] = y;
        }
      }
    }
    best.swap(next_best);
  }
  int best_n1 = 0;
  double best_rate = -std::numeric_limits<double>::infinity();
  for (int x = 0; x <= n; ++x) {
    double v = std::min((static_cast<double>(n - x) / n) * kLog2Of3,
                        best[static_cast<size_t>(x)]);
    if (v > best_rate) {
      best_rate = v;
      best_n1 = x;
    }
  }
  std::vector<int> counts(static_cast<size_t>(m));
  counts[0] = best_n1;
  for (int i = 2; i <= m; ++i) {
    counts[static_cast<size_t>(i) - 1] =
        choice[static_cast<size_t>(i) - 2]
              [static_cast<size_t>(counts[static_cast<size_t>(i) - 2])];
  }
  return CodebookSpec::make(n, m, std::move(counts), ModelVariant::Ternary);
}

TwoSourceCodeSpec TwoSourceCodeSpec::make(int n, int n1, int k0) {
  if (n < 1 || n1 < 0 || n1 > n || k0 < 0 || k0 > n1) {
    throw std::invalid_argument("need 0 <= k0 <= n1 <= n");
  }
  TwoSourceCodeSpec spec;
  spec.n = n;
  spec.n1 = n1;
  spec.k0 = k0;
  mpz_class source_cap = pow_ui(3, static_cast<unsigned long>(n - n1));
  mpz_class relay_cap =
      pow_ui(2, static_cast<unsigned long>(k0)) * exact_binomial(n, n1);
  spec.w0_count = std::min(source_cap, relay_cap);
  spec.w1_count = pow_ui(2, static_cast<unsigned long>(n1 - k0));
  return spec;
}

double TwoSourceCodeSpec::r0_bits() const {
  return log2_mpz(w0_count) / static_cast<double>(n);
}

double TwoSourceCodeSpec::r1_bits() const {
  return static_cast<double>(n1 - k0) / static_cast<double>(n);
}

SlotAllocation two_source_allocation(const mpz_class& w0,
                                     const TwoSourceCodeSpec& spec) {
  if (w0 < 0 || w0 >= spec.w0_count) {
    throw std::domain_error("source message outside the codebook");
  }
  mpz_class rank;
  mpz_tdiv_q_2exp(rank.get_mpz_t(), w0.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(spec.k0));
  return unrank_allocation(rank, spec.n, spec.n1);
}

Block two_source_encode(const mpz_class& w0, const mpz_class& w1,
                        const TwoSourceCodeSpec& spec) {
  if (w1 < 0 || w1 >= spec.w1_count) {
    throw std::domain_error("relay message outside the codebook");
  }
  SlotAllocation z = two_source_allocation(w0, spec);  // validates w0
  mpz_class p0;
  mpz_fdiv_r_2exp(p0.get_mpz_t(), w0.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(spec.k0));
  Block block(static_cast<size_t>(spec.n), Symbol::N);
  std::vector<int> lanes0(z.positions.begin(),
                          z.positions.begin() + spec.k0);
  std::vector<int> lanes1(z.positions.begin() + spec.k0, z.positions.end());
  write_bits(block, lanes0, p0, spec.k0);
  write_bits(block, lanes1, w1, spec.n1 - spec.k0);
  return block;
}

std::pair<mpz_class, mpz_class> two_source_decode(
    const Block& received, const TwoSourceCodeSpec& spec) {
  if (static_cast<int>(received.size()) != spec.n) {
    throw std::invalid_argument("received block has the wrong length");
  }
  SlotAllocation s;
  s.n = spec.n;
  for (int t = 0; t < spec.n; ++t) {
    if (received[static_cast<size_t>(t)] != Symbol::N) s.positions.push_back(t);
  }
  if (s.count() != spec.n1) {
    throw IntegrityError(
        "received block carries " + std::to_string(s.count()) +
        " binary symbols where the relay budget is " + std::to_string(spec.n1));
  }
  std::vector<int> lanes0(s.positions.begin(), s.positions.begin() + spec.k0);
  std::vector<int> lanes1(s.positions.begin() + spec.k0, s.positions.end());
  mpz_class w0 = rank_allocation(s);
  mpz_mul_2exp(w0.get_mpz_t(), w0.get_mpz_t(),
               static_cast<mp_bitcnt_t>(spec.k0));
  w0 += read_bits(received, lanes0);
  mpz_class w1 = read_bits(received, lanes1);
  if (w0 >= spec.w0_count || w1 >= spec.w1_count) {
    throw IntegrityError("decoded index outside the codebook");
  }
  return {w0, w1};
}

Block two_source_encode_source(const mpz_class& w0, const SlotAllocation& z1,
                               const TwoSourceCodeSpec& spec) {
  if (w0 < 0 || w0 >= spec.w0_count) {
    throw std::domain_error("source message outside the codebook");
  }
  SlotAllocation z = z1;
  z.n = spec.n;
  z.validate();
  if (z.count() != spec.n1) {
    throw std::invalid_argument(
        "relay allocation inconsistent with the codebook");
  }
  Block block(static_cast<size_t>(spec.n), Symbol::N);
  write_base3(block, complement_positions(z), w0);
  return block;
}

mpz_class two_source_decode_at_relay(const Block& received,
                                     const SlotAllocation& own_alloc,
                                     const TwoSourceCodeSpec& spec) {
  if (static_cast<int>(received.size()) != spec.n) {
    throw std::invalid_argument("received block has the wrong length");
  }
  SlotAllocation own = own_alloc;
  own.n = spec.n;
  own.validate();
  if (own.count() != spec.n1) {
    throw std::invalid_argument("own allocation inconsistent with the codebook");
  }
  mpz_class w0 = read_base3(received, complement_positions(own));
  if (w0 >= spec.w0_count) {
    throw IntegrityError("decoded index outside the codebook");
  }
  return w0;
}

void check_half_duplex(const std::vector<Block>& columns, ModelVariant model) {
  if (columns.empty()) return;
  const size_t n = columns[0].size();
  for (const auto& b : columns) {
    if (b.size() != n) {
      throw std::invalid_argument("ragged block columns");
    }
  }
  for (size_t i = 1; i < columns.size(); ++i) {
    for (size_t t = 0; t < n; ++t) {
      Symbol up = columns[i - 1][t];
      Symbol dn = columns[i][t];
      if (up != Symbol::N && dn != Symbol::N) {
        throw IntegrityError(
            "adjacent nodes " + std::to_string(i - 1) + "," +
            std::to_string(i) + " both transmit in slot " + std::to_string(t));
      }
      if (model == ModelVariant::Binary && up == Symbol::N &&
          dn == Symbol::N) {
        throw IntegrityError(
            "adjacent nodes " + std::to_string(i - 1) + "," +
            std::to_string(i) + " both silent in slot " + std::to_string(t) +
            " (excluded in the binary model)");
      }
    }
  }
}

}  // namespace hdrelay
