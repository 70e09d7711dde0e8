#pragma once

// Constructive zero-error block coding for the cascade.
//
// Within a block of n slots, relay i transmits binary payload in n_i slots
// and is silent elsewhere; in the ternary model the *choice* of slots is an
// additional information carrier.  Relay i may only use slots where relay
// i+1 is listening, so its allocation lives on the n - n_{i+1} "effective"
// slots left free by the downstream allocation and is embedded into the
// block around it.  The source fills the n - n_1 slots left free by relay 1
// with base-3 digits ({0,1,N} all carry information to a listening relay).
//
// Message layout (mixed radix, fixed here once for the whole library):
//   relay:  w = allocation_rank * 2^{n_i} + payload
//   payload bits and base-3 digits are written most-significant first in
//   ascending slot order.
//
// Binary model: silence is undetectable hop-to-hop, so allocations carry no
// information; nodes alternate parity (relay m transmits even slots) and all
// messages are pure payload — the 1/2 bit/use time-sharing scheme.

#include <stdexcept>
#include <vector>

#include "hdrelay/channel.hpp"
#include "hdrelay/info.hpp"

namespace hdrelay {

// A decoded block that is structurally inconsistent with the codebook
// (wrong silence count, binary symbol where the upstream must be silent,
// out-of-range index).  Under honest encoders this indicates a harness bug.
class IntegrityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SlotAllocation {
  int n = 0;                   // block length the positions refer to
  std::vector<int> positions;  // strictly increasing, in [0, n)

  int count() const { return static_cast<int>(positions.size()); }
  void validate() const;  // throws std::invalid_argument
};

// Lexicographic rank of a k-subset among all k-subsets of [0, n)
// (combinatorial number system), and its inverse.
mpz_class rank_allocation(const SlotAllocation& a);
SlotAllocation unrank_allocation(const mpz_class& rank, int n, int k);

// Map an allocation over the n - |z_next| effective slots onto the full
// block by renumbering through the complement of z_next.
SlotAllocation embed_allocation(const SlotAllocation& s,
                                const SlotAllocation& z_next);

using Block = std::vector<Symbol>;

struct CodebookSpec {
  int n = 0;
  int m = 0;
  std::vector<int> n_counts;  // n_1..n_m
  ModelVariant model = ModelVariant::Ternary;
  mpz_class message_count;    // min over node index counts

  // Validates and computes message_count.  Ternary: node 0 contributes
  // 3^(n-n_1), relay i contributes 2^{n_i} C(n - n_{i+1}, n_i) (n_{m+1}=0).
  // Binary: n even, every n_i = n/2, every node contributes 2^{n/2}.
  static CodebookSpec make(int n, int m, std::vector<int> n_counts,
                           ModelVariant model = ModelVariant::Ternary);

  // Index count of node i (0 = source, 1..m = relays).
  mpz_class node_index_count(int i) const;

  double rate_bits_per_use() const;  // log2(message_count) / n
};

// Per-message slot allocations.  `w` holds the current messages of relays
// 1..m (w[i-1] for relay i); returns z_1..z_m, each over the full block.
std::vector<SlotAllocation> block_allocations(const std::vector<mpz_class>& w,
                                              const CodebookSpec& spec);

// Relay i's transmitted block for message w given the downstream full-block
// allocation z_next (ignored for i = m, and fixed by parity in the binary
// model).  Accepts any w in [0, node_index_count(i)); a shared pipeline
// uses only [0, message_count).  Throws std::domain_error out of range.
Block encode_relay(const mpz_class& w, int i, const SlotAllocation& z_next,
                   const CodebookSpec& spec);

// Source block: digits of w0 on the complement of z_1 (base 3 in the
// ternary model with digit 2 sent as N; base 2 in the binary model).
// Accepts any w0 in [0, node_index_count(0)).
Block encode_source(const mpz_class& w0, const SlotAllocation& z1,
                    const CodebookSpec& spec);

// Decode at node i (1..m+1): `received` is Y_i over one block and
// `own_alloc` the slots node i itself transmitted in (empty for the sink).
// Recovers the upstream node's message.
mpz_class decode_at_node(const Block& received, int i,
                         const SlotAllocation& own_alloc,
                         const CodebookSpec& spec);

// Best integer slot counts for block length n: maximizes
//   min( (n-n_1)/n log2 3, min_i n_i/n + log2 C(n-n_{i+1}, n_i)/n )
// by backward dynamic programming over (n_i, n_{i+1}) pairs.
CodebookSpec optimize_slot_counts(int n, int m);

// The element-wise minimum the optimizer maximizes, for given counts.
double slot_count_rate(int n, const std::vector<int>& n_counts);

// Two-source code (m = 1, relay source r = 1): the relay block carries the
// allocation rank plus k0 source bits and n_1 - k0 relay bits;
//   |W0| = min(3^(n-n_1), 2^k0 C(n, n_1)),  |W1| = 2^(n_1-k0).
struct TwoSourceCodeSpec {
  int n = 0;
  int n1 = 0;
  int k0 = 0;
  mpz_class w0_count;
  mpz_class w1_count;

  static TwoSourceCodeSpec make(int n, int n1, int k0);
  double r0_bits() const;  // log2(w0_count)/n
  double r1_bits() const;  // (n1-k0)/n
};

// The relay's transmitted block for the pair (w0, w1).
Block two_source_encode(const mpz_class& w0, const mpz_class& w1,
                        const TwoSourceCodeSpec& spec);
// Sink-side inverse (the sink hears X_1 verbatim).
std::pair<mpz_class, mpz_class> two_source_decode(const Block& received,
                                                  const TwoSourceCodeSpec& spec);
// The relay allocation implied by w0 (what the source must avoid).
SlotAllocation two_source_allocation(const mpz_class& w0,
                                     const TwoSourceCodeSpec& spec);
// Source-side encode/decode of w0 for the relay hop (base-3 digits on the
// complement of the current relay allocation).
Block two_source_encode_source(const mpz_class& w0, const SlotAllocation& z1,
                               const TwoSourceCodeSpec& spec);
mpz_class two_source_decode_at_relay(const Block& received,
                                     const SlotAllocation& own_alloc,
                                     const TwoSourceCodeSpec& spec);

// Half-duplex discipline: no slot where adjacent nodes both send binary;
// binary model additionally forbids simultaneous silence on a hop.
// `columns` holds the transmitted blocks of nodes 0..m.
// Throws IntegrityError on a violation.
void check_half_duplex(const std::vector<Block>& columns, ModelVariant model);

}  // namespace hdrelay
