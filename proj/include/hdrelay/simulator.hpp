#pragma once

// Block pipeline simulation: every node re-encodes in block b the message it
// decoded at the end of block b-1, so a message injected at block b reaches
// the sink after block b+m.  Nodes act only on their own decoded history;
// nothing is shared out-of-band.

#include <optional>
#include <string>
#include <vector>

#include "hdrelay/coding.hpp"

namespace hdrelay {

enum class MessageSource { Random, Exhaustive, Explicit };

struct ExperimentOptions {
  int blocks = 0;  // B > m
  unsigned long seed = 1;
  MessageSource source = MessageSource::Random;
  std::vector<mpz_class> explicit_messages;   // for MessageSource::Explicit
  std::vector<mpz_class> explicit_relay_messages;  // two-source w1 stream
  bool record_trace = false;  // refused when n*B > 10^6 symbols
};

struct NodeState {
  int node_index = 0;
  std::vector<mpz_class> decoded_history;  // newest last
  SlotAllocation current_allocation;
};

struct TransmissionReport {
  int blocks = 0;
  int n = 0;
  mpz_class message_count;
  long messages_sent = 0;
  long messages_correct = 0;
  double achieved_rate_bits_per_use = 0.0;  // log2(count) (B-m) / (n B)

  // Two-source extras (zero/empty for single-source runs).
  long relay_messages_sent = 0;
  long relay_messages_correct = 0;
  double r0_bits = 0.0;
  double r1_bits = 0.0;

  // Optional per-block transmit matrix; trace[b][i] is node i's block as a
  // string over {0,1,N}.
  std::optional<std::vector<std::vector<std::string>>> trace;

  // Block index (1-based) at which each counted message reached the sink.
  std::vector<int> delivery_blocks;
};

// Single-source run.  Throws on integrity errors; decode mismatches are
// reported via messages_correct (callers treat a shortfall as failure).
TransmissionReport run_pipeline(const CodebookSpec& spec,
                                const ExperimentOptions& opts);

// Two-source run (m = 1): the relay forwards the previous source index and
// injects a fresh relay index every block.
TransmissionReport run_two_source(const TwoSourceCodeSpec& spec,
                                  const ExperimentOptions& opts);

struct SweepRow {
  int n = 0;
  std::vector<int> n_counts;
  double rate_bits = 0.0;      // optimized code rate log2|W|/n
  double capacity_bits = 0.0;  // solve_cascade(m, Ternary)
  double gap_bits = 0.0;       // capacity - rate
  double pipeline_rate_bits = 0.0;  // achieved rate of the verification run
};

// For each n: optimize slot counts, verify a pipeline run at B = 10 m with
// random messages (zero errors required), report the rate and capacity gap.
std::vector<SweepRow> sweep_rates(const std::vector<int>& n_values, int m);

}  // namespace hdrelay
