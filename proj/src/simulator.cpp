#include "hdrelay/simulator.hpp"

#include <stdexcept>

#include "hdrelay/capacity.hpp"
#include "hdrelay/channel.hpp"
#include "hdrelay/cutset.hpp"

namespace hdrelay {

namespace {

constexpr long kTraceSymbolLimit = 1000000;

// One network pass: node columns in, received blocks Y_1..Y_{m+1} out
// (received[i-1] belongs to node i).
std::vector<Block> channel_pass(const std::vector<Block>& columns,
                                const CascadeTopology& topo) {
  const size_t n = columns.front().size();
  std::vector<Block> received(static_cast<size_t>(topo.relay_count) + 1,
                              Block(n, Symbol::N));
  std::vector<Symbol> x(columns.size());
  for (size_t t = 0; t < n; ++t) {
    for (size_t i = 0; i < columns.size(); ++i) x[i] = columns[i][t];
    std::vector<Symbol> y = network_use(x, topo);
    for (size_t i = 0; i < y.size(); ++i) received[i][t] = y[i];
  }
  return received;
}

void maybe_check_discipline(const std::vector<Block>& columns,
                            ModelVariant model, bool tracing) {
  if (tracing || model == ModelVariant::Binary) {
    check_half_duplex(columns, model);
  }
}

}  // namespace

TransmissionReport run_pipeline(const CodebookSpec& spec,
                                const ExperimentOptions& opts) {
  const int m = spec.m;
  const int B = opts.blocks;
  const int n = spec.n;
  if (B <= m) {
    throw std::invalid_argument(
        "need more blocks than relays for a message to complete the pipeline");
  }
  if (opts.record_trace && static_cast<long>(n) * B > kTraceSymbolLimit) {
    throw std::invalid_argument("trace would exceed the symbol budget");
  }
  const int counted = B - m;
  if (opts.source == MessageSource::Explicit &&
      static_cast<int>(opts.explicit_messages.size()) < counted) {
    throw std::invalid_argument("explicit message list shorter than B - m");
  }

  Rng rng(opts.seed);
  std::vector<mpz_class> injected(static_cast<size_t>(counted));
  for (int k = 0; k < counted; ++k) {
    switch (opts.source) {
      case MessageSource::Random:
        injected[static_cast<size_t>(k)] = rng.below(spec.message_count);
        break;
      case MessageSource::Exhaustive:
        injected[static_cast<size_t>(k)] = mpz_class(k) % spec.message_count;
        break;
      case MessageSource::Explicit:
        injected[static_cast<size_t>(k)] =
            opts.explicit_messages[static_cast<size_t>(k)];
        break;
    }
  }

  // tx[i][b-1]: what node i transmitted in block b (message index).  Each
  // node predicts downstream messages from its OWN past transmissions; the
  // cold-start fill is index 0 everywhere, matching all predictions.
  std::vector<std::vector<mpz_class>> tx(static_cast<size_t>(m) + 1);
  std::vector<NodeState> relays(static_cast<size_t>(m));
  for (int i = 1; i <= m; ++i) {
    relays[static_cast<size_t>(i) - 1].node_index = i;
  }

  CascadeTopology topo{m, spec.model};
  TransmissionReport rep;
  rep.blocks = B;
  rep.n = n;
  rep.message_count = spec.message_count;
  rep.messages_sent = counted;
  rep.achieved_rate_bits_per_use = log2_mpz(spec.message_count) *
                                   static_cast<double>(counted) /
                                   (static_cast<double>(n) * B);
  if (opts.record_trace) rep.trace.emplace();

  auto predicted = [&](int node, int target_relay, int b) -> mpz_class {
    // Node `node` predicts relay `target_relay`'s block-b message as its own
    // transmission lagged by the hop distance (exact under zero error).
    int idx = b - (target_relay - node);
    if (idx < 1) return 0;
    return tx[static_cast<size_t>(node)][static_cast<size_t>(idx) - 1];
  };

  for (int b = 1; b <= B; ++b) {
    // Current messages: source injects (0 in flush blocks), relay i repeats
    // its newest decode.
    std::vector<mpz_class> current(static_cast<size_t>(m) + 1, mpz_class(0));
    if (b <= counted) current[0] = injected[static_cast<size_t>(b) - 1];
    for (int i = 1; i <= m; ++i) {
      const auto& hist = relays[static_cast<size_t>(i) - 1].decoded_history;
      if (!hist.empty()) current[static_cast<size_t>(i)] = hist.back();
    }
    for (int i = 0; i <= m; ++i) {
      tx[static_cast<size_t>(i)].push_back(current[static_cast<size_t>(i)]);
    }

    // Every node derives the allocations it needs from its own knowledge.
    std::vector<Block> columns(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
      std::vector<mpz_class> w_all(static_cast<size_t>(m), mpz_class(0));
      for (int j = std::max(1, i); j <= m; ++j) {
        w_all[static_cast<size_t>(j) - 1] =
            j == i ? current[static_cast<size_t>(i)] : predicted(i, j, b);
      }
      std::vector<SlotAllocation> z = block_allocations(w_all, spec);
      if (i == 0) {
        columns[0] = encode_source(current[0], z[0], spec);
      } else {
        SlotAllocation z_next;
        z_next.n = n;
        if (i < m) z_next = z[static_cast<size_t>(i)];
        columns[static_cast<size_t>(i)] =
            encode_relay(current[static_cast<size_t>(i)], i, z_next, spec);
        relays[static_cast<size_t>(i) - 1].current_allocation =
            z[static_cast<size_t>(i) - 1];
      }
    }

    maybe_check_discipline(columns, spec.model, opts.record_trace);
    if (rep.trace) {
      std::vector<std::string> row;
      row.reserve(columns.size());
      for (const auto& c : columns) row.push_back(block_to_string(c));
      rep.trace->push_back(std::move(row));
    }

    std::vector<Block> received = channel_pass(columns, topo);

    for (int i = 1; i <= m; ++i) {
      mpz_class w_hat =
          decode_at_node(received[static_cast<size_t>(i) - 1], i,
                         relays[static_cast<size_t>(i) - 1].current_allocation,
                         spec);
      relays[static_cast<size_t>(i) - 1].decoded_history.push_back(w_hat);
    }
    SlotAllocation sink_alloc;
    sink_alloc.n = n;
    mpz_class sink_hat =
        decode_at_node(received[static_cast<size_t>(m)], m + 1, sink_alloc,
                       spec);
    int k = b - m;  // which counted message this delivery corresponds to
    if (k >= 1 && k <= counted) {
      rep.delivery_blocks.push_back(b);
      if (sink_hat == injected[static_cast<size_t>(k) - 1]) {
        ++rep.messages_correct;
      }
    }
  }
  return rep;
}

TransmissionReport run_two_source(const TwoSourceCodeSpec& spec,
                                  const ExperimentOptions& opts) {
  const int B = opts.blocks;
  const int n = spec.n;
  if (B <= 1) throw std::invalid_argument("need at least two blocks");
  if (opts.record_trace && static_cast<long>(n) * B > kTraceSymbolLimit) {
    throw std::invalid_argument("trace would exceed the symbol budget");
  }
  const int counted = B - 1;
  if (opts.source == MessageSource::Explicit &&
      (static_cast<int>(opts.explicit_messages.size()) < counted ||
       static_cast<int>(opts.explicit_relay_messages.size()) < B)) {
    throw std::invalid_argument("explicit message lists shorter than the run");
  }

  Rng rng(opts.seed);
  std::vector<mpz_class> injected0(static_cast<size_t>(counted));
  std::vector<mpz_class> injected1(static_cast<size_t>(B));
  for (int k = 0; k < counted; ++k) {
    switch (opts.source) {
      case MessageSource::Random:
        injected0[static_cast<size_t>(k)] = rng.below(spec.w0_count);
        break;
      case MessageSource::Exhaustive:
        injected0[static_cast<size_t>(k)] = mpz_class(k) % spec.w0_count;
        break;
      case MessageSource::Explicit:
        injected0[static_cast<size_t>(k)] =
            opts.explicit_messages[static_cast<size_t>(k)];
        break;
    }
  }
  for (int k = 0; k < B; ++k) {
    switch (opts.source) {
      case MessageSource::Random:
        injected1[static_cast<size_t>(k)] = rng.below(spec.w1_count);
        break;
      case MessageSource::Exhaustive:
        injected1[static_cast<size_t>(k)] = mpz_class(k) % spec.w1_count;
        break;
      case MessageSource::Explicit:
        injected1[static_cast<size_t>(k)] =
            opts.explicit_relay_messages[static_cast<size_t>(k)];
        break;
    }
  }

  CascadeTopology topo{1, ModelVariant::Ternary};
  TransmissionReport rep;
  rep.blocks = B;
  rep.n = n;
  rep.message_count = spec.w0_count;
  rep.messages_sent = counted;
  rep.relay_messages_sent = B;
  rep.r0_bits = log2_mpz(spec.w0_count) * static_cast<double>(counted) /
                (static_cast<double>(n) * B);
  rep.r1_bits = log2_mpz(spec.w1_count) / static_cast<double>(n);
  rep.achieved_rate_bits_per_use = rep.r0_bits;
  if (opts.record_trace) rep.trace.emplace();

  mpz_class relay_w0 = 0;      // the relay's newest decoded source index
  mpz_class source_prev = 0;   // the source's previous injection
  for (int b = 1; b <= B; ++b) {
    mpz_class w0_now = b <= counted ? injected0[static_cast<size_t>(b) - 1]
                                    : mpz_class(0);
    const mpz_class& w1_now = injected1[static_cast<size_t>(b) - 1];

    // The relay's allocation this block follows from its decoded w0; the
    // source reproduces it from its own previous injection.
    SlotAllocation relay_alloc = two_source_allocation(relay_w0, spec);
    SlotAllocation source_view = two_source_allocation(source_prev, spec);

    std::vector<Block> columns(2);
    columns[0] = two_source_encode_source(w0_now, source_view, spec);
    columns[1] = two_source_encode(relay_w0, w1_now, spec);

    maybe_check_discipline(columns, ModelVariant::Ternary, opts.record_trace);
    if (rep.trace) {
      rep.trace->push_back(
          {block_to_string(columns[0]), block_to_string(columns[1])});
    }

    std::vector<Block> received = channel_pass(columns, topo);
    auto [sink_w0, sink_w1] = two_source_decode(received[1], spec);
    if (b >= 2) {
      rep.delivery_blocks.push_back(b);
      if (sink_w0 == injected0[static_cast<size_t>(b) - 2]) {
        ++rep.messages_correct;
      }
    }
    if (sink_w1 == w1_now) ++rep.relay_messages_correct;

    relay_w0 = two_source_decode_at_relay(received[0], relay_alloc, spec);
    source_prev = w0_now;
  }
  return rep;
}

std::vector<SweepRow> sweep_rates(const std::vector<int>& n_values, int m) {
  const double capacity =
      solve_cascade(m, ModelVariant::Ternary).capacity_bits;
  std::vector<SweepRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    CodebookSpec spec = optimize_slot_counts(n, m);
    ExperimentOptions opts;
    opts.blocks = 10 * m;
    opts.seed = 1;
    opts.source = MessageSource::Random;
    TransmissionReport rep = run_pipeline(spec, opts);
    if (rep.messages_correct != rep.messages_sent) {
      throw IntegrityError("zero-error violation in sweep pipeline at n=" +
                           std::to_string(n));
    }
    SweepRow row;
    row.n = n;
    row.n_counts = spec.n_counts;
    row.rate_bits = spec.rate_bits_per_use();
    row.capacity_bits = capacity;
    row.gap_bits = capacity - row.rate_bits;
    row.pipeline_rate_bits = rep.achieved_rate_bits_per_use;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hdrelay
