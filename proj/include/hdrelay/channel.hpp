#pragma once

// The deterministic half-duplex relay cascade: nodes 0..m+1 on a line.
// Node 0 is the source, node m+1 the sink, nodes 1..m are relays.  A node
// either transmits a binary symbol or is silent (N); a listening node hears
// its upstream neighbour, a transmitting node only hears itself.

#include <string>
#include <vector>

namespace hdrelay {

enum class Symbol : int { Zero = 0, One = 1, N = 2 };

// Ternary: a listening relay observes {0,1,N} (silence is detectable).
// Binary: a listening relay observes {0,1}; the simultaneous-silence pair
// (N,N) on a hop is excluded by the model, so silence is never observed.
enum class ModelVariant { Ternary, Binary };

char to_char(Symbol s);
Symbol symbol_from_char(char c);  // throws std::invalid_argument

std::string block_to_string(const std::vector<Symbol>& block);
std::vector<Symbol> block_from_string(const std::string& s);

struct CascadeTopology {
  int relay_count = 1;  // m >= 1
  ModelVariant model = ModelVariant::Ternary;

  int node_count() const { return relay_count + 2; }
  void validate() const;  // throws std::invalid_argument if m < 1
};

// One hop: what node i hears given its own symbol and the upstream symbol.
//   Y_i = X_{i-1} if X_i = N (listening), else X_i (hears itself).
// Binary model: (X_{i-1}, X_i) = (N, N) is an excluded input pair -> throws.
Symbol relay_output(Symbol x_prev, Symbol x_self, ModelVariant model);

// One channel use of the whole cascade.  `x` holds X_0..X_m; the result
// holds Y_1..Y_{m+1} (the sink observes Y_{m+1} = X_m directly).
std::vector<Symbol> network_use(const std::vector<Symbol>& x,
                                const CascadeTopology& topo);

}  // namespace hdrelay
