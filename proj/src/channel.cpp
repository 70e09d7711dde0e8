#include "hdrelay/channel.hpp"

#include <stdexcept>

namespace hdrelay {

char to_char(Symbol s) {
  switch (s) {
    case Symbol::Zero: return '0';
    case Symbol::One: return '1';
    case Symbol::N: return 'N';
  }
  throw std::invalid_argument("invalid symbol value");
}

Symbol symbol_from_char(char c) {
  switch (c) {
    case '0': return Symbol::Zero;
    case '1': return Symbol::One;
    case 'N': return Symbol::N;
  }
  throw std::invalid_argument(std::string("invalid symbol character '") + c +
                              "'");
}

std::string block_to_string(const std::vector<Symbol>& block) {
  std::string s;
  s.reserve(block.size());
  for (Symbol x : block) s.push_back(to_char(x));
  return s;
}

std::vector<Symbol> block_from_string(const std::string& s) {
  std::vector<Symbol> block;
  block.reserve(s.size());
  for (char c : s) block.push_back(symbol_from_char(c));
  return block;
}

void CascadeTopology::validate() const {
  if (relay_count < 1) {
    throw std::invalid_argument("cascade needs at least one relay");
  }
  if (relay_count > 64) {
    throw std::invalid_argument("cascade length beyond supported bound (64)");
  }
}

Symbol relay_output(Symbol x_prev, Symbol x_self, ModelVariant model) {
  if (model == ModelVariant::Binary && x_prev == Symbol::N &&
      x_self == Symbol::N) {
    throw std::invalid_argument(
        "binary model: simultaneous silence (N,N) is an excluded input pair");
  }
  return x_self == Symbol::N ? x_prev : x_self;
}

std::vector<Symbol> network_use(const std::vector<Symbol>& x,
                                const CascadeTopology& topo) {
  topo.validate();
  const int m = topo.relay_count;
  if (static_cast<int>(x.size()) != m + 1) {
    throw std::invalid_argument("network_use expects X_0..X_m");
  }
  std::vector<Symbol> y;
  y.reserve(m + 1);
  for (int i = 1; i <= m; ++i) {
    y.push_back(relay_output(x[i - 1], x[i], topo.model));
  }
  y.push_back(x[m]);  // Y_{m+1} = X_m: the sink always listens
  return y;
}

}  // namespace hdrelay
