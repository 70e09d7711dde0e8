#include <doctest.h>

#include <stdexcept>

#include "hdrelay/channel.hpp"

using namespace hdrelay;

TEST_CASE("symbol round trip through characters") {
  CHECK(to_char(Symbol::Zero) == '0');
  CHECK(to_char(Symbol::One) == '1');
  CHECK(to_char(Symbol::N) == 'N');
  for (char c : {'0', '1', 'N'}) CHECK(to_char(symbol_from_char(c)) == c);
  CHECK_THROWS_AS(symbol_from_char('x'), std::invalid_argument);
}

TEST_CASE("block string round trip") {
  std::string s = "01NN10";
  CHECK(block_to_string(block_from_string(s)) == s);
  CHECK(block_from_string("").empty());
  CHECK_THROWS_AS(block_from_string("012"), std::invalid_argument);
}

TEST_CASE("listening relay hears upstream, transmitting relay hears itself") {
  for (ModelVariant model : {ModelVariant::Ternary, ModelVariant::Binary}) {
    // Listening (own symbol N): output copies upstream.
    CHECK(relay_output(Symbol::Zero, Symbol::N, model) == Symbol::Zero);
    CHECK(relay_output(Symbol::One, Symbol::N, model) == Symbol::One);
    // Transmitting: upstream is ignored.
    for (Symbol up : {Symbol::Zero, Symbol::One, Symbol::N}) {
      CHECK(relay_output(up, Symbol::Zero, model) == Symbol::Zero);
      CHECK(relay_output(up, Symbol::One, model) == Symbol::One);
    }
  }
  // Simultaneous silence: detectable in the ternary model, excluded in the
  // binary model.
  CHECK(relay_output(Symbol::N, Symbol::N, ModelVariant::Ternary) == Symbol::N);
  CHECK_THROWS_AS(relay_output(Symbol::N, Symbol::N, ModelVariant::Binary),
                  std::invalid_argument);
}

TEST_CASE("network use propagates hop by hop") {
  CascadeTopology topo{2, ModelVariant::Ternary};
  // X_0 = 1, X_1 = N (listening), X_2 = 0 (transmitting).
  auto y = network_use({Symbol::One, Symbol::N, Symbol::Zero}, topo);
  REQUIRE(y.size() == 3);
  CHECK(y[0] == Symbol::One);    // relay 1 hears the source
  CHECK(y[1] == Symbol::Zero);   // relay 2 hears itself
  CHECK(y[2] == Symbol::Zero);   // sink hears relay 2 verbatim

  // All silent: every listener hears N in the ternary model.
  auto quiet = network_use({Symbol::N, Symbol::N, Symbol::N}, topo);
  CHECK(quiet[0] == Symbol::N);
  CHECK(quiet[1] == Symbol::N);
  CHECK(quiet[2] == Symbol::N);
}

TEST_CASE("network use validates shape and model") {
  CascadeTopology topo{1, ModelVariant::Binary};
  CHECK_THROWS_AS(network_use({Symbol::Zero}, topo), std::invalid_argument);
  // (N, N) on the source-relay hop is excluded in the binary model.
  CHECK_THROWS_AS(network_use({Symbol::N, Symbol::N}, topo),
                  std::invalid_argument);
  // Valid binary use: source transmits, relay listens.
  auto y = network_use({Symbol::One, Symbol::N}, topo);
  CHECK(y[0] == Symbol::One);
  CHECK(y[1] == Symbol::N);  // sink observes the relay's silence directly

  CascadeTopology bad{0, ModelVariant::Ternary};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sink observation is the last relay's symbol verbatim") {
  CascadeTopology topo{1, ModelVariant::Ternary};
  for (Symbol x1 : {Symbol::Zero, Symbol::One, Symbol::N}) {
    auto y = network_use({Symbol::Zero, x1}, topo);
    CHECK(y[1] == x1);
  }
}
