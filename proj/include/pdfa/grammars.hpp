#pragma once

#include <string>
#include <string_view>

#include "pdfa/pdfa.hpp"

namespace pdfa {

// Minimal DFA of Tomita grammar i (1..7) over {0,1}. Accepting states weight
// (0: 0.665, 1: 0.285, $: 0.05); rejecting states swap the 0/1 weights.
Pdfa tomita_weighted(int i);

// Unbounded-history targets over {0,1} (1, 3) or {0,...,4} (2).
//   1: 9-state cycle ignoring input; 0 preferred (0.75) except states 2, 5, 9.
//   2: 5-state cycle ignoring input; state k prefers token k (0.591).
//   3: parity of 0s and 1s; 0 preferred (0.525) except at odd/odd.
Pdfa uhl(int i);

// Six-state target over {a,b} reproducing every cell of the worked example
// tables (rows ε, a, aa, aaa, b, bb; columns a, b, $, aa, ba).
Pdfa appb_target();

struct GrammarId {
  enum class Family { Tomita, Uhl, AppB } family;
  int index = 0;
};

// Parses "tomita/3", "uhl/2", "appb" (with or without a "grammar://" prefix).
// Throws InputError on unknown families or out-of-range indices.
GrammarId parse_grammar_id(std::string_view id);
Pdfa make_grammar(const GrammarId& id);

} // namespace pdfa
