#include "pdfa/grammars.hpp"

#include <array>
#include <charconv>
#include <vector>

#include "pdfa/errors.hpp"

namespace pdfa {

namespace {

Alphabet binary() { return Alphabet({"0", "1"}); }

// Transition rows as (next on 0, next on 1) plus acceptance flags.
struct Dfa {
  std::vector<std::array<StateId, 2>> next;
  std::vector<bool> accepting;
};

Pdfa weighted(const Dfa& d) {
  std::vector<StateId> transitions;
  std::vector<double> weights;
  for (std::size_t q = 0; q < d.next.size(); ++q) {
    transitions.push_back(d.next[q][0]);
    transitions.push_back(d.next[q][1]);
    if (d.accepting[q]) weights.insert(weights.end(), {0.665, 0.285, 0.05});
    else weights.insert(weights.end(), {0.285, 0.665, 0.05});
  }
  return Pdfa(binary(), 0, std::move(transitions), std::move(weights));
}

Dfa tomita_dfa(int i) {
  switch (i) {
    case 1:  // 1*
      return {{{1, 0}, {1, 1}}, {true, false}};
    case 2:  // (10)*
      return {{{2, 1}, {0, 2}, {2, 2}}, {true, false, false}};
    case 3:  // no odd run of 1s directly followed by an odd run of 0s
      return {{{0, 1}, {2, 0}, {3, 4}, {2, 1}, {4, 4}}, {true, true, false, true, false}};
    case 4:  // no 000
      return {{{1, 0}, {2, 0}, {3, 0}, {3, 3}}, {true, true, true, false}};
    case 5:  // even number of 0s and even number of 1s
      return {{{1, 2}, {0, 3}, {3, 0}, {2, 1}}, {true, false, false, false}};
    case 6:  // (#0 - #1) ≡ 0 mod 3
      return {{{1, 2}, {2, 0}, {0, 1}}, {true, false, false}};
    case 7:  // 0*1*0*1*
      return {{{0, 1}, {2, 1}, {2, 3}, {4, 3}, {4, 4}}, {true, true, true, true, false}};
    default:
      throw InputError("Tomita grammar index must lie in 1..7");
  }
}

Pdfa cycle(std::size_t states, Alphabet sigma, const std::vector<std::vector<double>>& rows) {
  std::vector<StateId> transitions;
  std::vector<double> weights;
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t a = 0; a < sigma.size(); ++a)
      transitions.push_back(static_cast<StateId>((q + 1) % states));
    weights.insert(weights.end(), rows[q].begin(), rows[q].end());
  }
  return Pdfa(std::move(sigma), 0, std::move(transitions), std::move(weights));
}

} // namespace

Pdfa tomita_weighted(int i) { return weighted(tomita_dfa(i)); }

Pdfa uhl(int i) {
  switch (i) {
    case 1: {
      const std::vector<double> zero{0.75, 0.20, 0.05};
      const std::vector<double> one{0.20, 0.75, 0.05};
      std::vector<std::vector<double>> rows(9, zero);
      rows[1] = rows[4] = rows[8] = one;
      return cycle(9, binary(), rows);
    }
    case 2: {
      std::vector<std::vector<double>> rows(5, std::vector<double>(6, 0.091));
      for (std::size_t k = 0; k < 5; ++k) {
        rows[k][k] = 0.591;
        rows[k][5] = 0.045;
      }
      return cycle(5, Alphabet({"0", "1", "2", "3", "4"}), rows);
    }
    case 3: {
      // States by (parity of 0s, parity of 1s): ee, oe, eo, oo.
      std::vector<StateId> transitions{1, 2, 0, 3, 3, 0, 2, 1};
      std::vector<double> weights{0.525, 0.425, 0.05, 0.525, 0.425, 0.05,
                                  0.525, 0.425, 0.05, 0.425, 0.525, 0.05};
      return Pdfa(binary(), 0, std::move(transitions), std::move(weights),
                  {"ee", "oe", "eo", "oo"});
    }
    default:
      throw InputError("UHL index must lie in 1..3");
  }
}

Pdfa appb_target() {
  // Rows: D1 = (0.5, 0.4, 0.1), D2 = (0.7, 0.25, 0.05), D5 = (0.6, 0.325, 0.075).
  std::vector<StateId> transitions{1, 4, 2, 2, 3, 3, 5, 5, 2, 1, 5, 5};
  std::vector<double> weights{0.5, 0.4,  0.1,  0.7, 0.25,  0.05,  0.5, 0.4, 0.1,
                              0.5, 0.4,  0.1,  0.5, 0.4,   0.1,   0.6, 0.325, 0.075};
  return Pdfa(Alphabet({"a", "b"}), 0, std::move(transitions), std::move(weights));
}

GrammarId parse_grammar_id(std::string_view id) {
  constexpr std::string_view scheme = "grammar://";
  if (id.starts_with(scheme)) id.remove_prefix(scheme.size());
  if (id == "appb") return {GrammarId::Family::AppB, 0};
  auto slash = id.find('/');
  if (slash == std::string_view::npos)
    throw InputError("grammar id must look like tomita/N, uhl/N or appb");
  const std::string_view family = id.substr(0, slash);
  const std::string_view num = id.substr(slash + 1);
  int index = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), index);
  if (ec != std::errc() || ptr != num.data() + num.size())
    throw InputError("grammar index \"" + std::string(num) + "\" is not a number");
  if (family == "tomita") {
    if (index < 1 || index > 7) throw InputError("Tomita grammar index must lie in 1..7");
    return {GrammarId::Family::Tomita, index};
  }
  if (family == "uhl") {
    if (index < 1 || index > 3) throw InputError("UHL index must lie in 1..3");
    return {GrammarId::Family::Uhl, index};
  }
  throw InputError("unknown grammar family \"" + std::string(family) + "\"");
}

Pdfa make_grammar(const GrammarId& id) {
  switch (id.family) {
    case GrammarId::Family::Tomita: return tomita_weighted(id.index);
    case GrammarId::Family::Uhl: return uhl(id.index);
    case GrammarId::Family::AppB: return appb_target();
  }
  throw InputError("unknown grammar");
}

} // namespace pdfa
