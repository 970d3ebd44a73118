#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>

#include "pdfa/errors.hpp"
#include "pdfa/grammars.hpp"
#include "pdfa/pdfa_io.hpp"
#include "support.hpp"

using namespace pdfa;
using support::word;

namespace {

const Alphabet ab({"a", "b"});

// q0 -a-> q1, q0 -b-> q2, q1 -a-> q2, q1 -b-> q0, q2 -a-> q2, q2 -b-> q1
const std::vector<StateId> kThreeNext{1, 2, 2, 0, 2, 1};
const std::vector<double> kThreeW{0.5, 0.3, 0.2, 0.1, 0.6, 0.3, 0.25, 0.25, 0.5};

Pdfa three_state() { return Pdfa(ab, 0, kThreeNext, kThreeW); }

} // namespace

TEST_CASE("alphabet validation and word formatting") {
  CHECK_THROWS_AS(Alphabet({"a", "a"}), InputError);
  CHECK_THROWS_AS(Alphabet({"$"}), InputError);
  CHECK_THROWS_AS(Alphabet({""}), InputError);
  CHECK_THROWS_AS(Alphabet({"a b"}), InputError);

  CHECK(ab.end() == 2);
  CHECK(ab.token(2) == "$");
  CHECK(ab.symbol("$") == ab.end());
  CHECK(ab.format(Word{}) == "ε");
  CHECK(ab.format(word(ab, "ab$")) == "ab$");

  Alphabet multi({"the", "cat"});
  std::vector<std::string> toks{"the", "cat", "$"};
  CHECK(multi.format(multi.encode(toks)) == "the cat $");
  CHECK(multi.decode(multi.encode(toks)) == toks);
  std::vector<std::string> bad{"$", "the"};
  CHECK_THROWS_AS(multi.encode(bad), InputError);
}

TEST_CASE("next_dist on fixed automata") {
  Pdfa one = support::single_state(ab, {0.5, 0.4, 0.1});
  CHECK(one.next_dist(Word{}) == Dist{0.5, 0.4, 0.1});
  CHECK(one.next_dist(word(ab, "abba")) == Dist{0.5, 0.4, 0.1});

  CHECK(uhl(2).next_dist(Word{})[5] == 0.045);

  // Walk the transition table by hand for every word of length 4.
  Pdfa a = three_state();
  for (int code = 0; code < 16; ++code) {
    Word w;
    StateId q = 0;
    for (int i = 0; i < 4; ++i) {
      Symbol s = (code >> i) & 1;
      w.push_back(s);
      q = kThreeNext[q * 2 + s];
    }
    Dist expect(kThreeW.begin() + q * 3, kThreeW.begin() + q * 3 + 3);
    CHECK(a.next_dist(w) == expect);
  }
  CHECK_THROWS_AS(a.next_dist(Word{7}), InputError);
}

TEST_CASE("sequence probability") {
  Pdfa one = support::single_state(ab, {0.5, 0.4, 0.1});
  CHECK(one.sequence_probability(Word{}) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(one.sequence_probability(word(ab, "a")) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK_THROWS_AS(one.sequence_probability(Word{5}), InputError);

  Pdfa zero = support::single_state(ab, {1.0, 0.0, 0.0});
  CHECK(zero.sequence_probability(word(ab, "aa")) == 0.0);
}

TEST_CASE("mass over words up to length 6 plus unfinished prefixes is 1") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Pdfa a = support::random_pdfa(rng, 3 + trial, 2);
    const int L = 6;
    double finished = 0.0;
    double unfinished = 0.0;
    std::function<void(Word&, double)> walk = [&](Word& w, double prefix_mass) {
      finished += a.sequence_probability(w);
      if (static_cast<int>(w.size()) == L) {
        unfinished += prefix_mass * (1.0 - a.next_dist(w)[2]);
        return;
      }
      for (Symbol s = 0; s < 2; ++s) {
        const double p = prefix_mass * a.next_dist(w)[s];
        w.push_back(s);
        walk(w, p);
        w.pop_back();
      }
    };
    Word w;
    walk(w, 1.0);
    CHECK(finished + unfinished == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("recurrence and chain product") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Pdfa a = support::random_pdfa(rng, 2 + trial % 7, 2 + trial % 4);
    const std::size_t sigma = a.alphabet().size();
    Word u, v;
    for (int i = 0; i < 5; ++i) u.push_back(static_cast<Symbol>(rng.next() % sigma));
    for (int i = 0; i < 4; ++i) v.push_back(static_cast<Symbol>(rng.next() % sigma));
    for (StateId q = 0; q < a.num_states(); ++q)
      CHECK(a.run(q, concat(u, v)) == a.run(a.run(q, u), v));

    Word w = concat(u, v);
    double chain = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      chain *= a.next_dist(std::span<const Symbol>(w).first(i))[w[i]];
    chain *= a.next_dist(w)[a.alphabet().end()];
    CHECK(a.sequence_probability(w) == doctest::Approx(chain).epsilon(1e-14));
  }
}

TEST_CASE("construction validates rows and transitions") {
  CHECK_THROWS_AS(Pdfa(ab, 0, {0, 0}, {0.5, 0.3, 0.1}), InputError);
  CHECK_THROWS_AS(Pdfa(ab, 0, {0, 1}, {0.5, 0.4, 0.1}), InputError);
  CHECK_THROWS_AS(Pdfa(ab, 1, {0, 0}, {0.5, 0.4, 0.1}), InputError);
  CHECK_THROWS_AS(Pdfa(ab, 0, {0, 0}, {1.2, -0.3, 0.1}), InputError);
  // Float-noise rows are kept bit-exact; rows within tolerance but visibly off are rescaled.
  Pdfa exact = support::single_state(ab, {0.525, 0.425, 0.05});
  CHECK(exact.weight(0, 0) == 0.525);
  Pdfa nudged = support::single_state(ab, {0.5 + 4e-10, 0.4, 0.1});
  CHECK(nudged.weight(0, 0) + nudged.weight(0, 1) + nudged.weight(0, 2) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("liveness") {
  CHECK(three_state().is_live());
  // q1 loops forever on a with no way to stop.
  Pdfa trap(ab, 0, {1, 0, 1, 1}, {0.5, 0.4, 0.1, 1.0, 0.0, 0.0});
  CHECK_FALSE(trap.is_live());
  for (int i = 1; i <= 7; ++i) CHECK(tomita_weighted(i).is_live());
}

TEST_CASE("sampling") {
  Pdfa stop = support::single_state(ab, {0.0, 0.0, 1.0});
  Sample s = sample(stop, 1, 10);
  CHECK(s.stopped);
  CHECK(s.tokens.empty());

  Pdfa forced(ab, 0, {1, 1, 1, 1}, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  s = sample(forced, 2, 10);
  CHECK(s.stopped);
  CHECK(s.tokens == word(ab, "a"));

  Pdfa loop = support::single_state(ab, {1.0, 0.0, 0.0});
  s = sample(loop, 3, 5);
  CHECK_FALSE(s.stopped);
  CHECK(s.tokens.size() == 5);

  Pdfa a = three_state();
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    CHECK(sample(a, seed, 50).tokens == sample(a, seed, 50).tokens);
}

TEST_CASE("uhl 1 first token frequency over 100k samples") {
  Pdfa u = uhl(1);
  Rng rng(2024);
  int zeros = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Sample s = sample(u, rng, 1000);
    if (!s.tokens.empty() && s.tokens[0] == 0) ++zeros;
  }
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.75) < 0.01);
}

TEST_CASE("empirical next-token frequencies match weight rows") {
  Pdfa a = three_state();
  Rng rng(77);
  std::vector<std::array<double, 3>> counts(3, {0, 0, 0});
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Sample s = sample(a, rng, 1000);
    StateId q = a.initial();
    for (Symbol t : s.tokens) {
      counts[q][t] += 1;
      q = a.next(q, t);
    }
    if (s.stopped) counts[q][2] += 1;
  }
  for (StateId q = 0; q < 3; ++q) {
    const double total = counts[q][0] + counts[q][1] + counts[q][2];
    for (Symbol t = 0; t < 3; ++t)
      CHECK(std::abs(counts[q][t] / total - a.weight(q, t)) < 0.01);
  }
}

TEST_CASE("pdfa file round trip and validation") {
  Pdfa u = uhl(2);
  CHECK(pdfa_from_json(to_json(u)) == u);
  Pdfa t3 = tomita_weighted(3);
  CHECK(pdfa_from_json(to_json(t3)) == t3);
  CHECK(to_json(pdfa_from_json(to_json(t3))) == to_json(t3));

  const std::string short_row = R"({"alphabet":["a","b"],"initial":"q0",
    "states":{"q0":{"next":{"a":"q0","b":"q0"},"weights":{"a":0.5,"b":0.3,"$":0.1}}}})";
  CHECK_THROWS_AS(pdfa_from_json(short_row), ParseError);

  const std::string missing = R"({"alphabet":["a","b"],"initial":"q0",
    "states":{"q0":{"next":{"a":"q0"},"weights":{"a":0.5,"b":0.4,"$":0.1}}}})";
  try {
    pdfa_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("states.q0.next") != std::string::npos);
  }

  const std::string dangling = R"({"alphabet":["a"],"initial":"q0",
    "states":{"q0":{"next":{"a":"q9"},"weights":{"a":0.5,"$":0.5}}}})";
  CHECK_THROWS_AS(pdfa_from_json(dangling), ParseError);

  try {
    pdfa_from_json("{\n\"alphabet\": [\"a\",\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("dot export") {
  Pdfa one = support::single_state(Alphabet({"a", "b", "c"}), {0.2, 0.3, 0.4, 0.1});
  std::string dot = to_dot(one);
  std::size_t edges = 0;
  for (std::size_t pos = dot.find(" / "); pos != std::string::npos; pos = dot.find(" / ", pos + 1))
    ++edges;
  CHECK(edges == 3);
  CHECK(dot.find("$: 0.1") != std::string::npos);

  std::string t1 = to_dot(tomita_weighted(1));
  std::size_t t1_edges = 0;
  for (std::size_t pos = t1.find(" / "); pos != std::string::npos; pos = t1.find(" / ", pos + 1))
    ++t1_edges;
  CHECK(t1_edges == 4);
}
