#include <doctest.h>

#include <cmath>

#include "pdfa/errors.hpp"
#include "pdfa/eval.hpp"
#include "pdfa/extract.hpp"
#include "pdfa/grammars.hpp"
#include "support.hpp"

using namespace pdfa;
using support::word;

namespace {

// q0 --a--> q0, q0 --b--> q1, same from q1.
Pdfa two_state(std::vector<double> q1_row) {
  std::vector<double> w{0.7, 0.2, 0.1};
  w.insert(w.end(), q1_row.begin(), q1_row.end());
  return Pdfa(Alphabet({"a", "b"}), 0, {0, 1, 0, 1}, w);
}

// q0 → q1 → q2 → q3 on every symbol, q3 loops.
Pdfa chain(std::vector<double> q3_row) {
  std::vector<double> w;
  for (int i = 0; i < 3; ++i) w.insert(w.end(), {0.4, 0.4, 0.2});
  w.insert(w.end(), q3_row.begin(), q3_row.end());
  return Pdfa(Alphabet({"a", "b"}), 0, {1, 1, 2, 2, 3, 3, 3, 3}, w);
}

} // namespace

TEST_CASE("argmax and top_k break ties toward the lowest index") {
  std::vector<double> d{0.2, 0.4, 0.4, 0.0};
  CHECK(argmax(d) == 1);
  CHECK(top_k(d, 2) == std::vector<Symbol>{1, 2});
  CHECK(top_k(d, 4) == std::vector<Symbol>{1, 2, 0, 3});
  std::vector<double> flat{0.25, 0.25, 0.25, 0.25};
  CHECK(argmax(flat) == 0);
}

TEST_CASE("wer") {
  PdfaOracle a(uhl(1));
  PdfaOracle b(uhl(1));
  CHECK(wer(a, b, 500, 3) == 0.0);

  // Swapping the two token weights everywhere flips every argmax except none.
  auto swapped = [](const Pdfa& g) {
    std::vector<StateId> next;
    std::vector<double> w;
    for (StateId q = 0; q < g.num_states(); ++q) {
      for (Symbol s = 0; s < 2; ++s) next.push_back(g.next(q, s));
      auto r = g.weights(q);
      w.insert(w.end(), {r[1], r[0], r[2]});
    }
    return Pdfa(g.alphabet(), g.initial(), next, w);
  };
  PdfaOracle s(swapped(uhl(1)));
  CHECK(wer(s, b, 500, 3) == 1.0);

  // Model disagrees only in q1; the expected share of positions in q1 is the
  // q1 entry of row 0 of (I - Q)^{-1}, normalized.
  PdfaOracle target(two_state({0.3, 0.6, 0.1}));
  PdfaOracle model(two_state({0.6, 0.3, 0.1}));
  const double q00 = 0.7, q01 = 0.2, q10 = 0.3, q11 = 0.6;
  const double det = (1 - q00) * (1 - q11) - q01 * q10;
  const double n0 = (1 - q11) / det, n1 = q01 / det;
  const double expected = n1 / (n0 + n1);
  CHECK(std::abs(expected - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(wer(model, target, 4000, 11) - expected) < 0.02);

  CHECK_THROWS_AS(wer(a, b, 10, 0, 0), InputError);
  PdfaOracle other(tomita_weighted(1));
  PdfaOracle five(uhl(2));
  CHECK_THROWS_AS(wer(other, five, 10), InputError);
}

TEST_CASE("wer counts the closing position of stopped samples") {
  // Single state, stop certain: each sample is ε and contributes one position.
  Alphabet sigma({"a", "b"});
  PdfaOracle stop(support::single_state(sigma, {0.0, 0.0, 1.0}));
  PdfaOracle wrong(support::single_state(sigma, {0.5, 0.2, 0.3}));
  CHECK(wer(wrong, stop, 50) == 1.0);
  CHECK(wer(stop, stop, 50) == 0.0);
}

TEST_CASE("ndcg per prefix") {
  const std::vector<double> b{0.5, 0.3, 0.2};
  const std::vector<double> a{0.3, 0.6, 0.1};
  // a ranks token 1 (gain 0.3) first, then token 0 (gain 0.5).
  const double expected = (0.3 + 0.5 / std::log2(3.0)) / (0.5 + 0.3 / std::log2(3.0));
  CHECK(std::abs(expected - 0.892911205473213) < 1e-12);
  CHECK(std::abs(*ndcg_score(a, b, 2) - 0.892911205473213) < 1e-9);
  CHECK(*ndcg_score(b, b, 2) == 1.0);
  CHECK(*ndcg_score(b, b, 3) == 1.0);

  // k = 1 is b(argmax a) / max b.
  CHECK(std::abs(*ndcg_score(a, b, 1) - 0.3 / 0.5) < 1e-12);

  const std::vector<double> zero_top{0.0, 0.0, 1.0};
  CHECK_FALSE(ndcg_score(b, std::vector<double>{0.0, 0.0, 0.0}, 2).has_value());
  CHECK(ndcg_score(b, zero_top, 1).has_value());
  CHECK_THROWS_AS(ndcg_score(a, b, 0), InputError);
  CHECK_THROWS_AS(ndcg_score(a, b, 4), InputError);
}

TEST_CASE("ndcg over sampled prefixes") {
  PdfaOracle a(uhl(3));
  PdfaOracle b(uhl(3));
  NdcgResult self = ndcg(a, b, 2, 1000, 7);
  CHECK(self.score == 1.0);
  CHECK(self.prefixes == 1000);
  CHECK(self.skipped == 0);

  PdfaOracle t(two_state({0.3, 0.6, 0.1}));
  PdfaOracle m(two_state({0.6, 0.3, 0.1}));
  NdcgResult r = ndcg(m, t, 1, 2000, 1);
  // Per prefix: 1 in q0, 0.3/0.6 in q1.
  CHECK(r.score < 1.0);
  CHECK(r.score > 0.5);
}

TEST_CASE("exact divergence") {
  Pdfa h = appb_target();
  CHECK_FALSE(exact_divergence(h, h, 0.0).has_value());

  Pdfa a = chain({0.4, 0.4, 0.2});
  Pdfa b = chain({0.5, 0.3, 0.2});
  auto d = exact_divergence(a, b, 0.05);
  REQUIRE(d);
  CHECK(d->prefix.size() == 3);
  CHECK(d->gap > 0.05);
  CHECK_FALSE(exact_divergence(a, b, 0.2).has_value());

  // Brute force over Σ^{≤6}: the shortest diverging prefix has length 3.
  std::size_t shortest = 99;
  std::vector<Word> frontier{{}};
  for (std::size_t len = 0; len <= 6 && shortest == 99; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      if (linf_distance(a.next_dist(w), b.next_dist(w)) > 0.05) shortest = std::min(shortest, len);
      for (Symbol s = 0; s < 2; ++s) next.push_back(extend(w, s));
    }
    frontier = std::move(next);
  }
  CHECK(shortest == d->prefix.size());

  auto ab = exact_divergence(a, b, 0.0);
  auto ba = exact_divergence(b, a, 0.0);
  REQUIRE(ab);
  REQUIRE(ba);
  CHECK(ab->prefix == ba->prefix);
  CHECK(ab->gap == ba->gap);
}

TEST_CASE("divergence ignores states reachable only through zero-weight edges") {
  // q0 never emits b; the b-successors differ wildly.
  Alphabet sigma({"a", "b"});
  Pdfa a(sigma, 0, {0, 1, 1, 1}, {0.5, 0.0, 0.5, 0.1, 0.1, 0.8});
  Pdfa b(sigma, 0, {0, 1, 1, 1}, {0.5, 0.0, 0.5, 0.8, 0.1, 0.1});
  CHECK_FALSE(exact_divergence(a, b, 0.1).has_value());
}

TEST_CASE("t-consistency audit") {
  Pdfa g = appb_target();
  PdfaOracle a(g);
  PdfaOracle b(g);
  const Alphabet& sigma = g.alphabet();
  std::vector<Word> words{word(sigma, "bba"), word(sigma, "a$"), word(sigma, "aab$")};
  CHECK_FALSE(t_consistency_audit(a, b, words, 0.0).has_value());

  // Move 0.2 of mass at the state reached by "bb".
  const StateId q = g.run(word(sigma, "bb"));
  std::vector<StateId> next;
  std::vector<double> w;
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (Symbol x = 0; x < 2; ++x) next.push_back(g.next(s, x));
    auto r = g.weights(s);
    std::vector<double> row(r.begin(), r.end());
    if (s == q) {
      const double moved = std::min(0.2, row[0]);
      row[0] -= moved;
      row[2] += moved;
    }
    w.insert(w.end(), row.begin(), row.end());
  }
  PdfaOracle bad(Pdfa(sigma, g.initial(), next, w));
  auto v = t_consistency_audit(bad, b, words, 0.1);
  REQUIRE(v);
  CHECK(sigma.format(v->word) == "bba");
  CHECK(sigma.format(v->prefix) == "bba");
  CHECK(v->gap > 0.1);
}

TEST_CASE("metric table") {
  std::vector<MetricRow> rows{{"pdfa", 0.0, 1.0, 5, 0.25}, {"3-gram", 0.125, std::nullopt, {}, {}}};
  const std::string out = format_metric_table(rows, 2);
  CHECK(out ==
        "model      WER  NDCG_2  size  time (s)\n"
        "pdfa    0.0000  1.0000     5      0.25\n"
        "3-gram  0.1250       -     -         -\n");
}
