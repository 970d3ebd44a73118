#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdfa/alphabet.hpp"
#include "pdfa/clustering.hpp"
#include "pdfa/pdfa.hpp"
#include "pdfa/random.hpp"

namespace support {

using namespace pdfa;

// Word from single-character tokens; "" is ε.
inline Word word(const Alphabet& sigma, std::string_view text) {
  Word w;
  for (char c : text) w.push_back(c == '$' ? sigma.end() : sigma.symbol(std::string(1, c)));
  return w;
}

inline std::set<std::string> word_set(const Alphabet& sigma, const std::vector<Word>& ws) {
  std::set<std::string> out;
  for (const Word& w : ws) out.insert(sigma.format(w));
  return out;
}

using ClusterSets = std::set<std::set<std::string>>;

inline ClusterSets cluster_sets(const Clustering& c, const ObservationTable& t) {
  ClusterSets out;
  for (const auto& members : c.clusters) {
    std::set<std::string> s;
    for (std::size_t p : members) s.insert(t.alphabet().format(t.prefixes()[p]));
    out.insert(std::move(s));
  }
  return out;
}

inline Alphabet letters(std::size_t n) {
  std::vector<std::string> toks;
  for (std::size_t i = 0; i < n; ++i) toks.push_back(std::string(1, static_cast<char>('a' + i)));
  return Alphabet(std::move(toks));
}

// Random total PDFA with stopping weight in [0.05, 0.35] at every state.
inline Pdfa random_pdfa(Rng& rng, std::size_t states, std::size_t sigma_size) {
  Alphabet sigma = letters(sigma_size);
  std::vector<StateId> transitions;
  std::vector<double> weights;
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t a = 0; a < sigma_size; ++a)
      transitions.push_back(static_cast<StateId>(rng.next() % states));
    const double stop = 0.05 + 0.3 * rng.uniform();
    std::vector<double> raw(sigma_size);
    double total = 0.0;
    for (double& r : raw) total += (r = 0.05 + rng.uniform());
    for (double r : raw) weights.push_back((1.0 - stop) * r / total);
    weights.push_back(stop);
  }
  return Pdfa(std::move(sigma), 0, std::move(transitions), std::move(weights));
}

inline Pdfa single_state(const Alphabet& sigma, std::vector<double> row) {
  std::vector<StateId> transitions(sigma.size(), 0);
  return Pdfa(sigma, 0, std::move(transitions), std::move(row));
}

} // namespace support
