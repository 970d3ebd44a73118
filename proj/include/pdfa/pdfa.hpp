#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdfa/alphabet.hpp"
#include "pdfa/random.hpp"
#include "pdfa/word.hpp"

namespace pdfa {

using StateId = std::uint32_t;

// Next-token distribution over Σ then $ (length |Σ|+1).
using Dist = std::vector<double>;

// Rows must sum to 1 within this tolerance.
inline constexpr double kRowTolerance = 1e-9;

// Checks NextDist invariants: length, entries in [0,1], sum 1 ± tolerance.
bool is_distribution(std::span<const double> dist, std::size_t expected_size,
                     double tolerance = kRowTolerance);

// A drawn sequence. `stopped` is set when $ was drawn; otherwise the draw hit
// the length cap and `tokens` is a truncated prefix.
struct Sample {
  Word tokens;
  bool stopped = false;
};

// Probabilistic deterministic finite automaton. Immutable after construction.
class Pdfa {
public:
  // transitions: row-major [state][σ], size states·|Σ|.
  // weights: row-major [state][σ or $], size states·(|Σ|+1).
  // Validates totality and row stochasticity; throws InputError on violation.
  // Rows off by more than float noise (but within kRowTolerance) are rescaled once.
  Pdfa(Alphabet alphabet, StateId initial, std::vector<StateId> transitions,
       std::vector<double> weights, std::vector<std::string> state_names = {});

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return names_.size(); }
  StateId initial() const { return initial_; }
  const std::string& name(StateId q) const { return names_.at(q); }

  StateId next(StateId q, Symbol s) const {
    return transitions_[static_cast<std::size_t>(q) * alphabet_.size() + s];
  }
  std::span<const double> weights(StateId q) const {
    return {weights_.data() + static_cast<std::size_t>(q) * alphabet_.dist_size(),
            alphabet_.dist_size()};
  }
  double weight(StateId q, Symbol s) const { return weights(q)[s]; }

  // Recurrent transition function δ̂. Throws InputError on symbols outside Σ.
  StateId run(StateId from, std::span<const Symbol> word) const;
  StateId run(std::span<const Symbol> word) const { return run(initial_, word); }

  Dist next_dist(std::span<const Symbol> word) const;
  // P_A(w) for w over Σ.
  double sequence_probability(std::span<const Symbol> word) const;

  // Every state reaches, along positive-weight transitions, a state with positive $ weight.
  bool is_live() const;

  friend bool operator==(const Pdfa& a, const Pdfa& b) = default;

private:
  Alphabet alphabet_;
  StateId initial_ = 0;
  std::vector<StateId> transitions_;
  std::vector<double> weights_;
  std::vector<std::string> names_;
};

// Draws from successive next_dist rows until $ is drawn. A sample that would
// grow past max_len tokens is returned truncated (stopped == false).
Sample sample(const Pdfa& a, Rng& rng, std::size_t max_len);
Sample sample(const Pdfa& a, std::uint64_t seed, std::size_t max_len);

} // namespace pdfa
