#include "pdfa/pdfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "pdfa/errors.hpp"

namespace pdfa {

namespace {

// Rows closer to 1 than this are float noise and kept bit-exact.
constexpr double kRescaleThreshold = 1e-12;

} // namespace

bool is_distribution(std::span<const double> dist, std::size_t expected_size, double tolerance) {
  if (dist.size() != expected_size) return false;
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

Pdfa::Pdfa(Alphabet alphabet, StateId initial, std::vector<StateId> transitions,
           std::vector<double> weights, std::vector<std::string> state_names)
    : alphabet_(std::move(alphabet)), initial_(initial), transitions_(std::move(transitions)),
      weights_(std::move(weights)), names_(std::move(state_names)) {
  const std::size_t sigma = alphabet_.size();
  const std::size_t width = alphabet_.dist_size();
  if (sigma == 0) throw InputError("PDFA alphabet is empty");
  if (weights_.size() % width != 0 || weights_.empty())
    throw InputError("PDFA weight table size is not a positive multiple of |Σ|+1");
  const std::size_t n = weights_.size() / width;
  if (transitions_.size() != n * sigma)
    throw InputError("PDFA transition table must have |Q|·|Σ| entries");
  if (initial_ >= n) throw InputError("PDFA initial state out of range");
  if (names_.empty()) {
    names_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) names_.push_back("q" + std::to_string(q));
  } else if (names_.size() != n) {
    throw InputError("PDFA state name count does not match state count");
  }
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i] >= n)
      throw InputError("transition from state " + names_[i / sigma] + " on \"" +
                       std::string(alphabet_.token(static_cast<Symbol>(i % sigma))) +
                       "\" leaves the state set");
  }
  for (std::size_t q = 0; q < n; ++q) {
    std::span<double> row(weights_.data() + q * width, width);
    double sum = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      if (!(row[j] >= 0.0 && row[j] <= 1.0))
        throw InputError("weight of \"" + std::string(alphabet_.token(static_cast<Symbol>(j))) +
                         "\" in state " + names_[q] + " is outside [0,1]");
      sum += row[j];
    }
    if (std::abs(sum - 1.0) > kRowTolerance)
      throw InputError("weights of state " + names_[q] + " sum to " + std::to_string(sum) +
                       ", not 1");
    if (std::abs(sum - 1.0) > kRescaleThreshold)
      for (double& p : row) p /= sum;
  }
}

StateId Pdfa::run(StateId from, std::span<const Symbol> word) const {
  StateId q = from;
  for (Symbol s : word) {
    if (s >= alphabet_.size())
      throw InputError("symbol " + std::to_string(s) + " is not a token of the PDFA alphabet");
    q = next(q, s);
  }
  return q;
}

Dist Pdfa::next_dist(std::span<const Symbol> word) const {
  auto w = weights(run(word));
  return Dist(w.begin(), w.end());
}

double Pdfa::sequence_probability(std::span<const Symbol> word) const {
  StateId q = initial_;
  double p = 1.0;
  for (Symbol s : word) {
    if (s >= alphabet_.size())
      throw InputError("symbol " + std::to_string(s) + " is not a token of the PDFA alphabet");
    p *= weight(q, s);
    q = next(q, s);
  }
  return p * weight(q, alphabet_.end());
}

bool Pdfa::is_live() const {
  // Backward search from stopping states over positive-weight edges.
  const std::size_t n = num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId q = 0; q < n; ++q)
    for (Symbol s = 0; s < alphabet_.size(); ++s)
      if (weight(q, s) > 0.0) preds[next(q, s)].push_back(q);
  std::vector<char> live(n, 0);
  std::queue<StateId> work;
  for (StateId q = 0; q < n; ++q)
    if (weight(q, alphabet_.end()) > 0.0) {
      live[q] = 1;
      work.push(q);
    }
  while (!work.empty()) {
    StateId q = work.front();
    work.pop();
    for (StateId p : preds[q])
      if (!live[p]) {
        live[p] = 1;
        work.push(p);
      }
  }
  return std::all_of(live.begin(), live.end(), [](char c) { return c != 0; });
}

Sample sample(const Pdfa& a, Rng& rng, std::size_t max_len) {
  Sample out;
  StateId q = a.initial();
  const Symbol end = a.alphabet().end();
  for (;;) {
    Symbol s = draw(a.weights(q), rng);
    if (s == end) {
      out.stopped = true;
      return out;
    }
    if (out.tokens.size() == max_len) return out;
    out.tokens.push_back(s);
    q = a.next(q, s);
  }
}

Sample sample(const Pdfa& a, std::uint64_t seed, std::size_t max_len) {
  Rng rng(seed);
  return sample(a, rng, max_len);
}

} // namespace pdfa
