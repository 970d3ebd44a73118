#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "pdfa/alphabet.hpp"
#include "pdfa/pdfa.hpp"
#include "pdfa/random.hpp"

namespace pdfa {

// Black-box target. next_dist must be a pure function of the prefix: repeated
// queries return bitwise-equal vectors of length |Σ|+1 (Σ then $).
// Implementations are not required to be thread-safe; the learner is serial.
class Oracle {
public:
  virtual ~Oracle() = default;
  virtual const Alphabet& alphabet() const = 0;
  // Prefix is a word over Σ. Throws InputError on out-of-alphabet symbols,
  // OracleError if the source cannot answer.
  virtual Dist next_dist(std::span<const Symbol> prefix) = 0;
};

class PdfaOracle final : public Oracle {
public:
  explicit PdfaOracle(Pdfa a) : a_(std::make_shared<const Pdfa>(std::move(a))) {}
  explicit PdfaOracle(std::shared_ptr<const Pdfa> a) : a_(std::move(a)) {}

  const Alphabet& alphabet() const override { return a_->alphabet(); }
  Dist next_dist(std::span<const Symbol> prefix) override { return a_->next_dist(prefix); }
  const Pdfa& pdfa() const { return *a_; }

private:
  std::shared_ptr<const Pdfa> a_;
};

// Memoizing wrapper; the inner oracle sees each prefix at most once.
class CachedOracle final : public Oracle {
public:
  explicit CachedOracle(Oracle& inner) : inner_(inner) {}

  const Alphabet& alphabet() const override { return inner_.alphabet(); }
  Dist next_dist(std::span<const Symbol> prefix) override { return lookup(prefix); }
  // Reference stays valid for the lifetime of the cache.
  const Dist& lookup(std::span<const Symbol> prefix);

  std::uint64_t query_count() const { return queries_; }
  std::uint64_t unique_count() const { return cache_.size(); }

private:
  Oracle& inner_;
  std::unordered_map<Word, Dist, WordHash> cache_;
  std::uint64_t queries_ = 0;
};

// P^l(w) = next_dist(w[:-1])[w.back()] for non-empty w in Σ^{+$}.
// Throws std::invalid_argument (InputError) on the empty word.
double last_token_prob(Oracle& o, std::span<const Symbol> w);

// (P^l(p·s_1), ..., P^l(p·s_k)).
std::vector<double> row(Oracle& o, std::span<const Symbol> p, std::span<const Word> suffixes);

// Memoized prefix probabilities: P^p(ε) = 1, P^p(w·σ) = P^p(w)·next_dist(w)[σ].
// A word ending in $ gets the full sequence probability P(u) = P^p(u·$).
class PrefixWeights {
public:
  explicit PrefixWeights(CachedOracle& o) : o_(o) { memo_.emplace(Word{}, 1.0); }
  double operator()(std::span<const Symbol> w);

private:
  CachedOracle& o_;
  std::unordered_map<Word, double, WordHash> memo_;
};

// Same chain and draw rule as pdfa::sample, driven by next_dist rows.
Sample sample_target(Oracle& o, Rng& rng, std::size_t max_len);
Sample sample_target(Oracle& o, std::uint64_t seed, std::size_t max_len);

} // namespace pdfa
