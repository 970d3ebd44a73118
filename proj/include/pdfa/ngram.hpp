#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdfa/oracle.hpp"

namespace pdfa {

// Maximum-likelihood n-gram model usable as an Oracle.
//
// next_dist(w) conditions on the last n-1 tokens of w. Histories shorter than
// n-1 use start-anchored counts, so the model knows where the sequence began.
// An unseen context backs off to progressively shorter unanchored suffixes,
// and finally to the uniform distribution over Σ ∪ {$}.
class NgramModel final : public Oracle {
public:
  // Stopped samples contribute their closing $; truncated ones do not.
  NgramModel(Alphabet sigma, std::size_t n, std::span<const Sample> samples);

  // Same counts, smaller window (1 <= n <= built order).
  NgramModel with_order(std::size_t n) const;

  std::size_t order() const { return n_; }
  const Alphabet& alphabet() const override { return sigma_; }
  Dist next_dist(std::span<const Symbol> prefix) override;

  // N(window): occurrences of a non-empty window anywhere in the samples.
  std::uint64_t count(std::span<const Symbol> window) const;

private:
  struct Counts {
    std::size_t max_n = 1;
    std::size_t key_width = 1;
    // context -> counts of the following symbol over Σ ∪ {$}
    std::unordered_map<std::string, std::vector<std::uint64_t>> plain;
    std::unordered_map<std::string, std::vector<std::uint64_t>> anchored;
  };

  NgramModel(Alphabet sigma, std::size_t n, std::shared_ptr<const Counts> counts)
      : sigma_(std::move(sigma)), n_(n), counts_(std::move(counts)) {}

  std::string key(std::span<const Symbol> w) const;
  bool fill(const std::unordered_map<std::string, std::vector<std::uint64_t>>& table,
            const std::string& k, Dist& out) const;

  Alphabet sigma_;
  std::size_t n_;
  std::shared_ptr<const Counts> counts_;
};

} // namespace pdfa
