#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdfa/oracle.hpp"
#include "pdfa/pdfa.hpp"

namespace pdfa {

inline constexpr std::size_t kMetricSamples = 2000;
inline constexpr std::size_t kMetricMaxLen = 1000;

// Index of the largest entry; ties go to the lowest index.
Symbol argmax(std::span<const double> dist);
// The k most probable symbols, highest first; ties go to the lowest index.
std::vector<Symbol> top_k(std::span<const double> dist, std::size_t k);

// Fraction of next-token predictions where argmax of `a` differs from argmax of
// `b`, over every position of n_samples sequences drawn from the reference b.
// A stopped sample of length L contributes L+1 positions (the last predicts $);
// a truncated one contributes L.
double wer(Oracle& a, Oracle& b, std::size_t n_samples = kMetricSamples, std::uint64_t seed = 0,
           std::size_t max_len = kMetricMaxLen);

// Per-prefix NDCG_k of a's ranking, graded by b's probabilities. nullopt when
// b's top-k mass is zero.
std::optional<double> ndcg_score(std::span<const double> a_dist, std::span<const double> b_dist,
                                 std::size_t k);

struct NdcgResult {
  double score = 1.0;
  std::size_t prefixes = 0;  // prefixes averaged over
  std::size_t skipped = 0;   // zero-denominator prefixes left out
};

// Mean NDCG_k over the first n_prefixes prefixes of sequences drawn from b.
NdcgResult ndcg(Oracle& a, Oracle& b, std::size_t k, std::size_t n_prefixes = kMetricSamples,
                std::uint64_t seed = 0, std::size_t max_len = kMetricMaxLen);

struct Divergence {
  Word prefix;
  Symbol symbol = 0;
  double gap = 0.0;
};

// Shortest prefix, found by breadth-first search over the product automaton,
// at which the next-token distributions differ by more than t. Only edges with
// positive weight in at least one automaton are followed.
std::optional<Divergence> exact_divergence(const Pdfa& a, const Pdfa& b, double t);

struct AuditViolation {
  Word word;
  Word prefix;  // non-empty prefix u of word
  double gap = 0.0;
};

// First u (over W in order, then by length) with |P^l_A(u) - P^l_B(u)| > t.
std::optional<AuditViolation> t_consistency_audit(Oracle& a, Oracle& b,
                                                  const std::vector<Word>& words, double t);

struct MetricRow {
  std::string model;
  std::optional<double> wer;
  std::optional<double> ndcg;
  std::optional<std::size_t> states;
  std::optional<double> seconds;
};

// Aligned text table: model, WER, NDCG_k, size, time.
std::string format_metric_table(const std::vector<MetricRow>& rows, std::size_t k);

} // namespace pdfa
