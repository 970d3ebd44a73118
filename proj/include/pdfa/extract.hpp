#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdfa/clustering.hpp"
#include "pdfa/deadline.hpp"
#include "pdfa/obs_table.hpp"
#include "pdfa/oracle.hpp"

namespace pdfa {

struct ExtractionConfig {
  TableConfig table;
  std::size_t eq_samples = 500;
  // 0 picks 4× the mean length of 100 target samples.
  std::size_t eq_max_len = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_rounds;
  std::optional<double> time_budget;  // seconds
  MatchPolicy match_policy = MatchPolicy::MinDistance;

  void validate() const;
};

enum class StopReason { Accepted, RowCap, SuffixCap, Time, RoundCap, Error };
std::string to_string(StopReason r);

struct RoundRecord {
  std::size_t hypothesis_states = 0;
  std::optional<Word> counterexample;  // in Σ^{+$}
  std::size_t p_size = 0;
  std::size_t s_size = 0;
  std::uint64_t queries = 0;
  std::uint64_t unique_queries = 0;
  double seconds = 0.0;
};

struct ExtractionReport {
  std::optional<Pdfa> final;  // absent only if the oracle failed before a hypothesis was built
  std::vector<RoundRecord> rounds;
  StopReason stop_reason = StopReason::Error;
  std::string error;
  std::vector<Word> p_snapshot;
  std::vector<Word> s_snapshot;
  std::size_t eq_max_len = 0;
  double seconds = 0.0;
};

enum class EqVerdict { Accept, Counterexample, Timeout };

struct EqResult {
  EqVerdict verdict = EqVerdict::Accept;
  Word counterexample;
};

// Draws `samples` sequences alternately from target and hypothesis and checks
// every prefix u (ε up to the whole sample): if next-token distributions
// differ by more than t on some σ, returns u·σ for the largest such gap.
// Truncated samples are checked on the prefixes they realized.
EqResult equivalence_query(Oracle& target, const Pdfa& hyp, std::size_t samples,
                           std::size_t max_len, double t, std::uint64_t seed,
                           const Deadline& deadline = Deadline());

// 4× the mean length of the first 100 target samples (each capped at 1000), at least 1.
std::size_t auto_sample_cap(Oracle& target, std::uint64_t seed);

// Equivalence strategy used by extract(); the default samples.
class EquivalenceChecker {
public:
  virtual ~EquivalenceChecker() = default;
  virtual EqResult check(Oracle& target, const Pdfa& hyp, std::size_t round,
                         const Deadline& deadline) = 0;
};

class SamplingEquivalence final : public EquivalenceChecker {
public:
  SamplingEquivalence(std::size_t samples, std::size_t max_len, double t, std::uint64_t seed)
      : samples_(samples), max_len_(max_len), t_(t), seed_(seed) {}
  EqResult check(Oracle& target, const Pdfa& hyp, std::size_t round,
                 const Deadline& deadline) override;

private:
  std::size_t samples_;
  std::size_t max_len_;
  double t_;
  std::uint64_t seed_;
};

// Replays fixed counterexamples, then accepts.
class ScriptedEquivalence final : public EquivalenceChecker {
public:
  explicit ScriptedEquivalence(std::vector<Word> script) : script_(std::move(script)) {}
  EqResult check(Oracle& target, const Pdfa& hyp, std::size_t round,
                 const Deadline& deadline) override;

private:
  std::vector<Word> script_;
};

// Callbacks for tests and progress output.
class ExtractionObserver {
public:
  virtual ~ExtractionObserver() = default;
  virtual void on_table_event(const ObservationTable&, TableEvent) {}
  virtual void on_hypothesis(std::size_t /*round*/, const ObservationTable&,
                             const ClusteringTrace&, const Pdfa&) {}
  virtual void on_counterexample(std::size_t /*round*/, const Word&,
                                 std::size_t /*p_before*/, std::size_t /*p_after*/) {}
};

// Runs expand → construct → equivalence until acceptance or a limit. Oracle
// failures end the run with StopReason::Error and a partial report.
ExtractionReport extract(Oracle& target, const ExtractionConfig& cfg,
                         EquivalenceChecker* checker = nullptr,
                         ExtractionObserver* observer = nullptr);

// Flags single-state results and suggests halving t; reports the first
// tolerance that produced more than one state.
std::string choose_tolerance_hint(const std::vector<std::pair<double, std::size_t>>& runs);

// Report file contents. Wall-clock fields only appear with include_timings.
std::string report_to_json(const ExtractionReport& r, const ExtractionConfig& cfg,
                           const Alphabet& sigma, bool include_timings = false);

} // namespace pdfa
