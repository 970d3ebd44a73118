#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdfa/deadline.hpp"
#include "pdfa/oracle.hpp"
#include "pdfa/row_index.hpp"

namespace pdfa {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct TableConfig {
  double t = 0.1;
  double eps_p = 0.01;
  double eps_s = 0.01;
  std::size_t max_p = 5000;
  std::size_t max_s = 100;

  // Throws InputError when a threshold is outside [0,1] or a cap is 0.
  void validate() const;
};

// ||a - b||_∞. Throws InputError on length mismatch.
double linf_distance(std::span<const double> a, std::span<const double> b);
// ||a - b||_∞ <= t, compared literally (no slack). Reflexive and symmetric, not transitive.
bool t_equal(std::span<const double> a, std::span<const double> b, double t);

enum class ExpandOutcome { Closed, RowCap, Time };

struct SuffixChoice {
  Word suffix;
  // min over the pair of P^p(p_i·suffix) / P^p(p_i).
  double score = 0.0;
};

enum class TableEvent { RowAdded, SuffixAdded, CounterexampleAdded };

// Observation table over a cached oracle. Rows are stored in P order; columns
// in S order. Cells are last-token probabilities O(p·s).
class ObservationTable {
public:
  using Listener = std::function<void(const ObservationTable&, TableEvent)>;

  ObservationTable(CachedOracle& oracle, TableConfig cfg);

  const TableConfig& config() const { return cfg_; }
  const Alphabet& alphabet() const { return oracle_.alphabet(); }
  CachedOracle& oracle() { return oracle_; }

  const std::vector<Word>& prefixes() const { return p_; }
  const std::vector<Word>& suffixes() const { return s_; }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  std::size_t size() const { return p_.size(); }
  std::optional<std::size_t> find(std::span<const Symbol> p) const;
  bool contains(std::span<const Symbol> p) const { return find(p).has_value(); }

  // Consistency checking stops once |S| reaches max_s.
  bool consistency_enabled() const { return s_.size() < cfg_.max_s; }

  // Row of an arbitrary prefix over the current S (not added to the table).
  std::vector<double> compute_row(std::span<const Symbol> p);
  double prefix_weight(std::span<const Symbol> w) { return weights_(w); }
  // Indices of rows in P that are t-equal to `r`, ascending.
  std::vector<std::size_t> t_equal_rows(std::span<const double> r) const;

  // Works the queue until it drains (closed and consistent), the row cap is
  // hit, or the deadline passes. Oracle errors propagate; the table stays
  // prefix-closed.
  ExpandOutcome expand(const Deadline& deadline = Deadline());

  // Best separating suffix for t-equal rows p1, p2 (indices into P), or none if
  // they are consistent or every candidate scores below eps_s.
  std::optional<SuffixChoice> select_separating_suffix(std::size_t p1, std::size_t p2);

  // Adds every prefix of w[:-1] (w in Σ^{+$}) to P and re-seeds the queue.
  // Returns the number of new rows; throws std::logic_error if P did not grow.
  std::size_t add_counterexample(std::span<const Symbol> w);

  void add_suffix(Word s);

  void set_listener(Listener l) { listener_ = std::move(l); }

  // Debug dump: {"prefixes": [...], "suffixes": [...], "rows": [[...]]}.
  std::string dump() const;

private:
  struct QueueEntry {
    double weight;
    Word word;
  };
  struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.weight != b.weight) return a.weight > b.weight;
      return shortlex_less(a.word, b.word);
    }
  };

  void push(Word w);
  void reset_queue();
  void add_row(Word p, std::vector<double> r);
  // Returns true if a suffix was added.
  bool check_consistency(std::size_t p);
  void rebuild_index();
  void notify(TableEvent e) {
    if (listener_) listener_(*this, e);
  }

  CachedOracle& oracle_;
  PrefixWeights weights_;
  TableConfig cfg_;
  std::vector<Word> p_;
  std::vector<Word> s_;
  std::vector<std::vector<double>> rows_;
  std::unordered_map<Word, std::size_t, WordHash> p_index_;
  RowIndex index_;
  std::set<QueueEntry, QueueOrder> queue_;
  Listener listener_;
};

} // namespace pdfa
