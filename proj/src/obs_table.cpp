#include "pdfa/obs_table.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "pdfa/errors.hpp"

namespace pdfa {

void TableConfig::validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(t)) throw InputError("tolerance must lie in [0,1]");
  if (!unit(eps_p)) throw InputError("eps_p must lie in [0,1]");
  if (!unit(eps_s)) throw InputError("eps_s must lie in [0,1]");
  if (max_p == 0) throw InputError("max_p must be at least 1");
  if (max_s == 0) throw InputError("max_s must be at least 1");
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("row length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool t_equal(std::span<const double> a, std::span<const double> b, double t) {
  if (a.size() != b.size()) throw InputError("row length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > t) return false;
  return true;
}

ObservationTable::ObservationTable(CachedOracle& oracle, TableConfig cfg)
    : oracle_(oracle), weights_(oracle), cfg_(cfg), index_(cfg.t) {
  cfg_.validate();
  const Alphabet& sigma = oracle_.alphabet();
  if (sigma.empty()) throw InputError("oracle alphabet is empty");
  for (Symbol s = 0; s <= sigma.size(); ++s) s_.push_back(Word{s});
  add_row(Word{}, compute_row(Word{}));
  reset_queue();
}

std::optional<std::size_t> ObservationTable::find(std::span<const Symbol> p) const {
  auto it = p_index_.find(Word(p.begin(), p.end()));
  if (it == p_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> ObservationTable::compute_row(std::span<const Symbol> p) {
  return pdfa::row(oracle_, p, s_);
}

std::vector<std::size_t> ObservationTable::t_equal_rows(std::span<const double> r) const {
  std::vector<std::size_t> out;
  for (std::size_t i : index_.query(r))
    if (t_equal(rows_[i], r, cfg_.t)) out.push_back(i);
  return out;
}

void ObservationTable::push(Word w) {
  double weight = weights_(w);
  queue_.insert(QueueEntry{weight, std::move(w)});
}

void ObservationTable::reset_queue() {
  queue_.clear();
  for (const Word& p : p_) push(p);
}

void ObservationTable::add_row(Word p, std::vector<double> r) {
  const std::size_t id = p_.size();
  index_.insert(id, r);
  p_index_.emplace(p, id);
  p_.push_back(std::move(p));
  rows_.push_back(std::move(r));
  notify(TableEvent::RowAdded);
}

void ObservationTable::rebuild_index() {
  index_ = RowIndex(cfg_.t);
  for (std::size_t i = 0; i < rows_.size(); ++i) index_.insert(i, rows_[i]);
}

void ObservationTable::add_suffix(Word s) {
  for (std::size_t i = 0; i < p_.size(); ++i)
    rows_[i].push_back(last_token_prob(oracle_, concat(p_[i], s)));
  s_.push_back(std::move(s));
  rebuild_index();
  reset_queue();
  notify(TableEvent::SuffixAdded);
}

std::optional<SuffixChoice> ObservationTable::select_separating_suffix(std::size_t p1,
                                                                       std::size_t p2) {
  const Alphabet& sigma = alphabet();
  const Word& w1 = p_.at(p1);
  const Word& w2 = p_.at(p2);
  const double base1 = weights_(w1);
  const double base2 = weights_(w2);
  auto conditional = [&](const Word& p, double base, const Word& s) {
    return base == 0.0 ? 0.0 : weights_(concat(p, s)) / base;
  };

  std::optional<SuffixChoice> best;
  for (Symbol a = 0; a < sigma.size(); ++a) {
    std::vector<double> r1 = compute_row(extend(w1, a));
    std::vector<double> r2 = compute_row(extend(w2, a));
    for (std::size_t j = 0; j < s_.size(); ++j) {
      if (!(std::abs(r1[j] - r2[j]) > cfg_.t)) continue;
      Word cand;
      cand.reserve(s_[j].size() + 1);
      cand.push_back(a);
      cand.insert(cand.end(), s_[j].begin(), s_[j].end());
      const double score = std::min(conditional(w1, base1, cand), conditional(w2, base2, cand));
      if (score < cfg_.eps_s) continue;
      if (!best || score > best->score) best = SuffixChoice{std::move(cand), score};
    }
  }
  return best;
}

bool ObservationTable::check_consistency(std::size_t p) {
  if (!consistency_enabled()) return false;
  std::optional<SuffixChoice> best;
  for (std::size_t partner : t_equal_rows(rows_[p])) {
    if (partner == p) continue;
    auto choice = select_separating_suffix(p, partner);
    if (choice && (!best || choice->score > best->score)) best = std::move(choice);
  }
  if (!best) return false;
  add_suffix(std::move(best->suffix));
  return true;
}

ExpandOutcome ObservationTable::expand(const Deadline& deadline) {
  const Alphabet& sigma = alphabet();
  while (!queue_.empty()) {
    if (deadline.expired()) return ExpandOutcome::Time;
    Word p = std::move(queue_.extract(queue_.begin()).value().word);
    std::optional<std::size_t> id = find(p);
    if (!id) {
      if (last_token_prob(oracle_, p) < cfg_.eps_p) continue;
      std::vector<double> r = compute_row(p);
      if (!t_equal_rows(r).empty()) continue;
      if (p_.size() >= cfg_.max_p) return ExpandOutcome::RowCap;
      add_row(p, std::move(r));
      id = p_.size() - 1;
    }
    if (check_consistency(*id)) continue;
    for (Symbol a = 0; a < sigma.size(); ++a) push(extend(p, a));
  }
  return ExpandOutcome::Closed;
}

std::size_t ObservationTable::add_counterexample(std::span<const Symbol> w) {
  if (w.empty()) throw InputError("counterexample must be non-empty");
  const Symbol end = alphabet().end();
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] >= end) throw InputError("counterexample has $ or an unknown symbol before its end");
  std::size_t added = 0;
  for (std::size_t len = 0; len < w.size(); ++len) {
    auto p = w.first(len);
    if (contains(p)) continue;
    add_row(Word(p.begin(), p.end()), compute_row(p));
    ++added;
  }
  if (added == 0)
    throw std::logic_error("counterexample " + alphabet().format(w) +
                           " did not add a prefix to the observation table");
  reset_queue();
  notify(TableEvent::CounterexampleAdded);
  return added;
}

std::string ObservationTable::dump() const {
  using ordered_json = nlohmann::ordered_json;
  const Alphabet& sigma = alphabet();
  auto words = [&](const std::vector<Word>& ws) {
    ordered_json out = ordered_json::array();
    for (const Word& w : ws) out.push_back(sigma.decode(w));
    return out;
  };
  ordered_json doc;
  doc["prefixes"] = words(p_);
  doc["suffixes"] = words(s_);
  doc["rows"] = rows_;
  return doc.dump(2) + "\n";
}

} // namespace pdfa
