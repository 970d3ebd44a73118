#include "pdfa/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "pdfa/errors.hpp"

namespace pdfa {

namespace {

void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
  if (!(a == b)) throw InputError("models have different alphabets");
}

// Positions at which a prediction is scored: prefixes w[:0..L] for a stopped
// sample, w[:0..L-1] for a truncated one.
std::size_t scored_positions(const Sample& s) {
  return s.stopped ? s.tokens.size() + 1 : s.tokens.size();
}

} // namespace

Symbol argmax(std::span<const double> dist) {
  Symbol best = 0;
  for (Symbol i = 1; i < dist.size(); ++i)
    if (dist[i] > dist[best]) best = i;
  return best;
}

std::vector<Symbol> top_k(std::span<const double> dist, std::size_t k) {
  std::vector<Symbol> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Symbol x, Symbol y) { return dist[x] > dist[y]; });
  order.resize(std::min(k, order.size()));
  return order;
}

double wer(Oracle& a, Oracle& b, std::size_t n_samples, std::uint64_t seed, std::size_t max_len) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  if (max_len == 0) throw InputError("max_len must be at least 1");
  std::uint64_t total = 0;
  std::uint64_t wrong = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Sample s = sample_target(b, derive_seed(seed, i), max_len);
    const std::size_t n = scored_positions(s);
    for (std::size_t k = 0; k < n; ++k) {
      auto u = std::span<const Symbol>(s.tokens).first(k);
      if (argmax(a.next_dist(u)) != argmax(b.next_dist(u))) ++wrong;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(total);
}

std::optional<double> ndcg_score(std::span<const double> a_dist, std::span<const double> b_dist,
                                 std::size_t k) {
  if (a_dist.size() != b_dist.size()) throw InputError("distribution length mismatch");
  if (k == 0 || k > b_dist.size()) throw InputError("k must lie in [1, |Σ|+1]");
  const auto ra = top_k(a_dist, k);
  const auto rb = top_k(b_dist, k);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    const double discount = std::log2(static_cast<double>(n) + 2.0);
    num += b_dist[ra[n]] / discount;
    den += b_dist[rb[n]] / discount;
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

NdcgResult ndcg(Oracle& a, Oracle& b, std::size_t k, std::size_t n_prefixes, std::uint64_t seed,
                std::size_t max_len) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  if (k == 0 || k > a.alphabet().dist_size()) throw InputError("k must lie in [1, |Σ|+1]");
  if (max_len == 0) throw InputError("max_len must be at least 1");
  NdcgResult out;
  double sum = 0.0;
  std::size_t seen = 0;
  for (std::size_t i = 0; seen < n_prefixes; ++i) {
    const Sample s = sample_target(b, derive_seed(seed, i), max_len);
    const std::size_t n = scored_positions(s);
    for (std::size_t j = 0; j < n && seen < n_prefixes; ++j, ++seen) {
      auto u = std::span<const Symbol>(s.tokens).first(j);
      auto score = ndcg_score(a.next_dist(u), b.next_dist(u), k);
      if (!score) {
        ++out.skipped;
        continue;
      }
      sum += *score;
      ++out.prefixes;
    }
  }
  if (out.prefixes > 0) out.score = sum / static_cast<double>(out.prefixes);
  return out;
}

std::optional<Divergence> exact_divergence(const Pdfa& a, const Pdfa& b, double t) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  const std::size_t sigma = a.alphabet().size();
  struct Node {
    StateId qa, qb;
    std::size_t parent;
    Symbol via;
  };
  std::vector<Node> nodes{{a.initial(), b.initial(), 0, 0}};
  std::map<std::pair<StateId, StateId>, bool> seen{{{a.initial(), b.initial()}, true}};
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const Node cur = nodes[head];
    const auto wa = a.weights(cur.qa);
    const auto wb = b.weights(cur.qb);
    double gap = t;
    std::optional<Symbol> worst;
    for (Symbol s = 0; s <= sigma; ++s) {
      const double d = std::abs(wa[s] - wb[s]);
      if (d > gap) {
        gap = d;
        worst = s;
      }
    }
    if (worst) {
      Word w;
      for (std::size_t i = head; i != 0; i = nodes[i].parent) w.push_back(nodes[i].via);
      std::reverse(w.begin(), w.end());
      return Divergence{std::move(w), *worst, gap};
    }
    for (Symbol s = 0; s < sigma; ++s) {
      if (wa[s] <= 0.0 && wb[s] <= 0.0) continue;
      const std::pair<StateId, StateId> next{a.next(cur.qa, s), b.next(cur.qb, s)};
      if (seen.emplace(next, true).second) nodes.push_back({next.first, next.second, head, s});
    }
  }
  return std::nullopt;
}

std::optional<AuditViolation> t_consistency_audit(Oracle& a, Oracle& b,
                                                  const std::vector<Word>& words, double t) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  for (const Word& w : words) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto head = std::span<const Symbol>(w).first(i);
      const double gap = std::abs(a.next_dist(head)[w[i]] - b.next_dist(head)[w[i]]);
      if (gap > t) return AuditViolation{w, Word(w.begin(), w.begin() + i + 1), gap};
    }
  }
  return std::nullopt;
}

std::string format_metric_table(const std::vector<MetricRow>& rows, std::size_t k) {
  auto num = [](std::optional<double> v, int prec) -> std::string {
    if (!v) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << *v;
    return os.str();
  };
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"model", "WER", "NDCG_" + std::to_string(k), "size", "time (s)"});
  for (const MetricRow& r : rows)
    cells.push_back({r.model, num(r.wer, 4), num(r.ndcg, 4),
                     r.states ? std::to_string(*r.states) : "-", num(r.seconds, 2)});
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) out << std::left << std::setw(static_cast<int>(width[c])) << line[c];
      else out << "  " << std::right << std::setw(static_cast<int>(width[c])) << line[c];
    }
    out << "\n";
  }
  return out.str();
}

} // namespace pdfa
