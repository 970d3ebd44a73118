#include "pdfa/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace pdfa {

std::vector<std::size_t> Clustering::membership(std::size_t n_rows) const {
  std::vector<std::size_t> out(n_rows, clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t p : clusters[c]) out.at(p) = c;
  return out;
}

namespace {

struct ColumnBounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

ColumnBounds bounds(const ObservationTable& tbl, std::span<const std::size_t> members) {
  const std::size_t width = tbl.suffixes().size();
  ColumnBounds b{std::vector<double>(width, 1.0), std::vector<double>(width, 0.0)};
  for (std::size_t p : members) {
    const auto& r = tbl.row(p);
    for (std::size_t j = 0; j < width; ++j) {
      b.lo[j] = std::min(b.lo[j], r[j]);
      b.hi[j] = std::max(b.hi[j], r[j]);
    }
  }
  return b;
}

bool within(const ColumnBounds& b, double t) {
  for (std::size_t j = 0; j < b.lo.size(); ++j)
    if (b.hi[j] - b.lo[j] > t) return false;
  return true;
}

bool within_with(const ColumnBounds& b, std::span<const double> row, double t) {
  for (std::size_t j = 0; j < b.lo.size(); ++j)
    if (std::max(b.hi[j], row[j]) - std::min(b.lo[j], row[j]) > t) return false;
  return true;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t root(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

bool is_clique(const ObservationTable& tbl, std::span<const std::size_t> members) {
  // Pairwise L∞ ≤ t is the same as every column's range ≤ t.
  return within(bounds(tbl, members), tbl.config().t);
}

bool is_deterministic(const ObservationTable& tbl, const Clustering& c) {
  const auto cof = c.membership(tbl.size());
  const Alphabet& sigma = tbl.alphabet();
  for (const auto& members : c.clusters)
    for (Symbol a = 0; a < sigma.size(); ++a) {
      std::size_t seen = c.size();
      for (std::size_t p : members) {
        auto q = tbl.find(extend(tbl.prefixes()[p], a));
        if (!q) continue;
        if (seen == c.size()) seen = cof[*q];
        else if (seen != cof[*q]) return false;
      }
    }
  return true;
}

Clustering initial_clustering(const ObservationTable& tbl) {
  const std::size_t n = tbl.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : tbl.t_equal_rows(tbl.row(i))) uf.unite(i, j);
  Clustering c;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = uf.root(i);
    if (slot[r] == n) {
      slot[r] = c.clusters.size();
      c.clusters.emplace_back();
    }
    c.clusters[slot[r]].push_back(i);
  }
  return c;
}

std::size_t best_cluster_match(std::span<const double> row,
                               const std::vector<std::vector<std::size_t>>& clusters,
                               const ObservationTable& tbl, MatchPolicy policy) {
  const double t = tbl.config().t;
  // Every tier needs a t-equal member, so the row index narrows the search.
  std::unordered_map<std::size_t, std::size_t> owner;
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t p : clusters[c]) owner.emplace(p, c);
  std::vector<char> touches(clusters.size(), 0);
  for (std::size_t p : tbl.t_equal_rows(row)) {
    auto it = owner.find(p);
    if (it != owner.end()) touches[it->second] = 1;
  }

  std::vector<std::size_t> tier1, tier2, tier3;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (!touches[c]) continue;
    ColumnBounds b = bounds(tbl, clusters[c]);
    if (within_with(b, row, t)) tier1.push_back(c);
    else if (!within(b, t)) tier2.push_back(c);
    tier3.push_back(c);
  }
  std::vector<std::size_t> candidates;
  if (!tier1.empty()) candidates = std::move(tier1);
  else if (!tier2.empty()) candidates = std::move(tier2);
  else if (!tier3.empty()) candidates = std::move(tier3);
  else {
    candidates.resize(clusters.size());
    std::iota(candidates.begin(), candidates.end(), 0);
  }
  if (policy == MatchPolicy::FirstCandidate || candidates.size() == 1) return candidates.front();

  std::size_t best = candidates.front();
  double best_dist = INFINITY;
  for (std::size_t c : candidates) {
    double d = INFINITY;
    for (std::size_t p : clusters[c]) d = std::min(d, linf_distance(tbl.row(p), row));
    if (d < best_dist) {
      best_dist = d;
      best = c;
    }
  }
  return best;
}

Clustering refine_determinism(const ObservationTable& tbl, Clustering c, MatchPolicy policy) {
  const Alphabet& sigma = tbl.alphabet();
  bool changed = true;
  while (changed) {
    changed = false;
    const auto cof = c.membership(tbl.size());
    for (std::size_t ci = 0; ci < c.size() && !changed; ++ci) {
      for (Symbol a = 0; a < sigma.size() && !changed; ++a) {
        // Keyed by successor cluster index, which is also its creation rank.
        std::map<std::size_t, std::vector<std::size_t>> groups;
        std::vector<std::size_t> orphans;
        for (std::size_t p : c.clusters[ci]) {
          auto q = tbl.find(extend(tbl.prefixes()[p], a));
          if (q) groups[cof[*q]].push_back(p);
          else orphans.push_back(p);
        }
        if (groups.size() < 2) continue;
        std::vector<std::vector<std::size_t>> pieces;
        for (auto& [_, members] : groups) pieces.push_back(std::move(members));
        for (std::size_t p : orphans)
          pieces[best_cluster_match(tbl.row(p), pieces, tbl, policy)].push_back(p);
        for (auto& piece : pieces) std::sort(piece.begin(), piece.end());
        c.clusters.erase(c.clusters.begin() + static_cast<std::ptrdiff_t>(ci));
        for (auto& piece : pieces) c.clusters.push_back(std::move(piece));
        changed = true;
      }
    }
  }
  return c;
}

Clustering refine_cliques(const ObservationTable& tbl, Clustering c) {
  const double t = tbl.config().t;
  std::size_t i = 0;
  while (i < c.size()) {
    const auto& members = c.clusters[i];
    ColumnBounds b = bounds(tbl, members);
    if (within(b, t)) {
      ++i;
      continue;
    }
    std::size_t col = 0;
    double range = -1.0;
    for (std::size_t j = 0; j < b.lo.size(); ++j)
      if (b.hi[j] - b.lo[j] > range) {
        range = b.hi[j] - b.lo[j];
        col = j;
      }
    const double lo = b.lo[col];

    std::vector<std::vector<std::size_t>> pieces;
    if (t > 0.0) {
      const auto bins = static_cast<std::size_t>(std::ceil(range / t));
      const double width = range / static_cast<double>(bins);
      pieces.resize(bins);
      for (std::size_t p : members) {
        // Right-closed intervals (lo + k·w, lo + (k+1)·w]; the minimum joins the first.
        double k = std::ceil((tbl.row(p)[col] - lo) / width - 1e-9) - 1.0;
        auto bin = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bins - 1)));
        pieces[bin].push_back(p);
      }
    }
    std::erase_if(pieces, [](const auto& piece) { return piece.empty(); });
    if (pieces.size() < 2) {
      // t = 0, or interval rounding left one bin: split by exact value.
      std::map<double, std::vector<std::size_t>> by_value;
      for (std::size_t p : members) by_value[tbl.row(p)[col]].push_back(p);
      pieces.clear();
      for (auto& [_, piece] : by_value) pieces.push_back(std::move(piece));
    }
    c.clusters.erase(c.clusters.begin() + static_cast<std::ptrdiff_t>(i));
    for (auto& piece : pieces) c.clusters.push_back(std::move(piece));
  }
  return c;
}

Pdfa build_pdfa(ObservationTable& tbl, const Clustering& c, MatchPolicy policy) {
  const Alphabet& sigma = tbl.alphabet();
  const std::size_t n = c.size();
  const std::size_t width = sigma.dist_size();
  const auto cof = c.membership(tbl.size());
  const auto& prefixes = tbl.prefixes();

  std::vector<StateId> transitions(n * sigma.size());
  std::vector<double> weights(n * width);
  std::vector<std::string> names;
  names.reserve(n);

  for (std::size_t ci = 0; ci < n; ++ci) {
    const auto& members = c.clusters[ci];
    names.push_back(sigma.format(prefixes[members.front()]));

    std::vector<double> w(members.size());
    double total = 0.0;
    std::size_t heaviest = members.front();
    double heaviest_w = -1.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      w[k] = tbl.prefix_weight(prefixes[members[k]]);
      total += w[k];
      if (w[k] > heaviest_w) {
        heaviest_w = w[k];
        heaviest = members[k];
      }
    }
    if (total == 0.0) {
      std::fill(w.begin(), w.end(), 1.0);
      total = static_cast<double>(members.size());
    }

    // Columns 0..|Σ| of every row are the one-symbol suffixes Σ_$ in order.
    for (Symbol s = 0; s < width; ++s) {
      const double v0 = tbl.row(members.front())[s];
      double acc = 0.0;
      for (std::size_t k = 0; k < members.size(); ++k) acc += w[k] * (tbl.row(members[k])[s] - v0);
      weights[ci * width + s] = std::clamp(v0 + acc / total, 0.0, 1.0);
    }

    for (Symbol a = 0; a < sigma.size(); ++a) {
      std::optional<std::size_t> target;
      for (std::size_t p : members)
        if (auto q = tbl.find(extend(prefixes[p], a))) {
          target = cof[*q];
          break;
        }
      if (!target) {
        std::vector<double> r = tbl.compute_row(extend(prefixes[heaviest], a));
        target = best_cluster_match(r, c.clusters, tbl, policy);
      }
      transitions[ci * sigma.size() + a] = static_cast<StateId>(*target);
    }
  }
  const auto initial = static_cast<StateId>(cof.at(tbl.find(Word{}).value()));
  return Pdfa(sigma, initial, std::move(transitions), std::move(weights), std::move(names));
}

Pdfa construct_hypothesis(ObservationTable& tbl, MatchPolicy policy, ClusteringTrace* trace) {
  Clustering c0 = initial_clustering(tbl);
  Clustering c1 = refine_determinism(tbl, c0, policy);
  Clustering c2 = refine_cliques(tbl, c1);
  Clustering c3 = refine_determinism(tbl, c2, policy);
  Pdfa h = build_pdfa(tbl, c3, policy);
  if (trace) *trace = ClusteringTrace{std::move(c0), std::move(c1), std::move(c2), std::move(c3)};
  return h;
}

} // namespace pdfa
