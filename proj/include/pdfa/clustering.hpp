#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdfa/obs_table.hpp"
#include "pdfa/pdfa.hpp"

namespace pdfa {

// Partition of the table's rows. Each cluster lists row indices (into P) in
// ascending order; clusters are kept in creation order, and a split removes
// the cluster and appends its pieces.
struct Clustering {
  std::vector<std::vector<std::size_t>> clusters;

  std::size_t size() const { return clusters.size(); }
  // Row index -> cluster index, for a table of n_rows rows.
  std::vector<std::size_t> membership(std::size_t n_rows) const;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

// How best_cluster_match breaks ties inside the winning preference tier.
enum class MatchPolicy {
  MinDistance,    // smallest L∞ distance to any member, then creation order
  FirstCandidate  // first cluster of the tier
};

// Connected components of the t-equality graph on P, ordered by first member.
Clustering initial_clustering(const ObservationTable& tbl);

// Splits clusters whose members' σ-successors (in P) fall in different
// clusters, to a fixpoint. Members whose σ-successor is not in P go to the
// piece best matching their own row.
Clustering refine_determinism(const ObservationTable& tbl, Clustering c,
                              MatchPolicy policy = MatchPolicy::MinDistance);

// Splits every non-clique cluster across its widest column into ⌈range/t⌉
// equal intervals anchored at the column minimum, until all clusters are cliques.
Clustering refine_cliques(const ObservationTable& tbl, Clustering c);

bool is_clique(const ObservationTable& tbl, std::span<const std::size_t> members);
bool is_deterministic(const ObservationTable& tbl, const Clustering& c);

// Picks the cluster a row should join. Preference tiers, first non-empty wins:
// (1) adding the row keeps the cluster a clique; (2) some member is t-equal to
// the row and the cluster is not a clique; (3) some member is t-equal to the
// row; otherwise every cluster is a candidate.
std::size_t best_cluster_match(std::span<const double> row,
                               const std::vector<std::vector<std::size_t>>& clusters,
                               const ObservationTable& tbl,
                               MatchPolicy policy = MatchPolicy::MinDistance);

struct ClusteringTrace {
  Clustering initial;
  Clustering determinism;
  Clustering cliques;
  Clustering final;
};

// States are clusters in order; weights are P^p-weighted means of member rows.
// Holes (no member continues on σ inside P) are routed by best_cluster_match
// on the row of the heaviest member's σ-successor, queried through the oracle.
Pdfa build_pdfa(ObservationTable& tbl, const Clustering& c,
                MatchPolicy policy = MatchPolicy::MinDistance);

// initial → determinism → cliques → determinism → build_pdfa.
Pdfa construct_hypothesis(ObservationTable& tbl, MatchPolicy policy = MatchPolicy::MinDistance,
                          ClusteringTrace* trace = nullptr);

} // namespace pdfa
