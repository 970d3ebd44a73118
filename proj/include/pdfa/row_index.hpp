#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace pdfa {

// KD-tree over table rows: level i branches on column i, split into
// equal-width intervals of 2t. A query returns every row whose L∞ distance to
// the probe is at most t, possibly with extra rows the caller must re-check.
class RowIndex {
public:
  explicit RowIndex(double t = 0.0);

  void insert(std::size_t id, std::span<const double> row);
  // Candidate ids, ascending.
  std::vector<std::size_t> query(std::span<const double> row) const;
  void clear();
  std::size_t size() const { return count_; }

private:
  struct Node {
    std::map<std::int64_t, std::unique_ptr<Node>> children;
    std::vector<std::size_t> ids;
  };

  std::int64_t bucket(double x) const;
  void collect(const Node& node, std::span<const double> row, std::size_t depth,
               std::vector<std::size_t>& out) const;

  double t_;
  double width_;
  std::unique_ptr<Node> root_;
  std::size_t count_ = 0;
};

} // namespace pdfa
