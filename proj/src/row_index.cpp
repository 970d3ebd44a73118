#include "pdfa/row_index.hpp"

#include <algorithm>
#include <cmath>

namespace pdfa {

RowIndex::RowIndex(double t) : t_(t), width_(t > 0.0 ? 2.0 * t : 1e-9), root_(new Node) {}

void RowIndex::clear() {
  root_ = std::make_unique<Node>();
  count_ = 0;
}

std::int64_t RowIndex::bucket(double x) const {
  return static_cast<std::int64_t>(std::floor(x / width_));
}

void RowIndex::insert(std::size_t id, std::span<const double> row) {
  Node* node = root_.get();
  for (double x : row) {
    auto& child = node->children[bucket(x)];
    if (!child) child = std::make_unique<Node>();
    node = child.get();
  }
  node->ids.push_back(id);
  ++count_;
}

void RowIndex::collect(const Node& node, std::span<const double> row, std::size_t depth,
                       std::vector<std::size_t>& out) const {
  if (depth == row.size()) {
    out.insert(out.end(), node.ids.begin(), node.ids.end());
    return;
  }
  // One spare bucket on each side absorbs rounding at interval edges.
  const std::int64_t lo = bucket(row[depth] - t_) - 1;
  const std::int64_t hi = bucket(row[depth] + t_) + 1;
  for (auto it = node.children.lower_bound(lo); it != node.children.end() && it->first <= hi; ++it)
    collect(*it->second, row, depth + 1, out);
}

std::vector<std::size_t> RowIndex::query(std::span<const double> row) const {
  std::vector<std::size_t> out;
  collect(*root_, row, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace pdfa
