#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdfa {

// Token index. Within an alphabet of size n, indices [0, n) are tokens and
// index n is the end symbol $.
using Symbol = std::uint32_t;

// A sequence of symbols. Words over Σ never contain the end symbol; words in
// Σ^{+$} may carry it as their last element only.
using Word = std::vector<Symbol>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull ^ w.size();
    for (Symbol s : w) {
      h ^= s + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Shorter words first, then lexicographic by symbol index.
inline bool shortlex_less(std::span<const Symbol> a, std::span<const Symbol> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

inline Word concat(std::span<const Symbol> a, std::span<const Symbol> b) {
  Word w;
  w.reserve(a.size() + b.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

inline Word extend(std::span<const Symbol> a, Symbol s) {
  Word w;
  w.reserve(a.size() + 1);
  w.insert(w.end(), a.begin(), a.end());
  w.push_back(s);
  return w;
}

} // namespace pdfa
