#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdfa/word.hpp"

namespace pdfa {

// Ordered token set Σ. The end symbol is implicit: it is never a member and
// always takes index size().
class Alphabet {
public:
  static constexpr std::string_view kEndLiteral = "$";

  Alphabet() = default;
  // Throws InputError on empty, duplicate, whitespace-containing or reserved tokens.
  explicit Alphabet(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  // |Σ ∪ {$}|, the length of every next-token distribution.
  std::size_t dist_size() const { return tokens_.size() + 1; }
  Symbol end() const { return static_cast<Symbol>(tokens_.size()); }
  bool empty() const { return tokens_.empty(); }

  const std::vector<std::string>& tokens() const { return tokens_; }
  // Token text for a symbol; the end symbol maps to "$".
  std::string_view token(Symbol s) const;

  std::optional<Symbol> find(std::string_view token) const;
  // Like find(), but "$" resolves to end() and unknown tokens throw InputError.
  Symbol symbol(std::string_view token) const;

  Word encode(std::span<const std::string> tokens) const;
  std::vector<std::string> decode(std::span<const Symbol> word) const;

  // Human-readable word: tokens concatenated when all are single characters,
  // space separated otherwise; the empty word prints as "ε".
  std::string format(std::span<const Symbol> word) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol> index_;
  bool single_char_ = true;
};

} // namespace pdfa
