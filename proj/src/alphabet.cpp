#include "pdfa/alphabet.hpp"

#include <algorithm>
#include <cctype>

#include "pdfa/errors.hpp"

namespace pdfa {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& tok = tokens_[i];
    if (tok.empty()) throw InputError("alphabet token " + std::to_string(i) + " is empty");
    if (tok == kEndLiteral) throw InputError("alphabet may not contain the end symbol \"$\"");
    if (std::any_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }))
      throw InputError("alphabet token \"" + tok + "\" contains whitespace");
    if (!index_.emplace(tok, static_cast<Symbol>(i)).second)
      throw InputError("duplicate alphabet token \"" + tok + "\"");
    if (tok.size() != 1) single_char_ = false;
  }
}

std::string_view Alphabet::token(Symbol s) const {
  if (s == end()) return kEndLiteral;
  if (s > end()) throw InputError("symbol index " + std::to_string(s) + " outside alphabet");
  return tokens_[s];
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::symbol(std::string_view token) const {
  if (token == kEndLiteral) return end();
  if (auto s = find(token)) return *s;
  throw InputError("unknown token \"" + std::string(token) + "\"");
}

Word Alphabet::encode(std::span<const std::string> tokens) const {
  Word w;
  w.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Symbol s = symbol(tokens[i]);
    if (s == end() && i + 1 != tokens.size())
      throw InputError("end symbol may only appear last in a sequence");
    w.push_back(s);
  }
  return w;
}

std::vector<std::string> Alphabet::decode(std::span<const Symbol> word) const {
  std::vector<std::string> out;
  out.reserve(word.size());
  for (Symbol s : word) out.emplace_back(token(s));
  return out;
}

std::string Alphabet::format(std::span<const Symbol> word) const {
  if (word.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0 && !single_char_) out += ' ';
    out += token(word[i]);
  }
  return out;
}

} // namespace pdfa
