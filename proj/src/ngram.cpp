#include "pdfa/ngram.hpp"

#include "pdfa/errors.hpp"

namespace pdfa {

namespace {

std::size_t width_for(std::size_t symbols) {
  if (symbols <= 0xff) return 1;
  if (symbols <= 0xffff) return 2;
  return 4;
}

void append(std::string& out, Symbol s, std::size_t width) {
  for (std::size_t b = 0; b < width; ++b) out.push_back(static_cast<char>((s >> (8 * b)) & 0xff));
}

} // namespace

NgramModel::NgramModel(Alphabet sigma, std::size_t n, std::span<const Sample> samples)
    : sigma_(std::move(sigma)), n_(n) {
  if (n == 0) throw InputError("n-gram order must be at least 1");
  auto counts = std::make_shared<Counts>();
  counts->max_n = n;
  counts->key_width = width_for(sigma_.dist_size());
  const std::size_t kw = counts->key_width;
  const std::size_t dist = sigma_.dist_size();

  std::string enc;
  for (const Sample& s : samples) {
    enc.clear();
    for (Symbol a : s.tokens) {
      if (a >= sigma_.size()) throw InputError("sample symbol outside alphabet");
      append(enc, a, kw);
    }
    const std::size_t len = s.tokens.size() + (s.stopped ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) {
      const Symbol next = i < s.tokens.size() ? s.tokens[i] : sigma_.end();
      for (std::size_t l = 0; l <= std::min(i, n - 1); ++l) {
        auto& c = counts->plain[enc.substr((i - l) * kw, l * kw)];
        if (c.empty()) c.assign(dist, 0);
        ++c[next];
      }
      if (i < n - 1) {
        auto& c = counts->anchored[enc.substr(0, i * kw)];
        if (c.empty()) c.assign(dist, 0);
        ++c[next];
      }
    }
  }
  counts_ = std::move(counts);
}

NgramModel NgramModel::with_order(std::size_t n) const {
  if (n == 0 || n > counts_->max_n)
    throw InputError("n-gram order must lie in [1, " + std::to_string(counts_->max_n) + "]");
  return NgramModel(sigma_, n, counts_);
}

std::string NgramModel::key(std::span<const Symbol> w) const {
  std::string k;
  k.reserve(w.size() * counts_->key_width);
  for (Symbol s : w) append(k, s, counts_->key_width);
  return k;
}

bool NgramModel::fill(const std::unordered_map<std::string, std::vector<std::uint64_t>>& table,
                      const std::string& k, Dist& out) const {
  auto it = table.find(k);
  if (it == table.end()) return false;
  std::uint64_t total = 0;
  for (auto c : it->second) total += c;
  if (total == 0) return false;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(it->second[i]) / static_cast<double>(total);
  return true;
}

Dist NgramModel::next_dist(std::span<const Symbol> prefix) {
  for (Symbol s : prefix)
    if (s >= sigma_.size()) throw InputError("prefix symbol outside alphabet");
  Dist out(sigma_.dist_size(), 0.0);
  const std::size_t history = n_ - 1;
  if (prefix.size() < history && fill(counts_->anchored, key(prefix), out)) return out;
  for (std::size_t l = std::min(prefix.size(), history) + 1; l-- > 0;)
    if (fill(counts_->plain, key(prefix.last(l)), out)) return out;
  std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  return out;
}

std::uint64_t NgramModel::count(std::span<const Symbol> window) const {
  if (window.empty()) throw InputError("n-gram window must be non-empty");
  if (window.size() > counts_->max_n) throw InputError("window longer than the model order");
  for (std::size_t i = 0; i + 1 < window.size(); ++i)
    if (window[i] >= sigma_.size()) throw InputError("$ may only end a window");
  auto it = counts_->plain.find(key(window.first(window.size() - 1)));
  if (it == counts_->plain.end()) return 0;
  return it->second.at(window.back());
}

} // namespace pdfa
