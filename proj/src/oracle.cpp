#include "pdfa/oracle.hpp"

#include "pdfa/errors.hpp"

namespace pdfa {

const Dist& CachedOracle::lookup(std::span<const Symbol> prefix) {
  ++queries_;
  Word key(prefix.begin(), prefix.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Dist d = inner_.next_dist(prefix);
  return cache_.emplace(std::move(key), std::move(d)).first->second;
}

double last_token_prob(Oracle& o, std::span<const Symbol> w) {
  if (w.empty()) throw InputError("last-token probability is undefined on the empty word");
  const Symbol last = w.back();
  if (last > o.alphabet().end()) throw InputError("symbol outside alphabet");
  auto head = w.first(w.size() - 1);
  if (auto* cached = dynamic_cast<CachedOracle*>(&o)) return cached->lookup(head)[last];
  return o.next_dist(head)[last];
}

std::vector<double> row(Oracle& o, std::span<const Symbol> p, std::span<const Word> suffixes) {
  std::vector<double> out;
  out.reserve(suffixes.size());
  Word buf(p.begin(), p.end());
  for (const Word& s : suffixes) {
    buf.resize(p.size());
    buf.insert(buf.end(), s.begin(), s.end());
    out.push_back(last_token_prob(o, buf));
  }
  return out;
}

double PrefixWeights::operator()(std::span<const Symbol> w) {
  const Symbol end = o_.alphabet().end();
  if (!w.empty() && w.back() == end) {
    auto u = w.first(w.size() - 1);
    return (*this)(u) * o_.lookup(u)[end];
  }
  // Walk back to the longest memoized prefix, then multiply forward.
  std::size_t known = w.size();
  Word key(w.begin(), w.end());
  auto it = memo_.find(key);
  while (it == memo_.end()) {
    --known;
    key.pop_back();
    it = memo_.find(key);
  }
  double p = it->second;
  for (std::size_t i = known; i < w.size(); ++i) {
    p *= o_.lookup(key)[w[i]];
    key.push_back(w[i]);
    memo_.emplace(key, p);
  }
  return p;
}

Sample sample_target(Oracle& o, Rng& rng, std::size_t max_len) {
  Sample out;
  const Symbol end = o.alphabet().end();
  for (;;) {
    Dist d = o.next_dist(out.tokens);
    Symbol s = draw(d, rng);
    if (s == end) {
      out.stopped = true;
      return out;
    }
    if (out.tokens.size() == max_len) return out;
    out.tokens.push_back(s);
  }
}

Sample sample_target(Oracle& o, std::uint64_t seed, std::size_t max_len) {
  Rng rng(seed);
  return sample_target(o, rng, max_len);
}

} // namespace pdfa
