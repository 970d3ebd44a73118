#include "pdfa/target.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pdfa/errors.hpp"
#include "pdfa/external_oracle.hpp"
#include "pdfa/grammars.hpp"
#include "pdfa/ngram.hpp"
#include "pdfa/pdfa_io.hpp"

namespace pdfa {

TargetSpec TargetSpec::parse(std::string_view text) {
  if (text.empty()) throw InputError("empty target");
  if (text.starts_with("grammar://")) {
    parse_grammar_id(text);
    return {Kind::Grammar, std::string(text), 0};
  }
  if (text.starts_with("file:")) return {Kind::PdfaFile, std::string(text.substr(5)), 0};
  if (text.starts_with("external:")) {
    if (text.size() == 9) throw InputError("external: target needs a command");
    return {Kind::External, std::string(text.substr(9)), 0};
  }
  if (text.starts_with("ngram:")) {
    std::string_view rest = text.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw InputError("n-gram target must be ngram:N:PATH");
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + colon, n);
    if (ec != std::errc() || ptr != rest.data() + colon || n == 0)
      throw InputError("n-gram order must be a positive integer");
    return {Kind::Ngram, std::string(rest.substr(colon + 1)), n};
  }
  return {Kind::PdfaFile, std::string(text), 0};
}

std::vector<Sample> read_samples(const std::string& path, std::vector<std::string>* tokens_seen) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sample file " + path);
  std::vector<std::vector<std::string>> lines;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) {
      if (tok == Alphabet::kEndLiteral)
        throw ParseError(path + ":" + std::to_string(lineno) + ": \"$\" is implicit at line end");
      seen.insert(tok);
      toks.push_back(std::move(tok));
    }
    lines.push_back(std::move(toks));
  }
  std::vector<std::string> tokens(seen.begin(), seen.end());
  Alphabet sigma(tokens);
  std::vector<Sample> out;
  out.reserve(lines.size());
  for (const auto& toks : lines) out.push_back({sigma.encode(toks), true});
  if (tokens_seen) *tokens_seen = std::move(tokens);
  return out;
}

std::string format_samples(const std::vector<Sample>& samples, const Alphabet& sigma) {
  std::string out;
  for (const Sample& s : samples) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out += ' ';
      out += sigma.token(s.tokens[i]);
    }
    out += '\n';
  }
  return out;
}

OpenedTarget open_target(const TargetSpec& spec) {
  OpenedTarget t;
  switch (spec.kind) {
    case TargetSpec::Kind::Grammar:
      t.pdfa = make_grammar(parse_grammar_id(spec.locator));
      break;
    case TargetSpec::Kind::PdfaFile:
      t.pdfa = load_pdfa(spec.locator);
      break;
    case TargetSpec::Kind::Ngram: {
      std::vector<std::string> tokens;
      auto samples = read_samples(spec.locator, &tokens);
      if (tokens.empty()) throw InputError("sample file " + spec.locator + " has no tokens");
      t.oracle = std::make_unique<NgramModel>(Alphabet(tokens), spec.n, samples);
      return t;
    }
    case TargetSpec::Kind::External:
      t.oracle = std::make_unique<ExternalOracle>(spec.locator);
      return t;
  }
  t.oracle = std::make_unique<PdfaOracle>(*t.pdfa);
  return t;
}

} // namespace pdfa
