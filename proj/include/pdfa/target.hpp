#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdfa/oracle.hpp"

namespace pdfa {

// Where a target model comes from:
//   grammar://tomita/N | grammar://uhl/N | grammar://appb
//   file:PATH or a bare PATH          (PDFA file)
//   ngram:N:PATH                      (n-gram over a sample file)
//   external:COMMAND                  (model server child process)
struct TargetSpec {
  enum class Kind { PdfaFile, Grammar, Ngram, External } kind;
  std::string locator;
  std::size_t n = 0;  // n-gram order

  static TargetSpec parse(std::string_view text);
};

struct OpenedTarget {
  std::unique_ptr<Oracle> oracle;
  std::optional<Pdfa> pdfa;  // set when the target is an explicit automaton
};

// Throws InputError/ParseError when the locator cannot be resolved and
// OracleError when an external model server fails to start.
OpenedTarget open_target(const TargetSpec& spec);

// Sample file: one sequence per line, tokens separated by whitespace, the
// closing $ implicit. Blank lines are empty sequences.
std::vector<Sample> read_samples(const std::string& path, std::vector<std::string>* tokens_seen);
std::string format_samples(const std::vector<Sample>& samples, const Alphabet& sigma);

} // namespace pdfa
