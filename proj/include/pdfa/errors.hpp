#pragma once

#include <stdexcept>
#include <string>

namespace pdfa {

// Bad caller input: unknown tokens, out-of-range arguments, malformed words.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed PDFA / sample / report text. The message carries line or field context.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The oracle could not answer: child process died, protocol violation, bad distribution.
class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pdfa
