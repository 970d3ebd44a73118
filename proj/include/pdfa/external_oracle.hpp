#pragma once

#include <string>
#include <sys/types.h>

#include "pdfa/oracle.hpp"

namespace pdfa {

// Client for a model server running as a child process (`/bin/sh -c command`).
// Wire format: one JSON object per line in each direction.
//   request:  {"id":n,"op":"alphabet"} | {"id":n,"op":"next_dist","prefix":[tok,...]}
//   response: {"id":n,"alphabet":[...]} | {"id":n,"dist":{tok|"$": p}} | {"id":n,"error":"..."}
// Responses must echo the id; distributions must cover exactly Σ ∪ {$} and sum
// to 1 within 1e-6, and are renormalized here. Any violation, an error
// response, or the child exiting raises OracleError.
class ExternalOracle final : public Oracle {
public:
  explicit ExternalOracle(std::string command);
  ~ExternalOracle() override;
  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  const Alphabet& alphabet() const override { return alphabet_; }
  Dist next_dist(std::span<const Symbol> prefix) override;

  static constexpr double kSumTolerance = 1e-6;

private:
  std::string exchange(const std::string& request_line);
  std::string read_line();
  void shutdown();

  std::string command_;
  pid_t child_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  long long next_id_ = 1;
  Alphabet alphabet_;
};

} // namespace pdfa
