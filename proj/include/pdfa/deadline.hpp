#pragma once

#include <chrono>
#include <optional>

namespace pdfa {

// Wall-clock budget measured from construction. No budget means never expired.
class Deadline {
public:
  using Clock = std::chrono::steady_clock;

  explicit Deadline(std::optional<double> budget_seconds = std::nullopt)
      : start_(Clock::now()), budget_(budget_seconds) {}

  bool expired() const { return budget_ && elapsed() >= *budget_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

private:
  Clock::time_point start_;
  std::optional<double> budget_;
};

} // namespace pdfa
