#include "pdfa/external_oracle.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "pdfa/errors.hpp"

namespace pdfa {

using json = nlohmann::json;

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

std::string errno_text() { return std::strerror(errno); }

} // namespace

ExternalOracle::ExternalOracle(std::string command) : command_(std::move(command)) {
  // A dead child must surface as EPIPE on write, not kill the process.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw OracleError("pipe: " + errno_text());
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw OracleError("pipe: " + errno_text());
  }
  child_ = ::fork();
  if (child_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw OracleError("fork: " + errno_text());
  }
  if (child_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    json reply = json::parse(exchange(json{{"id", next_id_}, {"op", "alphabet"}}.dump()));
    if (!reply.contains("alphabet") || !reply["alphabet"].is_array())
      throw OracleError("alphabet response lacks an \"alphabet\" list");
    std::vector<std::string> tokens;
    for (const auto& t : reply["alphabet"]) {
      if (!t.is_string()) throw OracleError("alphabet response contains a non-string token");
      tokens.push_back(t.get<std::string>());
    }
    try {
      alphabet_ = Alphabet(std::move(tokens));
    } catch (const InputError& e) {
      throw OracleError(std::string("model server sent an invalid alphabet: ") + e.what());
    }
    if (alphabet_.empty()) throw OracleError("model server sent an empty alphabet");
  } catch (...) {
    shutdown();
    throw;
  }
}

ExternalOracle::~ExternalOracle() { shutdown(); }

void ExternalOracle::shutdown() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (child_ > 0) {
    int status = 0;
    // Closing stdin asks the server to exit; give it a moment before forcing.
    for (int i = 0; i < 50; ++i) {
      pid_t r = ::waitpid(child_, &status, WNOHANG);
      if (r != 0) {
        child_ = -1;
        return;
      }
      ::usleep(10000);
    }
    ::kill(child_, SIGKILL);
    ::waitpid(child_, &status, 0);
    child_ = -1;
  }
}

std::string ExternalOracle::read_line() {
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw OracleError("reading from model server: " + errno_text());
    if (n == 0) throw OracleError("model server closed its output (command: " + command_ + ")");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string ExternalOracle::exchange(const std::string& request_line) {
  if (to_child_ < 0) throw OracleError("model server is not running");
  const long long id = next_id_++;
  std::string out = request_line + "\n";
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t n = ::write(to_child_, out.data() + done, out.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw OracleError("writing to model server: " + errno_text());
    done += static_cast<std::size_t>(n);
  }
  std::string line = read_line();
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::parse_error&) {
    throw OracleError("model server sent a malformed line: " + line.substr(0, 200));
  }
  if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_number_integer())
    throw OracleError("model server response lacks an integer id");
  if (reply["id"].get<long long>() != id)
    throw OracleError("model server answered id " + reply["id"].dump() + ", expected " +
                      std::to_string(id));
  if (reply.contains("error"))
    throw OracleError("model server error: " +
                      (reply["error"].is_string() ? reply["error"].get<std::string>()
                                                  : reply["error"].dump()));
  return line;
}

Dist ExternalOracle::next_dist(std::span<const Symbol> prefix) {
  json tokens = json::array();
  for (Symbol s : prefix) {
    if (s >= alphabet_.size()) throw InputError("prefix symbol outside alphabet");
    tokens.push_back(alphabet_.token(s));
  }
  json request = {{"id", next_id_}, {"op", "next_dist"}, {"prefix", std::move(tokens)}};
  json reply = json::parse(exchange(request.dump()));
  if (!reply.contains("dist") || !reply["dist"].is_object())
    throw OracleError("next_dist response lacks a \"dist\" object");
  const json& dist = reply["dist"];
  if (dist.size() != alphabet_.dist_size())
    throw OracleError("next_dist response must cover exactly the alphabet and \"$\"");
  Dist out(alphabet_.dist_size(), 0.0);
  double sum = 0.0;
  for (const auto& [tok, p] : dist.items()) {
    auto s = alphabet_.find(tok);
    Symbol sym;
    if (s) sym = *s;
    else if (tok == Alphabet::kEndLiteral) sym = alphabet_.end();
    else throw OracleError("next_dist response names unknown token \"" + tok + "\"");
    if (!p.is_number()) throw OracleError("next_dist value for \"" + tok + "\" is not a number");
    double v = p.get<double>();
    if (!std::isfinite(v) || v < 0.0)
      throw OracleError("next_dist value for \"" + tok + "\" is not a probability");
    out[sym] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw OracleError("next_dist response sums to " + std::to_string(sum));
  // Exact rows stay bit-identical; only visibly off sums are rescaled.
  if (std::abs(sum - 1.0) > 1e-12)
    for (double& v : out) v /= sum;
  return out;
}

} // namespace pdfa
