#include "pdfa/pdfa_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pdfa/errors.hpp"

namespace pdfa {

using ordered_json = nlohmann::ordered_json;

std::string to_json(const Pdfa& a) {
  const Alphabet& sigma = a.alphabet();
  ordered_json doc;
  doc["alphabet"] = sigma.tokens();
  doc["initial"] = a.name(a.initial());
  ordered_json states = ordered_json::object();
  for (StateId q = 0; q < a.num_states(); ++q) {
    ordered_json next = ordered_json::object();
    ordered_json weights = ordered_json::object();
    for (Symbol s = 0; s < sigma.size(); ++s) {
      next[std::string(sigma.token(s))] = a.name(a.next(q, s));
      weights[std::string(sigma.token(s))] = a.weight(q, s);
    }
    weights["$"] = a.weight(q, sigma.end());
    states[a.name(q)] = {{"next", std::move(next)}, {"weights", std::move(weights)}};
  }
  doc["states"] = std::move(states);
  return doc.dump(2) + "\n";
}

namespace {

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

} // namespace

Pdfa pdfa_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("PDFA file is not valid JSON: ") + e.what());
  }

  const auto& tokens_json = field(doc, "alphabet", "$root");
  if (!tokens_json.is_array()) throw ParseError("alphabet: expected a list of strings");
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < tokens_json.size(); ++i) {
    if (!tokens_json[i].is_string())
      throw ParseError("alphabet[" + std::to_string(i) + "]: expected a string");
    tokens.push_back(tokens_json[i].get<std::string>());
  }
  Alphabet sigma;
  try {
    sigma = Alphabet(std::move(tokens));
  } catch (const InputError& e) {
    throw ParseError(std::string("alphabet: ") + e.what());
  }

  const auto& initial_json = field(doc, "initial", "$root");
  if (!initial_json.is_string()) throw ParseError("initial: expected a state id string");
  const auto& states_json = field(doc, "states", "$root");
  if (!states_json.is_object() || states_json.empty())
    throw ParseError("states: expected a non-empty object");

  std::vector<std::string> names;
  std::unordered_map<std::string, StateId> ids;
  for (const auto& [id, _] : states_json.items()) {
    ids.emplace(id, static_cast<StateId>(names.size()));
    names.push_back(id);
  }
  auto initial_it = ids.find(initial_json.get<std::string>());
  if (initial_it == ids.end())
    throw ParseError("initial: unknown state \"" + initial_json.get<std::string>() + "\"");

  const std::size_t n = names.size();
  std::vector<StateId> transitions(n * sigma.size());
  std::vector<double> weights(n * sigma.dist_size());
  for (StateId q = 0; q < n; ++q) {
    const std::string path = "states." + names[q];
    const auto& state = states_json.at(names[q]);
    const auto& next = field(state, "next", path);
    const auto& w = field(state, "weights", path);
    if (!next.is_object()) throw ParseError(path + ".next: expected an object");
    if (!w.is_object()) throw ParseError(path + ".weights: expected an object");
    if (next.size() != sigma.size())
      throw ParseError(path + ".next: expected exactly one entry per token");
    if (w.size() != sigma.dist_size())
      throw ParseError(path + ".weights: expected exactly one entry per token and \"$\"");
    for (Symbol s = 0; s < sigma.size(); ++s) {
      const std::string tok(sigma.token(s));
      const auto& target = field(next, tok.c_str(), path + ".next");
      if (!target.is_string()) throw ParseError(path + ".next." + tok + ": expected a state id");
      auto it = ids.find(target.get<std::string>());
      if (it == ids.end())
        throw ParseError(path + ".next." + tok + ": unknown state \"" + target.get<std::string>() +
                         "\"");
      transitions[q * sigma.size() + s] = it->second;
    }
    for (Symbol s = 0; s <= sigma.size(); ++s) {
      const std::string tok(sigma.token(s));
      const auto& p = field(w, tok.c_str(), path + ".weights");
      if (!p.is_number()) throw ParseError(path + ".weights." + tok + ": expected a number");
      weights[q * sigma.dist_size() + s] = p.get<double>();
    }
  }
  try {
    return Pdfa(std::move(sigma), initial_it->second, std::move(transitions), std::move(weights),
                std::move(names));
  } catch (const InputError& e) {
    throw ParseError(std::string("invalid PDFA: ") + e.what());
  }
}

Pdfa load_pdfa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open PDFA file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return pdfa_from_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_pdfa(const Pdfa& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_json(a);
  if (!out) throw InputError("failed writing " + path.string());
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string fmt_weight(double p) {
  std::ostringstream os;
  os.precision(6);
  os << p;
  return os.str();
}

} // namespace

std::string to_dot(const Pdfa& a) {
  const Alphabet& sigma = a.alphabet();
  std::ostringstream os;
  os << "digraph pdfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  __start [shape=point];\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    os << "  \"" << dot_escape(a.name(q)) << "\" [label=\"" << dot_escape(a.name(q))
       << "\\n$: " << fmt_weight(a.weight(q, sigma.end())) << "\"];\n";
  }
  os << "  __start -> \"" << dot_escape(a.name(a.initial())) << "\";\n";
  for (StateId q = 0; q < a.num_states(); ++q)
    for (Symbol s = 0; s < sigma.size(); ++s)
      os << "  \"" << dot_escape(a.name(q)) << "\" -> \"" << dot_escape(a.name(a.next(q, s)))
         << "\" [label=\"" << dot_escape(sigma.token(s)) << " / " << fmt_weight(a.weight(q, s))
         << "\"];\n";
  os << "}\n";
  return os.str();
}

} // namespace pdfa
