#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pdfa/pdfa.hpp"

namespace pdfa {

// PDFA file format (JSON, UTF-8):
//   { "alphabet": [tokens...], "initial": "<id>",
//     "states": { "<id>": { "next": {σ: "<id>", ...},
//                           "weights": {σ: p, ..., "$": p} }, ... } }
// State order follows the file; serialization is byte-stable.
std::string to_json(const Pdfa& a);
// Throws ParseError naming the offending line (syntax) or field path (schema/invariants).
Pdfa pdfa_from_json(std::string_view text);

Pdfa load_pdfa(const std::filesystem::path& path);
void save_pdfa(const Pdfa& a, const std::filesystem::path& path);

// Graphviz: one node per state labelled with its id and $ weight, one edge per
// (state, σ) labelled "σ / weight".
std::string to_dot(const Pdfa& a);

} // namespace pdfa
