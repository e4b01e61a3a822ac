#pragma once

#include "provcurate/rdf/prefix_map.hpp"
#include "provcurate/rdf/term.hpp"

#include <string_view>
#include <vector>

namespace provcurate::rdf {

struct TurtleDocument {
    std::vector<Triple> triples;
    PrefixMap prefixes;
};

/// Parses a Turtle document. Anonymous blank nodes get labels "genid<N>".
/// Throws ParseError with line/column on syntax errors.
TurtleDocument parse_turtle(std::string_view text, std::optional<std::string> base = std::nullopt);

/// Parses N-Triples or N-Quads (one statement per line; graph label optional).
std::vector<Quad> parse_nquads(std::string_view text);

std::string write_nquads(const std::vector<Quad>& quads);

} // namespace provcurate::rdf
