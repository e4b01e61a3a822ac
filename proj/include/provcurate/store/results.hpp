#pragma once

#include "provcurate/rdf/term.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provcurate::store {

using Row = std::vector<std::optional<rdf::Term>>;

/// Outcome of a query: variable bindings (SELECT), a boolean (ASK) or triples (CONSTRUCT).
struct QueryResult {
    enum class Kind { bindings, boolean, graph };
    Kind kind = Kind::bindings;
    std::vector<std::string> variables;
    std::vector<Row> rows;
    bool boolean = false;
    std::vector<rdf::Triple> triples;

    /// Column index of `var`; throws ContractViolation when absent.
    std::size_t column(std::string_view var) const;
    const std::optional<rdf::Term>& get(std::size_t row, std::string_view var) const;
};

/// SPARQL 1.1 Query Results JSON. Literals typed xsd:string are written
/// without a datatype and read back as xsd:string.
std::string to_results_json(const QueryResult& result);
/// Throws ParseError on malformed documents.
QueryResult from_results_json(std::string_view text);

/// CONSTRUCT results as N-Triples, one triple per line.
std::string to_ntriples_document(const QueryResult& result);
QueryResult from_ntriples_document(std::string_view text);

} // namespace provcurate::store
