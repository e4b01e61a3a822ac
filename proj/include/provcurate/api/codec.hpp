#pragma once

#include "provcurate/curation/engine.hpp"
#include "provcurate/diagnostics.hpp"
#include "provcurate/display/rules.hpp"
#include "provcurate/provenance/engine.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/validation/validator.hpp"

#include <json.hpp>

namespace provcurate::api {

using Json = nlohmann::json;

/// Terms in SPARQL results JSON form: {"type": "uri"|"literal"|"bnode", "value", "datatype", "xml:lang"}.
Json to_json(const rdf::Term& t);
/// Accepts the object form or a bare string IRI. Throws ContractViolation.
rdf::Term term_from_json(const Json& j);
/// Predicate IRI to term list, predicates in IRI order.
Json to_json(const rdf::EntityState& state);
Json to_json(const shacl::FormSchema& schema);
Json to_json(const display::EntityConfig& config);
Json to_json(const validation::Violation& v);
Json to_json(const provenance::Snapshot& s);
Json to_json(const provenance::SnapshotChain& chain);
Json to_json(const provenance::DeletedEntity& d);
Json to_json(const curation::OrphanCandidate& c);
Json to_json(const Diagnostic& d);

/// {"shape", "class", "values": {path: [value]}, "virtual": [{"property", "target"}]}.
/// A value is a string (typed from the field), {"value", "datatype"?, "language"?},
/// {"ref": iri} or {"nested": submission}. Throws ContractViolation.
curation::FormSubmission submission_from_json(const Json& j);
/// {"iri": "delete"|"keep"}; absent or null gives no decisions.
curation::OrphanDecisions decisions_from_json(const Json& j);

/// Parses a request body; an empty body is an empty object. Throws ParseError.
Json parse_body(const std::string& body);

} // namespace provcurate::api
