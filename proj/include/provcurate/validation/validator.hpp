#pragma once

#include "provcurate/error.hpp"
#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/shacl/form_schema.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provcurate::validation {

using rdf::Iri;
using rdf::Term;

enum class ViolationKind {
    missing_required,
    too_many,
    datatype,
    pattern,
    not_in_options,
    undeclared_property,
    condition_pattern,
};

std::string_view to_string(ViolationKind k) noexcept;

struct Violation {
    Iri path;
    ViolationKind kind;
    std::string message;
    std::optional<Term> value;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised by mutating operations when a submission does not validate.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

class CoercionError : public Error {
public:
    CoercionError(std::string input, Iri datatype);
    const Iri& datatype() const noexcept { return datatype_; }

private:
    Iri datatype_;
};

/// True iff the state has (entity, condition.path, condition.has_value).
bool check_condition(const rdf::EntityState& state, const shacl::ConditionSpec& condition);

/// Checks cardinality, datatypes, options, patterns (guarded ones only when
/// their condition holds) and closed-world membership of predicates.
/// rdf:type is exempt from the closed-world check. Output is ordered by
/// schema field, then violation kind; undeclared properties come last.
std::vector<Violation> validate_entity(const rdf::EntityState& state, const shacl::FormSchema& schema);

/// Whether `lexical` is in the lexical space of `datatype`. Unknown
/// datatypes accept any lexical form.
bool is_valid_lexical(std::string_view lexical, const Iri& datatype);

/// Validated literal for a form input; throws CoercionError.
rdf::Literal coerce_literal(std::string_view input, const Iri& datatype);

/// Regex search with SHACL default semantics (no flags, case-sensitive).
bool pattern_matches(const std::string& pattern, std::string_view text);

} // namespace provcurate::validation
