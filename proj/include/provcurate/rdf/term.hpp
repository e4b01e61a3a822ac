#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace provcurate::rdf {

/// An absolute IRI. Construction validates that a scheme is present and
/// that no character forbidden in an IRIREF occurs.
class Iri {
public:
    Iri() = default;
    explicit Iri(std::string value);

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const Iri&, const Iri&) = default;
    friend bool operator==(const Iri&, const Iri&) = default;

private:
    std::string value_;
};

bool is_absolute_iri(std::string_view text) noexcept;

/// Substring after the last '/' or '#'; the whole IRI when neither occurs
/// or the IRI ends with one of them.
std::string local_name(const Iri& iri);

struct BlankNode {
    std::string id;

    friend auto operator<=>(const BlankNode&, const BlankNode&) = default;
    friend bool operator==(const BlankNode&, const BlankNode&) = default;
};

/// Literal value. A language tag implies rdf:langString; otherwise the
/// datatype is always explicit (plain literals become xsd:string).
class Literal {
public:
    Literal() = default;
    Literal(std::string lexical, Iri datatype);
    Literal(std::string lexical, std::string language);

    static Literal string(std::string lexical);

    const std::string& lexical() const noexcept { return lexical_; }
    const Iri& datatype() const noexcept { return datatype_; }
    const std::optional<std::string>& language() const noexcept { return language_; }

    friend auto operator<=>(const Literal&, const Literal&) = default;
    friend bool operator==(const Literal&, const Literal&) = default;

private:
    std::string lexical_;
    Iri datatype_;
    std::optional<std::string> language_;
};

using Term = std::variant<Iri, BlankNode, Literal>;

inline bool is_iri(const Term& t) noexcept { return std::holds_alternative<Iri>(t); }
inline bool is_blank(const Term& t) noexcept { return std::holds_alternative<BlankNode>(t); }
inline bool is_literal(const Term& t) noexcept { return std::holds_alternative<Literal>(t); }

/// Subject position: IRI or blank node.
using Subject = std::variant<Iri, BlankNode>;

Term to_term(const Subject& s);
/// Throws ContractViolation when `t` is a literal.
Subject to_subject(const Term& t);

struct Triple {
    Subject subject;
    Iri predicate;
    Term object;

    friend auto operator<=>(const Triple&, const Triple&) = default;
    friend bool operator==(const Triple&, const Triple&) = default;
};

/// Triple in a graph; an empty optional graph is the default graph.
struct Quad {
    Triple triple;
    std::optional<Iri> graph;

    friend auto operator<=>(const Quad&, const Quad&) = default;
    friend bool operator==(const Quad&, const Quad&) = default;
};

Triple make_triple(const Iri& s, const Iri& p, Term o);

/// Canonical N-Triples rendering of a term (full IRIs, explicit datatypes).
std::string to_ntriples(const Term& t);
std::string to_ntriples(const Subject& s);
/// "<s> <p> <o> ." without trailing newline.
std::string to_ntriples(const Triple& t);
std::string to_nquads(const Quad& q);

/// N-Triples string escaping of a lexical form (without surrounding quotes).
std::string escape_string(std::string_view lexical);

/// Lexical value used by string functions: IRI text, literal lexical form or blank label.
std::string lexical_value(const Term& t);

/// Orders triples by the canonical N-Triples forms of subject, predicate and object.
struct CanonicalTripleLess {
    bool operator()(const Triple& a, const Triple& b) const;
};

} // namespace provcurate::rdf
