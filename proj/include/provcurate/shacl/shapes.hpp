#pragma once

#include "provcurate/diagnostics.hpp"
#include "provcurate/error.hpp"
#include "provcurate/rdf/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provcurate::shacl {

using rdf::Iri;
using rdf::Term;
using ShapeId = Iri;

/// A shape graph is syntactically valid Turtle but semantically unusable
/// (malformed list, bad regex, minCount > maxCount, ...).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Guard activating a constraint only when the focus node has `has_value` on `path`.
struct ConditionSpec {
    Iri path;
    Term has_value;

    friend bool operator==(const ConditionSpec&, const ConditionSpec&) = default;
};

/// One member of an sh:or list.
struct ConstraintAlternative {
    std::optional<Iri> datatype;
    std::optional<ShapeId> node_shape;
    std::optional<Term> has_value;

    friend bool operator==(const ConstraintAlternative&, const ConstraintAlternative&) = default;
};

struct PropertyConstraint {
    Iri path;
    std::optional<Iri> datatype;
    std::optional<std::size_t> min_count;
    std::optional<std::size_t> max_count;
    std::optional<std::vector<Term>> in_values;
    std::optional<std::string> pattern;
    std::optional<Term> has_value;
    std::optional<ShapeId> node_shape;
    std::optional<std::vector<ConstraintAlternative>> or_alternatives;
    std::optional<ConditionSpec> condition;

    friend bool operator==(const PropertyConstraint&, const PropertyConstraint&) = default;
};

struct NodeShape {
    ShapeId id;
    std::optional<Iri> target_class;
    std::vector<PropertyConstraint> constraints;
};

class ShapeCatalog {
public:
    const NodeShape* find(const ShapeId& id) const;
    bool contains(const ShapeId& id) const { return find(id) != nullptr; }
    /// Shapes whose sh:targetClass is `cls`, in ShapeId order.
    std::vector<ShapeId> shapes_targeting(const Iri& cls) const;

    const std::map<ShapeId, NodeShape>& shapes() const noexcept { return shapes_; }
    const std::vector<Diagnostic>& warnings() const noexcept { return warnings_; }
    std::size_t size() const noexcept { return shapes_.size(); }

    void add(NodeShape shape);
    void warn(Diagnostic d) { warnings_.push_back(std::move(d)); }
    /// Folds another catalog in; a shape defined twice is a ShapeError.
    void merge(ShapeCatalog other);
    /// sh:node / sh:or references naming shapes absent from the catalog.
    std::vector<std::pair<ShapeId, ShapeId>> dangling_references() const;

private:
    std::map<ShapeId, NodeShape> shapes_;
    std::vector<Diagnostic> warnings_;
};

/// Extracts node shapes from a Turtle shapes graph. Unsupported SHACL
/// features become warnings. Throws ParseError on Turtle syntax errors and
/// ShapeError on unusable constraint values.
ShapeCatalog parse_shapes(std::string_view turtle, std::string source_name = "shapes");

} // namespace provcurate::shacl
