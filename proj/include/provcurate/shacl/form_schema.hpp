#pragma once

#include "provcurate/shacl/shapes.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace provcurate::shacl {

class MissingShapeError : public Error {
public:
    using Error::Error;
};

enum class WidgetKind { text, textarea, number, date, datetime, year, dropdown, tag, nested_entity, reference };

std::string_view to_string(WidgetKind w) noexcept;
std::optional<WidgetKind> widget_from_string(std::string_view s) noexcept;

enum class RuleKind { pattern, datatype, in, has_value };

std::string_view to_string(RuleKind k) noexcept;

/// A check applied to a field's values, optionally guarded by a condition.
struct ValidationRule {
    std::optional<ConditionSpec> condition;
    RuleKind kind = RuleKind::datatype;
    std::optional<std::string> pattern;   // pattern
    std::optional<Iri> datatype;          // datatype
    std::vector<Term> values;             // in (allowed values), has_value (exactly one)

    friend bool operator==(const ValidationRule&, const ValidationRule&) = default;
};

struct FormField {
    Iri path;
    WidgetKind widget = WidgetKind::text;
    bool required = false;
    bool repeatable = true;
    std::optional<std::size_t> min_count;
    std::optional<std::size_t> max_count;
    std::optional<std::vector<Term>> options;
    std::optional<ShapeId> nested_shape;
    std::vector<ValidationRule> rules;
    /// sh:or members; a value must satisfy at least one.
    std::vector<ConstraintAlternative> alternatives;

    friend bool operator==(const FormField&, const FormField&) = default;
};

struct FormSchema {
    ShapeId shape;
    std::optional<Iri> target_class;
    std::vector<FormField> fields;

    const FormField* field(const Iri& path) const;

    friend bool operator==(const FormSchema&, const FormSchema&) = default;
};

/// Widget decision table: override, then sh:in / sh:or, then sh:node, then
/// datatype (date, dateTime, gYear, numeric), else text. Overrides that
/// would yield a dropdown without options or a nested widget without a
/// nested shape (or vice versa) are ignored.
WidgetKind select_widget(const PropertyConstraint& merged, std::optional<WidgetKind> override = std::nullopt);

/// Whether `select_widget` would honour `widget` as an override for the compiled `field`.
bool widget_override_compatible(const FormField& field, WidgetKind widget);

/// Folds the shape's constraints into one field per path, in order of first
/// appearance. Conditional constraints contribute guarded rules only.
/// Throws NotFoundError when `shape` is absent, MissingShapeError when a
/// nested shape does not resolve.
FormSchema compile_shape(const ShapeId& shape, const ShapeCatalog& catalog);

bool is_numeric_datatype(const Iri& datatype);

} // namespace provcurate::shacl
