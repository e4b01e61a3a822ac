#include "provcurate/shacl/form_schema.hpp"

#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <array>

namespace provcurate::shacl {

namespace {

constexpr std::array<std::pair<WidgetKind, std::string_view>, 10> widget_names{{
    {WidgetKind::text, "text"},
    {WidgetKind::textarea, "textarea"},
    {WidgetKind::number, "number"},
    {WidgetKind::date, "date"},
    {WidgetKind::datetime, "datetime"},
    {WidgetKind::year, "year"},
    {WidgetKind::dropdown, "dropdown"},
    {WidgetKind::tag, "tag"},
    {WidgetKind::nested_entity, "nested-entity"},
    {WidgetKind::reference, "reference"},
}};

bool has_options(const PropertyConstraint& c)
{
    return (c.in_values && !c.in_values->empty()) || (c.or_alternatives && !c.or_alternatives->empty());
}

std::vector<Term> options_of(const PropertyConstraint& c)
{
    if (c.in_values && !c.in_values->empty()) {
        return *c.in_values;
    }
    std::vector<Term> out;
    if (c.or_alternatives) {
        for (const auto& alt : *c.or_alternatives) {
            if (alt.has_value) {
                out.push_back(*alt.has_value);
            } else if (alt.datatype) {
                out.push_back(*alt.datatype);
            } else if (alt.node_shape) {
                out.push_back(*alt.node_shape);
            }
        }
    }
    return out;
}

std::vector<ValidationRule> rules_of(const PropertyConstraint& c)
{
    std::vector<ValidationRule> out;
    if (c.datatype) {
        out.push_back(ValidationRule{c.condition, RuleKind::datatype, std::nullopt, c.datatype, {}});
    }
    if (c.in_values) {
        out.push_back(ValidationRule{c.condition, RuleKind::in, std::nullopt, std::nullopt, *c.in_values});
    }
    if (c.pattern) {
        out.push_back(ValidationRule{c.condition, RuleKind::pattern, c.pattern, std::nullopt, {}});
    }
    if (c.has_value) {
        out.push_back(ValidationRule{c.condition, RuleKind::has_value, std::nullopt, std::nullopt, {*c.has_value}});
    }
    return out;
}

bool same_check(const ValidationRule& a, const ValidationRule& b)
{
    return a.kind == b.kind && a.pattern == b.pattern && a.datatype == b.datatype && a.values == b.values;
}

/// Conjunction of the unconditional constraints on one path.
PropertyConstraint merge_base(const Iri& path, const std::vector<const PropertyConstraint*>& group)
{
    PropertyConstraint base;
    base.path = path;
    for (const auto* c : group) {
        if (c->condition) {
            continue;
        }
        if (c->min_count) {
            base.min_count = std::max(base.min_count.value_or(0), *c->min_count);
        }
        if (c->max_count) {
            base.max_count = base.max_count ? std::min(*base.max_count, *c->max_count) : *c->max_count;
        }
        if (!base.datatype) {
            base.datatype = c->datatype;
        }
        if (!base.in_values) {
            base.in_values = c->in_values;
        }
        if (!base.node_shape) {
            base.node_shape = c->node_shape;
        }
        if (!base.or_alternatives) {
            base.or_alternatives = c->or_alternatives;
        }
    }
    return base;
}

} // namespace

std::string_view to_string(WidgetKind w) noexcept
{
    for (const auto& [kind, name] : widget_names) {
        if (kind == w) {
            return name;
        }
    }
    return "text";
}

std::optional<WidgetKind> widget_from_string(std::string_view s) noexcept
{
    for (const auto& [kind, name] : widget_names) {
        if (name == s) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(RuleKind k) noexcept
{
    switch (k) {
    case RuleKind::pattern: return "pattern";
    case RuleKind::datatype: return "datatype";
    case RuleKind::in: return "in";
    case RuleKind::has_value: return "hasValue";
    }
    return "unknown";
}

bool is_numeric_datatype(const Iri& datatype)
{
    static const std::string_view numeric[] = {
        "integer", "decimal", "double", "float", "int", "long", "short", "byte",
        "nonNegativeInteger", "positiveInteger", "nonPositiveInteger", "negativeInteger",
        "unsignedInt", "unsignedLong", "unsignedShort", "unsignedByte",
    };
    const auto& s = datatype.str();
    if (s.rfind(vocab::xsd, 0) != 0) {
        return false;
    }
    const auto local = std::string_view(s).substr(vocab::xsd.size());
    return std::find(std::begin(numeric), std::end(numeric), local) != std::end(numeric);
}

WidgetKind select_widget(const PropertyConstraint& merged, std::optional<WidgetKind> override)
{
    const bool nested = merged.node_shape.has_value() && !has_options(merged);
    if (override) {
        const bool wants_nested = *override == WidgetKind::nested_entity || *override == WidgetKind::reference;
        const bool usable = (*override != WidgetKind::dropdown || has_options(merged)) && wants_nested == nested;
        if (usable) {
            return *override;
        }
    }
    if (has_options(merged)) {
        return WidgetKind::dropdown;
    }
    if (merged.node_shape) {
        return WidgetKind::nested_entity;
    }
    if (merged.datatype) {
        const auto& dt = merged.datatype->str();
        if (dt == vocab::xsd_date) {
            return WidgetKind::date;
        }
        if (dt == vocab::xsd_date_time) {
            return WidgetKind::datetime;
        }
        if (dt == vocab::xsd_g_year) {
            return WidgetKind::year;
        }
        if (is_numeric_datatype(*merged.datatype)) {
            return WidgetKind::number;
        }
    }
    return WidgetKind::text;
}

bool widget_override_compatible(const FormField& field, WidgetKind widget)
{
    const bool nested = field.nested_shape.has_value();
    const bool wants_nested = widget == WidgetKind::nested_entity || widget == WidgetKind::reference;
    return (widget != WidgetKind::dropdown || field.options.has_value()) && wants_nested == nested;
}

const FormField* FormSchema::field(const Iri& path) const
{
    for (const auto& f : fields) {
        if (f.path == path) {
            return &f;
        }
    }
    return nullptr;
}

FormSchema compile_shape(const ShapeId& shape_id, const ShapeCatalog& catalog)
{
    const NodeShape* shape = catalog.find(shape_id);
    if (shape == nullptr) {
        throw NotFoundError("unknown shape <" + shape_id.str() + ">");
    }
    FormSchema schema{shape_id, shape->target_class, {}};

    std::vector<Iri> order;
    std::map<Iri, std::vector<const PropertyConstraint*>> groups;
    for (const auto& c : shape->constraints) {
        auto& g = groups[c.path];
        if (g.empty()) {
            order.push_back(c.path);
        }
        g.push_back(&c);
    }

    for (const auto& path : order) {
        const auto& group = groups[path];
        const PropertyConstraint base = merge_base(path, group);

        FormField field;
        field.path = path;
        field.min_count = base.min_count;
        field.max_count = base.max_count;
        field.required = base.min_count.value_or(0) >= 1;
        field.repeatable = !base.max_count || *base.max_count > 1;
        field.widget = select_widget(base);
        if (field.widget == WidgetKind::dropdown) {
            field.options = options_of(base);
        }
        if (field.widget == WidgetKind::nested_entity) {
            if (!catalog.contains(*base.node_shape)) {
                throw MissingShapeError("shape <" + shape_id.str() + "> nests unknown shape <" +
                                        base.node_shape->str() + "> at <" + path.str() + ">");
            }
            field.nested_shape = base.node_shape;
        }
        if (base.or_alternatives) {
            for (const auto& alt : *base.or_alternatives) {
                if (alt.node_shape && !catalog.contains(*alt.node_shape)) {
                    throw MissingShapeError("sh:or alternative names unknown shape <" + alt.node_shape->str() + ">");
                }
            }
            field.alternatives = *base.or_alternatives;
        }

        for (const auto* c : group) {
            if (c->condition) {
                continue;
            }
            for (auto& r : rules_of(*c)) {
                if (std::none_of(field.rules.begin(), field.rules.end(),
                                 [&r](const ValidationRule& e) { return e == r; })) {
                    field.rules.push_back(std::move(r));
                }
            }
        }
        std::vector<ValidationRule> conditional;
        for (const auto* c : group) {
            if (!c->condition) {
                continue;
            }
            for (auto& r : rules_of(*c)) {
                const bool redundant = std::any_of(field.rules.begin(), field.rules.end(), [&r](const ValidationRule& e) {
                    return !e.condition && same_check(e, r);
                });
                const bool duplicate = std::any_of(conditional.begin(), conditional.end(),
                                                   [&r](const ValidationRule& e) { return e == r; });
                if (!redundant && !duplicate) {
                    conditional.push_back(std::move(r));
                }
            }
        }
        field.rules.insert(field.rules.end(), conditional.begin(), conditional.end());
        schema.fields.push_back(std::move(field));
    }
    return schema;
}

} // namespace provcurate::shacl
