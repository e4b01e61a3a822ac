#include "provcurate/shacl/shapes.hpp"

#include "provcurate/rdf/turtle.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <regex>
#include <set>

namespace provcurate::shacl {

namespace {

using rdf::BlankNode;
using rdf::Literal;
using rdf::Subject;

const std::string sh(vocab::sh);

std::string sh_name(const Iri& p)
{
    return p.str().rfind(sh, 0) == 0 ? "sh:" + p.str().substr(sh.size()) : "<" + p.str() + ">";
}

std::string describe(const Subject& s)
{
    return rdf::to_ntriples(s);
}

class ShapeReader {
public:
    ShapeReader(const rdf::TurtleDocument& doc, std::string source) : source_(std::move(source))
    {
        for (const auto& t : doc.triples) {
            index_[t.subject].push_back({t.predicate, t.object});
        }
    }

    ShapeCatalog run()
    {
        const Iri type(std::string(vocab::rdf_type));
        const Iri node_shape(sh + "NodeShape");
        const Iri target_class(sh + "targetClass");
        std::set<Subject> shape_nodes;
        for (const auto& [subject, props] : index_) {
            for (const auto& [p, o] : props) {
                if ((p == type && o == Term{node_shape}) || p == target_class) {
                    shape_nodes.insert(subject);
                }
            }
        }
        for (const auto& s : shape_nodes) {
            if (!std::holds_alternative<Iri>(s)) {
                warn("node shape " + describe(s) + " is a blank node; shapes need an IRI and it was ignored");
                continue;
            }
            catalog_.add(read_node_shape(std::get<Iri>(s)));
        }
        for (const auto& [from, to] : catalog_.dangling_references()) {
            warn("shape <" + from.str() + "> references undeclared shape <" + to.str() + ">");
        }
        return std::move(catalog_);
    }

private:
    using Props = std::vector<std::pair<Iri, Term>>;

    std::string source_;
    std::map<Subject, Props> index_;
    ShapeCatalog catalog_;

    void warn(std::string message)
    {
        catalog_.warn(Diagnostic{Severity::warning, source_, std::move(message), 0});
    }

    const Props& props_of(const Term& node) const
    {
        static const Props none;
        if (rdf::is_literal(node)) {
            return none;
        }
        const auto it = index_.find(rdf::to_subject(node));
        return it == index_.end() ? none : it->second;
    }

    NodeShape read_node_shape(const Iri& id)
    {
        NodeShape shape{id, std::nullopt, {}};
        for (const auto& [p, o] : props_of(Term{id})) {
            if (p.str() == vocab::rdf_type) {
                continue;
            }
            if (p.str() == sh + "targetClass") {
                if (!rdf::is_iri(o)) {
                    throw ShapeError("sh:targetClass of <" + id.str() + "> must be an IRI");
                }
                if (shape.target_class) {
                    warn("shape <" + id.str() + "> declares several sh:targetClass values; only the first is used");
                    continue;
                }
                shape.target_class = std::get<Iri>(o);
            } else if (p.str() == sh + "property") {
                if (auto c = read_property(id, o)) {
                    shape.constraints.push_back(std::move(*c));
                }
            } else if (p.str().rfind(sh, 0) == 0) {
                warn("unsupported constraint kind " + sh_name(p) + " on shape <" + id.str() + "> ignored");
            }
        }
        return shape;
    }

    std::size_t read_count(const Iri& shape, const Iri& p, const Term& o) const
    {
        const auto* lit = std::get_if<Literal>(&o);
        if (lit == nullptr || lit->lexical().empty() ||
            lit->lexical().find_first_not_of("0123456789") != std::string::npos) {
            throw ShapeError(sh_name(p) + " on shape <" + shape.str() + "> must be a non-negative integer");
        }
        return std::stoul(lit->lexical());
    }

    std::vector<Term> read_list(const Term& head) const
    {
        std::vector<Term> items;
        Term node = head;
        std::set<Term> seen;
        while (!(rdf::is_iri(node) && std::get<Iri>(node).str() == vocab::rdf_nil)) {
            if (!seen.insert(node).second) {
                throw ShapeError("cyclic RDF list");
            }
            std::optional<Term> first;
            std::optional<Term> rest;
            for (const auto& [p, o] : props_of(node)) {
                if (p.str() == vocab::rdf_first) {
                    first = o;
                } else if (p.str() == vocab::rdf_rest) {
                    rest = o;
                }
            }
            if (!first || !rest) {
                throw ShapeError("malformed RDF list at " + rdf::to_ntriples(node));
            }
            items.push_back(*first);
            node = *rest;
        }
        return items;
    }

    std::optional<ConditionSpec> read_condition(const Iri& shape, const Term& node)
    {
        std::optional<Iri> path;
        std::optional<Term> value;
        for (const auto& [p, o] : props_of(node)) {
            if (p.str() == sh + "path" && rdf::is_iri(o)) {
                path = std::get<Iri>(o);
            } else if (p.str() == sh + "hasValue") {
                value = o;
            } else if (p.str() != vocab::rdf_type) {
                warn("unsupported term " + sh_name(p) + " inside sh:condition on shape <" + shape.str() + "> ignored");
            }
        }
        if (!path || !value) {
            warn("sh:condition on shape <" + shape.str() + "> needs sh:path and sh:hasValue; condition ignored");
            return std::nullopt;
        }
        return ConditionSpec{*path, *value};
    }

    ConstraintAlternative read_alternative(const Iri& shape, const Term& node)
    {
        ConstraintAlternative alt;
        if (rdf::is_iri(node)) {
            // A named shape used directly as an alternative.
            alt.node_shape = std::get<Iri>(node);
            return alt;
        }
        for (const auto& [p, o] : props_of(node)) {
            if (p.str() == sh + "datatype" && rdf::is_iri(o)) {
                alt.datatype = std::get<Iri>(o);
            } else if (p.str() == sh + "node" && rdf::is_iri(o)) {
                alt.node_shape = std::get<Iri>(o);
            } else if (p.str() == sh + "hasValue") {
                alt.has_value = o;
            } else if (p.str() != vocab::rdf_type) {
                warn("unsupported term " + sh_name(p) + " inside sh:or on shape <" + shape.str() + "> ignored");
            }
        }
        return alt;
    }

    std::optional<PropertyConstraint> read_property(const Iri& shape, const Term& node)
    {
        PropertyConstraint c;
        bool has_path = false;
        for (const auto& [p, o] : props_of(node)) {
            const auto& name = p.str();
            if (name == vocab::rdf_type) {
                continue;
            }
            if (name == sh + "path") {
                if (!rdf::is_iri(o)) {
                    warn("complex sh:path on shape <" + shape.str() + "> is unsupported; constraint ignored");
                    return std::nullopt;
                }
                c.path = std::get<Iri>(o);
                has_path = true;
            } else if (name == sh + "datatype") {
                if (!rdf::is_iri(o)) {
                    throw ShapeError("sh:datatype on shape <" + shape.str() + "> must be an IRI");
                }
                c.datatype = std::get<Iri>(o);
            } else if (name == sh + "minCount") {
                c.min_count = read_count(shape, p, o);
            } else if (name == sh + "maxCount") {
                c.max_count = read_count(shape, p, o);
            } else if (name == sh + "in") {
                c.in_values = read_list(o);
            } else if (name == sh + "or") {
                std::vector<ConstraintAlternative> alts;
                for (const auto& member : read_list(o)) {
                    alts.push_back(read_alternative(shape, member));
                }
                c.or_alternatives = std::move(alts);
            } else if (name == sh + "pattern") {
                const auto* lit = std::get_if<Literal>(&o);
                if (lit == nullptr) {
                    throw ShapeError("sh:pattern on shape <" + shape.str() + "> must be a literal");
                }
                try {
                    std::regex probe(lit->lexical(), std::regex::ECMAScript);
                } catch (const std::regex_error& e) {
                    throw ShapeError("invalid sh:pattern '" + lit->lexical() + "' on shape <" + shape.str() +
                                     ">: " + e.what());
                }
                c.pattern = lit->lexical();
            } else if (name == sh + "hasValue") {
                c.has_value = o;
            } else if (name == sh + "node") {
                if (!rdf::is_iri(o)) {
                    throw ShapeError("sh:node on shape <" + shape.str() + "> must name a shape IRI");
                }
                c.node_shape = std::get<Iri>(o);
            } else if (name == sh + "condition") {
                c.condition = read_condition(shape, o);
            } else if (name == sh + "flags") {
                warn("sh:flags on shape <" + shape.str() + "> is unsupported; patterns are case-sensitive");
            } else if (name.rfind(sh, 0) == 0) {
                warn("unsupported constraint kind " + sh_name(p) + " on shape <" + shape.str() + "> ignored");
            }
        }
        if (!has_path) {
            warn("property constraint without sh:path on shape <" + shape.str() + "> ignored");
            return std::nullopt;
        }
        if (c.min_count && c.max_count && *c.min_count > *c.max_count) {
            throw ShapeError("sh:minCount exceeds sh:maxCount for <" + c.path.str() + "> on shape <" + shape.str() + ">");
        }
        return c;
    }
};

} // namespace

const NodeShape* ShapeCatalog::find(const ShapeId& id) const
{
    const auto it = shapes_.find(id);
    return it == shapes_.end() ? nullptr : &it->second;
}

std::vector<ShapeId> ShapeCatalog::shapes_targeting(const Iri& cls) const
{
    std::vector<ShapeId> out;
    for (const auto& [id, shape] : shapes_) {
        if (shape.target_class == cls) {
            out.push_back(id);
        }
    }
    return out;
}

void ShapeCatalog::add(NodeShape shape)
{
    const auto id = shape.id;
    if (!shapes_.emplace(id, std::move(shape)).second) {
        throw ShapeError("shape <" + id.str() + "> defined twice");
    }
}

void ShapeCatalog::merge(ShapeCatalog other)
{
    for (auto& [id, shape] : other.shapes_) {
        add(std::move(shape));
    }
    for (auto& w : other.warnings_) {
        // Dangling references may be satisfied by the merged catalog.
        if (w.message.find("references undeclared shape") == std::string::npos) {
            warnings_.push_back(std::move(w));
        }
    }
}

std::vector<std::pair<ShapeId, ShapeId>> ShapeCatalog::dangling_references() const
{
    std::vector<std::pair<ShapeId, ShapeId>> out;
    for (const auto& [id, shape] : shapes_) {
        for (const auto& c : shape.constraints) {
            if (c.node_shape && !contains(*c.node_shape)) {
                out.emplace_back(id, *c.node_shape);
            }
            if (c.or_alternatives) {
                for (const auto& alt : *c.or_alternatives) {
                    if (alt.node_shape && !contains(*alt.node_shape)) {
                        out.emplace_back(id, *alt.node_shape);
                    }
                }
            }
        }
    }
    return out;
}

ShapeCatalog parse_shapes(std::string_view turtle, std::string source_name)
{
    const auto doc = rdf::parse_turtle(turtle);
    return ShapeReader(doc, std::move(source_name)).run();
}

} // namespace provcurate::shacl
