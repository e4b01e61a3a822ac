#include "provcurate/api/codec.hpp"

#include "provcurate/provenance/timestamp.hpp"
#include "provcurate/rdf/vocab.hpp"

namespace provcurate::api {

namespace {

rdf::Iri iri_from(const Json& j, const std::string& what)
{
    if (!j.is_string()) {
        throw ContractViolation(what + ": expected an IRI string");
    }
    const auto s = j.get<std::string>();
    if (!rdf::is_absolute_iri(s)) {
        throw ContractViolation(what + ": not an absolute IRI: " + s);
    }
    return rdf::Iri(s);
}

Json terms(const std::vector<rdf::Term>& ts)
{
    Json out = Json::array();
    for (const auto& t : ts) {
        out.push_back(to_json(t));
    }
    return out;
}

Json rule_json(const shacl::ValidationRule& r)
{
    Json j{{"kind", std::string(shacl::to_string(r.kind))}};
    if (r.pattern) {
        j["pattern"] = *r.pattern;
    }
    if (r.datatype) {
        j["datatype"] = r.datatype->str();
    }
    if (!r.values.empty()) {
        j["values"] = terms(r.values);
    }
    if (r.condition) {
        j["condition"] = {{"path", r.condition->path.str()}, {"hasValue", to_json(r.condition->has_value)}};
    }
    return j;
}

Json alternative_json(const shacl::ConstraintAlternative& a)
{
    Json j = Json::object();
    if (a.datatype) {
        j["datatype"] = a.datatype->str();
    }
    if (a.node_shape) {
        j["nodeShape"] = a.node_shape->str();
    }
    if (a.has_value) {
        j["hasValue"] = to_json(*a.has_value);
    }
    return j;
}

curation::SubmissionValue value_from_json(const Json& j)
{
    if (j.is_string()) {
        return curation::SubmissionValue::literal(j.get<std::string>());
    }
    if (j.is_number() || j.is_boolean()) {
        return curation::SubmissionValue::literal(j.dump());
    }
    if (!j.is_object()) {
        throw ContractViolation("submission value: expected a string or an object");
    }
    if (j.contains("ref")) {
        return curation::SubmissionValue::ref(iri_from(j["ref"], "ref"));
    }
    if (j.contains("nested")) {
        return curation::SubmissionValue::child(submission_from_json(j["nested"]));
    }
    if (!j.contains("value") || !j["value"].is_string()) {
        throw ContractViolation("submission value: expected ref, nested or value");
    }
    auto v = curation::SubmissionValue::literal(j["value"].get<std::string>());
    if (j.contains("datatype")) {
        v.datatype = iri_from(j["datatype"], "datatype");
    }
    if (j.contains("language")) {
        if (!j["language"].is_string()) {
            throw ContractViolation("language: expected a string");
        }
        v.language = j["language"].get<std::string>();
    }
    return v;
}

} // namespace

Json to_json(const rdf::Term& t)
{
    if (const auto* i = std::get_if<rdf::Iri>(&t)) {
        return {{"type", "uri"}, {"value", i->str()}};
    }
    if (const auto* b = std::get_if<rdf::BlankNode>(&t)) {
        return {{"type", "bnode"}, {"value", b->id}};
    }
    const auto& l = std::get<rdf::Literal>(t);
    Json j{{"type", "literal"}, {"value", l.lexical()}};
    if (l.language()) {
        j["xml:lang"] = *l.language();
    } else {
        j["datatype"] = l.datatype().str();
    }
    return j;
}

rdf::Term term_from_json(const Json& j)
{
    if (j.is_string()) {
        return iri_from(j, "term");
    }
    if (!j.is_object() || !j.contains("type") || !j.contains("value") || !j["value"].is_string()) {
        throw ContractViolation("term: expected {type, value}");
    }
    const auto type = j["type"].get<std::string>();
    const auto value = j["value"].get<std::string>();
    if (type == "uri") {
        return iri_from(j["value"], "term");
    }
    if (type == "bnode") {
        return rdf::BlankNode{value};
    }
    if (type != "literal") {
        throw ContractViolation("term: unknown type " + type);
    }
    if (j.contains("xml:lang")) {
        return rdf::Literal(value, j["xml:lang"].get<std::string>());
    }
    if (j.contains("datatype")) {
        return rdf::Literal(value, iri_from(j["datatype"], "datatype"));
    }
    return rdf::Literal::string(value);
}

Json to_json(const rdf::EntityState& state)
{
    Json props = Json::object();
    for (const auto& t : state.triples()) {
        props[t.predicate.str()].push_back(to_json(t.object));
    }
    return props;
}

Json to_json(const shacl::FormSchema& schema)
{
    Json fields = Json::array();
    for (const auto& f : schema.fields) {
        Json j{{"path", f.path.str()},
               {"widget", std::string(shacl::to_string(f.widget))},
               {"required", f.required},
               {"repeatable", f.repeatable}};
        if (f.min_count) {
            j["minCount"] = *f.min_count;
        }
        if (f.max_count) {
            j["maxCount"] = *f.max_count;
        }
        if (f.options) {
            j["options"] = terms(*f.options);
        }
        if (f.nested_shape) {
            j["nestedShape"] = f.nested_shape->str();
        }
        Json rules = Json::array();
        for (const auto& r : f.rules) {
            rules.push_back(rule_json(r));
        }
        j["rules"] = rules;
        if (!f.alternatives.empty()) {
            Json alts = Json::array();
            for (const auto& a : f.alternatives) {
                alts.push_back(alternative_json(a));
            }
            j["alternatives"] = alts;
        }
        fields.push_back(j);
    }
    Json j{{"shape", schema.shape.str()}, {"fields", fields}};
    if (schema.target_class) {
        j["targetClass"] = schema.target_class->str();
    }
    return j;
}

Json to_json(const display::EntityConfig& config)
{
    Json fields = Json::array();
    for (const auto& f : config.fields) {
        Json j{{"path", f.path.str()}, {"displayName", f.display_name}, {"visible", f.visible}, {"order", f.order}};
        if (f.widget) {
            j["widget"] = std::string(shacl::to_string(*f.widget));
        }
        if (f.autocomplete) {
            j["autocomplete"] = {{"minChars", f.autocomplete->min_chars},
                                 {"target", f.autocomplete->target == store::SearchTarget::parent ? "parent"
                                                                                                  : "same-type"}};
        }
        fields.push_back(j);
    }
    Json j{{"binding", {{"kind", config.binding.kind == display::Binding::Kind::shape ? "shape" : "class"},
                        {"iri", config.binding.iri.str()}}},
           {"displayName", config.display_name},
           {"fields", fields}};
    Json virtuals = Json::array();
    for (const auto& v : config.virtual_properties) {
        virtuals.push_back({{"label", v.label},
                            {"targetShape", v.target_shape.str()},
                            {"intermediateClass", v.intermediate_class.str()},
                            {"linkFrom", v.link_from.str()},
                            {"linkTo", v.link_to.str()}});
    }
    j["virtualProperties"] = virtuals;
    if (config.ordering) {
        j["ordering"] = {{"path", config.ordering->path.str()}, {"next", config.ordering->next.str()}};
    }
    if (config.duplicates) {
        Json any = Json::array();
        for (const auto& clause : config.duplicates->any_of) {
            Json c = Json::array();
            for (const auto& p : clause) {
                c.push_back(p.str());
            }
            any.push_back(c);
        }
        j["duplicates"] = {{"anyOf", any}};
    }
    if (config.orphan_policy) {
        j["orphanPolicy"] = std::string(display::to_string(*config.orphan_policy));
    }
    return j;
}

Json to_json(const validation::Violation& v)
{
    Json j{{"path", v.path.str()}, {"kind", std::string(validation::to_string(v.kind))}, {"message", v.message}};
    if (v.value) {
        j["value"] = to_json(*v.value);
    }
    return j;
}

Json to_json(const provenance::Snapshot& s)
{
    Json derived = Json::array();
    for (const auto& d : s.derived_from) {
        derived.push_back(d.str());
    }
    Json j{{"iri", s.id.str()},
           {"entity", s.entity.str()},
           {"index", s.index},
           {"generatedAtTime", provenance::format_timestamp(s.generated_at)},
           {"attributedTo", s.attributed_to},
           {"derivedFrom", derived},
           {"update", rdf::serialize_delta(s.delta)},
           {"description", s.description}};
    j["invalidatedAtTime"] = s.invalidated_at ? Json(provenance::format_timestamp(*s.invalidated_at)) : Json();
    j["primarySource"] = s.primary_source.empty() ? Json() : Json(s.primary_source);
    return j;
}

Json to_json(const provenance::SnapshotChain& chain)
{
    Json snaps = Json::array();
    for (const auto& s : chain.snapshots) {
        snaps.push_back(to_json(s));
    }
    return {{"entity", chain.entity.str()}, {"deleted", chain.deleted()}, {"snapshots", snaps}};
}

Json to_json(const provenance::DeletedEntity& d)
{
    return {{"entity", d.entity.str()},
            {"snapshot", d.snapshot.str()},
            {"index", d.index},
            {"generatedAtTime", provenance::format_timestamp(d.generated_at)},
            {"invalidatedAtTime", provenance::format_timestamp(d.invalidated_at)}};
}

Json to_json(const curation::OrphanCandidate& c)
{
    return {{"entity", c.entity.str()}, {"reason", std::string(curation::to_string(c.reason))}};
}

Json to_json(const Diagnostic& d)
{
    Json j{{"severity", to_string(d.severity)}, {"source", d.source}, {"message", d.message}};
    if (d.line) {
        j["line"] = d.line;
    }
    return j;
}

curation::FormSubmission submission_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw ContractViolation("submission: expected an object");
    }
    curation::FormSubmission sub;
    if (j.contains("shape") && !j["shape"].is_null()) {
        sub.shape = iri_from(j["shape"], "shape");
    }
    if (j.contains("class") && !j["class"].is_null()) {
        sub.cls = iri_from(j["class"], "class");
    }
    if (j.contains("values")) {
        if (!j["values"].is_object()) {
            throw ContractViolation("values: expected an object keyed by property IRI");
        }
        for (const auto& [path, vals] : j["values"].items()) {
            const auto p = iri_from(Json(path), "values");
            auto& out = sub.values[p];
            if (vals.is_array()) {
                for (const auto& v : vals) {
                    out.push_back(value_from_json(v));
                }
            } else if (!vals.is_null()) {
                out.push_back(value_from_json(vals));
            }
        }
    }
    if (j.contains("virtual")) {
        if (!j["virtual"].is_array()) {
            throw ContractViolation("virtual: expected a list");
        }
        for (const auto& v : j["virtual"]) {
            if (!v.is_object() || !v.contains("property") || !v["property"].is_string() || !v.contains("target")) {
                throw ContractViolation("virtual: expected {property, target}");
            }
            sub.virtual_links.push_back({v["property"].get<std::string>(), iri_from(v["target"], "target")});
        }
    }
    return sub;
}

curation::OrphanDecisions decisions_from_json(const Json& j)
{
    curation::OrphanDecisions out;
    if (j.is_null()) {
        return out;
    }
    if (!j.is_object()) {
        throw ContractViolation("orphanDecisions: expected an object");
    }
    for (const auto& [entity, choice] : j.items()) {
        const auto c = choice.is_string() ? choice.get<std::string>() : std::string();
        if (c != "delete" && c != "keep") {
            throw ContractViolation("orphanDecisions: expected delete or keep for " + entity);
        }
        out[iri_from(Json(entity), "orphanDecisions")] = c == "delete";
    }
    return out;
}

Json parse_body(const std::string& body)
{
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
        return Json::object();
    }
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("request body: ") + e.what(), 1, e.byte);
    }
}

} // namespace provcurate::api
