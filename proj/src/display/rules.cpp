#include "provcurate/display/rules.hpp"

#include "provcurate/store/sparql.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace provcurate::display {

ConfigError::ConfigError(const std::string& message, std::string path, std::size_t line)
    : Error(message), path_(std::move(path)), line_(line)
{
}

std::string_view to_string(OrphanPolicy p) noexcept
{
    switch (p) {
    case OrphanPolicy::ask: return "ask";
    case OrphanPolicy::remove: return "delete";
    case OrphanPolicy::keep: return "keep";
    }
    return "ask";
}

std::optional<OrphanPolicy> orphan_policy_from_string(std::string_view s) noexcept
{
    if (s == "ask") {
        return OrphanPolicy::ask;
    }
    if (s == "delete") {
        return OrphanPolicy::remove;
    }
    if (s == "keep") {
        return OrphanPolicy::keep;
    }
    return std::nullopt;
}

const FieldRule* EntityConfig::field(const Iri& path) const
{
    for (const auto& f : fields) {
        if (f.path == path) {
            return &f;
        }
    }
    return nullptr;
}

const VirtualPropertyRule* EntityConfig::virtual_property(std::string_view label) const
{
    for (const auto& v : virtual_properties) {
        if (v.label == label) {
            return &v;
        }
    }
    return nullptr;
}

std::vector<FieldRule> EntityConfig::visible_fields() const
{
    std::vector<FieldRule> out;
    std::copy_if(fields.begin(), fields.end(), std::back_inserter(out), [](const FieldRule& f) { return f.visible; });
    std::stable_sort(out.begin(), out.end(), [](const FieldRule& a, const FieldRule& b) { return a.order < b.order; });
    return out;
}

rdf::PrefixMap DisplayRules::prefix_map() const
{
    rdf::PrefixMap pm;
    for (const auto& [p, ns] : prefixes) {
        pm.declare(p, ns);
    }
    return pm;
}

std::string DisplayRules::sparql_prologue() const
{
    std::string out;
    for (const auto& [p, ns] : prefixes) {
        out += "PREFIX " + p + ": <" + ns + ">\n";
    }
    return out;
}

namespace {

std::string_view target_name(store::SearchTarget t)
{
    return t == store::SearchTarget::parent ? "parent" : "same-type";
}

class Loader {
public:
    Loader(const shacl::ShapeCatalog& catalog, std::string source) : catalog_(catalog), source_(std::move(source)) {}

    DisplayRules run(std::string_view text)
    {
        YAML::Node root;
        try {
            root = YAML::Load(std::string(text));
        } catch (const YAML::ParserException& e) {
            throw ConfigError(source_ + ":" + std::to_string(e.mark.line + 1) + ": YAML syntax error: " + e.msg, "",
                              static_cast<std::size_t>(e.mark.line + 1));
        }
        DisplayRules rules;
        if (!root || root.IsNull()) {
            return rules;
        }
        if (!root.IsMap()) {
            fail(root, "", "top level must be a mapping");
        }
        check_keys(root, "", {"prefixes", "defaults", "entities"});
        if (const auto p = root["prefixes"]) {
            expect_map(p, "prefixes");
            for (auto it = p.begin(); it != p.end(); ++it) {
                const auto key = it->first.as<std::string>();
                const auto ns = scalar(it->second, "prefixes." + key);
                if (!rdf::is_absolute_iri(ns)) {
                    fail(it->second, "prefixes." + key, "namespace must be an absolute IRI");
                }
                rules.prefixes[key] = ns;
                prefixes_.declare(key, ns);
            }
        }
        if (const auto d = root["defaults"]) {
            expect_map(d, "defaults");
            check_keys(d, "defaults", {"orphanPolicy", "lockTtlSeconds"});
            if (d["orphanPolicy"]) {
                rules.defaults.orphan_policy = policy(d["orphanPolicy"], "defaults.orphanPolicy");
            }
            if (d["lockTtlSeconds"]) {
                rules.defaults.lock_ttl_seconds = integer(d["lockTtlSeconds"], "defaults.lockTtlSeconds");
                if (rules.defaults.lock_ttl_seconds < 10) {
                    fail(d["lockTtlSeconds"], "defaults.lockTtlSeconds", "must be at least 10");
                }
            }
        }
        if (const auto es = root["entities"]) {
            if (!es.IsSequence()) {
                fail(es, "entities", "must be a list");
            }
            std::set<std::pair<int, std::string>> bindings;
            for (std::size_t i = 0; i < es.size(); ++i) {
                const std::string path = "entities[" + std::to_string(i) + "]";
                auto cfg = entity(es[i], path, rules);
                if (!bindings.emplace(static_cast<int>(cfg.binding.kind), cfg.binding.iri.str()).second) {
                    fail(es[i], path, "binding <" + cfg.binding.iri.str() + "> is configured twice");
                }
                rules.entries.push_back(std::move(cfg));
            }
        }
        return rules;
    }

private:
    const shacl::ShapeCatalog& catalog_;
    std::string source_;
    rdf::PrefixMap prefixes_;

    [[noreturn]] void fail(const YAML::Node& n, const std::string& path, const std::string& message) const
    {
        const std::size_t line = n.Mark().is_null() ? 0 : static_cast<std::size_t>(n.Mark().line + 1);
        std::string where = source_;
        if (line) {
            where += ":" + std::to_string(line);
        }
        throw ConfigError(where + ": " + (path.empty() ? "" : path + ": ") + message, path, line);
    }

    void expect_map(const YAML::Node& n, const std::string& path) const
    {
        if (!n.IsMap()) {
            fail(n, path, "must be a mapping");
        }
    }

    void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<std::string_view> allowed) const
    {
        for (auto it = n.begin(); it != n.end(); ++it) {
            const auto key = it->first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(it->first, path.empty() ? key : path + "." + key, "unknown key '" + key + "'");
            }
        }
    }

    std::string scalar(const YAML::Node& n, const std::string& path) const
    {
        if (!n.IsScalar()) {
            fail(n, path, "must be a scalar");
        }
        return n.as<std::string>();
    }

    YAML::Node required(const YAML::Node& parent, const std::string& key, const std::string& path) const
    {
        const auto n = parent[key];
        if (!n) {
            fail(parent, path + "." + key, "missing required key");
        }
        return n;
    }

    Iri iri(const YAML::Node& n, const std::string& path) const
    {
        const auto text = scalar(n, path);
        // Bare absolute IRIs need an authority (or urn:) so typos in prefixes are not taken as schemes.
        const bool bare = text.empty() || text.front() != '<';
        if (bare && !prefixes_.expand(text) && text.find("://") == std::string::npos && text.rfind("urn:", 0) != 0) {
            fail(n, path, "'" + text + "' is neither an absolute IRI nor a declared prefixed name");
        }
        auto expanded = prefixes_.expand_any(text);
        if (!expanded) {
            fail(n, path, "'" + text + "' is neither an absolute IRI nor a declared prefixed name");
        }
        return *expanded;
    }

    int integer(const YAML::Node& n, const std::string& path) const
    {
        try {
            return n.as<int>();
        } catch (const YAML::BadConversion&) {
            fail(n, path, "must be an integer");
        }
    }

    bool boolean(const YAML::Node& n, const std::string& path) const
    {
        try {
            return n.as<bool>();
        } catch (const YAML::BadConversion&) {
            fail(n, path, "must be true or false");
        }
    }

    OrphanPolicy policy(const YAML::Node& n, const std::string& path) const
    {
        auto p = orphan_policy_from_string(scalar(n, path));
        if (!p) {
            fail(n, path, "must be one of ask, delete, keep");
        }
        return *p;
    }

    EntityConfig entity(const YAML::Node& n, const std::string& path, const DisplayRules& rules)
    {
        expect_map(n, path);
        check_keys(n, path, {"class", "shape", "displayName", "labelQuery", "fields", "duplicates",
                             "virtualProperties", "ordering", "orphanPolicy"});
        EntityConfig cfg;
        if (n["class"] && n["shape"]) {
            fail(n, path, "bind either by class or by shape, not both");
        }
        if (n["shape"]) {
            cfg.binding = Binding{Binding::Kind::shape, iri(n["shape"], path + ".shape")};
            if (!catalog_.contains(cfg.binding.iri)) {
                fail(n["shape"], path + ".shape", "undeclared shape <" + cfg.binding.iri.str() + ">");
            }
        } else if (n["class"]) {
            cfg.binding = Binding{Binding::Kind::cls, iri(n["class"], path + ".class")};
        } else {
            fail(n, path, "missing 'class' or 'shape' binding");
        }
        if (n["displayName"]) {
            cfg.display_name = scalar(n["displayName"], path + ".displayName");
        }
        if (n["labelQuery"]) {
            auto text = scalar(n["labelQuery"], path + ".labelQuery");
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
                text.pop_back();
            }
            cfg.label_query = std::move(text);
            check_label_query(n["labelQuery"], path + ".labelQuery", *cfg.label_query, rules);
        }
        if (n["orphanPolicy"]) {
            cfg.orphan_policy = policy(n["orphanPolicy"], path + ".orphanPolicy");
        }
        if (const auto fs = n["fields"]) {
            fields(fs, path + ".fields", cfg);
        }
        if (const auto d = n["duplicates"]) {
            const std::string dp = path + ".duplicates";
            expect_map(d, dp);
            check_keys(d, dp, {"anyOf"});
            const auto any = required(d, "anyOf", dp);
            if (!any.IsSequence() || any.size() == 0) {
                fail(any, dp + ".anyOf", "must be a non-empty list of clauses");
            }
            DuplicateRule rule;
            for (std::size_t i = 0; i < any.size(); ++i) {
                const std::string cp = dp + ".anyOf[" + std::to_string(i) + "]";
                if (!any[i].IsSequence() || any[i].size() == 0) {
                    fail(any[i], cp, "clause must be a non-empty list of paths");
                }
                std::vector<Iri> clause;
                for (std::size_t k = 0; k < any[i].size(); ++k) {
                    clause.push_back(iri(any[i][k], cp + "[" + std::to_string(k) + "]"));
                }
                rule.any_of.push_back(std::move(clause));
            }
            cfg.duplicates = std::move(rule);
        }
        if (const auto vs = n["virtualProperties"]) {
            const std::string vp = path + ".virtualProperties";
            if (!vs.IsSequence()) {
                fail(vs, vp, "must be a list");
            }
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const std::string ip = vp + "[" + std::to_string(i) + "]";
                expect_map(vs[i], ip);
                check_keys(vs[i], ip, {"label", "targetShape", "intermediateClass", "linkFrom", "linkTo"});
                VirtualPropertyRule v;
                v.label = scalar(required(vs[i], "label", ip), ip + ".label");
                v.target_shape = iri(required(vs[i], "targetShape", ip), ip + ".targetShape");
                if (!catalog_.contains(v.target_shape)) {
                    fail(vs[i]["targetShape"], ip + ".targetShape", "undeclared shape <" + v.target_shape.str() + ">");
                }
                v.intermediate_class = iri(required(vs[i], "intermediateClass", ip), ip + ".intermediateClass");
                v.link_from = iri(required(vs[i], "linkFrom", ip), ip + ".linkFrom");
                v.link_to = iri(required(vs[i], "linkTo", ip), ip + ".linkTo");
                if (cfg.virtual_property(v.label)) {
                    fail(vs[i], ip + ".label", "duplicate virtual property label '" + v.label + "'");
                }
                cfg.virtual_properties.push_back(std::move(v));
            }
        }
        if (const auto o = n["ordering"]) {
            const std::string op = path + ".ordering";
            expect_map(o, op);
            check_keys(o, op, {"path", "next"});
            cfg.ordering = OrderingRule{iri(required(o, "path", op), op + ".path"),
                                        iri(required(o, "next", op), op + ".next")};
        }
        return cfg;
    }

    void check_label_query(const YAML::Node& n, const std::string& path, const std::string& text,
                           const DisplayRules& rules) const
    {
        store::Query q;
        try {
            q = store::parse_query(rules.sparql_prologue() + text);
        } catch (const ParseError& e) {
            fail(n, path, std::string("invalid SPARQL: ") + e.what());
        }
        if (q.form != store::Query::Form::select || q.select_all || q.projection.size() != 1) {
            fail(n, path, "label query must be a SELECT projecting exactly one variable");
        }
    }

    void fields(const YAML::Node& fs, const std::string& path, EntityConfig& cfg)
    {
        if (!fs.IsSequence()) {
            fail(fs, path, "must be a list");
        }
        std::set<int> orders;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string fp = path + "[" + std::to_string(i) + "]";
            const auto& f = fs[i];
            expect_map(f, fp);
            check_keys(f, fp, {"path", "displayName", "visible", "order", "widget", "autocomplete"});
            FieldRule rule;
            rule.path = iri(required(f, "path", fp), fp + ".path");
            if (cfg.field(rule.path)) {
                fail(f["path"], fp + ".path", "path <" + rule.path.str() + "> configured twice");
            }
            rule.display_name = f["displayName"] ? scalar(f["displayName"], fp + ".displayName") : rdf::local_name(rule.path);
            if (f["visible"]) {
                rule.visible = boolean(f["visible"], fp + ".visible");
            }
            rule.order = f["order"] ? integer(f["order"], fp + ".order") : static_cast<int>(i);
            if (!orders.insert(rule.order).second) {
                fail(f["order"] ? f["order"] : f, fp + ".order", "order " + std::to_string(rule.order) + " used twice");
            }
            if (f["widget"]) {
                const auto w = shacl::widget_from_string(scalar(f["widget"], fp + ".widget"));
                if (!w) {
                    fail(f["widget"], fp + ".widget", "unknown widget '" + f["widget"].as<std::string>() + "'");
                }
                rule.widget = w;
                check_widget(f["widget"], fp + ".widget", cfg, rule);
            }
            if (const auto a = f["autocomplete"]) {
                const std::string ap = fp + ".autocomplete";
                expect_map(a, ap);
                check_keys(a, ap, {"minChars", "target"});
                AutocompleteRule ac;
                if (a["minChars"]) {
                    const int m = integer(a["minChars"], ap + ".minChars");
                    if (m < 1) {
                        fail(a["minChars"], ap + ".minChars", "must be at least 1");
                    }
                    ac.min_chars = static_cast<std::size_t>(m);
                }
                if (a["target"]) {
                    const auto t = scalar(a["target"], ap + ".target");
                    if (t == "parent") {
                        ac.target = store::SearchTarget::parent;
                    } else if (t != "same-type") {
                        fail(a["target"], ap + ".target", "must be same-type or parent");
                    }
                }
                rule.autocomplete = ac;
            }
            cfg.fields.push_back(std::move(rule));
        }
    }

    void check_widget(const YAML::Node& n, const std::string& path, const EntityConfig& cfg, const FieldRule& rule) const
    {
        std::vector<ShapeId> shapes;
        if (cfg.binding.kind == Binding::Kind::shape) {
            shapes.push_back(cfg.binding.iri);
        } else {
            shapes = catalog_.shapes_targeting(cfg.binding.iri);
        }
        for (const auto& id : shapes) {
            shacl::FormSchema schema;
            try {
                schema = shacl::compile_shape(id, catalog_);
            } catch (const Error& e) {
                fail(n, path, std::string("cannot compile bound shape: ") + e.what());
            }
            const auto* field = schema.field(rule.path);
            if (field && !shacl::widget_override_compatible(*field, *rule.widget)) {
                fail(n, path, "widget '" + std::string(shacl::to_string(*rule.widget)) +
                                  "' is incompatible with the constraints of <" + rule.path.str() + "> in shape <" +
                                  id.str() + ">");
            }
        }
    }
};

} // namespace

DisplayRules load_rules(std::string_view yaml, const shacl::ShapeCatalog& catalog, std::string_view source)
{
    return Loader(catalog, std::string(source)).run(yaml);
}

DisplayRules load_rules_files(const std::vector<std::string>& paths, const shacl::ShapeCatalog& catalog)
{
    DisplayRules merged;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot read rules file " + path, path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        auto rules = load_rules(buf.str(), catalog, path);
        for (auto& [p, ns] : rules.prefixes) {
            merged.prefixes[p] = ns;
        }
        if (!(rules.defaults == RuleDefaults{})) {
            merged.defaults = rules.defaults;
        }
        for (auto& e : rules.entries) {
            for (const auto& existing : merged.entries) {
                if (existing.binding == e.binding) {
                    throw ConfigError(path + ": binding <" + e.binding.iri.str() + "> already configured", path);
                }
            }
            merged.entries.push_back(std::move(e));
        }
    }
    return merged;
}

std::string dump_rules(const DisplayRules& rules)
{
    const auto pm = rules.prefix_map();
    auto name = [&pm](const Iri& iri) {
        auto c = pm.compact(iri);
        if (c.size() > 1 && c.front() == '<') {
            return iri.str();
        }
        return c;
    };
    YAML::Emitter out;
    out << YAML::BeginMap;
    if (!rules.prefixes.empty()) {
        out << YAML::Key << "prefixes" << YAML::Value << YAML::BeginMap;
        for (const auto& [p, ns] : rules.prefixes) {
            out << YAML::Key << p << YAML::Value << ns;
        }
        out << YAML::EndMap;
    }
    out << YAML::Key << "defaults" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "orphanPolicy" << YAML::Value << std::string(to_string(rules.defaults.orphan_policy));
    out << YAML::Key << "lockTtlSeconds" << YAML::Value << rules.defaults.lock_ttl_seconds;
    out << YAML::EndMap;
    out << YAML::Key << "entities" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : rules.entries) {
        out << YAML::BeginMap;
        out << YAML::Key << (e.binding.kind == Binding::Kind::shape ? "shape" : "class") << YAML::Value
            << name(e.binding.iri);
        out << YAML::Key << "displayName" << YAML::Value << e.display_name;
        if (e.label_query) {
            out << YAML::Key << "labelQuery" << YAML::Value << YAML::Literal << *e.label_query;
        }
        if (e.orphan_policy) {
            out << YAML::Key << "orphanPolicy" << YAML::Value << std::string(to_string(*e.orphan_policy));
        }
        if (!e.fields.empty()) {
            out << YAML::Key << "fields" << YAML::Value << YAML::BeginSeq;
            for (const auto& f : e.fields) {
                out << YAML::BeginMap;
                out << YAML::Key << "path" << YAML::Value << name(f.path);
                out << YAML::Key << "displayName" << YAML::Value << f.display_name;
                out << YAML::Key << "visible" << YAML::Value << f.visible;
                out << YAML::Key << "order" << YAML::Value << f.order;
                if (f.widget) {
                    out << YAML::Key << "widget" << YAML::Value << std::string(shacl::to_string(*f.widget));
                }
                if (f.autocomplete) {
                    out << YAML::Key << "autocomplete" << YAML::Value << YAML::BeginMap;
                    out << YAML::Key << "minChars" << YAML::Value << f.autocomplete->min_chars;
                    out << YAML::Key << "target" << YAML::Value << std::string(target_name(f.autocomplete->target));
                    out << YAML::EndMap;
                }
                out << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        if (e.duplicates) {
            out << YAML::Key << "duplicates" << YAML::Value << YAML::BeginMap << YAML::Key << "anyOf" << YAML::Value
                << YAML::BeginSeq;
            for (const auto& clause : e.duplicates->any_of) {
                out << YAML::Flow << YAML::BeginSeq;
                for (const auto& p : clause) {
                    out << name(p);
                }
                out << YAML::EndSeq;
            }
            out << YAML::EndSeq << YAML::EndMap;
        }
        if (!e.virtual_properties.empty()) {
            out << YAML::Key << "virtualProperties" << YAML::Value << YAML::BeginSeq;
            for (const auto& v : e.virtual_properties) {
                out << YAML::BeginMap;
                out << YAML::Key << "label" << YAML::Value << v.label;
                out << YAML::Key << "targetShape" << YAML::Value << name(v.target_shape);
                out << YAML::Key << "intermediateClass" << YAML::Value << name(v.intermediate_class);
                out << YAML::Key << "linkFrom" << YAML::Value << name(v.link_from);
                out << YAML::Key << "linkTo" << YAML::Value << name(v.link_to);
                out << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        if (e.ordering) {
            out << YAML::Key << "ordering" << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "path" << YAML::Value << name(e.ordering->path);
            out << YAML::Key << "next" << YAML::Value << name(e.ordering->next);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::optional<EntityConfig> resolve_entity_config(const DisplayRules& rules, const std::vector<Iri>& classes,
                                                  const std::optional<ShapeId>& shape)
{
    if (shape) {
        for (const auto& e : rules.entries) {
            if (e.binding.kind == Binding::Kind::shape && e.binding.iri == *shape) {
                return e;
            }
        }
    }
    for (const auto& e : rules.entries) {
        if (e.binding.kind == Binding::Kind::cls &&
            std::find(classes.begin(), classes.end(), e.binding.iri) != classes.end()) {
            return e;
        }
    }
    return std::nullopt;
}

std::string compute_label(const Iri& entity, const EntityConfig* config, const DisplayRules& rules,
                          store::SparqlEndpoint& data, DiagnosticsLog* log)
{
    const std::string fallback = rdf::local_name(entity);
    if (!config || !config->label_query) {
        return fallback;
    }
    static const std::regex placeholder(R"([?$]entity(?![A-Za-z0-9_]))");
    const std::string query =
        rules.sparql_prologue() + std::regex_replace(*config->label_query, placeholder, "<" + entity.str() + ">");
    try {
        const auto r = data.query(query);
        if (r.kind == store::QueryResult::Kind::bindings && !r.rows.empty() && !r.variables.empty()) {
            for (const auto& row : r.rows) {
                if (row[0]) {
                    return rdf::lexical_value(*row[0]);
                }
            }
        }
    } catch (const std::exception& e) {
        if (log) {
            log->add(Diagnostic{Severity::warning, "label-query",
                                "label query for <" + entity.str() + "> failed: " + e.what(), 0});
        }
    }
    return fallback;
}

std::string build_duplicate_query(const DuplicateRule& rule, const std::map<Iri, std::vector<Term>>& values,
                                  const Iri& candidate, const std::optional<Iri>& cls)
{
    std::vector<std::string> clauses;
    std::size_t var = 0;
    for (const auto& clause : rule.any_of) {
        std::string body;
        bool complete = true;
        for (const auto& path : clause) {
            const auto it = values.find(path);
            if (it == values.end() || it->second.empty()) {
                complete = false;
                break;
            }
            if (it->second.size() == 1) {
                body += "?dup <" + path.str() + "> " + rdf::to_ntriples(it->second.front()) + " . ";
            } else {
                const std::string v = "?v" + std::to_string(var++);
                body += "VALUES " + v + " {";
                for (const auto& t : it->second) {
                    body += " " + rdf::to_ntriples(t);
                }
                body += " } ?dup <" + path.str() + "> " + v + " . ";
            }
        }
        if (complete) {
            clauses.push_back(std::move(body));
        }
    }
    if (clauses.empty()) {
        throw NoApplicableClauseError("no duplicate clause has values for all of its paths");
    }
    std::string where;
    if (clauses.size() == 1) {
        where = clauses.front();
    } else {
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            if (i) {
                where += "UNION ";
            }
            where += "{ " + clauses[i] + "} ";
        }
    }
    if (cls) {
        where += "?dup a <" + cls->str() + "> . ";
    }
    where += "FILTER(!sameTerm(?dup, <" + candidate.str() + ">))";
    return "SELECT DISTINCT ?dup WHERE { " + where + " } ORDER BY ?dup";
}

RulesHolder::RulesHolder(std::shared_ptr<const DisplayRules> rules) : rules_(std::move(rules)) {}

std::shared_ptr<const DisplayRules> RulesHolder::get() const
{
    std::lock_guard lock(mutex_);
    return rules_;
}

void RulesHolder::replace(std::shared_ptr<const DisplayRules> rules)
{
    std::lock_guard lock(mutex_);
    rules_ = std::move(rules);
}

} // namespace provcurate::display
