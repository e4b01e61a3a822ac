#include "provcurate/api/service.hpp"

#include "provcurate/api/codec.hpp"
#include "provcurate/rdf/delta.hpp"
#include "provcurate/rdf/vocab.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/shacl/resolve.hpp"
#include "provcurate/store/sparql.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace provcurate::api {

namespace {

/// Failure with a fixed status and error code.
class HttpError : public Error {
public:
    HttpError(int status, std::string code, const std::string& message, Json extra = Json::object())
        : Error(message), status(status), code(std::move(code)), extra(std::move(extra))
    {
    }
    int status;
    std::string code;
    Json extra;
};

ApiResponse json_response(int status, const Json& body)
{
    return {status, body.dump(), "application/json"};
}

ApiResponse error_response(int status, const std::string& code, const std::string& message,
                           const Json& extra = Json::object())
{
    Json body{{"error", code}, {"message", message}};
    body.update(extra);
    return json_response(status, body);
}

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Iri parse_iri(const std::string& text, const std::string& what)
{
    if (!rdf::is_absolute_iri(text)) {
        throw HttpError(400, "bad-request", what + " is not an absolute IRI: " + text);
    }
    return Iri(text);
}

std::size_t parse_count(const std::string& text, const std::string& what)
{
    if (text.empty() || text.size() > 9 || !std::all_of(text.begin(), text.end(), ::isdigit)) {
        throw HttpError(400, "bad-request", what + " must be a non-negative integer");
    }
    return std::stoul(text);
}

std::optional<std::string> param(const ApiRequest& req, const std::string& name)
{
    const auto it = req.query.find(name);
    if (it == req.query.end() || it->second.empty()) {
        return std::nullopt;
    }
    return it->second;
}

std::string string_field(const Json& body, const std::string& key)
{
    if (!body.contains(key) || !body[key].is_string()) {
        throw HttpError(400, "bad-request", "missing string field " + key);
    }
    return body[key].get<std::string>();
}

Json snapshots_json(const std::vector<provenance::Snapshot>& snaps)
{
    Json out = Json::array();
    for (const auto& s : snaps) {
        out.push_back(to_json(s));
    }
    return out;
}

Json lock_json(const LockRecord& rec)
{
    return {{"entity", rec.entity.str()},
            {"owner", rec.owner},
            {"token", rec.token},
            {"expiresAt", provenance::format_timestamp(rec.expires_at)}};
}

Json holder_json(const LockRecord& rec)
{
    return {{"holder", rec.owner}, {"expiresAt", provenance::format_timestamp(rec.expires_at)}};
}

/// Request context: the service, the request and the authenticated agent.
struct Call {
    ApiService& svc;
    const ApiRequest& req;
    std::optional<std::string> agent;

    const ServerConfig& cfg() const { return svc.config(); }

    /// Resolves the bearer token. Writes need an allowlisted agent; reads
    /// need one only when anonymous reading is off.
    void authenticate(bool write)
    {
        const auto it = req.headers.find("authorization");
        if (it == req.headers.end() || trim(it->second).empty()) {
            if (!write && cfg().anonymous_read) {
                return;
            }
            throw HttpError(401, "unauthorized", "missing bearer token");
        }
        const auto header = trim(it->second);
        if (header.size() <= 7 || header.compare(0, 7, "Bearer ") != 0) {
            throw HttpError(401, "unauthorized", "expected Authorization: Bearer <token>");
        }
        const auto found = cfg().agents.find(trim(header.substr(7)));
        if (found == cfg().agents.end()) {
            throw HttpError(401, "unauthorized", "unknown token");
        }
        if (!cfg().allowlist.count(found->second) && (write || !cfg().anonymous_read)) {
            throw HttpError(403, "forbidden", found->second + " is not allowed to edit");
        }
        agent = found->second;
    }

    std::vector<std::string> edit_tokens() const
    {
        const auto it = req.headers.find("x-edit-token");
        std::vector<std::string> out;
        if (it != req.headers.end()) {
            std::stringstream ss(it->second);
            for (std::string t; std::getline(ss, t, ',');) {
                if (!trim(t).empty()) {
                    out.push_back(trim(t));
                }
            }
        }
        if (out.empty()) {
            throw HttpError(428, "precondition-required", "X-Edit-Token header required");
        }
        return out;
    }

    void require_locks(const std::vector<Iri>& entities)
    {
        const auto tokens = edit_tokens();
        for (const auto& e : entities) {
            const bool held = std::any_of(tokens.begin(), tokens.end(),
                                          [&](const auto& t) { return svc.locks().holds(e, *agent, t); });
            if (held) {
                continue;
            }
            const auto current = svc.locks().current(e);
            Json extra{{"entity", e.str()}};
            if (current && current->owner != *agent) {
                extra.update(holder_json(*current));
            }
            throw HttpError(409, "lock-required", "no valid edit lock on " + e.str(), extra);
        }
    }

    curation::Actor actor(const Json& body) const
    {
        std::string source;
        if (body.contains("source") && body["source"].is_string()) {
            source = body["source"].get<std::string>();
        }
        return {*agent, source};
    }

    std::string label(const Iri& e, const rdf::EntityState& state)
    {
        const auto config = svc.curation().config_for(state);
        const auto rules = svc.curation().configuration().rules;
        return display::compute_label(e, config ? &*config : nullptr, *rules, svc.repository().data(),
                                      &svc.diagnostics());
    }
};

ApiResponse get_classes(Call& c)
{
    const auto configuration = c.svc.curation().configuration();
    Json out = Json::array();
    for (const auto& cc : c.svc.repository().discover_classes()) {
        Json j{{"class", cc.cls.str()}, {"count", cc.count}};
        Json shapes = Json::array();
        for (const auto& s : configuration.shapes->shapes_targeting(cc.cls)) {
            shapes.push_back(s.str());
        }
        j["shapes"] = shapes;
        if (const auto ec = display::resolve_entity_config(*configuration.rules, {cc.cls}, std::nullopt)) {
            j["displayName"] = ec->display_name;
        }
        out.push_back(j);
    }
    return json_response(200, out);
}

ApiResponse get_entities(Call& c)
{
    const auto configuration = c.svc.curation().configuration();
    std::optional<Iri> cls;
    if (const auto p = param(c.req, "class")) {
        cls = parse_iri(*p, "class");
    } else if (const auto s = param(c.req, "shape")) {
        const auto* shape = configuration.shapes->find(parse_iri(*s, "shape"));
        if (!shape) {
            throw NotFoundError("unknown shape " + *s);
        }
        cls = shape->target_class;
    }
    if (!cls) {
        throw HttpError(400, "bad-request", "class or shape with a target class required");
    }
    const std::size_t page = std::max<std::size_t>(1, param(c.req, "page") ? parse_count(*param(c.req, "page"), "page") : 1);
    const std::size_t size = std::clamp<std::size_t>(
        param(c.req, "pageSize") ? parse_count(*param(c.req, "pageSize"), "pageSize") : 20, 1, 200);
    auto& repo = c.svc.repository();
    const auto where = "WHERE { ?e <" + std::string(vocab::rdf_type) + "> <" + cls->str() + "> }";
    const auto total = repo.query_data("SELECT (COUNT(?e) AS ?n) " + where);
    const auto rows = repo.query_data("SELECT DISTINCT ?e " + where + " ORDER BY ?e LIMIT " + std::to_string(size) +
                                      " OFFSET " + std::to_string((page - 1) * size));
    Json items = Json::array();
    for (std::size_t i = 0; i < rows.rows.size(); ++i) {
        const auto& t = rows.get(i, "e");
        if (!t || !rdf::is_iri(*t)) {
            continue;
        }
        const auto e = std::get<Iri>(*t);
        items.push_back({{"iri", e.str()}, {"label", c.label(e, repo.fetch_entity_state(e))}});
    }
    const auto n = total.rows.empty() || !total.get(0, "n") ? std::string("0") : rdf::lexical_value(*total.get(0, "n"));
    return json_response(200, {{"class", cls->str()},
                               {"page", page},
                               {"pageSize", size},
                               {"total", std::stoul(n)},
                               {"items", items}});
}

ApiResponse get_schema(Call& c, const std::string& shape_text)
{
    const auto configuration = c.svc.curation().configuration();
    const auto shape = parse_iri(shape_text, "shape");
    auto out = to_json(shacl::compile_shape(shape, *configuration.shapes));
    std::vector<Iri> classes;
    if (const auto* s = configuration.shapes->find(shape); s && s->target_class) {
        classes.push_back(*s->target_class);
    }
    if (const auto ec = display::resolve_entity_config(*configuration.rules, classes, shape)) {
        out["display"] = to_json(*ec);
    }
    return json_response(200, out);
}

ApiResponse get_entity(Call& c, const Iri& e)
{
    const auto state = c.svc.repository().fetch_entity_state(e);
    if (state.empty()) {
        const bool deleted = c.svc.provenance().has_history(e) && c.svc.provenance().history(e).deleted();
        throw HttpError(404, "not-found", deleted ? e.str() + " is deleted" : "no entity " + e.str(),
                        {{"deleted", deleted}});
    }
    Json out{{"iri", e.str()}, {"label", c.label(e, state)}, {"properties", to_json(state)}};
    Json types = Json::array();
    for (const auto& t : state.types()) {
        types.push_back(t.str());
    }
    out["types"] = types;
    if (const auto schema = c.svc.curation().schema_for(state)) {
        out["shape"] = schema->shape.str();
        out["schema"] = to_json(*schema);
    }
    if (const auto config = c.svc.curation().config_for(state)) {
        out["display"] = to_json(*config);
    }
    if (const auto lock = c.svc.locks().current(e)) {
        out["lock"] = holder_json(*lock);
    }
    return json_response(200, out);
}

ApiResponse post_entity(Call& c)
{
    const auto body = parse_body(c.req.body);
    const auto r = c.svc.curation().create_entity(submission_from_json(body), c.actor(body));
    return json_response(201, {{"entity", r.entity.str()}, {"snapshots", snapshots_json(r.snapshots)}});
}

ApiResponse put_entity(Call& c, const Iri& e)
{
    c.require_locks({e});
    const auto body = parse_body(c.req.body);
    const auto decisions = decisions_from_json(body.value("orphanDecisions", Json()));
    const auto r = c.svc.curation().update_entity(e, submission_from_json(body), c.actor(body), decisions);
    return json_response(200, {{"snapshot", to_json(r.snapshot)}, {"snapshots", snapshots_json(r.snapshots)}});
}

ApiResponse delete_entity(Call& c, const Iri& e)
{
    c.require_locks({e});
    const auto body = parse_body(c.req.body);
    const auto decisions = decisions_from_json(body.value("orphanDecisions", Json()));
    const auto snaps = c.svc.curation().delete_entity(e, c.actor(body), decisions);
    return json_response(200, {{"snapshots", snapshots_json(snaps)}});
}

ApiResponse get_history(Call& c, const Iri& e)
{
    return json_response(200, to_json(c.svc.provenance().history(e)));
}

ApiResponse get_version(Call& c, const Iri& e, std::size_t n)
{
    const auto chain = c.svc.provenance().history(e);
    if (n < 1 || n > chain.snapshots.size()) {
        throw HttpError(404, "not-found", e.str() + " has no version " + std::to_string(n));
    }
    const auto& snap = chain.snapshots[n - 1];
    return json_response(200, {{"entity", e.str()},
                               {"index", n},
                               {"snapshot", to_json(snap)},
                               {"properties", to_json(c.svc.provenance().materialize(e, n))}});
}

ApiResponse post_restore(Call& c, const Iri& e, std::size_t n)
{
    c.require_locks({e});
    const auto body = parse_body(c.req.body);
    const auto actor = c.actor(body);
    const auto r = c.svc.provenance().restore(e, n, actor.agent, actor.source);
    return json_response(200, {{"snapshot", to_json(r.snapshot)}, {"related", snapshots_json(r.related)}});
}

ApiResponse post_reorder(Call& c, const Iri& e)
{
    c.require_locks({e});
    const auto body = parse_body(c.req.body);
    const auto path = parse_iri(string_field(body, "path"), "path");
    if (!body.contains("order") || !body["order"].is_array()) {
        throw HttpError(400, "bad-request", "order must be a list of proxy IRIs");
    }
    std::vector<Iri> order;
    for (const auto& o : body["order"]) {
        if (!o.is_string()) {
            throw HttpError(400, "bad-request", "order must be a list of proxy IRIs");
        }
        order.push_back(parse_iri(o.get<std::string>(), "order"));
    }
    const auto state = c.svc.repository().fetch_entity_state(e);
    if (state.empty()) {
        throw NotFoundError("no entity " + e.str());
    }
    const auto config = c.svc.curation().config_for(state);
    if (!config || !config->ordering || config->ordering->path != path) {
        throw HttpError(400, "bad-request", path.str() + " is not an ordered property of " + e.str());
    }
    const auto snaps = c.svc.curation().reorder(e, *config->ordering, order, c.actor(body));
    return json_response(200, {{"snapshots", snapshots_json(snaps)}});
}

ApiResponse post_merge(Call& c)
{
    const auto body = parse_body(c.req.body);
    const auto survivor = parse_iri(string_field(body, "survivor"), "survivor");
    const auto absorbed = parse_iri(string_field(body, "absorbed"), "absorbed");
    c.require_locks({survivor, absorbed});
    const auto r = c.svc.curation().merge_entities(survivor, absorbed, c.actor(body));
    Json rewritten = Json::array();
    for (const auto& s : r.rewritten_subjects) {
        rewritten.push_back(s.str());
    }
    Json incorporated = Json::array();
    for (const auto& t : r.incorporated) {
        incorporated.push_back({{"predicate", t.predicate.str()}, {"object", to_json(t.object)}});
    }
    return json_response(200, {{"survivor", r.survivor.str()},
                               {"absorbed", r.absorbed.str()},
                               {"rewrittenSubjects", rewritten},
                               {"incorporated", incorporated},
                               {"snapshots", snapshots_json(r.snapshots)}});
}

ApiResponse get_autocomplete(Call& c)
{
    const auto configuration = c.svc.curation().configuration();
    const auto shape_text = param(c.req, "shape");
    const auto field_text = param(c.req, "field");
    if (!shape_text || !field_text) {
        throw HttpError(400, "bad-request", "shape and field required");
    }
    const auto shape = parse_iri(*shape_text, "shape");
    const auto field = parse_iri(*field_text, "field");
    const auto* node = configuration.shapes->find(shape);
    if (!node) {
        throw NotFoundError("unknown shape " + shape.str());
    }
    if (!node->target_class) {
        throw HttpError(400, "bad-request", shape.str() + " has no target class");
    }
    display::AutocompleteRule rule;
    const auto config = display::resolve_entity_config(*configuration.rules, {*node->target_class}, shape);
    if (config) {
        if (const auto* f = config->field(field); f && f->autocomplete) {
            rule = *f->autocomplete;
        }
    }
    auto& repo = c.svc.repository();
    Json out = Json::array();
    for (const auto& hit : repo.search(*node->target_class, field, param(c.req, "q").value_or(""), rule.min_chars,
                                       rule.target)) {
        out.push_back({{"entity", hit.entity.str()},
                       {"value", hit.value},
                       {"label", c.label(hit.entity, repo.fetch_entity_state(hit.entity))}});
    }
    return json_response(200, out);
}

ApiResponse post_duplicates(Call& c)
{
    const auto body = parse_body(c.req.body);
    rdf::EntityState candidate(body.contains("entity") ? parse_iri(string_field(body, "entity"), "entity")
                                                       : Iri("urn:provcurate:candidate"));
    std::optional<Iri> shape;
    if (body.contains("shape")) {
        shape = parse_iri(string_field(body, "shape"), "shape");
    }
    if (body.contains("class")) {
        candidate.add(Iri(std::string(vocab::rdf_type)), parse_iri(string_field(body, "class"), "class"));
    } else if (shape) {
        const auto* node = c.svc.curation().configuration().shapes->find(*shape);
        if (node && node->target_class) {
            candidate.add(Iri(std::string(vocab::rdf_type)), *node->target_class);
        }
    }
    if (body.contains("values")) {
        if (!body["values"].is_object()) {
            throw HttpError(400, "bad-request", "values must map property IRIs to value lists");
        }
        for (const auto& [path, vals] : body["values"].items()) {
            const auto p = parse_iri(path, "values");
            for (const auto& v : vals.is_array() ? vals : Json::array({vals})) {
                if (v.is_string()) {
                    candidate.add(p, rdf::Literal::string(v.get<std::string>()));
                } else if (v.is_object() && v.contains("ref")) {
                    candidate.add(p, parse_iri(string_field(v, "ref"), "ref"));
                } else {
                    candidate.add(p, term_from_json(v));
                }
            }
        }
    }
    const auto config = c.svc.curation().config_for(candidate, shape);
    Json out = Json::array();
    if (config && config->duplicates) {
        for (const auto& m : c.svc.curation().find_duplicates(candidate, *config)) {
            out.push_back({{"entity", m.entity.str()}, {"label", m.label}});
        }
    }
    return json_response(200, out);
}

ApiResponse get_deleted(Call& c)
{
    Json out = Json::array();
    for (const auto& d : c.svc.provenance().list_deleted()) {
        out.push_back(to_json(d));
    }
    return json_response(200, out);
}

ApiResponse post_lock(Call& c, const Iri& e)
{
    return json_response(200, lock_json(c.svc.locks().acquire(e, *c.agent)));
}

ApiResponse delete_lock(Call& c, const Iri& e)
{
    const auto tokens = c.edit_tokens();
    c.svc.locks().release(e, tokens.front());
    return {204, "", "application/json"};
}

ApiResponse get_diagnostics(Call& c)
{
    Json out = Json::array();
    for (const auto& d : c.svc.diagnostics().snapshot()) {
        out.push_back(to_json(d));
    }
    return json_response(200, out);
}

ApiResponse post_reload(Call& c)
{
    c.svc.reload();
    const auto configuration = c.svc.curation().configuration();
    return json_response(200, {{"shapes", configuration.shapes->size()},
                               {"entries", configuration.rules->entries.size()}});
}

bool is_write(const std::string& method)
{
    return method != "GET" && method != "HEAD";
}

ApiResponse method_not_allowed(const ApiRequest& req)
{
    return error_response(405, "method-not-allowed", req.method + " not supported on " + req.path);
}

} // namespace

ApiService::ApiService(ServerConfig config, ServiceOptions options)
    : config_(std::move(config)),
      clock_(options.clock),
      data_(std::move(options.data)),
      provenance_(std::move(options.provenance)),
      locks_(std::chrono::seconds(config_.lock_ttl_seconds), options.clock, options.record_lock_history)
{
    const store::RetryPolicy retry{config_.endpoints.retries, std::chrono::milliseconds(200)};
    if (!data_) {
        data_ = store::make_endpoint(config_.endpoints.data, config_.endpoints.timeout, retry, config_.base_iri);
    }
    if (!provenance_) {
        provenance_ = config_.endpoints.provenance == config_.endpoints.data
                          ? data_
                          : store::make_endpoint(config_.endpoints.provenance, config_.endpoints.timeout, retry,
                                                 config_.base_iri);
    }
    if (config_.data_file) {
        auto* embedded = dynamic_cast<store::EmbeddedEndpoint*>(data_.get());
        if (!embedded) {
            throw ConfigError("config: dataFile: requires an embedded data store");
        }
        embedded->load_nquads(read_file(*config_.data_file));
    }
    repo_ = std::make_unique<store::Repository>(data_, provenance_, config_.base_iri);

    provenance::ProvenanceConfig pc;
    pc.baseline_source = config_.baseline_source;
    if (config_.baseline_created_at) {
        pc.baseline_created_at = provenance::parse_timestamp(*config_.baseline_created_at);
    }
    prov_ = std::make_unique<provenance::ProvenanceEngine>(*repo_, pc, clock_);
    curation_ = std::make_unique<curation::CurationEngine>(
        *prov_, curation::make_mint_strategy(config_.mint_strategy, config_.base_iri),
        load_configuration(file_times_));
}

ApiService::~ApiService() = default;

curation::Configuration load_curation_configuration(const ServerConfig& config, std::vector<Diagnostic>& warnings)
{
    auto catalog = std::make_shared<shacl::ShapeCatalog>();
    for (const auto& path : config.shape_files) {
        try {
            catalog->merge(shacl::parse_shapes(read_file(path), path));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    warnings.insert(warnings.end(), catalog->warnings().begin(), catalog->warnings().end());
    for (const auto& [from, to] : catalog->dangling_references()) {
        warnings.push_back({Severity::warning, "shapes", from.str() + " references missing shape " + to.str(), 0});
    }
    display::DisplayRules rules;
    try {
        rules = display::load_rules_files(config.rule_files, *catalog);
    } catch (const display::ConfigError& e) {
        throw ConfigError(e.what());
    }
    if (config.default_orphan_policy) {
        rules.defaults.orphan_policy = *config.default_orphan_policy;
    }
    rules.defaults.lock_ttl_seconds = config.lock_ttl_seconds;
    return {catalog, std::make_shared<display::DisplayRules>(std::move(rules))};
}

curation::Configuration ApiService::load_configuration(FileTimes& times)
{
    std::vector<Diagnostic> warnings;
    auto configuration = load_curation_configuration(config_, warnings);
    times.clear();
    for (const auto* files : {&config_.shape_files, &config_.rule_files}) {
        for (const auto& path : *files) {
            times[path] = std::filesystem::last_write_time(path);
        }
    }
    diagnostics_.add_all(warnings);
    return configuration;
}

void ApiService::reload()
{
    std::lock_guard lock(reload_mutex_);
    FileTimes times;
    try {
        auto configuration = load_configuration(times);
        curation_->reconfigure(std::move(configuration));
        file_times_ = std::move(times);
        diagnostics_.add({Severity::info, "reload", "configuration reloaded", 0});
    } catch (const ConfigError& e) {
        diagnostics_.add({Severity::error, "reload", e.what(), 0});
        throw;
    }
}

bool ApiService::reload_if_changed()
{
    {
        std::lock_guard lock(reload_mutex_);
        bool changed = false;
        for (const auto& [path, time] : file_times_) {
            std::error_code ec;
            const auto now = std::filesystem::last_write_time(path, ec);
            changed = changed || ec || now != time;
        }
        if (!changed) {
            return false;
        }
    }
    reload();
    return true;
}

ApiResponse ApiService::handle(const ApiRequest& request)
{
    try {
        return dispatch(request);
    } catch (const HttpError& e) {
        return error_response(e.status, e.code, e.what(), e.extra);
    } catch (const validation::ValidationError& e) {
        Json violations = Json::array();
        for (const auto& v : e.violations()) {
            violations.push_back(to_json(v));
        }
        return error_response(422, "validation-failed", e.what(), {{"violations", violations}});
    } catch (const validation::CoercionError& e) {
        return error_response(422, "validation-failed", e.what());
    } catch (const curation::OrphanDecisionRequired& e) {
        Json candidates = Json::array();
        for (const auto& o : e.candidates()) {
            candidates.push_back(to_json(o));
        }
        return error_response(409, "orphan-decision-required", e.what(), {{"candidates", candidates}});
    } catch (const LockConflict& e) {
        return error_response(409, "locked", e.what(), holder_json(e.holder()));
    } catch (const LockTokenMismatch& e) {
        return error_response(403, "forbidden", e.what());
    } catch (const NoOpError& e) {
        return error_response(409, "no-op", e.what());
    } catch (const NotFoundError& e) {
        return error_response(404, "not-found", e.what());
    } catch (const provenance::MergeError& e) {
        return error_response(409, "conflict", e.what());
    } catch (const provenance::RestoreError& e) {
        return error_response(409, "conflict", e.what());
    } catch (const provenance::ChainError& e) {
        return error_response(409, "conflict", e.what());
    } catch (const curation::OrderError& e) {
        return error_response(400, "bad-request", e.what());
    } catch (const display::NoApplicableClauseError& e) {
        return error_response(400, "bad-request", e.what());
    } catch (const ConfigError& e) {
        return error_response(400, "bad-config", e.what());
    } catch (const ParseError& e) {
        return error_response(400, "bad-request", e.what());
    } catch (const ContractViolation& e) {
        return error_response(400, "bad-request", e.what());
    } catch (const std::exception& e) {
        diagnostics_.add({Severity::error, "api", request.method + " " + request.path + ": " + e.what(), 0});
        return error_response(500, "internal", e.what());
    }
}

ApiResponse ApiService::dispatch(const ApiRequest& req)
{
    static const std::string prefix = "/api/";
    if (req.path.compare(0, prefix.size(), prefix) != 0) {
        return error_response(404, "not-found", "no route " + req.path);
    }
    const auto rest = req.path.substr(prefix.size());
    const auto& m = req.method;
    Call c{*this, req, std::nullopt};
    c.authenticate(is_write(m));

    if (rest == "classes") {
        return m == "GET" ? get_classes(c) : method_not_allowed(req);
    }
    if (rest == "entities") {
        return m == "GET" ? get_entities(c) : method_not_allowed(req);
    }
    if (rest.rfind("schema/", 0) == 0) {
        return m == "GET" ? get_schema(c, rest.substr(7)) : method_not_allowed(req);
    }
    if (rest == "entity") {
        return m == "POST" ? post_entity(c) : method_not_allowed(req);
    }
    if (rest == "merge") {
        return m == "POST" ? post_merge(c) : method_not_allowed(req);
    }
    if (rest == "autocomplete") {
        return m == "GET" ? get_autocomplete(c) : method_not_allowed(req);
    }
    if (rest == "duplicates") {
        return m == "GET" || m == "POST" ? post_duplicates(c) : method_not_allowed(req);
    }
    if (rest == "deleted") {
        return m == "GET" ? get_deleted(c) : method_not_allowed(req);
    }
    if (rest == "diagnostics") {
        return m == "GET" ? get_diagnostics(c) : method_not_allowed(req);
    }
    if (rest == "admin/reload") {
        return m == "POST" ? post_reload(c) : method_not_allowed(req);
    }
    if (rest.rfind("lock/", 0) == 0) {
        const auto e = parse_iri(rest.substr(5), "entity");
        if (m == "POST") {
            return post_lock(c, e);
        }
        return m == "DELETE" ? delete_lock(c, e) : method_not_allowed(req);
    }
    if (rest.rfind("entity/", 0) == 0) {
        const auto tail = rest.substr(7);
        static const std::regex versioned(R"(^(.+)/(version|restore)/(\d+)$)");
        static const std::regex suffixed(R"(^(.+)/(history|reorder)$)");
        std::smatch match;
        if (std::regex_match(tail, match, versioned)) {
            const auto e = parse_iri(match[1], "entity");
            const auto n = parse_count(match[3], "version");
            if (match[2] == "version") {
                return m == "GET" ? get_version(c, e, n) : method_not_allowed(req);
            }
            return m == "POST" ? post_restore(c, e, n) : method_not_allowed(req);
        }
        if (std::regex_match(tail, match, suffixed)) {
            const auto e = parse_iri(match[1], "entity");
            if (match[2] == "history") {
                return m == "GET" ? get_history(c, e) : method_not_allowed(req);
            }
            return m == "POST" ? post_reorder(c, e) : method_not_allowed(req);
        }
        const auto e = parse_iri(tail, "entity");
        if (m == "GET") {
            return get_entity(c, e);
        }
        if (m == "PUT") {
            return put_entity(c, e);
        }
        return m == "DELETE" ? delete_entity(c, e) : method_not_allowed(req);
    }
    return error_response(404, "not-found", "no route " + req.path);
}

void mount_api(httplib::Server& server, ApiService& service)
{
    const auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
        ApiRequest r;
        r.method = req.method;
        r.path = req.path;
        r.body = req.body;
        for (const auto& [k, v] : req.params) {
            r.query.emplace(k, v);
        }
        for (const auto& [k, v] : req.headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
            r.headers[key] = v;
        }
        const auto out = service.handle(r);
        res.status = out.status;
        if (!out.body.empty()) {
            res.set_content(out.body, out.content_type);
        }
    };
    const std::string pattern = R"(/api/.*)";
    server.Get(pattern, handler);
    server.Post(pattern, handler);
    server.Put(pattern, handler);
    server.Delete(pattern, handler);
}

} // namespace provcurate::api
