#include "provcurate/curation/engine.hpp"

#include "provcurate/rdf/vocab.hpp"
#include "provcurate/shacl/resolve.hpp"

#include <algorithm>

namespace provcurate::curation {

using provenance::ChangeKind;
using provenance::ChangeRecord;
using provenance::ChangeSet;
using rdf::Term;
using rdf::Triple;

namespace {

const Iri& rdf_type()
{
    static const Iri t(std::string(vocab::rdf_type));
    return t;
}

EntityState without_predicate(const EntityState& state, const Iri& predicate)
{
    std::set<Triple> triples;
    for (const auto& t : state.triples()) {
        if (t.predicate != predicate) {
            triples.insert(t);
        }
    }
    return EntityState(state.entity(), std::move(triples));
}

std::vector<Iri> iri_objects(const EntityState& state, const Iri& predicate)
{
    std::vector<Iri> out;
    for (const auto& o : state.objects(predicate)) {
        if (const auto* i = std::get_if<Iri>(&o)) {
            out.push_back(*i);
        }
    }
    return out;
}

Term coerce(const shacl::FormField* field, const SubmissionValue& v)
{
    if (v.language) {
        return rdf::Literal(v.text, *v.language);
    }
    if (v.datatype) {
        return rdf::Literal(v.text, *v.datatype);
    }
    if (field == nullptr) {
        return rdf::Literal::string(v.text);
    }
    if (field->options) {
        for (const auto& o : *field->options) {
            if (rdf::lexical_value(o) == v.text) {
                return o;
            }
        }
    }
    std::vector<Iri> datatypes;
    for (const auto& r : field->rules) {
        if (r.kind == shacl::RuleKind::datatype && !r.condition && r.datatype) {
            datatypes.push_back(*r.datatype);
        }
    }
    for (const auto& a : field->alternatives) {
        if (a.datatype) {
            datatypes.push_back(*a.datatype);
        }
    }
    for (const auto& dt : datatypes) {
        if (validation::is_valid_lexical(v.text, dt)) {
            return rdf::Literal(v.text, dt);
        }
    }
    if (!datatypes.empty()) {
        return rdf::Literal(v.text, datatypes.front());
    }
    return rdf::Literal::string(v.text);
}

std::vector<shacl::ShapeId> shape_preference(const display::DisplayRules& rules)
{
    std::vector<shacl::ShapeId> out;
    for (const auto& e : rules.entries) {
        if (e.binding.kind == display::Binding::Kind::shape) {
            out.push_back(e.binding.iri);
        }
    }
    return out;
}

} // namespace

std::string_view to_string(OrphanReason r) noexcept
{
    return r == OrphanReason::unreferenced ? "unreferenced" : "proxy-detached";
}

OrphanDecisionRequired::OrphanDecisionRequired(std::vector<OrphanCandidate> candidates)
    : Error("orphan decision required for " + std::to_string(candidates.size()) + " entities"),
      candidates_(std::move(candidates))
{
}

SubmissionValue SubmissionValue::literal(std::string text)
{
    SubmissionValue v;
    v.text = std::move(text);
    return v;
}

SubmissionValue SubmissionValue::typed(std::string text, Iri datatype)
{
    SubmissionValue v;
    v.text = std::move(text);
    v.datatype = std::move(datatype);
    return v;
}

SubmissionValue SubmissionValue::ref(Iri iri)
{
    SubmissionValue v;
    v.kind = Kind::reference;
    v.reference = std::move(iri);
    return v;
}

SubmissionValue SubmissionValue::child(FormSubmission sub)
{
    SubmissionValue v;
    v.kind = Kind::nested;
    v.nested = std::make_shared<FormSubmission>(std::move(sub));
    return v;
}

CurationEngine::CurationEngine(provenance::ProvenanceEngine& prov, std::shared_ptr<MintStrategy> mint,
                               Configuration config)
    : prov_(prov), mint_(std::move(mint)), config_(std::move(config))
{
    if (!mint_) {
        throw ContractViolation("curation engine without mint strategy");
    }
}

Configuration CurationEngine::configuration() const
{
    std::lock_guard lock(config_mutex_);
    return config_;
}

void CurationEngine::reconfigure(Configuration config)
{
    std::lock_guard lock(config_mutex_);
    config_ = std::move(config);
}

Iri CurationEngine::mint(const Iri& kind)
{
    return mint_iri(kind, *mint_, repository());
}

std::optional<shacl::FormSchema> CurationEngine::schema_for(const Configuration& cfg, const EntityState& state,
                                                            const std::optional<shacl::ShapeId>& shape) const
{
    if (shape) {
        return shacl::compile_shape(*shape, *cfg.shapes);
    }
    if (state.types().empty()) {
        return std::nullopt;
    }
    try {
        const auto pref = shape_preference(*cfg.rules);
        return shacl::compile_shape(shacl::resolve_shape(state, *cfg.shapes, pref), *cfg.shapes);
    } catch (const shacl::NoShapeError&) {
        return std::nullopt;
    }
}

std::optional<shacl::FormSchema> CurationEngine::schema_for(const EntityState& state,
                                                            const std::optional<shacl::ShapeId>& shape) const
{
    return schema_for(configuration(), state, shape);
}

std::optional<display::EntityConfig> CurationEngine::config_for(const Configuration& cfg, const EntityState& state,
                                                                const std::optional<shacl::ShapeId>& shape) const
{
    std::optional<shacl::ShapeId> resolved = shape;
    if (!resolved && !state.types().empty()) {
        try {
            resolved = shacl::resolve_shape(state, *cfg.shapes, shape_preference(*cfg.rules));
        } catch (const shacl::NoShapeError&) {
        }
    }
    return display::resolve_entity_config(*cfg.rules, state.types(), resolved);
}

std::optional<display::EntityConfig> CurationEngine::config_for(const EntityState& state,
                                                                const std::optional<shacl::ShapeId>& shape) const
{
    return config_for(configuration(), state, shape);
}

std::set<Triple> CurationEngine::inbound(ChangeSet& cs, const Iri& entity)
{
    std::set<Triple> in = repository().fetch_inbound(entity);
    const Term target = entity;
    for (const auto& t : cs.pending_deletions()) {
        if (t.object == target) {
            in.erase(t);
        }
    }
    for (const auto& t : cs.pending_insertions()) {
        if (t.object == target) {
            in.insert(t);
        }
    }
    for (auto it = in.begin(); it != in.end();) {
        const auto* s = std::get_if<Iri>(&it->subject);
        it = s != nullptr && *s == entity ? in.erase(it) : std::next(it);
    }
    return in;
}

std::map<Iri, std::vector<Term>> CurationEngine::fill_values(ChangeSet& cs, const Configuration& cfg,
                                                             const FormSubmission& sub,
                                                             const std::optional<shacl::FormSchema>& schema,
                                                             const Actor& actor, EntityState& state,
                                                             std::vector<Draft>& drafts)
{
    std::map<Iri, std::vector<Term>> produced;
    for (const auto& [path, values] : sub.values) {
        const shacl::FormField* field = schema ? schema->field(path) : nullptr;
        for (const auto& v : values) {
            Term term;
            switch (v.kind) {
            case SubmissionValue::Kind::literal:
                term = coerce(field, v);
                break;
            case SubmissionValue::Kind::reference:
                if (v.reference.empty()) {
                    throw ContractViolation("empty reference for " + path.str());
                }
                term = v.reference;
                break;
            case SubmissionValue::Kind::nested: {
                if (!v.nested) {
                    throw ContractViolation("nested value without submission for " + path.str());
                }
                FormSubmission child = *v.nested;
                if (!child.shape && field != nullptr) {
                    child.shape = field->nested_shape;
                }
                term = draft(cs, cfg, child, actor, drafts);
                break;
            }
            }
            state.add(path, term);
            produced[path].push_back(term);
        }
    }
    return produced;
}

Iri CurationEngine::draft(ChangeSet& cs, const Configuration& cfg, const FormSubmission& sub, const Actor& actor,
                          std::vector<Draft>& drafts)
{
    const auto schema = sub.shape ? std::optional(shacl::compile_shape(*sub.shape, *cfg.shapes)) : std::nullopt;
    std::optional<Iri> cls = sub.cls;
    if (!cls && schema) {
        cls = schema->target_class;
    }
    if (!cls && !sub.shape) {
        throw ContractViolation("submission without class or shape");
    }
    const Iri iri = mint(cls ? *cls : *sub.shape);
    EntityState state(iri);
    if (cls) {
        state.add(rdf_type(), *cls);
    }
    auto produced = fill_values(cs, cfg, sub, schema, actor, state, drafts);
    const auto config = config_for(cfg, state, sub.shape);
    for (const auto& link : sub.virtual_links) {
        const auto* rule = config ? config->virtual_property(link.property) : nullptr;
        if (rule == nullptr) {
            throw ContractViolation("unknown virtual property: " + link.property);
        }
        drafts.push_back(virtual_draft(cs, cfg, *rule, iri, link.target, drafts));
    }
    if (config && config->ordering) {
        std::vector<Iri> order;
        for (const auto& t : produced[config->ordering->path]) {
            if (const auto* i = std::get_if<Iri>(&t)) {
                order.push_back(*i);
            }
        }
        chain(cs, order, config->ordering->next, drafts, actor);
    }
    drafts.push_back({iri, std::move(state), schema});
    return iri;
}

CurationEngine::Draft CurationEngine::virtual_draft(ChangeSet& cs, const Configuration& cfg,
                                                    const display::VirtualPropertyRule& rule, const Iri& subject,
                                                    const Iri& target, const std::vector<Draft>& drafts)
{
    const bool drafted =
        std::any_of(drafts.begin(), drafts.end(), [&](const Draft& d) { return d.iri == target; });
    if (!drafted && prov_.current_state(cs, target).empty()) {
        throw NotFoundError("virtual property target not found: " + target.str());
    }
    Draft d;
    d.iri = mint(rule.intermediate_class);
    d.state = EntityState(d.iri);
    d.state.add(rdf_type(), rule.intermediate_class);
    d.state.add(rule.link_from, subject);
    d.state.add(rule.link_to, target);
    if (cfg.shapes->contains(rule.target_shape)) {
        d.schema = shacl::compile_shape(rule.target_shape, *cfg.shapes);
    }
    return d;
}

VirtualExpansion CurationEngine::expand_virtual_property(ChangeSet& cs, const display::VirtualPropertyRule& rule,
                                                         const Iri& subject, const Iri& target, const Actor& actor)
{
    std::vector<Draft> drafts{virtual_draft(cs, configuration(), rule, subject, target, {})};
    stage_drafts(cs, drafts, actor);
    const auto& t = drafts.front().state.triples();
    return {drafts.front().iri, {t.begin(), t.end()}};
}

void CurationEngine::chain(ChangeSet& cs, const std::vector<Iri>& order, const Iri& next, std::vector<Draft>& drafts,
                           const Actor& actor)
{
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Iri& p = order[i];
        auto apply = [&](const EntityState& current) {
            EntityState updated = without_predicate(current, next);
            if (i + 1 < order.size()) {
                updated.add(next, order[i + 1]);
            }
            return updated;
        };
        auto d = std::find_if(drafts.begin(), drafts.end(), [&](const Draft& x) { return x.iri == p; });
        if (d != drafts.end()) {
            d->state = apply(d->state);
            continue;
        }
        const EntityState current = prov_.current_state(cs, p);
        if (current.empty()) {
            throw OrderError("proxy not found: " + p.str());
        }
        const EntityState updated = apply(current);
        if (updated != current) {
            prov_.record_change(cs, ChangeRecord{p, ChangeKind::update, current, updated, actor.agent, actor.source,
                                                 "Position in sequence changed"});
        }
    }
}

std::vector<validation::Violation> CurationEngine::validate_drafts(const std::vector<Draft>& drafts) const
{
    std::vector<validation::Violation> out;
    for (const auto& d : drafts) {
        if (d.schema) {
            auto v = validation::validate_entity(d.state, *d.schema);
            out.insert(out.end(), v.begin(), v.end());
        }
    }
    return out;
}

void CurationEngine::stage_drafts(ChangeSet& cs, const std::vector<Draft>& drafts, const Actor& actor)
{
    if (auto v = validate_drafts(drafts); !v.empty()) {
        throw validation::ValidationError(std::move(v));
    }
    for (const auto& d : drafts) {
        prov_.record_change(cs, ChangeRecord{d.iri, ChangeKind::create, EntityState(d.iri), d.state, actor.agent,
                                             actor.source, ""});
    }
}

CreateResult CurationEngine::create_entity(const FormSubmission& submission, const Actor& actor)
{
    const Configuration cfg = configuration();
    ChangeSet cs = prov_.begin();
    std::vector<Draft> drafts;
    const Iri root = draft(cs, cfg, submission, actor, drafts);
    stage_drafts(cs, drafts, actor);
    prov_.commit(cs);
    return {root, cs.snapshots()};
}

ChangeResult CurationEngine::update_entity(const Iri& entity, const FormSubmission& submission, const Actor& actor,
                                           const OrphanDecisions& decisions)
{
    const Configuration cfg = configuration();
    ChangeSet cs = prov_.begin();
    const EntityState before = prov_.current_state(cs, entity);
    if (before.empty()) {
        throw NotFoundError("entity not found: " + entity.str());
    }
    const auto schema = schema_for(cfg, before, submission.shape);
    EntityState after = before;
    for (const auto& [path, values] : submission.values) {
        after = without_predicate(after, path);
    }
    std::vector<Draft> drafts;
    auto produced = fill_values(cs, cfg, submission, schema, actor, after, drafts);
    const auto config = config_for(cfg, before, submission.shape);
    for (const auto& link : submission.virtual_links) {
        const auto* rule = config ? config->virtual_property(link.property) : nullptr;
        if (rule == nullptr) {
            throw ContractViolation("unknown virtual property: " + link.property);
        }
        drafts.push_back(virtual_draft(cs, cfg, *rule, entity, link.target, drafts));
    }
    if (config && config->ordering && submission.values.count(config->ordering->path) != 0) {
        const auto& rule = *config->ordering;
        std::vector<Iri> submitted;
        for (const auto& t : produced[rule.path]) {
            if (const auto* i = std::get_if<Iri>(&t)) {
                submitted.push_back(*i);
            }
        }
        const auto old_order = proxy_order(cs, entity, rule);
        std::vector<Iri> order;
        for (const auto& p : old_order) {
            if (std::find(submitted.begin(), submitted.end(), p) != submitted.end()) {
                order.push_back(p);
            }
        }
        for (const auto& p : submitted) {
            if (std::find(order.begin(), order.end(), p) == order.end()) {
                order.push_back(p);
            }
        }
        chain(cs, order, rule.next, drafts, actor);
    }
    auto violations = schema ? validation::validate_entity(after, *schema) : std::vector<validation::Violation>{};
    auto nested = validate_drafts(drafts);
    violations.insert(violations.end(), nested.begin(), nested.end());
    if (!violations.empty()) {
        throw validation::ValidationError(std::move(violations));
    }
    if (after == before && drafts.empty() && cs.snapshots().empty()) {
        throw NoOpError("no changes to " + entity.str());
    }
    stage_drafts(cs, drafts, actor);
    std::optional<Snapshot> own;
    if (after != before) {
        own = prov_.record_change(
            cs, ChangeRecord{entity, ChangeKind::update, before, after, actor.agent, actor.source, ""});
    }
    std::set<Triple> severed;
    std::set_difference(before.triples().begin(), before.triples().end(), after.triples().begin(),
                        after.triples().end(), std::inserter(severed, severed.end()));
    handle_orphans(cs, cfg, severed, config, actor, decisions);
    prov_.commit(cs);
    return {own ? *own : cs.snapshots().front(), cs.snapshots()};
}

std::set<Triple> CurationEngine::stage_delete(ChangeSet& cs, const Configuration& cfg, const Iri& entity,
                                              const Actor& actor, const std::string& description)
{
    const EntityState before = prov_.current_state(cs, entity);
    if (before.empty()) {
        throw NotFoundError("entity not found: " + entity.str());
    }
    std::set<Iri> next_predicates;
    for (const auto& e : cfg.rules->entries) {
        if (e.ordering) {
            next_predicates.insert(e.ordering->next);
        }
    }
    std::map<Iri, std::vector<Triple>> by_subject;
    for (const auto& t : inbound(cs, entity)) {
        if (const auto* s = std::get_if<Iri>(&t.subject)) {
            by_subject[*s].push_back(t);
        }
    }
    for (const auto& [x, triples] : by_subject) {
        const EntityState current = prov_.current_state(cs, x);
        std::set<Triple> updated = current.triples();
        for (const auto& t : triples) {
            updated.erase(t);
            if (next_predicates.count(t.predicate) != 0) {
                for (const auto& succ : iri_objects(before, t.predicate)) {
                    if (succ != x) {
                        updated.insert(rdf::make_triple(x, t.predicate, succ));
                    }
                }
            }
        }
        EntityState after(x, std::move(updated));
        if (after != current) {
            prov_.record_change(cs, ChangeRecord{x, ChangeKind::update, current, after, actor.agent, actor.source,
                                                 "Reference to " + entity.str() + " removed"});
        }
    }
    prov_.record_change(
        cs, ChangeRecord{entity, ChangeKind::remove, before, EntityState(entity), actor.agent, actor.source, description});
    return before.triples();
}

std::vector<Snapshot> CurationEngine::delete_entity(const Iri& entity, const Actor& actor,
                                                    const OrphanDecisions& decisions)
{
    const Configuration cfg = configuration();
    ChangeSet cs = prov_.begin();
    const EntityState before = prov_.current_state(cs, entity);
    const auto severed = stage_delete(cs, cfg, entity, actor, "");
    handle_orphans(cs, cfg, severed, config_for(cfg, before, std::nullopt), actor, decisions);
    prov_.commit(cs);
    return cs.snapshots();
}

std::vector<OrphanCandidate> CurationEngine::find_orphans(ChangeSet& cs, const std::set<Triple>& severed,
                                                          const std::optional<display::OrderingRule>& ordering)
{
    std::map<Iri, bool> objects;
    for (const auto& t : severed) {
        const auto* o = std::get_if<Iri>(&t.object);
        const auto* s = std::get_if<Iri>(&t.subject);
        if (o == nullptr || t.predicate == rdf_type() || (s != nullptr && *s == *o)) {
            continue;
        }
        objects[*o] = objects[*o] || (ordering && t.predicate == ordering->path);
    }
    std::vector<OrphanCandidate> out;
    for (const auto& [o, via_ordering] : objects) {
        if (prov_.current_state(cs, o).empty()) {
            continue;
        }
        const auto in = inbound(cs, o);
        if (via_ordering) {
            const bool parented =
                std::any_of(in.begin(), in.end(), [&](const Triple& t) { return t.predicate == ordering->path; });
            if (!parented) {
                out.push_back({o, OrphanReason::proxy_detached});
            }
        } else if (in.empty()) {
            out.push_back({o, OrphanReason::unreferenced});
        }
    }
    return out;
}

void CurationEngine::handle_orphans(ChangeSet& cs, const Configuration& cfg, const std::set<Triple>& severed,
                                    const std::optional<display::EntityConfig>& parent, const Actor& actor,
                                    const OrphanDecisions& decisions)
{
    const auto candidates = find_orphans(cs, severed, parent ? parent->ordering : std::nullopt);
    std::vector<Iri> doomed;
    std::vector<OrphanCandidate> undecided;
    for (const auto& c : candidates) {
        const auto own = config_for(cfg, prov_.current_state(cs, c.entity), std::nullopt);
        display::OrphanPolicy policy = cfg.rules->defaults.orphan_policy;
        if (own && own->orphan_policy) {
            policy = *own->orphan_policy;
        } else if (parent && parent->orphan_policy) {
            policy = *parent->orphan_policy;
        }
        if (policy == display::OrphanPolicy::remove) {
            doomed.push_back(c.entity);
        } else if (policy == display::OrphanPolicy::ask) {
            auto d = decisions.find(c.entity);
            if (d == decisions.end()) {
                undecided.push_back(c);
            } else if (d->second) {
                doomed.push_back(c.entity);
            }
        }
    }
    if (!undecided.empty()) {
        throw OrphanDecisionRequired(std::move(undecided));
    }
    for (const auto& e : doomed) {
        if (!prov_.current_state(cs, e).empty()) {
            stage_delete(cs, cfg, e, actor, "Orphan removed");
        }
    }
}

MergeReport CurationEngine::merge_entities(const Iri& survivor, const Iri& absorbed, const Actor& actor)
{
    if (survivor == absorbed) {
        throw provenance::MergeError("cannot merge " + survivor.str() + " into itself");
    }
    ChangeSet cs = prov_.begin();
    const EntityState sb = prov_.current_state(cs, survivor);
    const EntityState ab = prov_.current_state(cs, absorbed);
    if (sb.empty()) {
        throw provenance::MergeError("entity not found: " + survivor.str());
    }
    if (ab.empty()) {
        throw provenance::MergeError("entity not found: " + absorbed.str());
    }
    MergeReport report;
    report.survivor = survivor;
    report.absorbed = absorbed;

    std::map<Iri, std::vector<Triple>> by_subject;
    for (const auto& t : inbound(cs, absorbed)) {
        const auto* s = std::get_if<Iri>(&t.subject);
        if (s != nullptr && *s != survivor) {
            by_subject[*s].push_back(t);
        }
    }
    for (const auto& [x, triples] : by_subject) {
        const EntityState current = prov_.current_state(cs, x);
        std::set<Triple> updated = current.triples();
        for (const auto& t : triples) {
            updated.erase(t);
            updated.insert(rdf::make_triple(x, t.predicate, survivor));
        }
        prov_.record_change(cs, ChangeRecord{x, ChangeKind::update, current, EntityState(x, std::move(updated)),
                                             actor.agent, actor.source,
                                             "Reference to " + absorbed.str() + " replaced by " + survivor.str()});
        report.rewritten_subjects.push_back(x);
    }

    std::set<Triple> merged;
    for (const auto& t : sb.triples()) {
        if (t.object != Term(absorbed)) {
            merged.insert(t);
        }
    }
    const bool typed = !sb.types().empty();
    for (const auto& t : ab.triples()) {
        if ((typed && t.predicate == rdf_type()) || t.object == Term(absorbed) || t.object == Term(survivor)) {
            continue;
        }
        const Triple moved = rdf::make_triple(survivor, t.predicate, t.object);
        if (merged.insert(moved).second) {
            report.incorporated.push_back(moved);
        }
    }
    prov_.record_merge(cs, survivor, absorbed, sb, EntityState(survivor, std::move(merged)), ab, actor.agent,
                       actor.source);
    prov_.commit(cs);
    report.snapshots = cs.snapshots();
    return report;
}

std::vector<Iri> CurationEngine::proxy_order(ChangeSet& cs, const Iri& entity, const display::OrderingRule& rule)
{
    const auto listed = iri_objects(prov_.current_state(cs, entity), rule.path);
    const std::set<Iri> proxies(listed.begin(), listed.end());
    std::map<Iri, Iri> succ;
    std::set<Iri> has_pred;
    for (const auto& p : proxies) {
        for (const auto& n : iri_objects(prov_.current_state(cs, p), rule.next)) {
            if (n != p && proxies.count(n) != 0 && has_pred.count(n) == 0) {
                succ.emplace(p, n);
                has_pred.insert(n);
                break;
            }
        }
    }
    std::vector<Iri> order;
    std::set<Iri> visited;
    auto walk = [&](Iri cur) {
        while (visited.insert(cur).second) {
            order.push_back(cur);
            auto it = succ.find(cur);
            if (it == succ.end()) {
                break;
            }
            cur = it->second;
        }
    };
    for (const auto& p : proxies) {
        if (has_pred.count(p) == 0) {
            walk(p);
        }
    }
    for (const auto& p : proxies) {
        walk(p);
    }
    return order;
}

std::vector<Iri> CurationEngine::proxy_order(const Iri& entity, const display::OrderingRule& rule)
{
    ChangeSet cs = prov_.begin();
    return proxy_order(cs, entity, rule);
}

std::vector<Snapshot> CurationEngine::reorder(const Iri& entity, const display::OrderingRule& rule,
                                              const std::vector<Iri>& order, const Actor& actor)
{
    ChangeSet cs = prov_.begin();
    const EntityState state = prov_.current_state(cs, entity);
    if (state.empty()) {
        throw NotFoundError("entity not found: " + entity.str());
    }
    const auto listed = iri_objects(state, rule.path);
    const std::set<Iri> proxies(listed.begin(), listed.end());
    const std::set<Iri> requested(order.begin(), order.end());
    if (requested.size() != order.size() || requested != proxies) {
        throw OrderError("order is not a permutation of the proxies on " + rule.path.str());
    }
    std::vector<Draft> none;
    chain(cs, order, rule.next, none, actor);
    if (cs.snapshots().empty()) {
        throw NoOpError("order of " + entity.str() + " unchanged");
    }
    prov_.commit(cs);
    return cs.snapshots();
}

std::vector<DuplicateMatch> CurationEngine::find_duplicates(const EntityState& candidate,
                                                            const display::EntityConfig& config)
{
    if (!config.duplicates) {
        throw ContractViolation("no duplicate rule configured");
    }
    const Configuration cfg = configuration();
    std::map<Iri, std::vector<Term>> values;
    for (const auto& clause : config.duplicates->any_of) {
        for (const auto& path : clause) {
            values[path] = candidate.objects(path);
        }
    }
    std::optional<Iri> cls;
    if (config.binding.kind == display::Binding::Kind::cls) {
        cls = config.binding.iri;
    } else if (const auto types = candidate.types(); !types.empty()) {
        cls = types.front();
    }
    const auto query = display::build_duplicate_query(*config.duplicates, values, candidate.entity(), cls);
    const auto result = repository().query_data(query);
    std::vector<DuplicateMatch> out;
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& dup = result.get(r, "dup");
        if (dup && rdf::is_iri(*dup)) {
            const Iri& e = std::get<Iri>(*dup);
            out.push_back({e, display::compute_label(e, &config, *cfg.rules, repository().data())});
        }
    }
    return out;
}

} // namespace provcurate::curation
