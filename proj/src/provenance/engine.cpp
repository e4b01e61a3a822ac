#include "provcurate/provenance/engine.hpp"

#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <charconv>

namespace provcurate::provenance {

using rdf::EntityState;
using rdf::GraphDelta;
using rdf::Iri;
using rdf::Literal;
using rdf::Term;
using rdf::Triple;

namespace {

Iri v(std::string_view iri)
{
    return Iri(std::string(iri));
}

std::string ref(const Iri& iri)
{
    return "<" + iri.str() + ">";
}

Term timestamp_term(TimePoint t)
{
    return Literal(format_timestamp(t), v(vocab::xsd_date_time));
}

/// IRIs stay IRIs; anything else is stored as a string literal.
Term agent_term(const std::string& value)
{
    if (rdf::is_absolute_iri(value)) {
        return Iri(value);
    }
    return Literal::string(value);
}

std::string prefix_of(const Iri& entity)
{
    return entity.str() + "/prov/se/";
}

std::optional<std::size_t> index_of(const std::string& prefix, const std::string& snapshot)
{
    if (snapshot.size() <= prefix.size() || snapshot.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    std::size_t n = 0;
    const char* first = snapshot.data() + prefix.size();
    const char* last = snapshot.data() + snapshot.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last || n == 0 || *first == '0') {
        return std::nullopt;
    }
    return n;
}

TimePoint time_of(const Term& t, const Iri& snapshot)
{
    const auto* lit = std::get_if<Literal>(&t);
    if (lit == nullptr) {
        throw ChainError("non-literal timestamp on " + snapshot.str());
    }
    try {
        return parse_timestamp(lit->lexical());
    } catch (const ContractViolation&) {
        throw ChainError("malformed timestamp on " + snapshot.str() + ": " + lit->lexical());
    }
}

EntityState with_entity(const Iri& entity, const EntityState& s)
{
    if (s.entity().empty() && s.empty()) {
        return EntityState(entity);
    }
    if (s.entity() != entity) {
        throw ContractViolation("state of " + s.entity().str() + " given for " + entity.str());
    }
    return s;
}

std::string default_description(ChangeKind kind)
{
    switch (kind) {
    case ChangeKind::create: return "Entity created";
    case ChangeKind::update: return "Entity updated";
    case ChangeKind::remove: return "Entity deleted";
    case ChangeKind::restore: return "Entity restored";
    case ChangeKind::baseline: return "Baseline of pre-existing entity";
    }
    return {};
}

} // namespace

std::string to_string(ChangeKind kind)
{
    switch (kind) {
    case ChangeKind::create: return "create";
    case ChangeKind::update: return "update";
    case ChangeKind::remove: return "delete";
    case ChangeKind::restore: return "restore";
    case ChangeKind::baseline: return "baseline";
    }
    return {};
}

Iri provenance_graph(const Iri& entity)
{
    return Iri(entity.str() + "/prov/");
}

Iri snapshot_iri(const Iri& entity, std::size_t index)
{
    return Iri(prefix_of(entity) + std::to_string(index));
}

bool ChangeSet::empty() const noexcept
{
    return snapshots_.empty() && extra_.empty() && data_deletions_.empty() && data_insertions_.empty();
}

void ChangeSet::delete_data(const Triple& t)
{
    if (data_insertions_.erase(t) == 0) {
        data_deletions_.insert(t);
    }
}

void ChangeSet::insert_data(const Triple& t)
{
    if (data_deletions_.erase(t) == 0) {
        data_insertions_.insert(t);
    }
}

ProvenanceEngine::ProvenanceEngine(store::Repository& repo, ProvenanceConfig config, Clock clock)
    : repo_(repo), config_(std::move(config)), clock_(std::move(clock))
{
    if (config_.system_agent.empty()) {
        throw ContractViolation("system agent must not be empty");
    }
}

ChangeSet ProvenanceEngine::begin() const
{
    return ChangeSet(clock_());
}

void ProvenanceEngine::commit(ChangeSet& cs)
{
    if (cs.committed_) {
        throw ContractViolation("change set already committed");
    }
    std::vector<store::GraphUpdate> updates;
    if (!cs.data_deletions_.empty() || !cs.data_insertions_.empty()) {
        updates.push_back({store::Route::data, std::nullopt, GraphDelta(cs.data_deletions_, cs.data_insertions_)});
    }
    for (const auto& [graph, triples] : cs.provenance_) {
        updates.push_back({store::Route::provenance, graph, GraphDelta({}, triples)});
    }
    updates.insert(updates.end(), cs.extra_.begin(), cs.extra_.end());
    if (!updates.empty()) {
        repo_.apply_update(updates);
    }
    cs.committed_ = true;
}

EntityState ProvenanceEngine::current_state(ChangeSet& cs, const Iri& entity)
{
    auto it = cs.states_.find(entity);
    if (it == cs.states_.end()) {
        it = cs.states_.emplace(entity, repo_.fetch_entity_state(entity)).first;
    }
    return it->second;
}

std::optional<ChangeSet::Head> ProvenanceEngine::head(ChangeSet& cs, const Iri& entity)
{
    auto it = cs.heads_.find(entity);
    if (it != cs.heads_.end()) {
        return it->second;
    }
    const auto result = repo_.query_provenance(
        "SELECT ?s ?t ?inv WHERE { GRAPH " + ref(provenance_graph(entity)) + " { ?s " +
        ref(v(vocab::prov_specialization_of)) + " " + ref(entity) + " ; " + ref(v(vocab::prov_generated_at_time)) +
        " ?t . OPTIONAL { ?s " + ref(v(vocab::prov_invalidated_at_time)) + " ?inv } } }");
    const std::string prefix = prefix_of(entity);
    std::optional<ChangeSet::Head> best;
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& s = result.get(r, "s");
        if (!s || !rdf::is_iri(*s)) {
            continue;
        }
        const Iri& sid = std::get<Iri>(*s);
        const auto idx = index_of(prefix, sid.str());
        if (!idx) {
            throw ChainError("snapshot IRI outside the chain of " + entity.str() + ": " + sid.str());
        }
        if (best && best->index >= *idx) {
            continue;
        }
        ChangeSet::Head h;
        h.index = *idx;
        h.generated_at = time_of(*result.get(r, "t"), sid);
        h.deleted = result.get(r, "inv").has_value();
        best = h;
    }
    cs.heads_.emplace(entity, best);
    return best;
}

Snapshot ProvenanceEngine::stage(ChangeSet& cs, const Iri& entity, ChangeKind kind, const EntityState& before,
                                 const EntityState& after, const std::string& agent, const std::string& source,
                                 std::string description, std::vector<Iri> extra_sources,
                                 std::optional<TimePoint> generated)
{
    if (cs.committed_) {
        throw ContractViolation("change set already committed");
    }
    const auto h = head(cs, entity);
    Snapshot s;
    s.entity = entity;
    s.index = h ? h->index + 1 : 1;
    s.id = snapshot_iri(entity, s.index);
    s.generated_at = generated.value_or(cs.at_);
    if (h && s.generated_at < h->generated_at) {
        s.generated_at = h->generated_at;
    }
    const bool deleted = kind == ChangeKind::remove || (kind == ChangeKind::restore && after.empty());
    if (deleted) {
        s.invalidated_at = s.generated_at;
    }
    s.attributed_to = agent;
    s.primary_source = source;
    if (h) {
        s.derived_from.push_back(snapshot_iri(entity, h->index));
    }
    s.derived_from.insert(s.derived_from.end(), extra_sources.begin(), extra_sources.end());
    s.delta = rdf::diff(before, after);
    s.description = description.empty() ? default_description(kind) : std::move(description);

    auto& graph = cs.provenance_[provenance_graph(entity)];
    auto add = [&](std::string_view p, Term o) { graph.insert(rdf::make_triple(s.id, v(p), std::move(o))); };
    add(vocab::rdf_type, v(vocab::prov_entity));
    add(vocab::prov_specialization_of, entity);
    add(vocab::prov_generated_at_time, timestamp_term(s.generated_at));
    if (s.invalidated_at) {
        add(vocab::prov_invalidated_at_time, timestamp_term(*s.invalidated_at));
    }
    add(vocab::prov_was_attributed_to, agent_term(agent));
    if (!source.empty()) {
        add(vocab::prov_had_primary_source, agent_term(source));
    }
    for (const auto& d : s.derived_from) {
        add(vocab::prov_was_derived_from, d);
    }
    add(vocab::oco_has_update_query, Literal::string(rdf::serialize_delta(s.delta)));
    add(vocab::dcterms_description, Literal::string(s.description));
    if (h && !h->deleted) {
        graph.insert(rdf::make_triple(snapshot_iri(entity, h->index), v(vocab::prov_invalidated_at_time),
                                      timestamp_term(s.generated_at)));
    }

    if (kind != ChangeKind::baseline) {
        for (const auto& t : s.delta.deletions()) {
            cs.delete_data(t);
        }
        for (const auto& t : s.delta.insertions()) {
            cs.insert_data(t);
        }
    }
    cs.states_[entity] = after;
    cs.heads_[entity] = ChangeSet::Head{s.index, s.generated_at, deleted};
    cs.snapshots_.push_back(s);
    return s;
}

Snapshot ProvenanceEngine::record_change(ChangeSet& cs, const ChangeRecord& change)
{
    const Iri& e = change.entity;
    if (e.empty()) {
        throw ContractViolation("change without entity");
    }
    if (change.agent.empty()) {
        throw ContractViolation("change without agent");
    }
    const EntityState before = with_entity(e, change.before);
    const EntityState after = with_entity(e, change.after);
    if (current_state(cs, e) != before) {
        throw ChainError("stale state for " + e.str() + ": before does not match the stored state");
    }
    auto h = head(cs, e);
    switch (change.kind) {
    case ChangeKind::create:
        if (!before.empty()) {
            throw ContractViolation("create of " + e.str() + " with non-empty prior state");
        }
        if (after.empty()) {
            throw ContractViolation("create of " + e.str() + " with empty state");
        }
        if (h && !h->deleted) {
            throw ChainError(e.str() + " already has a live snapshot chain");
        }
        break;
    case ChangeKind::update:
    case ChangeKind::remove:
        if (before.empty()) {
            throw NotFoundError("entity not found: " + e.str());
        }
        if (h && h->deleted) {
            throw ChainError("latest snapshot of " + e.str() + " is a deletion");
        }
        if (change.kind == ChangeKind::remove && !after.empty()) {
            throw ContractViolation("delete of " + e.str() + " with non-empty result");
        }
        if (before == after) {
            throw NoOpError("no changes to " + e.str());
        }
        break;
    case ChangeKind::restore:
        if (!h) {
            throw ChainError("restore of " + e.str() + " without a snapshot chain");
        }
        if (before == after) {
            throw NoOpError("no changes to " + e.str());
        }
        break;
    case ChangeKind::baseline:
        throw ContractViolation("baseline snapshots are created by ensure_baseline");
    }
    if (!h && !before.empty()) {
        ensure_baseline(cs, e, before);
    }
    return stage(cs, e, change.kind, before, after, change.agent, change.source, change.description, {});
}

Snapshot ProvenanceEngine::record_change(const ChangeRecord& change)
{
    ChangeSet cs = begin();
    Snapshot s = record_change(cs, change);
    commit(cs);
    return s;
}

std::pair<Snapshot, Snapshot> ProvenanceEngine::record_merge(ChangeSet& cs, const Iri& survivor, const Iri& absorbed,
                                                             const EntityState& survivor_before,
                                                             const EntityState& survivor_after,
                                                             const EntityState& absorbed_before,
                                                             const std::string& agent, const std::string& source)
{
    if (survivor == absorbed) {
        throw MergeError("cannot merge " + survivor.str() + " into itself");
    }
    if (agent.empty()) {
        throw ContractViolation("merge without agent");
    }
    const EntityState sb = with_entity(survivor, survivor_before);
    const EntityState sa = with_entity(survivor, survivor_after);
    const EntityState ab = with_entity(absorbed, absorbed_before);
    for (const auto& [e, state] : {std::pair{survivor, sb}, std::pair{absorbed, ab}}) {
        if (state.empty()) {
            throw MergeError("entity not found: " + e.str());
        }
        if (current_state(cs, e) != state) {
            throw ChainError("stale state for " + e.str() + ": before does not match the stored state");
        }
        const auto h = head(cs, e);
        if (h && h->deleted) {
            throw MergeError("entity already deleted: " + e.str());
        }
        if (!h) {
            ensure_baseline(cs, e, state);
        }
    }
    const Iri absorbed_last = snapshot_iri(absorbed, head(cs, absorbed)->index);
    Snapshot kept = stage(cs, survivor, ChangeKind::update, sb, sa, agent, source, "Merged " + absorbed.str(),
                          {absorbed_last});
    Snapshot gone = stage(cs, absorbed, ChangeKind::remove, ab, EntityState(absorbed), agent, source,
                          "Merged into " + survivor.str(), {});
    return {kept, gone};
}

Snapshot ProvenanceEngine::ensure_baseline(ChangeSet& cs, const Iri& entity, const EntityState& current)
{
    if (head(cs, entity)) {
        for (const auto& s : cs.snapshots_) {
            if (s.entity == entity && s.index == 1) {
                return s;
            }
        }
        return history(entity).snapshots.front();
    }
    const EntityState state = with_entity(entity, current);
    if (state.empty()) {
        throw NotFoundError("entity not found: " + entity.str());
    }
    return stage(cs, entity, ChangeKind::baseline, EntityState(entity), state, config_.system_agent,
                 config_.baseline_source, {}, {}, config_.baseline_created_at.value_or(cs.at_));
}

Snapshot ProvenanceEngine::ensure_baseline(const Iri& entity, const EntityState& current)
{
    ChangeSet cs = begin();
    Snapshot s = ensure_baseline(cs, entity, current);
    commit(cs);
    return s;
}

bool ProvenanceEngine::has_history(const Iri& entity)
{
    return repo_
        .query_provenance("ASK { GRAPH " + ref(provenance_graph(entity)) + " { ?s " +
                          ref(v(vocab::prov_specialization_of)) + " " + ref(entity) + " } }")
        .boolean;
}

SnapshotChain ProvenanceEngine::history(const Iri& entity)
{
    const auto result =
        repo_.query_provenance("SELECT ?s ?p ?o WHERE { GRAPH " + ref(provenance_graph(entity)) + " { ?s ?p ?o } }");
    const std::string prefix = prefix_of(entity);
    std::map<std::size_t, std::vector<std::pair<Iri, Term>>> by_index;
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& s = result.get(r, "s");
        const auto& p = result.get(r, "p");
        const auto& o = result.get(r, "o");
        if (!s || !p || !o || !rdf::is_iri(*s) || !rdf::is_iri(*p)) {
            continue;
        }
        const auto idx = index_of(prefix, std::get<Iri>(*s).str());
        if (idx) {
            by_index[*idx].emplace_back(std::get<Iri>(*p), *o);
        }
    }
    if (by_index.empty()) {
        throw NotFoundError("no provenance for " + entity.str());
    }

    SnapshotChain chain;
    chain.entity = entity;
    std::size_t expected = 1;
    for (auto& [idx, props] : by_index) {
        Snapshot s;
        s.entity = entity;
        s.index = idx;
        s.id = snapshot_iri(entity, idx);
        if (idx != expected++) {
            throw ChainError("gap in the snapshot chain of " + entity.str() + " before " + s.id.str());
        }
        std::sort(props.begin(), props.end());
        bool specialization = false, generated = false, update_query = false;
        for (const auto& [p, o] : props) {
            const std::string& ps = p.str();
            if (ps == vocab::prov_specialization_of) {
                if (o != Term(entity)) {
                    throw ChainError(s.id.str() + " specializes another entity");
                }
                specialization = true;
            } else if (ps == vocab::prov_generated_at_time) {
                s.generated_at = time_of(o, s.id);
                generated = true;
            } else if (ps == vocab::prov_invalidated_at_time) {
                const TimePoint t = time_of(o, s.id);
                if (!s.invalidated_at || t < *s.invalidated_at) {
                    s.invalidated_at = t;
                }
            } else if (ps == vocab::prov_was_attributed_to) {
                s.attributed_to = rdf::lexical_value(o);
            } else if (ps == vocab::prov_had_primary_source) {
                s.primary_source = rdf::lexical_value(o);
            } else if (ps == vocab::prov_was_derived_from) {
                if (!rdf::is_iri(o)) {
                    throw ChainError(s.id.str() + " derives from a non-IRI");
                }
                s.derived_from.push_back(std::get<Iri>(o));
            } else if (ps == vocab::oco_has_update_query) {
                try {
                    s.delta = rdf::parse_delta(rdf::lexical_value(o));
                } catch (const Error& err) {
                    throw ChainError("corrupt delta on " + s.id.str() + ": " + err.what());
                }
                update_query = true;
            } else if (ps == vocab::dcterms_description) {
                s.description = rdf::lexical_value(o);
            }
        }
        if (!specialization || !generated || !update_query) {
            throw ChainError("incomplete snapshot " + s.id.str());
        }
        if (idx > 1) {
            const Iri prev = snapshot_iri(entity, idx - 1);
            auto it = std::find(s.derived_from.begin(), s.derived_from.end(), prev);
            if (it == s.derived_from.end()) {
                throw ChainError(s.id.str() + " does not derive from its predecessor");
            }
            std::rotate(s.derived_from.begin(), it, it + 1);
            if (s.generated_at < chain.snapshots.back().generated_at) {
                throw ChainError(s.id.str() + " generated before its predecessor");
            }
        }
        chain.snapshots.push_back(std::move(s));
    }
    return chain;
}

EntityState ProvenanceEngine::materialize(const SnapshotChain& chain, const EntityState& current,
                                          std::size_t index) const
{
    const std::size_t n = chain.snapshots.size();
    if (index < 1 || index > n) {
        throw ContractViolation("snapshot index " + std::to_string(index) + " outside 1.." + std::to_string(n));
    }
    EntityState backward = with_entity(chain.entity, current);
    for (std::size_t i = n; i > index; --i) {
        backward = rdf::apply_delta(backward, rdf::invert_delta(chain.snapshots[i - 1].delta));
    }
    EntityState forward(chain.entity);
    for (std::size_t i = 0; i < index; ++i) {
        forward = rdf::apply_delta(forward, chain.snapshots[i].delta);
    }
    if (forward != backward) {
        throw rdf::ReplayIntegrityError("backward and forward replay of " + chain.entity.str() +
                                        " disagree at snapshot " + std::to_string(index));
    }
    return backward;
}

EntityState ProvenanceEngine::materialize(const Iri& entity, std::size_t index)
{
    const SnapshotChain chain = history(entity);
    return materialize(chain, repo_.fetch_entity_state(entity), index);
}

std::optional<std::size_t> ProvenanceEngine::index_at(const Iri& entity, TimePoint t)
{
    const SnapshotChain chain = history(entity);
    std::optional<std::size_t> found;
    for (const auto& s : chain.snapshots) {
        if (s.generated_at <= t) {
            found = s.index;
        }
    }
    if (found && *found == chain.snapshots.size() && chain.deleted()) {
        return std::nullopt;
    }
    return found;
}

RestoreResult ProvenanceEngine::restore(const Iri& entity, std::size_t index, const std::string& agent,
                                        const std::string& source)
{
    ChangeSet cs = begin();
    RestoreResult result = restore(cs, entity, index, agent, source);
    commit(cs);
    return result;
}

RestoreResult ProvenanceEngine::restore(ChangeSet& cs, const Iri& entity, std::size_t index, const std::string& agent,
                                        const std::string& source)
{
    if (cs.states_.count(entity) != 0) {
        throw ContractViolation("restore of " + entity.str() + " after staged changes");
    }
    const SnapshotChain chain = history(entity);
    const EntityState current = current_state(cs, entity);
    const EntityState target = materialize(chain, current, index);
    if (target == current) {
        throw NoOpError(entity.str() + " already matches snapshot " + std::to_string(index));
    }
    RestoreResult result;
    result.snapshot = stage(cs, entity, ChangeKind::restore, current, target, agent, source,
                            "Restored to snapshot " + std::to_string(index), {});
    std::set<Iri> visited{entity};
    restore_related(cs, target, agent, source, visited, 1, result.related);
    return result;
}

void ProvenanceEngine::restore_related(ChangeSet& cs, const EntityState& state, const std::string& agent,
                                       const std::string& source, std::set<Iri>& visited, std::size_t depth,
                                       std::vector<Snapshot>& out)
{
    for (const auto& t : state.triples()) {
        const auto* o = std::get_if<Iri>(&t.object);
        if (o == nullptr || t.predicate.str() == vocab::rdf_type || !visited.insert(*o).second) {
            continue;
        }
        const auto h = head(cs, *o);
        if (!h || !h->deleted) {
            continue;
        }
        if (depth > config_.restore_depth) {
            throw RestoreError("restore of related entities exceeds depth " + std::to_string(config_.restore_depth) +
                               " at " + o->str());
        }
        const SnapshotChain chain = history(*o);
        if (chain.snapshots.size() < 2) {
            continue;
        }
        const EntityState current = current_state(cs, *o);
        const EntityState target = materialize(chain, current, chain.snapshots.size() - 1);
        if (target.empty() || target == current) {
            continue;
        }
        out.push_back(stage(cs, *o, ChangeKind::restore, current, target, agent, source,
                            "Restored with " + state.entity().str(), {}));
        restore_related(cs, target, agent, source, visited, depth + 1, out);
    }
}

std::vector<DeletedEntity> ProvenanceEngine::list_deleted()
{
    const auto result = repo_.query_provenance(
        "SELECT ?s ?e ?t ?inv WHERE { GRAPH ?g { ?s " + ref(v(vocab::prov_specialization_of)) + " ?e ; " +
        ref(v(vocab::prov_generated_at_time)) + " ?t . OPTIONAL { ?s " + ref(v(vocab::prov_invalidated_at_time)) +
        " ?inv } } }");
    struct Latest {
        std::size_t index = 0;
        Iri snapshot;
        TimePoint generated;
        std::optional<TimePoint> invalidated;
    };
    std::map<Iri, Latest> latest;
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& s = result.get(r, "s");
        const auto& e = result.get(r, "e");
        if (!s || !e || !rdf::is_iri(*s) || !rdf::is_iri(*e)) {
            continue;
        }
        const Iri& sid = std::get<Iri>(*s);
        const Iri& eid = std::get<Iri>(*e);
        const auto idx = index_of(prefix_of(eid), sid.str());
        if (!idx) {
            continue;
        }
        auto& l = latest[eid];
        if (l.index > *idx) {
            continue;
        }
        std::optional<TimePoint> inv;
        if (const auto& i = result.get(r, "inv")) {
            inv = time_of(*i, sid);
        }
        if (l.index == *idx) {
            if (inv && (!l.invalidated || *inv < *l.invalidated)) {
                l.invalidated = inv;
            }
            continue;
        }
        l = Latest{*idx, sid, time_of(*result.get(r, "t"), sid), inv};
    }
    std::vector<DeletedEntity> out;
    for (const auto& [e, l] : latest) {
        if (l.invalidated) {
            out.push_back({e, l.snapshot, l.index, l.generated, *l.invalidated});
        }
    }
    std::sort(out.begin(), out.end(), [](const DeletedEntity& a, const DeletedEntity& b) {
        return a.invalidated_at != b.invalidated_at ? a.invalidated_at > b.invalidated_at : a.entity < b.entity;
    });
    return out;
}

} // namespace provcurate::provenance
