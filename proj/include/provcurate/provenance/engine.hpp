#pragma once

#include "provcurate/error.hpp"
#include "provcurate/provenance/timestamp.hpp"
#include "provcurate/rdf/delta.hpp"
#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/store/repository.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace provcurate::provenance {

/// The stored snapshot chain is inconsistent or an operation would break it.
class ChainError : public Error {
public:
    using Error::Error;
};

class MergeError : public Error {
public:
    using Error::Error;
};

class RestoreError : public Error {
public:
    using Error::Error;
};

enum class ChangeKind { create, update, remove, restore, baseline };

/// One versioned state transition of an entity.
struct Snapshot {
    rdf::Iri id;
    rdf::Iri entity;
    std::size_t index = 0;
    TimePoint generated_at;
    std::optional<TimePoint> invalidated_at;
    /// Agent IRI or opaque identifier.
    std::string attributed_to;
    /// IRI or free text; empty when unknown.
    std::string primary_source;
    std::vector<rdf::Iri> derived_from;
    rdf::GraphDelta delta;
    std::string description;
};

struct SnapshotChain {
    rdf::Iri entity;
    std::vector<Snapshot> snapshots;

    const Snapshot& head() const { return snapshots.back(); }
    /// The last snapshot carries its own invalidation time.
    bool deleted() const { return !snapshots.empty() && snapshots.back().invalidated_at.has_value(); }
};

struct DeletedEntity {
    rdf::Iri entity;
    rdf::Iri snapshot;
    std::size_t index = 0;
    TimePoint generated_at;
    TimePoint invalidated_at;
};

struct ProvenanceConfig {
    std::string system_agent = "urn:provcurate:agent:system";
    /// Primary source of baseline snapshots.
    std::string baseline_source;
    /// Generation time of baseline snapshots; the commit time when absent.
    std::optional<TimePoint> baseline_created_at;
    std::size_t restore_depth = 16;
};

/// Named graph holding the provenance of `entity`.
rdf::Iri provenance_graph(const rdf::Iri& entity);
rdf::Iri snapshot_iri(const rdf::Iri& entity, std::size_t index);

struct ChangeRecord {
    rdf::Iri entity;
    ChangeKind kind = ChangeKind::update;
    rdf::EntityState before;
    rdf::EntityState after;
    std::string agent;
    std::string source;
    std::string description;
};

struct RestoreResult {
    Snapshot snapshot;
    /// Snapshots of referenced entities brought back from deletion.
    std::vector<Snapshot> related;
};

/// Pending writes of one atomic commit. All snapshots share one commit time.
class ChangeSet {
public:
    explicit ChangeSet(TimePoint at) : at_(at) {}

    TimePoint at() const noexcept { return at_; }
    const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }
    bool empty() const noexcept;
    bool committed() const noexcept { return committed_; }
    /// Net data-store changes staged so far.
    const std::set<rdf::Triple>& pending_deletions() const noexcept { return data_deletions_; }
    const std::set<rdf::Triple>& pending_insertions() const noexcept { return data_insertions_; }

    /// Adds an extra update to the same commit.
    void add_update(store::GraphUpdate update) { extra_.push_back(std::move(update)); }

private:
    friend class ProvenanceEngine;

    struct Head {
        std::size_t index = 0;
        TimePoint generated_at;
        bool deleted = false;
    };

    void delete_data(const rdf::Triple& t);
    void insert_data(const rdf::Triple& t);

    TimePoint at_;
    std::map<rdf::Iri, std::optional<Head>> heads_;
    std::map<rdf::Iri, rdf::EntityState> states_;
    std::set<rdf::Triple> data_deletions_;
    std::set<rdf::Triple> data_insertions_;
    std::map<rdf::Iri, std::set<rdf::Triple>> provenance_;
    std::vector<store::GraphUpdate> extra_;
    std::vector<Snapshot> snapshots_;
    bool committed_ = false;
};

/// Records every mutation as a snapshot with an invertible delta, and
/// rebuilds past states from the chain.
class ProvenanceEngine {
public:
    ProvenanceEngine(store::Repository& repo, ProvenanceConfig config, Clock clock = system_now);

    ChangeSet begin() const;
    /// Applies the data and provenance writes of `cs` in one repository update.
    void commit(ChangeSet& cs);

    /// Entity state as seen inside `cs`.
    rdf::EntityState current_state(ChangeSet& cs, const rdf::Iri& entity);

    /// Stages the data change and its snapshot. A baseline snapshot is staged
    /// first when a pre-existing entity has no chain.
    Snapshot record_change(ChangeSet& cs, const ChangeRecord& change);
    /// Returns the survivor snapshot and the final snapshot of the absorbed entity.
    std::pair<Snapshot, Snapshot> record_merge(ChangeSet& cs, const rdf::Iri& survivor, const rdf::Iri& absorbed,
                                               const rdf::EntityState& survivor_before,
                                               const rdf::EntityState& survivor_after,
                                               const rdf::EntityState& absorbed_before, const std::string& agent,
                                               const std::string& source);
    Snapshot ensure_baseline(ChangeSet& cs, const rdf::Iri& entity, const rdf::EntityState& current);

    /// Single-change convenience wrappers that commit immediately.
    Snapshot record_change(const ChangeRecord& change);
    Snapshot ensure_baseline(const rdf::Iri& entity, const rdf::EntityState& current);

    /// Throws NotFoundError when no chain exists, ChainError on corrupt records.
    SnapshotChain history(const rdf::Iri& entity);
    bool has_history(const rdf::Iri& entity);
    /// Backward replay from the current state, cross-checked against forward
    /// replay from the empty state.
    rdf::EntityState materialize(const rdf::Iri& entity, std::size_t index);
    /// Index of the snapshot valid at `t`; empty before creation or after deletion.
    std::optional<std::size_t> index_at(const rdf::Iri& entity, TimePoint t);
    RestoreResult restore(const rdf::Iri& entity, std::size_t index, const std::string& agent,
                          const std::string& source = {});
    /// Stages a restore into `cs`.
    RestoreResult restore(ChangeSet& cs, const rdf::Iri& entity, std::size_t index, const std::string& agent,
                          const std::string& source);
    /// Entities whose latest snapshot carries its own invalidation time.
    std::vector<DeletedEntity> list_deleted();

    const ProvenanceConfig& config() const noexcept { return config_; }
    store::Repository& repository() noexcept { return repo_; }
    TimePoint now() const { return clock_(); }

private:
    std::optional<ChangeSet::Head> head(ChangeSet& cs, const rdf::Iri& entity);
    Snapshot stage(ChangeSet& cs, const rdf::Iri& entity, ChangeKind kind, const rdf::EntityState& before,
                   const rdf::EntityState& after, const std::string& agent, const std::string& source,
                   std::string description, std::vector<rdf::Iri> extra_sources,
                   std::optional<TimePoint> generated = std::nullopt);
    void restore_related(ChangeSet& cs, const rdf::EntityState& state, const std::string& agent,
                         const std::string& source, std::set<rdf::Iri>& visited, std::size_t depth,
                         std::vector<Snapshot>& out);
    rdf::EntityState materialize(const SnapshotChain& chain, const rdf::EntityState& current,
                                 std::size_t index) const;

    store::Repository& repo_;
    ProvenanceConfig config_;
    Clock clock_;
};

std::string to_string(ChangeKind kind);

} // namespace provcurate::provenance
