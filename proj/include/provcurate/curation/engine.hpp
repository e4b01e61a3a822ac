#pragma once

#include "provcurate/curation/mint.hpp"
#include "provcurate/display/rules.hpp"
#include "provcurate/provenance/engine.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/shacl/shapes.hpp"
#include "provcurate/validation/validator.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace provcurate::curation {

using rdf::EntityState;
using rdf::Iri;
using provenance::Snapshot;

class OrderError : public Error {
public:
    using Error::Error;
};

enum class OrphanReason { unreferenced, proxy_detached };
std::string_view to_string(OrphanReason r) noexcept;

struct OrphanCandidate {
    Iri entity;
    OrphanReason reason = OrphanReason::unreferenced;

    friend bool operator==(const OrphanCandidate&, const OrphanCandidate&) = default;
};

/// Orphan policy `ask` without a decision for every candidate.
class OrphanDecisionRequired : public Error {
public:
    explicit OrphanDecisionRequired(std::vector<OrphanCandidate> candidates);
    const std::vector<OrphanCandidate>& candidates() const noexcept { return candidates_; }

private:
    std::vector<OrphanCandidate> candidates_;
};

/// Per-orphan answer to an `ask` prompt: true deletes, false keeps.
using OrphanDecisions = std::map<Iri, bool>;

struct FormSubmission;

/// One submitted value: a literal typed from the field's constraints unless
/// `datatype` or `language` is given, a reference to an existing entity, or
/// a nested entity created with its parent.
struct SubmissionValue {
    enum class Kind { literal, reference, nested };
    Kind kind = Kind::literal;
    std::string text;
    std::optional<Iri> datatype;
    std::optional<std::string> language;
    Iri reference;
    std::shared_ptr<FormSubmission> nested;

    static SubmissionValue literal(std::string text);
    static SubmissionValue typed(std::string text, Iri datatype);
    static SubmissionValue ref(Iri iri);
    static SubmissionValue child(FormSubmission sub);
};

/// A virtual-property field: `property` is the rule label.
struct VirtualLink {
    std::string property;
    Iri target;
};

struct FormSubmission {
    std::optional<shacl::ShapeId> shape;
    /// rdf:type of a new entity; the shape's target class when absent.
    std::optional<Iri> cls;
    /// Values replace every existing value of their path on update.
    std::map<Iri, std::vector<SubmissionValue>> values;
    std::vector<VirtualLink> virtual_links;
};

/// Who performs a change and on which evidence.
struct Actor {
    std::string agent;
    std::string source;
};

struct CreateResult {
    Iri entity;
    std::vector<Snapshot> snapshots;
};

struct ChangeResult {
    /// Snapshot of the entity the operation targets.
    Snapshot snapshot;
    /// Every snapshot of the commit, in staging order.
    std::vector<Snapshot> snapshots;
};

struct MergeReport {
    Iri survivor;
    Iri absorbed;
    std::vector<Iri> rewritten_subjects;
    std::vector<rdf::Triple> incorporated;
    std::vector<Snapshot> snapshots;
};

struct VirtualExpansion {
    Iri intermediate;
    std::vector<rdf::Triple> triples;
};

struct DuplicateMatch {
    Iri entity;
    std::string label;

    friend bool operator==(const DuplicateMatch&, const DuplicateMatch&) = default;
};

/// Shapes and display rules in force; swapped as a whole on reload.
struct Configuration {
    std::shared_ptr<const shacl::ShapeCatalog> shapes = std::make_shared<shacl::ShapeCatalog>();
    std::shared_ptr<const display::DisplayRules> rules = std::make_shared<display::DisplayRules>();
};

/// Validated create, update, delete, merge and reorder operations; every
/// operation is one atomic commit through the provenance engine.
class CurationEngine {
public:
    CurationEngine(provenance::ProvenanceEngine& prov, std::shared_ptr<MintStrategy> mint, Configuration config);

    Configuration configuration() const;
    void reconfigure(Configuration config);

    Iri mint(const Iri& kind);

    /// Depth-first creation of the entity, its nested entities and virtual
    /// intermediates. Throws ValidationError listing every violation.
    CreateResult create_entity(const FormSubmission& submission, const Actor& actor);
    /// Replaces the submitted paths, then handles entities severed by the edit.
    ChangeResult update_entity(const Iri& entity, const FormSubmission& submission, const Actor& actor,
                               const OrphanDecisions& decisions = {});
    /// Removes the entity and every inbound reference to it; a proxy removed
    /// from a chain is spliced out.
    std::vector<Snapshot> delete_entity(const Iri& entity, const Actor& actor, const OrphanDecisions& decisions = {});
    MergeReport merge_entities(const Iri& survivor, const Iri& absorbed, const Actor& actor);
    /// Rewrites the `rule.next` links so proxies follow `order`.
    std::vector<Snapshot> reorder(const Iri& entity, const display::OrderingRule& rule, const std::vector<Iri>& order,
                                  const Actor& actor);

    /// Stages the intermediate entity of a virtual property into `cs`.
    VirtualExpansion expand_virtual_property(provenance::ChangeSet& cs, const display::VirtualPropertyRule& rule,
                                             const Iri& subject, const Iri& target, const Actor& actor);
    /// Severed objects left without inbound references, or proxies left
    /// without a parent link, as seen inside `cs`.
    std::vector<OrphanCandidate> find_orphans(provenance::ChangeSet& cs, const std::set<rdf::Triple>& severed,
                                              const std::optional<display::OrderingRule>& ordering);
    std::vector<DuplicateMatch> find_duplicates(const EntityState& candidate, const display::EntityConfig& config);

    /// Chain order of `entity`'s proxies on `rule.path`: walk from the head,
    /// unchained proxies last in IRI order.
    std::vector<Iri> proxy_order(provenance::ChangeSet& cs, const Iri& entity, const display::OrderingRule& rule);
    std::vector<Iri> proxy_order(const Iri& entity, const display::OrderingRule& rule);

    /// Compiled schema: the given shape, else the best-matching shape of the state.
    std::optional<shacl::FormSchema> schema_for(const EntityState& state,
                                                const std::optional<shacl::ShapeId>& shape = std::nullopt) const;
    std::optional<display::EntityConfig> config_for(const EntityState& state,
                                                    const std::optional<shacl::ShapeId>& shape = std::nullopt) const;

    provenance::ProvenanceEngine& provenance() noexcept { return prov_; }
    store::Repository& repository() noexcept { return prov_.repository(); }

private:
    struct Draft {
        Iri iri;
        EntityState state;
        std::optional<shacl::FormSchema> schema;
    };

    Iri draft(provenance::ChangeSet& cs, const Configuration& cfg, const FormSubmission& sub, const Actor& actor,
              std::vector<Draft>& drafts);
    /// Adds the submitted values to `state`; returns the terms per path in submission order.
    std::map<Iri, std::vector<rdf::Term>> fill_values(provenance::ChangeSet& cs, const Configuration& cfg,
                                                      const FormSubmission& sub,
                                                      const std::optional<shacl::FormSchema>& schema,
                                                      const Actor& actor, EntityState& state,
                                                      std::vector<Draft>& drafts);
    Draft virtual_draft(provenance::ChangeSet& cs, const Configuration& cfg, const display::VirtualPropertyRule& rule,
                        const Iri& subject, const Iri& target, const std::vector<Draft>& drafts);
    void chain(provenance::ChangeSet& cs, const std::vector<Iri>& order, const Iri& next, std::vector<Draft>& drafts,
               const Actor& actor);
    std::vector<validation::Violation> validate_drafts(const std::vector<Draft>& drafts) const;
    void stage_drafts(provenance::ChangeSet& cs, const std::vector<Draft>& drafts, const Actor& actor);
    std::set<rdf::Triple> stage_delete(provenance::ChangeSet& cs, const Configuration& cfg, const Iri& entity,
                                       const Actor& actor, const std::string& description);
    void handle_orphans(provenance::ChangeSet& cs, const Configuration& cfg, const std::set<rdf::Triple>& severed,
                        const std::optional<display::EntityConfig>& parent, const Actor& actor,
                        const OrphanDecisions& decisions);
    std::set<rdf::Triple> inbound(provenance::ChangeSet& cs, const Iri& entity);
    std::optional<shacl::FormSchema> schema_for(const Configuration& cfg, const EntityState& state,
                                                const std::optional<shacl::ShapeId>& shape) const;
    std::optional<display::EntityConfig> config_for(const Configuration& cfg, const EntityState& state,
                                                    const std::optional<shacl::ShapeId>& shape) const;

    provenance::ProvenanceEngine& prov_;
    std::shared_ptr<MintStrategy> mint_;
    mutable std::mutex config_mutex_;
    Configuration config_;
};

} // namespace provcurate::curation
