#pragma once

#include "provcurate/diagnostics.hpp"
#include "provcurate/error.hpp"
#include "provcurate/rdf/prefix_map.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/store/endpoint.hpp"
#include "provcurate/store/repository.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace provcurate::display {

using rdf::Iri;
using rdf::Term;
using shacl::ShapeId;

/// Invalid display rules or server configuration. `path` locates the
/// offending key (e.g. "entities[0].fields[1].widget"), `line` is 1-based or 0.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, std::string path = {}, std::size_t line = 0);

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

class NoApplicableClauseError : public Error {
public:
    using Error::Error;
};

enum class OrphanPolicy { ask, remove, keep };

std::string_view to_string(OrphanPolicy p) noexcept;
/// "ask", "delete" or "keep".
std::optional<OrphanPolicy> orphan_policy_from_string(std::string_view s) noexcept;

struct AutocompleteRule {
    std::size_t min_chars = 3;
    store::SearchTarget target = store::SearchTarget::same_type;

    friend bool operator==(const AutocompleteRule&, const AutocompleteRule&) = default;
};

struct FieldRule {
    Iri path;
    std::string display_name;
    bool visible = true;
    int order = 0;
    std::optional<shacl::WidgetKind> widget;
    std::optional<AutocompleteRule> autocomplete;

    friend bool operator==(const FieldRule&, const FieldRule&) = default;
};

/// Disjunction of conjunctions of paths; a clause matches when every path has an equal value.
struct DuplicateRule {
    std::vector<std::vector<Iri>> any_of;

    friend bool operator==(const DuplicateRule&, const DuplicateRule&) = default;
};

/// A field implemented through an intermediate entity:
/// `I a intermediateClass ; linkFrom <entity> ; linkTo <target>`.
struct VirtualPropertyRule {
    std::string label;
    ShapeId target_shape;
    Iri intermediate_class;
    Iri link_from;
    Iri link_to;

    friend bool operator==(const VirtualPropertyRule&, const VirtualPropertyRule&) = default;
};

/// `path` holds proxy entities chained by `next`.
struct OrderingRule {
    Iri path;
    Iri next;

    friend bool operator==(const OrderingRule&, const OrderingRule&) = default;
};

struct Binding {
    enum class Kind { cls, shape };
    Kind kind = Kind::cls;
    Iri iri;

    friend bool operator==(const Binding&, const Binding&) = default;
};

struct EntityConfig {
    Binding binding;
    std::string display_name;
    std::optional<std::string> label_query;
    std::vector<FieldRule> fields;
    std::optional<DuplicateRule> duplicates;
    std::vector<VirtualPropertyRule> virtual_properties;
    std::optional<OrderingRule> ordering;
    std::optional<OrphanPolicy> orphan_policy;

    const FieldRule* field(const Iri& path) const;
    const VirtualPropertyRule* virtual_property(std::string_view label) const;
    /// Visible field rules by ascending order.
    std::vector<FieldRule> visible_fields() const;

    friend bool operator==(const EntityConfig&, const EntityConfig&) = default;
};

struct RuleDefaults {
    OrphanPolicy orphan_policy = OrphanPolicy::ask;
    int lock_ttl_seconds = 300;

    friend bool operator==(const RuleDefaults&, const RuleDefaults&) = default;
};

struct DisplayRules {
    std::map<std::string, std::string> prefixes;
    RuleDefaults defaults;
    std::vector<EntityConfig> entries;

    rdf::PrefixMap prefix_map() const;
    /// "PREFIX p: <ns>\n" lines for every declared prefix.
    std::string sparql_prologue() const;

    friend bool operator==(const DisplayRules&, const DisplayRules&) = default;
};

/// Parses and validates a rules document against `catalog`.
/// Throws ConfigError carrying the key path and line.
DisplayRules load_rules(std::string_view yaml, const shacl::ShapeCatalog& catalog,
                        std::string_view source = "rules");
/// Reads and merges several rule files; prefixes and entries accumulate,
/// later defaults override earlier ones, duplicate bindings are rejected.
DisplayRules load_rules_files(const std::vector<std::string>& paths, const shacl::ShapeCatalog& catalog);
std::string dump_rules(const DisplayRules& rules);

/// Shape binding wins over class binding; none when neither is configured.
std::optional<EntityConfig> resolve_entity_config(const DisplayRules& rules, const std::vector<Iri>& classes,
                                                  const std::optional<ShapeId>& shape);

/// Label from the config's label query with `?entity` bound; falls back to
/// the IRI local name when there is no query, no result, or a failure
/// (failures are also logged to `log`).
std::string compute_label(const Iri& entity, const EntityConfig* config, const DisplayRules& rules,
                          store::SparqlEndpoint& data, DiagnosticsLog* log = nullptr);

/// SELECT ?dup query over every clause whose paths all have values,
/// combined with UNION. Multi-valued paths match when any value is equal.
/// The candidate itself never matches; `cls` restricts matches to a class.
/// Throws NoApplicableClauseError when no clause is instantiable.
std::string build_duplicate_query(const DuplicateRule& rule, const std::map<Iri, std::vector<Term>>& values,
                                  const Iri& candidate, const std::optional<Iri>& cls = std::nullopt);

/// Current rules snapshot; replaced wholesale on reload.
class RulesHolder {
public:
    explicit RulesHolder(std::shared_ptr<const DisplayRules> rules = std::make_shared<DisplayRules>());

    std::shared_ptr<const DisplayRules> get() const;
    void replace(std::shared_ptr<const DisplayRules> rules);

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const DisplayRules> rules_;
};

} // namespace provcurate::display
