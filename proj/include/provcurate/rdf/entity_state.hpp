#pragma once

#include "provcurate/rdf/term.hpp"

#include <set>
#include <vector>

namespace provcurate::rdf {

/// The outgoing triples of one entity; the unit of versioning.
class EntityState {
public:
    EntityState() = default;
    explicit EntityState(Iri entity) : entity_(std::move(entity)) {}
    /// Throws ContractViolation when a triple's subject is not `entity`.
    EntityState(Iri entity, std::set<Triple> triples);

    const Iri& entity() const noexcept { return entity_; }
    const std::set<Triple>& triples() const noexcept { return triples_; }
    bool empty() const noexcept { return triples_.empty(); }
    std::size_t size() const noexcept { return triples_.size(); }

    /// Adds (entity, predicate, object); returns false when already present.
    bool add(const Iri& predicate, Term object);
    bool contains(const Triple& t) const { return triples_.count(t) != 0; }

    std::vector<Term> objects(const Iri& predicate) const;
    std::vector<Iri> types() const;

    /// Canonical N-Triples dump, one sorted line per triple.
    std::string canonical() const;

    friend bool operator==(const EntityState&, const EntityState&) = default;

private:
    Iri entity_;
    std::set<Triple> triples_;
};

} // namespace provcurate::rdf
