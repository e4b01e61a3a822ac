#pragma once

#include "provcurate/error.hpp"
#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/rdf/term.hpp"

#include <set>
#include <string>
#include <string_view>

namespace provcurate::rdf {

/// Strict-mode replay failure: a deletion of an absent triple or an insertion
/// of a present one. Signals a corrupted snapshot chain.
class ReplayIntegrityError : public Error {
public:
    using Error::Error;
};

/// Delta text uses SPARQL features outside the ground DELETE DATA / INSERT DATA form.
class UnsupportedDeltaError : public Error {
public:
    using Error::Error;
};

/// Disjoint sets of deleted and inserted ground triples.
class GraphDelta {
public:
    GraphDelta() = default;
    /// Throws ContractViolation when the sets intersect or contain blank nodes.
    GraphDelta(std::set<Triple> deletions, std::set<Triple> insertions);

    const std::set<Triple>& deletions() const noexcept { return deletions_; }
    const std::set<Triple>& insertions() const noexcept { return insertions_; }
    bool empty() const noexcept { return deletions_.empty() && insertions_.empty(); }

    friend bool operator==(const GraphDelta&, const GraphDelta&) = default;

private:
    std::set<Triple> deletions_;
    std::set<Triple> insertions_;
};

GraphDelta diff(const EntityState& before, const EntityState& after);

/// Strict application; throws ReplayIntegrityError on phantom deletions or
/// duplicate insertions, ContractViolation when a triple has another subject.
EntityState apply_delta(const EntityState& state, const GraphDelta& delta);

GraphDelta invert_delta(const GraphDelta& delta);

/// `DELETE DATA { ... } ; INSERT DATA { ... }` in canonical triple order.
/// Blocks with no triples are omitted; the empty delta is the empty string.
std::string serialize_delta(const GraphDelta& delta);

/// Inverse of serialize_delta. Accepts any whitespace layout and plain
/// (datatype-less) string literals.
GraphDelta parse_delta(std::string_view text);

} // namespace provcurate::rdf
