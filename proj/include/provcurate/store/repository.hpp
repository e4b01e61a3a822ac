#pragma once

#include "provcurate/rdf/delta.hpp"
#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/store/endpoint.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace provcurate::store {

/// Destination store of an update.
enum class Route { data, provenance };

struct GraphUpdate {
    Route route = Route::data;
    std::optional<rdf::Iri> graph;  // empty: default graph
    rdf::GraphDelta delta;
};

/// Whether a search returns the matched entity or the resource referencing it.
enum class SearchTarget { same_type, parent };

struct SearchHit {
    rdf::Iri entity;
    std::string value;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct ClassCount {
    rdf::Iri cls;
    std::size_t count = 0;

    friend bool operator==(const ClassCount&, const ClassCount&) = default;
};

/// Entity-level reads and atomic writes over the data and provenance
/// endpoints. Entity data lives in the default graph of the data store.
class Repository {
public:
    Repository(std::shared_ptr<SparqlEndpoint> data, std::shared_ptr<SparqlEndpoint> provenance,
               std::string skolem_base);

    /// Outgoing default-graph triples of `entity`; empty when unknown.
    rdf::EntityState fetch_entity_state(const rdf::Iri& entity);
    /// All default-graph triples whose object is `entity`, self references included.
    std::set<rdf::Triple> fetch_inbound(const rdf::Iri& entity);
    /// Instance counts per rdf:type, by count descending then IRI ascending.
    std::vector<ClassCount> discover_classes();
    /// Case-insensitive substring search over literal values of `field` on
    /// instances of `cls`. Queries shorter than `min_chars` return nothing.
    std::vector<SearchHit> search(const rdf::Iri& cls, const rdf::Iri& field, std::string_view q,
                                  std::size_t min_chars, SearchTarget target, std::size_t limit = 50);
    /// Applies all updates; one request when both routes share an endpoint.
    /// When the routes are separate and the provenance write fails, the data
    /// write is compensated and StoreError reports the partial application.
    void apply_update(const std::vector<GraphUpdate>& updates);

    bool ask_data(std::string_view sparql);
    QueryResult query_data(std::string_view sparql);
    QueryResult query_provenance(std::string_view sparql);

    SparqlEndpoint& data() noexcept { return *data_; }
    SparqlEndpoint& provenance() noexcept { return *provenance_; }
    bool shared_endpoint() const noexcept { return data_ == provenance_; }
    const std::string& skolem_base() const noexcept { return skolem_base_; }

    /// Maps a remote blank node to a skolem IRI derived from its label.
    rdf::Term skolemize(const rdf::Term& t) const;

private:
    std::shared_ptr<SparqlEndpoint> data_;
    std::shared_ptr<SparqlEndpoint> provenance_;
    std::string skolem_base_;
};

/// Update request text: per update a DELETE DATA then an INSERT DATA
/// operation, skipping empty ones, joined by " ;\n". Empty for no changes.
std::string update_request(const std::vector<GraphUpdate>& updates);

/// Escapes `text` for use inside a double-quoted SPARQL string.
std::string sparql_string(std::string_view text);

} // namespace provcurate::store
