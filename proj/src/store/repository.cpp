#include "provcurate/store/repository.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/vocab.hpp"
#include "provcurate/store/sparql.hpp"

#include <algorithm>

namespace provcurate::store {

std::string sparql_string(std::string_view text)
{
    return "\"" + rdf::escape_string(text) + "\"";
}

namespace {

std::string graph_block(const std::optional<rdf::Iri>& graph, const std::set<rdf::Triple>& triples)
{
    std::vector<rdf::Triple> sorted(triples.begin(), triples.end());
    std::sort(sorted.begin(), sorted.end(), rdf::CanonicalTripleLess{});
    std::string body;
    for (const auto& t : sorted) {
        body += rdf::to_ntriples(t);
        body += ' ';
    }
    if (graph) {
        return "{ GRAPH <" + graph->str() + "> { " + body + "} }";
    }
    return "{ " + body + "}";
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string update_request(const std::vector<GraphUpdate>& updates)
{
    std::vector<std::string> ops;
    for (const auto& u : updates) {
        if (!u.delta.deletions().empty()) {
            ops.push_back("DELETE DATA " + graph_block(u.graph, u.delta.deletions()));
        }
        if (!u.delta.insertions().empty()) {
            ops.push_back("INSERT DATA " + graph_block(u.graph, u.delta.insertions()));
        }
    }
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) {
            out += " ;\n";
        }
        out += ops[i];
    }
    return out;
}

Repository::Repository(std::shared_ptr<SparqlEndpoint> data, std::shared_ptr<SparqlEndpoint> provenance,
                       std::string skolem_base)
    : data_(std::move(data)), provenance_(std::move(provenance)), skolem_base_(std::move(skolem_base))
{
    if (!data_ || !provenance_) {
        throw ContractViolation("repository needs both endpoints");
    }
}

rdf::Term Repository::skolemize(const rdf::Term& t) const
{
    if (const auto* b = std::get_if<rdf::BlankNode>(&t)) {
        return rdf::Iri(skolem_prefix(skolem_base_) + b->id);
    }
    return t;
}

rdf::EntityState Repository::fetch_entity_state(const rdf::Iri& entity)
{
    const auto r = data_->query("SELECT ?p ?o WHERE { <" + entity.str() + "> ?p ?o }");
    rdf::EntityState state(entity);
    const auto p = r.column("p");
    const auto o = r.column("o");
    for (const auto& row : r.rows) {
        if (!row[p] || !row[o] || !rdf::is_iri(*row[p])) {
            continue;
        }
        state.add(std::get<rdf::Iri>(*row[p]), skolemize(*row[o]));
    }
    return state;
}

std::set<rdf::Triple> Repository::fetch_inbound(const rdf::Iri& entity)
{
    const auto r = data_->query("SELECT ?s ?p WHERE { ?s ?p <" + entity.str() + "> }");
    std::set<rdf::Triple> out;
    const auto s = r.column("s");
    const auto p = r.column("p");
    for (const auto& row : r.rows) {
        if (!row[s] || !row[p] || !rdf::is_iri(*row[p])) {
            continue;
        }
        out.insert(rdf::Triple{rdf::to_subject(skolemize(*row[s])), std::get<rdf::Iri>(*row[p]), entity});
    }
    return out;
}

std::vector<ClassCount> Repository::discover_classes()
{
    const auto r = data_->query("SELECT ?c (COUNT(DISTINCT ?s) AS ?n) WHERE { ?s a ?c } GROUP BY ?c");
    std::vector<ClassCount> out;
    const auto c = r.column("c");
    const auto n = r.column("n");
    for (const auto& row : r.rows) {
        if (!row[c] || !row[n] || !rdf::is_iri(*row[c]) || !rdf::is_literal(*row[n])) {
            continue;
        }
        out.push_back(ClassCount{std::get<rdf::Iri>(*row[c]),
                                 static_cast<std::size_t>(std::stoull(std::get<rdf::Literal>(*row[n]).lexical()))});
    }
    std::sort(out.begin(), out.end(), [](const ClassCount& a, const ClassCount& b) {
        return a.count != b.count ? a.count > b.count : a.cls.str() < b.cls.str();
    });
    return out;
}

std::vector<SearchHit> Repository::search(const rdf::Iri& cls, const rdf::Iri& field, std::string_view q,
                                          std::size_t min_chars, SearchTarget target, std::size_t limit)
{
    if (q.size() < min_chars || q.empty()) {
        return {};
    }
    const std::string needle = sparql_string(ascii_lower(q));
    const std::string match = "?e a <" + cls.str() + "> ; <" + field.str() + "> ?v . FILTER(isLiteral(?v) && CONTAINS(LCASE(STR(?v)), " + needle + "))";
    std::string query;
    if (target == SearchTarget::parent) {
        query = "SELECT DISTINCT ?hit ?v WHERE { " + match + " ?hit ?link ?e . FILTER(?hit != ?e) }";
    } else {
        query = "SELECT DISTINCT ?hit ?v WHERE { " + match + " BIND(?e AS ?hit) }";
    }
    query += " ORDER BY ?hit ?v LIMIT " + std::to_string(limit);
    const auto r = data_->query(query);
    std::vector<SearchHit> out;
    const auto h = r.column("hit");
    const auto v = r.column("v");
    for (const auto& row : r.rows) {
        if (!row[h] || !row[v]) {
            continue;
        }
        const auto hit = skolemize(*row[h]);
        if (!rdf::is_iri(hit)) {
            continue;
        }
        out.push_back(SearchHit{std::get<rdf::Iri>(hit), rdf::lexical_value(*row[v])});
    }
    return out;
}

void Repository::apply_update(const std::vector<GraphUpdate>& updates)
{
    if (shared_endpoint()) {
        const auto request = update_request(updates);
        if (!request.empty()) {
            data_->update(request);
        }
        return;
    }
    std::vector<GraphUpdate> data_part;
    std::vector<GraphUpdate> prov_part;
    for (const auto& u : updates) {
        (u.route == Route::data ? data_part : prov_part).push_back(u);
    }
    const auto data_request = update_request(data_part);
    const auto prov_request = update_request(prov_part);
    if (!data_request.empty()) {
        data_->update(data_request);
    }
    if (prov_request.empty()) {
        return;
    }
    try {
        provenance_->update(prov_request);
    } catch (const std::exception& e) {
        std::vector<GraphUpdate> undo;
        for (auto it = data_part.rbegin(); it != data_part.rend(); ++it) {
            undo.push_back(GraphUpdate{it->route, it->graph, rdf::invert_delta(it->delta)});
        }
        std::string compensation = "compensated";
        try {
            const auto undo_request = update_request(undo);
            if (!undo_request.empty()) {
                data_->update(undo_request);
            }
        } catch (const std::exception& inner) {
            compensation = std::string("compensation failed: ") + inner.what();
        }
        throw StoreError(std::string("partial application: provenance write failed (") + e.what() +
                         "); data write " + compensation);
    }
}

bool Repository::ask_data(std::string_view sparql)
{
    const auto r = data_->query(sparql);
    if (r.kind != QueryResult::Kind::boolean) {
        throw ContractViolation("expected an ASK query");
    }
    return r.boolean;
}

QueryResult Repository::query_data(std::string_view sparql)
{
    return data_->query(sparql);
}

QueryResult Repository::query_provenance(std::string_view sparql)
{
    return provenance_->query(sparql);
}

} // namespace provcurate::store
