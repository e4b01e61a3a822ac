#include "provcurate/store/results.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/turtle.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <json.hpp>

namespace provcurate::store {

using nlohmann::json;

std::size_t QueryResult::column(std::string_view var) const
{
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i] == var) {
            return i;
        }
    }
    throw ContractViolation("result has no variable ?" + std::string(var));
}

const std::optional<rdf::Term>& QueryResult::get(std::size_t row, std::string_view var) const
{
    return rows.at(row).at(column(var));
}

namespace {

json term_json(const rdf::Term& t)
{
    if (const auto* iri = std::get_if<rdf::Iri>(&t)) {
        return {{"type", "uri"}, {"value", iri->str()}};
    }
    if (const auto* b = std::get_if<rdf::BlankNode>(&t)) {
        return {{"type", "bnode"}, {"value", b->id}};
    }
    const auto& lit = std::get<rdf::Literal>(t);
    json j = {{"type", "literal"}, {"value", lit.lexical()}};
    if (lit.language()) {
        j["xml:lang"] = *lit.language();
    } else if (lit.datatype().str() != vocab::xsd_string) {
        j["datatype"] = lit.datatype().str();
    }
    return j;
}

rdf::Term json_term(const json& j)
{
    const std::string type = j.at("type").get<std::string>();
    const std::string value = j.at("value").get<std::string>();
    if (type == "uri") {
        return rdf::Iri(value);
    }
    if (type == "bnode") {
        return rdf::BlankNode{value};
    }
    if (type == "literal" || type == "typed-literal") {
        if (j.contains("xml:lang")) {
            return rdf::Literal(value, j.at("xml:lang").get<std::string>());
        }
        if (j.contains("datatype")) {
            return rdf::Literal(value, rdf::Iri(j.at("datatype").get<std::string>()));
        }
        return rdf::Literal::string(value);
    }
    throw ParseError("unknown RDF term type '" + type + "' in results", 0, 0);
}

} // namespace

std::string to_results_json(const QueryResult& result)
{
    if (result.kind == QueryResult::Kind::boolean) {
        return json{{"head", json::object()}, {"boolean", result.boolean}}.dump();
    }
    if (result.kind != QueryResult::Kind::bindings) {
        throw ContractViolation("graph results have no JSON results form");
    }
    json bindings = json::array();
    for (const auto& row : result.rows) {
        json b = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i]) {
                b[result.variables[i]] = term_json(*row[i]);
            }
        }
        bindings.push_back(std::move(b));
    }
    return json{{"head", {{"vars", result.variables}}}, {"results", {{"bindings", std::move(bindings)}}}}.dump();
}

QueryResult from_results_json(std::string_view text)
{
    QueryResult r;
    try {
        const json doc = json::parse(text);
        if (doc.contains("boolean")) {
            r.kind = QueryResult::Kind::boolean;
            r.boolean = doc.at("boolean").get<bool>();
            return r;
        }
        r.kind = QueryResult::Kind::bindings;
        const auto& head = doc.at("head");
        if (head.contains("vars")) {
            r.variables = head.at("vars").get<std::vector<std::string>>();
        }
        for (const auto& b : doc.at("results").at("bindings")) {
            Row row(r.variables.size());
            for (auto it = b.begin(); it != b.end(); ++it) {
                std::size_t col = r.variables.size();
                for (std::size_t i = 0; i < r.variables.size(); ++i) {
                    if (r.variables[i] == it.key()) {
                        col = i;
                    }
                }
                if (col == r.variables.size()) {
                    r.variables.push_back(it.key());
                    for (auto& prev : r.rows) {
                        prev.emplace_back();
                    }
                    row.emplace_back();
                }
                row[col] = json_term(it.value());
            }
            r.rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed SPARQL results: ") + e.what(), 0, 0);
    } catch (const ContractViolation& e) {
        throw ParseError(std::string("malformed term in SPARQL results: ") + e.what(), 0, 0);
    }
    return r;
}

std::string to_ntriples_document(const QueryResult& result)
{
    std::string out;
    for (const auto& t : result.triples) {
        out += rdf::to_ntriples(t);
        out += '\n';
    }
    return out;
}

QueryResult from_ntriples_document(std::string_view text)
{
    QueryResult r;
    r.kind = QueryResult::Kind::graph;
    for (auto& q : rdf::parse_nquads(text)) {
        r.triples.push_back(std::move(q.triple));
    }
    return r;
}

} // namespace provcurate::store
