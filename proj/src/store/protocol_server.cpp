#include "provcurate/store/protocol_server.hpp"

#include "provcurate/error.hpp"
#include "provcurate/store/sparql.hpp"

#include <httplib.h>

namespace provcurate::store {

namespace {

void run_query(SparqlEndpoint& endpoint, const std::string& text, httplib::Response& res)
{
    const auto result = endpoint.query(text);
    if (result.kind == QueryResult::Kind::graph) {
        res.set_content(to_ntriples_document(result), "application/n-triples");
    } else {
        res.set_content(to_results_json(result), "application/sparql-results+json");
    }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn)
{
    try {
        fn();
    } catch (const ParseError& e) {
        res.status = 400;
        res.set_content(e.what(), "text/plain");
    } catch (const ContractViolation& e) {
        res.status = 400;
        res.set_content(e.what(), "text/plain");
    } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(e.what(), "text/plain");
    }
}

} // namespace

void mount_sparql_protocol(httplib::Server& server, std::shared_ptr<SparqlEndpoint> endpoint,
                           const std::string& path)
{
    server.Get(path, [endpoint](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_param("query")) {
                res.status = 400;
                res.set_content("missing query parameter", "text/plain");
                return;
            }
            run_query(*endpoint, req.get_param_value("query"), res);
        });
    });
    server.Post(path, [endpoint](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto type = req.get_header_value("Content-Type");
            if (type.rfind("application/sparql-query", 0) == 0) {
                run_query(*endpoint, req.body, res);
            } else if (type.rfind("application/sparql-update", 0) == 0) {
                endpoint->update(req.body);
                res.status = 204;
            } else if (req.has_param("query")) {
                run_query(*endpoint, req.get_param_value("query"), res);
            } else if (req.has_param("update")) {
                endpoint->update(req.get_param_value("update"));
                res.status = 204;
            } else {
                res.status = 415;
                res.set_content("expected a SPARQL query or update", "text/plain");
            }
        });
    });
}

} // namespace provcurate::store
