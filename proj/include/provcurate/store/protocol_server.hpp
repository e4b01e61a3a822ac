#pragma once

#include "provcurate/store/endpoint.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace provcurate::store {

/// Serves `endpoint` with the SPARQL 1.1 Protocol at `path`: queries by GET
/// or POST (form or application/sparql-query), updates by POST (form or
/// application/sparql-update). Results are SPARQL JSON or N-Triples.
void mount_sparql_protocol(httplib::Server& server, std::shared_ptr<SparqlEndpoint> endpoint,
                           const std::string& path = "/sparql");

} // namespace provcurate::store
