#pragma once

#include "provcurate/store/quad_store.hpp"
#include "provcurate/store/results.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace provcurate::store {

/// A SPARQL endpoint. Queries and updates use the supported SPARQL subset.
/// Malformed requests raise ParseError; transport or backend failures raise StoreError.
class SparqlEndpoint {
public:
    virtual ~SparqlEndpoint() = default;

    virtual QueryResult query(std::string_view sparql) = 0;
    /// Applies the whole request atomically (embedded) or as one request (remote).
    virtual void update(std::string_view sparql) = 0;
    virtual std::string describe() const = 0;
};

/// Blank-node skolem IRI: `<base>/.well-known/genid/<uuid>`.
std::string skolem_prefix(std::string_view base);
rdf::Iri fresh_skolem(std::string_view base);

/// In-process endpoint over a QuadStore. Updates are transactional: any
/// failure while applying a request restores the state before the request.
class EmbeddedEndpoint : public SparqlEndpoint {
public:
    explicit EmbeddedEndpoint(std::string skolem_base = "urn:provcurate");

    QueryResult query(std::string_view sparql) override;
    void update(std::string_view sparql) override;
    std::string describe() const override { return "embedded"; }

    /// Loads N-Quads or N-Triples; blank nodes are replaced by fresh skolem IRIs.
    std::size_t load_nquads(std::string_view text);
    std::string dump_nquads() const;
    std::vector<rdf::Quad> quads() const;
    std::size_t size() const;

    /// Called before each quad change of an update; an exception thrown by
    /// the hook aborts and rolls back the request.
    void set_fault_injector(std::function<void(const rdf::Quad&)> hook);
    /// Number of update requests received, including failed ones.
    std::size_t update_requests() const noexcept { return update_requests_.load(); }

private:
    std::string skolem_base_;
    QuadStore store_;
    std::mutex hook_mutex_;
    std::function<void(const rdf::Quad&)> fault_;
    std::atomic<std::size_t> update_requests_{0};
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff{200};
};

/// SPARQL 1.1 Protocol client. Connection failures and 5xx responses are
/// retried with exponential backoff; 4xx responses fail immediately.
class HttpEndpoint : public SparqlEndpoint {
public:
    HttpEndpoint(std::string url, std::chrono::milliseconds timeout, RetryPolicy retry);

    QueryResult query(std::string_view sparql) override;
    void update(std::string_view sparql) override;
    std::string describe() const override { return url_; }

private:
    std::string url_;
    std::string origin_;
    std::string path_;
    std::chrono::milliseconds timeout_;
    RetryPolicy retry_;

    struct Response {
        int status = 0;
        std::string content_type;
        std::string body;
    };
    Response post(const std::string& content_type, std::string_view body, const std::string& accept);
};

/// Builds an endpoint from a config value: "embedded" or an http(s) URL.
std::shared_ptr<SparqlEndpoint> make_endpoint(const std::string& spec, std::chrono::milliseconds timeout,
                                              RetryPolicy retry, const std::string& skolem_base);

} // namespace provcurate::store
