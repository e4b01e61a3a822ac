#include "provcurate/store/endpoint.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/turtle.hpp"
#include "provcurate/store/sparql_eval.hpp"

#include <boost/uuid/uuid_generators.hpp>
#include <boost/uuid/uuid_io.hpp>
#include <httplib.h>

#include <map>
#include <thread>

namespace provcurate::store {

std::string skolem_prefix(std::string_view base)
{
    std::string b(base);
    while (!b.empty() && b.back() == '/') {
        b.pop_back();
    }
    return b + "/.well-known/genid/";
}

rdf::Iri fresh_skolem(std::string_view base)
{
    thread_local boost::uuids::random_generator gen;
    return rdf::Iri(skolem_prefix(base) + boost::uuids::to_string(gen()));
}

// ---- embedded ----

EmbeddedEndpoint::EmbeddedEndpoint(std::string skolem_base) : skolem_base_(std::move(skolem_base)) {}

QueryResult EmbeddedEndpoint::query(std::string_view sparql)
{
    const Query q = parse_query(sparql);
    std::shared_lock lock(store_.mutex());
    return evaluate(q, store_);
}

void EmbeddedEndpoint::update(std::string_view sparql)
{
    ++update_requests_;
    const Update u = parse_update(sparql);
    std::function<void(const rdf::Quad&)> hook;
    {
        std::lock_guard guard(hook_mutex_);
        hook = fault_;
    }
    std::unique_lock lock(store_.mutex());
    std::vector<std::pair<rdf::Quad, bool>> undo;
    auto change = [&](const rdf::Quad& q, bool insert) {
        if (store_.contains(q) == insert) {
            return;
        }
        if (hook) {
            hook(q);
        }
        if (insert) {
            store_.insert(q);
        } else {
            store_.erase(q);
        }
        undo.emplace_back(q, insert);
    };
    try {
        for (const auto& op : u.operations) {
            switch (op.kind) {
            case UpdateOperation::Kind::insert_data:
                for (const auto& q : op.quads) {
                    change(q, true);
                }
                break;
            case UpdateOperation::Kind::delete_data:
                for (const auto& q : op.quads) {
                    change(q, false);
                }
                break;
            case UpdateOperation::Kind::clear_graph:
            case UpdateOperation::Kind::clear_all:
                for (const auto& q : store_.quads()) {
                    if (op.kind == UpdateOperation::Kind::clear_all || q.graph == op.graph) {
                        change(q, false);
                    }
                }
                break;
            }
        }
    } catch (const std::exception& e) {
        for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
            if (it->second) {
                store_.erase(it->first);
            } else {
                store_.insert(it->first);
            }
        }
        throw StoreError(std::string("update rolled back: ") + e.what());
    }
}

std::size_t EmbeddedEndpoint::load_nquads(std::string_view text)
{
    auto quads = rdf::parse_nquads(text);
    std::map<std::string, rdf::Iri> skolems;
    auto skolemize = [&](const rdf::BlankNode& b) {
        auto it = skolems.find(b.id);
        if (it == skolems.end()) {
            it = skolems.emplace(b.id, fresh_skolem(skolem_base_)).first;
        }
        return it->second;
    };
    std::unique_lock lock(store_.mutex());
    std::size_t added = 0;
    for (auto& q : quads) {
        if (const auto* b = std::get_if<rdf::BlankNode>(&q.triple.subject)) {
            q.triple.subject = skolemize(*b);
        }
        if (const auto* b = std::get_if<rdf::BlankNode>(&q.triple.object)) {
            q.triple.object = skolemize(*b);
        }
        added += store_.insert(q) ? 1 : 0;
    }
    return added;
}

std::string EmbeddedEndpoint::dump_nquads() const
{
    return rdf::write_nquads(quads());
}

std::vector<rdf::Quad> EmbeddedEndpoint::quads() const
{
    std::shared_lock lock(store_.mutex());
    return store_.quads();
}

std::size_t EmbeddedEndpoint::size() const
{
    std::shared_lock lock(store_.mutex());
    return store_.size();
}

void EmbeddedEndpoint::set_fault_injector(std::function<void(const rdf::Quad&)> hook)
{
    std::lock_guard guard(hook_mutex_);
    fault_ = std::move(hook);
}

// ---- remote ----

HttpEndpoint::HttpEndpoint(std::string url, std::chrono::milliseconds timeout, RetryPolicy retry)
    : url_(std::move(url)), timeout_(timeout), retry_(retry)
{
    constexpr std::string_view scheme = "http://";
    if (url_.rfind(scheme, 0) != 0) {
        throw ContractViolation("only http:// endpoints are supported: " + url_);
    }
    const auto slash = url_.find('/', scheme.size());
    origin_ = slash == std::string::npos ? url_ : url_.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url_.substr(slash);
    if (retry_.max_attempts < 1) {
        retry_.max_attempts = 1;
    }
}

HttpEndpoint::Response HttpEndpoint::post(const std::string& content_type, std::string_view body,
                                          const std::string& accept)
{
    std::string last_error;
    for (int attempt = 0; attempt < retry_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(retry_.backoff * (1 << (attempt - 1)));
        }
        httplib::Client client(origin_);
        const auto secs = timeout_.count() / 1000;
        const auto usecs = (timeout_.count() % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        httplib::Headers headers;
        if (!accept.empty()) {
            headers.emplace("Accept", accept);
        }
        auto res = client.Post(path_, headers, std::string(body), content_type);
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        if (res->status >= 400) {
            throw StoreError(url_ + " rejected the request with HTTP " + std::to_string(res->status) + ": " +
                             res->body);
        }
        return Response{res->status, res->get_header_value("Content-Type"), res->body};
    }
    throw StoreError(url_ + " failed after " + std::to_string(retry_.max_attempts) + " attempts: " + last_error);
}

QueryResult HttpEndpoint::query(std::string_view sparql)
{
    const auto res = post("application/sparql-query", sparql,
                          "application/sparql-results+json, application/n-triples;q=0.9");
    if (res.content_type.rfind("application/n-triples", 0) == 0) {
        return from_ntriples_document(res.body);
    }
    try {
        return from_results_json(res.body);
    } catch (const ParseError& e) {
        throw StoreError(url_ + " returned unreadable results: " + e.what());
    }
}

void HttpEndpoint::update(std::string_view sparql)
{
    post("application/sparql-update", sparql, "");
}

std::shared_ptr<SparqlEndpoint> make_endpoint(const std::string& spec, std::chrono::milliseconds timeout,
                                              RetryPolicy retry, const std::string& skolem_base)
{
    if (spec == "embedded") {
        return std::make_shared<EmbeddedEndpoint>(skolem_base);
    }
    return std::make_shared<HttpEndpoint>(spec, timeout, retry);
}

} // namespace provcurate::store
