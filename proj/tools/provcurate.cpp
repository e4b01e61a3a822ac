// provcurate: API server, embedded SPARQL endpoint and offline inspection commands.

#include "provcurate/api/codec.hpp"
#include "provcurate/api/config.hpp"
#include "provcurate/api/service.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/shacl/shapes.hpp"
#include "provcurate/store/endpoint.hpp"
#include "provcurate/store/protocol_server.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace provcurate;

namespace {

httplib::Server* running = nullptr;

void stop_on_signal(int)
{
    if (running) {
        running->stop();
    }
}

void serve_until_stopped(httplib::Server& server, const std::string& host, int port)
{
    running = &server;
    std::signal(SIGINT, stop_on_signal);
    std::signal(SIGTERM, stop_on_signal);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        running = nullptr;
        throw StoreError("cannot listen on " + host + ":" + std::to_string(port));
    }
    running = nullptr;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ContractViolation("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Embedded endpoint that rewrites its N-Quads file after every update.
class PersistingEndpoint : public store::SparqlEndpoint {
public:
    PersistingEndpoint(std::shared_ptr<store::EmbeddedEndpoint> inner, std::string path)
        : inner_(std::move(inner)), path_(std::move(path))
    {
    }

    store::QueryResult query(std::string_view sparql) override { return inner_->query(sparql); }

    void update(std::string_view sparql) override
    {
        std::lock_guard lock(mutex_);
        inner_->update(sparql);
        const auto tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << inner_->dump_nquads();
            if (!out) {
                throw StoreError("cannot write " + tmp);
            }
        }
        std::filesystem::rename(tmp, path_);
    }

    std::string describe() const override { return "embedded (" + path_ + ")"; }

private:
    std::shared_ptr<store::EmbeddedEndpoint> inner_;
    std::string path_;
    std::mutex mutex_;
};

api::ServerConfig load_config(const std::optional<std::string>& flag)
{
    const auto path = api::config_path(flag);
    if (!path) {
        throw api::ConfigError("no config: pass --config or set PROVCURATE_CONFIG");
    }
    return api::load_server_config(*path);
}

int run_serve(const std::optional<std::string>& config_flag, std::optional<std::string> host, std::optional<int> port,
              const std::string& static_dir, bool expose_sparql, int watch_ms)
{
    auto config = load_config(config_flag);
    if (host) {
        config.host = *host;
    }
    if (port) {
        config.port = *port;
    }
    api::ApiService service(config);
    for (const auto& d : service.diagnostics().snapshot()) {
        std::cerr << to_string(d.severity) << ": " << d.source << ": " << d.message << "\n";
    }
    httplib::Server server;
    api::mount_api(server, service);
    if (expose_sparql) {
        store::mount_sparql_protocol(server, service.data_endpoint(), "/sparql");
    }
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
        throw ContractViolation("no such directory " + static_dir);
    }
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (watch_ms > 0 && !done) {
            std::this_thread::sleep_for(std::chrono::milliseconds(watch_ms));
            try {
                if (service.reload_if_changed()) {
                    std::cerr << "configuration reloaded\n";
                }
            } catch (const std::exception& e) {
                std::cerr << "reload failed: " << e.what() << "\n";
            }
        }
    });
    try {
        serve_until_stopped(server, config.host, config.port);
    } catch (...) {
        done = true;
        watcher.join();
        throw;
    }
    done = true;
    watcher.join();
    return 0;
}

int run_sparql_endpoint(const std::string& host, int port, const std::string& base, const std::string& data,
                        const std::string& persist)
{
    auto embedded = std::make_shared<store::EmbeddedEndpoint>(base);
    const auto load = !data.empty() ? data : (!persist.empty() && std::filesystem::exists(persist) ? persist : "");
    if (!load.empty()) {
        std::cerr << "loaded " << embedded->load_nquads(read_file(load)) << " quads from " << load << "\n";
    }
    std::shared_ptr<store::SparqlEndpoint> endpoint = embedded;
    if (!persist.empty()) {
        endpoint = std::make_shared<PersistingEndpoint>(embedded, persist);
    }
    httplib::Server server;
    store::mount_sparql_protocol(server, endpoint, "/sparql");
    serve_until_stopped(server, host, port);
    return 0;
}

int run_compile(const std::vector<std::string>& files, const std::string& shape)
{
    shacl::ShapeCatalog catalog;
    for (const auto& f : files) {
        catalog.merge(shacl::parse_shapes(read_file(f), f));
    }
    for (const auto& w : catalog.warnings()) {
        std::cerr << to_string(w.severity) << ": " << w.source << ":" << w.line << ": " << w.message << "\n";
    }
    if (!shape.empty()) {
        std::cout << api::to_json(shacl::compile_shape(rdf::Iri(shape), catalog)).dump(2) << "\n";
        return 0;
    }
    api::Json out = api::Json::array();
    for (const auto& [id, _] : catalog.shapes()) {
        out.push_back(api::to_json(shacl::compile_shape(id, catalog)));
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_check_config(const std::optional<std::string>& config_flag)
{
    const auto config = load_config(config_flag);
    std::vector<Diagnostic> warnings;
    const auto configuration = api::load_curation_configuration(config, warnings);
    for (const auto& w : warnings) {
        std::cerr << to_string(w.severity) << ": " << w.source << ": " << w.message << "\n";
    }
    for (const auto& [id, _] : configuration.shapes->shapes()) {
        shacl::compile_shape(id, *configuration.shapes);
    }
    std::cout << "ok: " << configuration.shapes->size() << " shapes, " << configuration.rules->entries.size()
              << " rule entries, " << config.allowlist.size() << " allowlisted agents\n";
    return 0;
}

int run_history(const std::optional<std::string>& config_flag, const std::string& nquads, const std::string& entity)
{
    std::unique_ptr<api::ApiService> service;
    if (!nquads.empty()) {
        auto config = config_flag ? load_config(config_flag)
                                  : api::parse_server_config("baseIri: urn:provcurate\nallowlist: [urn:provcurate:agent:system]\n");
        auto embedded = std::make_shared<store::EmbeddedEndpoint>(config.base_iri);
        embedded->load_nquads(read_file(nquads));
        config.data_file.reset();
        service = std::make_unique<api::ApiService>(config, api::ServiceOptions{provenance::system_now, embedded,
                                                                                embedded, false});
    } else {
        service = std::make_unique<api::ApiService>(load_config(config_flag));
    }
    std::cout << api::to_json(service->provenance().history(rdf::Iri(entity))).dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Provenance-aware curation of RDF data"};
    app.require_subcommand(1);

    std::optional<std::string> config;
    std::optional<std::string> host;
    std::optional<int> port;
    std::string static_dir;
    bool expose_sparql = false;
    int watch_ms = 2000;
    auto* serve = app.add_subcommand("serve", "Run the JSON API");
    serve->add_option("--config", config, "Server config YAML (default: $PROVCURATE_CONFIG)");
    serve->add_option("--host", host, "Listen address (overrides the config)");
    serve->add_option("--port", port, "Listen port (overrides the config)");
    serve->add_option("--static", static_dir, "Directory served at / (the web client bundle)");
    serve->add_flag("--sparql", expose_sparql, "Expose the data store at /sparql without authentication");
    serve->add_option("--watch-ms", watch_ms, "Poll interval for shape and rule changes; 0 disables");

    std::string ep_host = "127.0.0.1";
    int ep_port = 3030;
    std::string ep_base = "urn:provcurate";
    std::string ep_data;
    std::string ep_persist;
    auto* endpoint = app.add_subcommand("sparql-endpoint", "Serve an embedded store over the SPARQL protocol");
    endpoint->add_option("--host", ep_host, "Listen address");
    endpoint->add_option("--port", ep_port, "Listen port");
    endpoint->add_option("--base", ep_base, "Base IRI for skolemized blank nodes");
    endpoint->add_option("--data", ep_data, "N-Quads file loaded at startup");
    endpoint->add_option("--persist", ep_persist, "N-Quads file rewritten after every update and loaded at startup");

    std::vector<std::string> shape_files;
    std::string shape;
    auto* compile = app.add_subcommand("compile", "Print the form schema compiled from SHACL shapes");
    compile->add_option("files", shape_files, "Turtle shape files")->required();
    compile->add_option("--shape", shape, "Compile one shape only");

    auto* check = app.add_subcommand("check-config", "Validate a server config with its shapes and rules");
    check->add_option("--config", config, "Server config YAML (default: $PROVCURATE_CONFIG)");

    std::string nquads;
    std::string entity;
    auto* history = app.add_subcommand("history", "Print the snapshot chain of an entity");
    history->add_option("--config", config, "Server config YAML (default: $PROVCURATE_CONFIG)");
    history->add_option("--nquads", nquads, "Read both stores from an N-Quads dump instead");
    history->add_option("entity", entity, "Entity IRI")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*serve) {
            return run_serve(config, host, port, static_dir, expose_sparql, watch_ms);
        }
        if (*endpoint) {
            return run_sparql_endpoint(ep_host, ep_port, ep_base, ep_data, ep_persist);
        }
        if (*compile) {
            return run_compile(shape_files, shape);
        }
        if (*check) {
            return run_check_config(config);
        }
        return run_history(config, nquads, entity);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
