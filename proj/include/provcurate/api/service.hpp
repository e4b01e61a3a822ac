#pragma once

#include "provcurate/api/config.hpp"
#include "provcurate/api/lock_store.hpp"
#include "provcurate/curation/engine.hpp"
#include "provcurate/diagnostics.hpp"
#include "provcurate/provenance/engine.hpp"
#include "provcurate/store/repository.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace provcurate::api {

struct ApiRequest {
    std::string method;
    /// Percent-decoded path, e.g. "/api/entity/https://example.org/br/1/history".
    std::string path;
    std::map<std::string, std::string> query;
    /// Header names in lower case.
    std::map<std::string, std::string> headers;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    Clock clock = provenance::system_now;
    /// Pre-built stores; built from the config when absent.
    std::shared_ptr<store::SparqlEndpoint> data;
    std::shared_ptr<store::SparqlEndpoint> provenance;
    bool record_lock_history = false;
};

/// Shapes and display rules named by `config`, with the config's orphan
/// policy and lock TTL applied. Catalog warnings go to `warnings`.
/// Throws ConfigError.
curation::Configuration load_curation_configuration(const ServerConfig& config, std::vector<Diagnostic>& warnings);

/// The JSON API: authentication, edit locks and routing to the curation
/// and provenance engines. Handlers may run concurrently.
class ApiService {
public:
    explicit ApiService(ServerConfig config, ServiceOptions options = {});
    ~ApiService();

    ApiResponse handle(const ApiRequest& request);

    /// Re-reads shape and rule files; the previous configuration stays in
    /// force when they fail to load. Throws ConfigError.
    void reload();
    /// Reloads when a shape or rule file changed on disk.
    bool reload_if_changed();

    const ServerConfig& config() const noexcept { return config_; }
    LockStore& locks() noexcept { return locks_; }
    DiagnosticsLog& diagnostics() noexcept { return diagnostics_; }
    store::Repository& repository() noexcept { return *repo_; }
    provenance::ProvenanceEngine& provenance() noexcept { return *prov_; }
    curation::CurationEngine& curation() noexcept { return *curation_; }
    std::shared_ptr<store::SparqlEndpoint> data_endpoint() const { return data_; }
    std::shared_ptr<store::SparqlEndpoint> provenance_endpoint() const { return provenance_; }

private:
    using FileTimes = std::map<std::string, std::filesystem::file_time_type>;

    curation::Configuration load_configuration(FileTimes& times);
    ApiResponse dispatch(const ApiRequest& req);

    ServerConfig config_;
    Clock clock_;
    std::shared_ptr<store::SparqlEndpoint> data_;
    std::shared_ptr<store::SparqlEndpoint> provenance_;
    std::unique_ptr<store::Repository> repo_;
    std::unique_ptr<provenance::ProvenanceEngine> prov_;
    std::unique_ptr<curation::CurationEngine> curation_;
    LockStore locks_;
    DiagnosticsLog diagnostics_;
    std::mutex reload_mutex_;
    FileTimes file_times_;
};

/// Routes every /api request of `server` to `service`.
void mount_api(httplib::Server& server, ApiService& service);

} // namespace provcurate::api
