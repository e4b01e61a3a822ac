#pragma once

#include "provcurate/display/rules.hpp"
#include "provcurate/error.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace provcurate::api {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct EndpointConfig {
    /// "embedded" or an http:// SPARQL endpoint URL.
    std::string data = "embedded";
    std::string provenance = "embedded";
    std::chrono::milliseconds timeout{10000};
    int retries = 3;
};

struct ServerConfig {
    std::string base_iri;
    std::vector<std::string> shape_files;
    std::vector<std::string> rule_files;
    EndpointConfig endpoints;
    /// Bearer token to agent identifier.
    std::map<std::string, std::string> agents;
    std::set<std::string> allowlist;
    std::string baseline_source;
    std::optional<std::string> baseline_created_at;
    /// Overrides the rules' default when set.
    std::optional<display::OrphanPolicy> default_orphan_policy;
    int lock_ttl_seconds = 300;
    std::string mint_strategy = "sequential";
    bool anonymous_read = true;
    /// N-Quads loaded into an embedded data store at startup.
    std::optional<std::string> data_file;
    std::string host = "127.0.0.1";
    int port = 8080;
};

/// Parses a server config document. Relative file paths are resolved
/// against `base_dir`. Throws ConfigError naming the offending key.
ServerConfig parse_server_config(std::string_view yaml, const std::string& base_dir = ".");
ServerConfig load_server_config(const std::string& path);

/// Config path from `--config`, else the PROVCURATE_CONFIG environment variable.
std::optional<std::string> config_path(const std::optional<std::string>& flag);

} // namespace provcurate::api
