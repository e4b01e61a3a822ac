#include "provcurate/api/config.hpp"

#include "provcurate/provenance/timestamp.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace provcurate::api {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message)
{
    throw ConfigError("config: " + key + ": " + message);
}

std::string resolve(const std::string& base_dir, const std::string& path)
{
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string scalar(const YAML::Node& node, const std::string& key)
{
    if (!node.IsScalar()) {
        fail(key, "expected a scalar");
    }
    return node.as<std::string>();
}

std::vector<std::string> paths(const YAML::Node& node, const std::string& key, const std::string& base_dir)
{
    std::vector<std::string> out;
    if (!node) {
        return out;
    }
    if (node.IsScalar()) {
        out.push_back(resolve(base_dir, node.as<std::string>()));
        return out;
    }
    if (!node.IsSequence()) {
        fail(key, "expected a path or a list of paths");
    }
    for (const auto& item : node) {
        out.push_back(resolve(base_dir, scalar(item, key)));
    }
    return out;
}

int integer(const YAML::Node& node, const std::string& key)
{
    try {
        return node.as<int>();
    } catch (const YAML::Exception&) {
        fail(key, "expected an integer");
    }
}

bool boolean(const YAML::Node& node, const std::string& key)
{
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        fail(key, "expected a boolean");
    }
}

} // namespace

ServerConfig parse_server_config(std::string_view yaml, const std::string& base_dir)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml));
    } catch (const YAML::Exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    if (!root.IsMap()) {
        throw ConfigError("config: expected a mapping");
    }
    static const std::set<std::string> known = {"baseIri",      "shapes",         "rules",    "endpoints",
                                                "agents",       "allowlist",      "baseline", "orphanPolicy",
                                                "lockTtlSeconds", "mintStrategy", "anonymousRead", "dataFile",
                                                "listen"};
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!known.count(key)) {
            fail(key, "unknown key");
        }
    }

    ServerConfig c;
    if (!root["baseIri"]) {
        fail("baseIri", "required");
    }
    c.base_iri = scalar(root["baseIri"], "baseIri");
    if (!rdf::is_absolute_iri(c.base_iri)) {
        fail("baseIri", "not an absolute IRI");
    }
    while (!c.base_iri.empty() && c.base_iri.back() == '/') {
        c.base_iri.pop_back();
    }
    c.shape_files = paths(root["shapes"], "shapes", base_dir);
    c.rule_files = paths(root["rules"], "rules", base_dir);

    if (const auto ep = root["endpoints"]) {
        if (!ep.IsMap()) {
            fail("endpoints", "expected a mapping");
        }
        if (ep["data"]) {
            c.endpoints.data = scalar(ep["data"], "endpoints.data");
        }
        c.endpoints.provenance = ep["provenance"] ? scalar(ep["provenance"], "endpoints.provenance")
                                                  : c.endpoints.data;
        if (ep["timeoutMs"]) {
            const int ms = integer(ep["timeoutMs"], "endpoints.timeoutMs");
            if (ms <= 0) {
                fail("endpoints.timeoutMs", "must be positive");
            }
            c.endpoints.timeout = std::chrono::milliseconds(ms);
        }
        if (ep["retries"]) {
            c.endpoints.retries = integer(ep["retries"], "endpoints.retries");
            if (c.endpoints.retries < 1) {
                fail("endpoints.retries", "must be at least 1");
            }
        }
    }

    if (const auto agents = root["agents"]) {
        if (!agents.IsSequence()) {
            fail("agents", "expected a list of {token, agent}");
        }
        for (const auto& a : agents) {
            if (!a.IsMap() || !a["token"] || !a["agent"]) {
                fail("agents", "each entry needs token and agent");
            }
            const auto token = scalar(a["token"], "agents.token");
            if (!c.agents.emplace(token, scalar(a["agent"], "agents.agent")).second) {
                fail("agents", "duplicate token");
            }
        }
    }
    if (const auto allow = root["allowlist"]) {
        if (!allow.IsSequence()) {
            fail("allowlist", "expected a list of agent identifiers");
        }
        for (const auto& a : allow) {
            c.allowlist.insert(scalar(a, "allowlist"));
        }
    }
    if (c.allowlist.empty()) {
        fail("allowlist", "must not be empty");
    }

    if (const auto b = root["baseline"]) {
        if (!b.IsMap()) {
            fail("baseline", "expected a mapping");
        }
        if (b["source"]) {
            c.baseline_source = scalar(b["source"], "baseline.source");
        }
        if (b["createdAt"]) {
            c.baseline_created_at = scalar(b["createdAt"], "baseline.createdAt");
            try {
                provenance::parse_timestamp(*c.baseline_created_at);
            } catch (const ContractViolation& e) {
                fail("baseline.createdAt", e.what());
            }
        }
    }
    if (root["orphanPolicy"]) {
        c.default_orphan_policy = display::orphan_policy_from_string(scalar(root["orphanPolicy"], "orphanPolicy"));
        if (!c.default_orphan_policy) {
            fail("orphanPolicy", "expected ask, delete or keep");
        }
    }
    if (root["lockTtlSeconds"]) {
        c.lock_ttl_seconds = integer(root["lockTtlSeconds"], "lockTtlSeconds");
    }
    if (c.lock_ttl_seconds < 10) {
        fail("lockTtlSeconds", "must be at least 10");
    }
    if (root["mintStrategy"]) {
        c.mint_strategy = scalar(root["mintStrategy"], "mintStrategy");
        if (c.mint_strategy != "sequential" && c.mint_strategy != "uuid") {
            fail("mintStrategy", "expected sequential or uuid");
        }
    }
    if (root["anonymousRead"]) {
        c.anonymous_read = boolean(root["anonymousRead"], "anonymousRead");
    }
    if (root["dataFile"]) {
        c.data_file = resolve(base_dir, scalar(root["dataFile"], "dataFile"));
    }
    if (const auto listen = root["listen"]) {
        if (listen["host"]) {
            c.host = scalar(listen["host"], "listen.host");
        }
        if (listen["port"]) {
            c.port = integer(listen["port"], "listen.port");
        }
    }
    return c;
}

ServerConfig load_server_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_server_config(ss.str(), dir.empty() ? "." : dir);
}

std::optional<std::string> config_path(const std::optional<std::string>& flag)
{
    if (flag && !flag->empty()) {
        return flag;
    }
    if (const char* env = std::getenv("PROVCURATE_CONFIG"); env && *env) {
        return std::string(env);
    }
    return std::nullopt;
}

} // namespace provcurate::api
