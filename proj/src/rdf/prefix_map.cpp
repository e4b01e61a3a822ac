#include "provcurate/rdf/prefix_map.hpp"

#include "provcurate/error.hpp"

namespace provcurate::rdf {

void PrefixMap::declare(std::string prefix, std::string namespace_iri)
{
    prefixes_[std::move(prefix)] = std::move(namespace_iri);
}

std::optional<Iri> PrefixMap::expand(std::string_view prefixed) const
{
    const auto colon = prefixed.find(':');
    if (colon == std::string_view::npos) {
        return std::nullopt;
    }
    const auto it = prefixes_.find(std::string(prefixed.substr(0, colon)));
    if (it == prefixes_.end()) {
        return std::nullopt;
    }
    return Iri(it->second + std::string(prefixed.substr(colon + 1)));
}

Iri PrefixMap::resolve(std::string_view reference) const
{
    if (is_absolute_iri(reference)) {
        return Iri(std::string(reference));
    }
    if (!base_) {
        throw ContractViolation("relative IRI <" + std::string(reference) + "> without base");
    }
    const std::string& base = *base_;
    if (reference.empty()) {
        return Iri(base);
    }
    if (reference.front() == '#') {
        const auto hash = base.find('#');
        return Iri(base.substr(0, hash) + std::string(reference));
    }
    if (reference.front() == '/') {
        const auto scheme_end = base.find("://");
        if (scheme_end != std::string::npos) {
            const auto path_start = base.find('/', scheme_end + 3);
            return Iri(base.substr(0, path_start) + std::string(reference));
        }
        return Iri(base + std::string(reference.substr(1)));
    }
    const auto slash = base.find_last_of('/');
    return Iri(base.substr(0, slash + 1) + std::string(reference));
}

std::optional<Iri> PrefixMap::expand_any(std::string_view text) const
{
    if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
        text = text.substr(1, text.size() - 2);
        if (is_absolute_iri(text)) {
            return Iri(std::string(text));
        }
        return std::nullopt;
    }
    if (auto expanded = expand(text)) {
        return expanded;
    }
    if (is_absolute_iri(text)) {
        return Iri(std::string(text));
    }
    return std::nullopt;
}

std::string PrefixMap::compact(const Iri& iri) const
{
    std::string best;
    for (const auto& [prefix, ns] : prefixes_) {
        if (iri.str().size() > ns.size() && iri.str().compare(0, ns.size(), ns) == 0) {
            const auto local = iri.str().substr(ns.size());
            if (local.find_first_of("/#?") != std::string::npos) {
                continue;
            }
            auto candidate = prefix + ":" + local;
            if (best.empty() || candidate.size() < best.size()) {
                best = std::move(candidate);
            }
        }
    }
    return best.empty() ? "<" + iri.str() + ">" : best;
}

} // namespace provcurate::rdf
