#pragma once

#include "provcurate/rdf/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace provcurate::rdf {

/// Prefix declarations plus an optional base IRI.
class PrefixMap {
public:
    void declare(std::string prefix, std::string namespace_iri);
    void set_base(std::string base) { base_ = std::move(base); }

    /// Expands "prefix:local"; empty optional when the prefix is undeclared.
    std::optional<Iri> expand(std::string_view prefixed) const;
    /// Resolves a possibly relative IRI reference against the base.
    Iri resolve(std::string_view reference) const;
    /// Accepts either an absolute IRI or a declared CURIE.
    std::optional<Iri> expand_any(std::string_view text) const;
    /// Shortest CURIE for `iri`, or "<iri>".
    std::string compact(const Iri& iri) const;

    const std::map<std::string, std::string>& entries() const noexcept { return prefixes_; }
    const std::optional<std::string>& base() const noexcept { return base_; }

private:
    std::map<std::string, std::string> prefixes_;
    std::optional<std::string> base_;
};

} // namespace provcurate::rdf
