#pragma once

#include "provcurate/error.hpp"
#include "provcurate/rdf/term.hpp"
#include "provcurate/store/repository.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace provcurate::curation {

/// No unused IRI could be minted within the retry budget.
class MintError : public Error {
public:
    using Error::Error;
};

/// Supplies candidate IRIs for new entities of a class or shape.
class MintStrategy {
public:
    virtual ~MintStrategy() = default;
    virtual rdf::Iri candidate(const rdf::Iri& kind, store::Repository& repo) = 0;
    virtual std::string name() const = 0;
};

/// `<base>/id/<uuid>`.
class UuidMint : public MintStrategy {
public:
    explicit UuidMint(std::string base);
    rdf::Iri candidate(const rdf::Iri& kind, store::Repository& repo) override;
    std::string name() const override { return "uuid"; }

private:
    std::string base_;
};

/// `<base>/<slug>/<n>` with one counter per slug, persisted in the
/// provenance store graph `<base>/.well-known/counters`. The slug is the
/// lowercased local name of the kind unless configured.
class SequentialMint : public MintStrategy {
public:
    explicit SequentialMint(std::string base, std::map<std::string, std::string> slugs = {});
    rdf::Iri candidate(const rdf::Iri& kind, store::Repository& repo) override;
    std::string name() const override { return "sequential"; }

    std::string slug(const rdf::Iri& kind) const;
    rdf::Iri counters_graph() const;

private:
    std::string base_;
    std::map<std::string, std::string> slugs_;
    std::mutex mutex_;
    std::map<std::string, std::size_t> cache_;
};

/// "uuid" or "sequential"; throws ContractViolation otherwise.
std::shared_ptr<MintStrategy> make_mint_strategy(const std::string& name, const std::string& base);

inline constexpr int mint_attempts = 3;

/// Candidate from `strategy` that no data-store triple mentions and that has
/// no provenance graph; MintError
/// after `mint_attempts` collisions.
rdf::Iri mint_iri(const rdf::Iri& kind, MintStrategy& strategy, store::Repository& repo);

} // namespace provcurate::curation
