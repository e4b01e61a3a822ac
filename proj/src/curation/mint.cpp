#include "provcurate/curation/mint.hpp"

#include "provcurate/rdf/vocab.hpp"

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>

#include <algorithm>
#include <cctype>

namespace provcurate::curation {

namespace {

std::string trim_base(std::string base)
{
    while (!base.empty() && base.back() == '/') {
        base.pop_back();
    }
    if (!rdf::is_absolute_iri(base)) {
        throw ContractViolation("mint base is not an absolute IRI: " + base);
    }
    return base;
}

const rdf::Iri& counter_value()
{
    static const rdf::Iri v(std::string(vocab::rdf) + "value");
    return v;
}

} // namespace

UuidMint::UuidMint(std::string base) : base_(trim_base(std::move(base))) {}

rdf::Iri UuidMint::candidate(const rdf::Iri&, store::Repository&)
{
    thread_local boost::uuids::random_generator gen;
    return rdf::Iri(base_ + "/id/" + boost::uuids::to_string(gen()));
}

SequentialMint::SequentialMint(std::string base, std::map<std::string, std::string> slugs)
    : base_(trim_base(std::move(base))), slugs_(std::move(slugs))
{
}

std::string SequentialMint::slug(const rdf::Iri& kind) const
{
    if (auto it = slugs_.find(kind.str()); it != slugs_.end()) {
        return it->second;
    }
    std::string out;
    for (char c : rdf::local_name(kind)) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out.empty() ? "entity" : out;
}

rdf::Iri SequentialMint::counters_graph() const
{
    return rdf::Iri(base_ + "/.well-known/counters");
}

rdf::Iri SequentialMint::candidate(const rdf::Iri& kind, store::Repository& repo)
{
    const std::string s = slug(kind);
    const rdf::Iri counter(counters_graph().str() + "/" + s);
    std::lock_guard lock(mutex_);
    auto it = cache_.find(s);
    if (it == cache_.end()) {
        std::size_t n = 0;
        const auto r = repo.query_provenance("SELECT ?n WHERE { GRAPH <" + counters_graph().str() + "> { <" +
                                             counter.str() + "> <" + counter_value().str() + "> ?n } }");
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            if (const auto& v = r.get(i, "n")) {
                n = std::max<std::size_t>(n, std::stoull(rdf::lexical_value(*v)));
            }
        }
        it = cache_.emplace(s, n).first;
    }
    const std::size_t prev = it->second;
    const std::size_t next = prev + 1;
    auto value = [&](std::size_t n) {
        return rdf::make_triple(counter, counter_value(), rdf::Literal(std::to_string(n), rdf::Iri(std::string(vocab::xsd_integer))));
    };
    std::set<rdf::Triple> del;
    if (prev > 0) {
        del.insert(value(prev));
    }
    repo.apply_update({{store::Route::provenance, counters_graph(), rdf::GraphDelta(del, {value(next)})}});
    it->second = next;
    return rdf::Iri(base_ + "/" + s + "/" + std::to_string(next));
}

std::shared_ptr<MintStrategy> make_mint_strategy(const std::string& name, const std::string& base)
{
    if (name == "uuid") {
        return std::make_shared<UuidMint>(base);
    }
    if (name == "sequential") {
        return std::make_shared<SequentialMint>(base);
    }
    throw ContractViolation("unknown mint strategy: " + name);
}

rdf::Iri mint_iri(const rdf::Iri& kind, MintStrategy& strategy, store::Repository& repo)
{
    for (int attempt = 0; attempt < mint_attempts; ++attempt) {
        const rdf::Iri iri = strategy.candidate(kind, repo);
        const std::string ref = "<" + iri.str() + ">";
        if (repo.ask_data("ASK { { " + ref + " ?p ?o } UNION { ?s ?p " + ref + " } }")) {
            continue;
        }
        if (!repo.query_provenance("ASK { GRAPH <" + iri.str() + "/prov/> { ?s ?p ?o } }").boolean) {
            return iri;
        }
    }
    throw MintError("no unused IRI for " + kind.str() + " after " + std::to_string(mint_attempts) + " attempts");
}

} // namespace provcurate::curation
