#include "provcurate/rdf/entity_state.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <algorithm>

namespace provcurate::rdf {

EntityState::EntityState(Iri entity, std::set<Triple> triples)
    : entity_(std::move(entity)), triples_(std::move(triples))
{
    for (const auto& t : triples_) {
        const auto* s = std::get_if<Iri>(&t.subject);
        if (s == nullptr || *s != entity_) {
            throw ContractViolation("triple " + to_ntriples(t) + " does not describe " + entity_.str());
        }
    }
}

bool EntityState::add(const Iri& predicate, Term object)
{
    return triples_.insert(Triple{entity_, predicate, std::move(object)}).second;
}

std::vector<Term> EntityState::objects(const Iri& predicate) const
{
    std::vector<Term> out;
    for (const auto& t : triples_) {
        if (t.predicate == predicate) {
            out.push_back(t.object);
        }
    }
    return out;
}

std::vector<Iri> EntityState::types() const
{
    std::vector<Iri> out;
    const Iri type(std::string(vocab::rdf_type));
    for (const auto& t : triples_) {
        if (t.predicate == type) {
            if (const auto* iri = std::get_if<Iri>(&t.object)) {
                out.push_back(*iri);
            }
        }
    }
    return out;
}

std::string EntityState::canonical() const
{
    std::vector<std::string> lines;
    lines.reserve(triples_.size());
    for (const auto& t : triples_) {
        lines.push_back(to_ntriples(t));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

} // namespace provcurate::rdf
