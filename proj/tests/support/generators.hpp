#pragma once

// Random RDF value generators shared by the property tests.

#include "provcurate/rdf/delta.hpp"
#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <random>
#include <string>

namespace provcurate::fuzz {

inline const rdf::Iri& fuzz_entity()
{
    static const rdf::Iri e("https://example.org/br/1");
    return e;
}

inline rdf::Iri random_predicate(std::mt19937_64& rng)
{
    static const char* preds[] = {
        "http://purl.org/dc/terms/title", "http://purl.org/spar/fabio/hasPublicationDate",
        "http://purl.org/spar/datacite/hasIdentifier", "http://prismstandard.org/namespaces/basic/2.0/startingPage",
        "http://purl.org/vocab/frbr/core#partOf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
    };
    return rdf::Iri(preds[std::uniform_int_distribution<int>(0, 5)(rng)]);
}

inline std::string random_text(std::mt19937_64& rng)
{
    static const std::string alphabet[] = {"a", "b", "Z", "0", " ", "\"", "\\", "\n", "\t", "é", "日", "<", ">", "{", "}", ".", ";", "#"};
    const int n = std::uniform_int_distribution<int>(0, 8)(rng);
    std::string s;
    for (int i = 0; i < n; ++i) {
        s += alphabet[std::uniform_int_distribution<std::size_t>(0, std::size(alphabet) - 1)(rng)];
    }
    return s;
}

inline rdf::Term random_object(std::mt19937_64& rng)
{
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
        return rdf::Iri("https://example.org/ra/" + std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)));
    case 1:
        return rdf::Literal(random_text(rng), std::string(std::uniform_int_distribution<int>(0, 1)(rng) ? "en" : "it"));
    case 2:
        return rdf::Literal(std::to_string(std::uniform_int_distribution<int>(1900, 2030)(rng)),
                            rdf::Iri(std::string(vocab::xsd_g_year)));
    default:
        return rdf::Literal::string(random_text(rng));
    }
}

inline rdf::Triple random_triple(std::mt19937_64& rng, const rdf::Iri& entity = fuzz_entity())
{
    return rdf::Triple{entity, random_predicate(rng), random_object(rng)};
}

inline rdf::EntityState random_state(std::mt19937_64& rng, std::size_t max_triples = 20,
                                     const rdf::Iri& entity = fuzz_entity())
{
    rdf::EntityState s(entity);
    const auto n = std::uniform_int_distribution<std::size_t>(0, max_triples)(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = random_triple(rng, entity);
        s.add(t.predicate, t.object);
    }
    return s;
}

inline rdf::GraphDelta random_delta(std::mt19937_64& rng)
{
    std::set<rdf::Triple> del;
    std::set<rdf::Triple> ins;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
        auto t = random_triple(rng);
        if (std::uniform_int_distribution<int>(0, 1)(rng) != 0) {
            if (ins.count(t) == 0) {
                del.insert(std::move(t));
            }
        } else if (del.count(t) == 0) {
            ins.insert(std::move(t));
        }
    }
    return rdf::GraphDelta(std::move(del), std::move(ins));
}

} // namespace provcurate::fuzz
