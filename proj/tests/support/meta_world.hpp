#pragma once

// Curation engine over the meta fixtures: shapes, display rules and
// optionally the 100-article dataset.

#include "provcurate/curation/engine.hpp"
#include "provcurate/display/rules.hpp"
#include "provcurate/shacl/shapes.hpp"

#include "support/fixtures.hpp"
#include "support/world.hpp"

namespace provcurate::fuzz {

inline curation::Configuration meta_configuration()
{
    auto shapes = std::make_shared<shacl::ShapeCatalog>(
        shacl::parse_shapes(read_fixture("meta_shapes.ttl"), "meta_shapes.ttl"));
    auto rules = std::make_shared<display::DisplayRules>(
        display::load_rules(read_fixture("meta_rules.yaml"), *shapes, "meta_rules.yaml"));
    return {shapes, rules};
}

inline const std::string& meta_base()
{
    static const std::string base = "https://w3id.org/oc/meta";
    return base;
}

struct MetaWorld : World {
    explicit MetaWorld(bool load_dataset = false, provenance::ProvenanceConfig config = {},
                       std::shared_ptr<curation::MintStrategy> mint = nullptr)
        : World(std::move(config), meta_base()),
          curation(engine, mint ? mint : std::make_shared<curation::SequentialMint>(meta_base()),
                   meta_configuration())
    {
        if (load_dataset) {
            endpoint->load_nquads(read_fixture("meta100.nt"));
        }
    }

    std::size_t data_size() const
    {
        std::size_t n = 0;
        for (const auto& q : endpoint->quads()) {
            n += q.graph ? 0 : 1;
        }
        return n;
    }

    std::set<rdf::Triple> data() const
    {
        std::set<rdf::Triple> out;
        for (const auto& q : endpoint->quads()) {
            if (!q.graph) {
                out.insert(q.triple);
            }
        }
        return out;
    }

    curation::CurationEngine curation;
};

} // namespace provcurate::fuzz
