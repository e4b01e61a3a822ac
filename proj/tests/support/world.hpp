#pragma once

// Embedded store, repository and provenance engine driven by a manual clock.

#include "provcurate/provenance/engine.hpp"
#include "provcurate/store/endpoint.hpp"
#include "provcurate/store/repository.hpp"

#include <memory>
#include <set>

namespace provcurate::fuzz {

/// Starts at 2024-01-01T00:00:00Z and advances `step` on every reading.
class ManualClock {
public:
    ManualClock() : now_(std::make_shared<provenance::TimePoint>(provenance::parse_timestamp("2024-01-01T00:00:00Z"))) {}

    provenance::Clock clock() const
    {
        return [now = now_, step = step_] {
            const auto t = *now;
            *now += *step;
            return t;
        };
    }
    void set(provenance::TimePoint t) { *now_ = t; }
    void set_step(std::chrono::milliseconds s) { *step_ = s; }
    provenance::TimePoint peek() const { return *now_; }

private:
    std::shared_ptr<provenance::TimePoint> now_;
    std::shared_ptr<std::chrono::milliseconds> step_ = std::make_shared<std::chrono::milliseconds>(1000);
};

struct World {
    explicit World(provenance::ProvenanceConfig config = {}, std::string skolem = "https://w3id.org/oc/meta")
        : endpoint(std::make_shared<store::EmbeddedEndpoint>(skolem)),
          repo(endpoint, endpoint, skolem),
          engine(repo, std::move(config), clock.clock())
    {
    }

    std::set<rdf::Quad> quads() const
    {
        const auto q = endpoint->quads();
        return {q.begin(), q.end()};
    }

    std::shared_ptr<store::EmbeddedEndpoint> endpoint;
    store::Repository repo;
    ManualClock clock;
    provenance::ProvenanceEngine engine;
};

} // namespace provcurate::fuzz
