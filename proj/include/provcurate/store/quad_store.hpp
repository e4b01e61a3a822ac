#pragma once

#include "provcurate/rdf/term.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <vector>

namespace provcurate::store {

using rdf::Iri;
using rdf::Quad;
using rdf::Subject;
using rdf::Term;
using rdf::Triple;

/// Which graphs a pattern lookup ranges over.
struct GraphSelector {
    enum class Kind { default_graph, named, any_named };
    Kind kind = Kind::default_graph;
    std::optional<Iri> graph;

    static GraphSelector default_graph() { return {}; }
    static GraphSelector named(Iri g) { return {Kind::named, std::move(g)}; }
    static GraphSelector any_named() { return {Kind::any_named, std::nullopt}; }
};

/// In-memory quad store with subject, predicate and object indexes per graph.
/// Not synchronized itself; callers hold `mutex()` (shared for reads).
class QuadStore {
public:
    bool insert(const Quad& q);
    bool erase(const Quad& q);
    bool contains(const Quad& q) const;

    /// Calls `fn(triple, graph)` for each match; nullopt components are wildcards.
    void match(const std::optional<Subject>& s, const std::optional<Iri>& p, const std::optional<Term>& o,
               const GraphSelector& graphs,
               const std::function<void(const Triple&, const std::optional<Iri>&)>& fn) const;

    std::vector<Iri> named_graphs() const;
    std::size_t size() const noexcept { return size_; }
    /// All quads, default graph first, each graph in triple order.
    std::vector<Quad> quads() const;
    void clear();

    std::shared_mutex& mutex() const noexcept { return mutex_; }

private:
    struct Graph {
        std::set<Triple> triples;
        std::map<Subject, std::set<Triple>> by_subject;
        std::map<Iri, std::set<Triple>> by_predicate;
        std::map<Term, std::set<Triple>> by_object;
    };

    std::map<std::optional<Iri>, Graph> graphs_;
    std::size_t size_ = 0;
    mutable std::shared_mutex mutex_;

    static void match_graph(const Graph& g, const std::optional<Iri>& name, const std::optional<Subject>& s,
                            const std::optional<Iri>& p, const std::optional<Term>& o,
                            const std::function<void(const Triple&, const std::optional<Iri>&)>& fn);
};

} // namespace provcurate::store
