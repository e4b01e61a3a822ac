#include "provcurate/store/quad_store.hpp"

namespace provcurate::store {

bool QuadStore::insert(const Quad& q)
{
    auto& g = graphs_[q.graph];
    if (!g.triples.insert(q.triple).second) {
        return false;
    }
    g.by_subject[q.triple.subject].insert(q.triple);
    g.by_predicate[q.triple.predicate].insert(q.triple);
    g.by_object[q.triple.object].insert(q.triple);
    ++size_;
    return true;
}

bool QuadStore::erase(const Quad& q)
{
    const auto it = graphs_.find(q.graph);
    if (it == graphs_.end() || it->second.triples.erase(q.triple) == 0) {
        return false;
    }
    auto& g = it->second;
    auto drop = [&q](auto& index, const auto& key) {
        const auto slot = index.find(key);
        slot->second.erase(q.triple);
        if (slot->second.empty()) {
            index.erase(slot);
        }
    };
    drop(g.by_subject, q.triple.subject);
    drop(g.by_predicate, q.triple.predicate);
    drop(g.by_object, q.triple.object);
    if (g.triples.empty()) {
        graphs_.erase(it);
    }
    --size_;
    return true;
}

bool QuadStore::contains(const Quad& q) const
{
    const auto it = graphs_.find(q.graph);
    return it != graphs_.end() && it->second.triples.count(q.triple) != 0;
}

void QuadStore::match_graph(const Graph& g, const std::optional<Iri>& name, const std::optional<Subject>& s,
                            const std::optional<Iri>& p, const std::optional<Term>& o,
                            const std::function<void(const Triple&, const std::optional<Iri>&)>& fn)
{
    const std::set<Triple>* candidates = &g.triples;
    if (s) {
        const auto it = g.by_subject.find(*s);
        if (it == g.by_subject.end()) {
            return;
        }
        candidates = &it->second;
    }
    if (o) {
        const auto it = g.by_object.find(*o);
        if (it == g.by_object.end()) {
            return;
        }
        if (it->second.size() < candidates->size()) {
            candidates = &it->second;
        }
    }
    if (p && !s && !o) {
        const auto it = g.by_predicate.find(*p);
        if (it == g.by_predicate.end()) {
            return;
        }
        candidates = &it->second;
    }
    for (const auto& t : *candidates) {
        if ((s && t.subject != *s) || (p && t.predicate != *p) || (o && t.object != *o)) {
            continue;
        }
        fn(t, name);
    }
}

void QuadStore::match(const std::optional<Subject>& s, const std::optional<Iri>& p, const std::optional<Term>& o,
                      const GraphSelector& graphs,
                      const std::function<void(const Triple&, const std::optional<Iri>&)>& fn) const
{
    switch (graphs.kind) {
    case GraphSelector::Kind::default_graph: {
        const auto it = graphs_.find(std::nullopt);
        if (it != graphs_.end()) {
            match_graph(it->second, std::nullopt, s, p, o, fn);
        }
        break;
    }
    case GraphSelector::Kind::named: {
        const auto it = graphs_.find(graphs.graph);
        if (it != graphs_.end()) {
            match_graph(it->second, graphs.graph, s, p, o, fn);
        }
        break;
    }
    case GraphSelector::Kind::any_named:
        for (const auto& [name, g] : graphs_) {
            if (name) {
                match_graph(g, name, s, p, o, fn);
            }
        }
        break;
    }
}

std::vector<Iri> QuadStore::named_graphs() const
{
    std::vector<Iri> out;
    for (const auto& [name, g] : graphs_) {
        if (name) {
            out.push_back(*name);
        }
    }
    return out;
}

std::vector<Quad> QuadStore::quads() const
{
    std::vector<Quad> out;
    out.reserve(size_);
    for (const auto& [name, g] : graphs_) {
        for (const auto& t : g.triples) {
            out.push_back(Quad{t, name});
        }
    }
    return out;
}

void QuadStore::clear()
{
    graphs_.clear();
    size_ = 0;
}

} // namespace provcurate::store
