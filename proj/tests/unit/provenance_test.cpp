#include "provcurate/provenance/engine.hpp"
#include "provcurate/rdf/vocab.hpp"

#include "support/generators.hpp"
#include "support/world.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace provcurate;
using namespace provcurate::provenance;
using rdf::EntityState;
using rdf::Iri;
using rdf::Literal;

namespace {

const Iri kArticle("https://w3id.org/oc/meta/br/1");
const Iri kTitle("http://purl.org/dc/terms/title");
const Iri kType(std::string(vocab::rdf_type));
const Iri kHasId("http://purl.org/spar/datacite/hasIdentifier");
const Iri kJournalArticle("http://purl.org/spar/fabio/JournalArticle");
const std::string kAgent = "https://orcid.org/0000-0002-8420-0696";

EntityState state(const Iri& e, std::initializer_list<std::pair<Iri, rdf::Term>> pairs)
{
    EntityState s(e);
    for (const auto& [p, o] : pairs) {
        s.add(p, o);
    }
    return s;
}

EntityState three_triples()
{
    return state(kArticle, {{kType, kJournalArticle},
                            {kTitle, Literal::string("Old title")},
                            {kHasId, Iri("https://w3id.org/oc/meta/id/1")}});
}

ChangeRecord change(const Iri& e, ChangeKind kind, EntityState before, EntityState after)
{
    return {e, kind, std::move(before), std::move(after), kAgent, "https://api.crossref.org/", ""};
}

/// Triples of `a` missing from `b`, by linear search.
std::set<rdf::Triple> missing(const EntityState& a, const EntityState& b)
{
    std::set<rdf::Triple> out;
    for (const auto& t : a.triples()) {
        bool found = false;
        for (const auto& u : b.triples()) {
            found = found || u == t;
        }
        if (!found) {
            out.insert(t);
        }
    }
    return out;
}

} // namespace

TEST(Timestamp, FormatsAndParsesMilliseconds)
{
    const auto t = parse_timestamp("2024-03-05T07:08:09.123Z");
    EXPECT_EQ(format_timestamp(t), "2024-03-05T07:08:09.123Z");
    EXPECT_EQ(parse_timestamp("2024-03-05T09:08:09.123+02:00"), t);
    EXPECT_EQ(format_timestamp(parse_timestamp("2020-02-29")), "2020-02-29T00:00:00.000Z");
    EXPECT_EQ(format_timestamp(parse_timestamp("1999-12-31T23:59:59")), "1999-12-31T23:59:59.000Z");
    EXPECT_THROW(parse_timestamp("2021-02-29"), ContractViolation);
    EXPECT_THROW(parse_timestamp("yesterday"), ContractViolation);
    EXPECT_THROW(parse_timestamp("2024-01-01T00:00:00Zjunk"), ContractViolation);
}

TEST(RecordChange, CreateWritesFirstSnapshot)
{
    fuzz::World w;
    const auto s = w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    EXPECT_EQ(s.id.str(), "https://w3id.org/oc/meta/br/1/prov/se/1");
    EXPECT_EQ(s.delta.insertions().size(), 3u);
    EXPECT_TRUE(s.delta.deletions().empty());
    EXPECT_TRUE(s.derived_from.empty());
    EXPECT_FALSE(s.invalidated_at);
    EXPECT_EQ(w.repo.fetch_entity_state(kArticle), three_triples());

    const auto chain = w.engine.history(kArticle);
    ASSERT_EQ(chain.snapshots.size(), 1u);
    EXPECT_EQ(chain.head().attributed_to, kAgent);
    EXPECT_EQ(chain.head().primary_source, "https://api.crossref.org/");
    EXPECT_EQ(chain.head().delta, s.delta);
    EXPECT_EQ(chain.head().description, "Entity created");
    EXPECT_TRUE(w.repo.query_provenance("ASK { GRAPH <https://w3id.org/oc/meta/br/1/prov/> { "
                                        "<https://w3id.org/oc/meta/br/1/prov/se/1> a <http://www.w3.org/ns/prov#Entity> ; "
                                        "<http://www.w3.org/ns/prov#specializationOf> <https://w3id.org/oc/meta/br/1> } }")
                    .boolean);
}

TEST(RecordChange, UpdateMatchesDiffOracle)
{
    fuzz::World w;
    const auto created =
        w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    EntityState after = three_triples();
    after = rdf::apply_delta(after, rdf::GraphDelta({rdf::make_triple(kArticle, kTitle, Literal::string("Old title"))},
                                                    {rdf::make_triple(kArticle, kTitle, Literal::string("New title"))}));
    const auto s = w.engine.record_change(change(kArticle, ChangeKind::update, three_triples(), after));
    EXPECT_EQ(s.index, 2u);
    EXPECT_EQ(s.delta.deletions(), missing(three_triples(), after));
    EXPECT_EQ(s.delta.insertions(), missing(after, three_triples()));
    EXPECT_EQ(s.delta.deletions().size(), 1u);
    EXPECT_EQ(s.delta.insertions().size(), 1u);
    ASSERT_EQ(s.derived_from, std::vector<Iri>{created.id});

    const auto chain = w.engine.history(kArticle);
    ASSERT_EQ(chain.snapshots.size(), 2u);
    EXPECT_EQ(chain.snapshots[0].invalidated_at, chain.snapshots[1].generated_at);
    EXPECT_FALSE(chain.snapshots[1].invalidated_at);
    EXPECT_LE(chain.snapshots[0].generated_at, chain.snapshots[1].generated_at);
}

TEST(RecordChange, DeleteGetsFinalInvalidatedSnapshot)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    const auto s = w.engine.record_change(change(kArticle, ChangeKind::remove, three_triples(), EntityState(kArticle)));
    ASSERT_TRUE(s.invalidated_at);
    EXPECT_EQ(*s.invalidated_at, s.generated_at);
    EXPECT_EQ(s.delta.deletions(), three_triples().triples());
    EXPECT_TRUE(w.repo.fetch_entity_state(kArticle).empty());
    EXPECT_TRUE(w.engine.history(kArticle).deleted());

    const auto deleted = w.engine.list_deleted();
    ASSERT_EQ(deleted.size(), 1u);
    EXPECT_EQ(deleted[0].entity, kArticle);
    EXPECT_EQ(deleted[0].index, 2u);
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::update, EntityState(kArticle), three_triples())),
                 NotFoundError);
}

TEST(RecordChange, EmptyUpdateIsNoOpWithoutWrites)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    const auto before = w.quads();
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::update, three_triples(), three_triples())),
                 NoOpError);
    EXPECT_EQ(w.quads(), before);
}

TEST(RecordChange, PreconditionsAreEnforced)
{
    fuzz::World w;
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::create, three_triples(), three_triples())),
                 ChainError);
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples())),
                 ChainError);
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::remove, three_triples(), three_triples())),
                 ContractViolation);
    auto anon = change(kArticle, ChangeKind::remove, three_triples(), EntityState(kArticle));
    anon.agent.clear();
    EXPECT_THROW(w.engine.record_change(anon), ContractViolation);
}

TEST(RecordChange, ClockRunningBackwardsKeepsChainMonotone)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    w.clock.set(parse_timestamp("2000-01-01T00:00:00Z"));
    w.engine.record_change(change(kArticle, ChangeKind::remove, three_triples(), EntityState(kArticle)));
    const auto chain = w.engine.history(kArticle);
    EXPECT_EQ(chain.snapshots[1].generated_at, chain.snapshots[0].generated_at);
}

TEST(History, UnknownEntityIsNotFound)
{
    fuzz::World w;
    EXPECT_THROW(w.engine.history(kArticle), NotFoundError);
    EXPECT_FALSE(w.engine.has_history(kArticle));
}

TEST(History, CreateAndTwoUpdatesGiveThreeSnapshots)
{
    fuzz::World w;
    auto a = three_triples();
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), a));
    auto b = a;
    b.add(kTitle, Literal::string("Second"));
    w.engine.record_change(change(kArticle, ChangeKind::update, a, b));
    auto c = b;
    c.add(kTitle, Literal::string("Third"));
    w.engine.record_change(change(kArticle, ChangeKind::update, b, c));
    const auto chain = w.engine.history(kArticle);
    ASSERT_EQ(chain.snapshots.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(chain.snapshots[i].index, i + 1);
    }
}

TEST(History, CorruptDeltaSurfacesChainError)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    const std::string se = "<https://w3id.org/oc/meta/br/1/prov/se/1>";
    const std::string g = "<https://w3id.org/oc/meta/br/1/prov/>";
    const auto chain = w.engine.history(kArticle);
    w.endpoint->update("DELETE DATA { GRAPH " + g + " { " + se + " <https://w3id.org/oc/ontology/hasUpdateQuery> " +
                       store::sparql_string(rdf::serialize_delta(chain.head().delta)) +
                       " } } ; INSERT DATA { GRAPH " + g + " { " + se +
                       " <https://w3id.org/oc/ontology/hasUpdateQuery> \"INSERT DATA { <urn:a> <urn:b> \" } }");
    EXPECT_THROW(w.engine.history(kArticle), ChainError);
}

TEST(History, GapInChainIsChainError)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    w.endpoint->update("INSERT DATA { GRAPH <https://w3id.org/oc/meta/br/1/prov/> { "
                       "<https://w3id.org/oc/meta/br/1/prov/se/3> <http://www.w3.org/ns/prov#specializationOf> "
                       "<https://w3id.org/oc/meta/br/1> } }");
    EXPECT_THROW(w.engine.history(kArticle), ChainError);
}

TEST(Materialize, ReplaysBackwardAndForward)
{
    fuzz::World w;
    const rdf::Triple a = rdf::make_triple(kArticle, kTitle, Literal::string("A"));
    const rdf::Triple b = rdf::make_triple(kArticle, kTitle, Literal::string("B"));
    const EntityState sa(kArticle, {a}), sab(kArticle, {a, b}), sb(kArticle, {b});
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), sa));
    w.engine.record_change(change(kArticle, ChangeKind::update, sa, sab));
    w.engine.record_change(change(kArticle, ChangeKind::update, sab, sb));
    EXPECT_EQ(w.engine.materialize(kArticle, 1), sa);
    EXPECT_EQ(w.engine.materialize(kArticle, 2), sab);
    EXPECT_EQ(w.engine.materialize(kArticle, 3), w.repo.fetch_entity_state(kArticle));
    EXPECT_THROW(w.engine.materialize(kArticle, 0), ContractViolation);
    EXPECT_THROW(w.engine.materialize(kArticle, 4), ContractViolation);
}

TEST(Materialize, OutOfBandDataChangeIsReplayIntegrityError)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    w.endpoint->update("DELETE DATA { <https://w3id.org/oc/meta/br/1> <http://purl.org/dc/terms/title> \"Old title\" }");
    EXPECT_THROW(w.engine.materialize(kArticle, 1), rdf::ReplayIntegrityError);
}

TEST(IndexAt, FindsHalfOpenInterval)
{
    fuzz::World w;
    auto a = three_triples();
    const auto s1 = w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), a));
    auto b = a;
    b.add(kTitle, Literal::string("Second"));
    const auto s2 = w.engine.record_change(change(kArticle, ChangeKind::update, a, b));
    const auto s3 = w.engine.record_change(change(kArticle, ChangeKind::remove, b, EntityState(kArticle)));
    EXPECT_EQ(w.engine.index_at(kArticle, s1.generated_at - std::chrono::milliseconds(1)), std::nullopt);
    EXPECT_EQ(w.engine.index_at(kArticle, s1.generated_at), 1u);
    EXPECT_EQ(w.engine.index_at(kArticle, s2.generated_at - std::chrono::milliseconds(1)), 1u);
    EXPECT_EQ(w.engine.index_at(kArticle, s2.generated_at), 2u);
    EXPECT_EQ(w.engine.index_at(kArticle, s3.generated_at), std::nullopt);
}

TEST(Restore, RoundTripsToEarlierSnapshot)
{
    fuzz::World w;
    auto a = three_triples();
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), a));
    auto b = a;
    b.add(kTitle, Literal::string("Second"));
    w.engine.record_change(change(kArticle, ChangeKind::update, a, b));
    const auto target = w.engine.materialize(kArticle, 1);
    const auto r = w.engine.restore(kArticle, 1, kAgent);
    EXPECT_EQ(r.snapshot.index, 3u);
    EXPECT_TRUE(r.related.empty());
    EXPECT_EQ(w.engine.materialize(kArticle, 3), target);
    EXPECT_EQ(w.repo.fetch_entity_state(kArticle), target);
    EXPECT_THROW(w.engine.restore(kArticle, 3, kAgent), NoOpError);
}

TEST(Restore, DeletedEntityComesBackWithHistoryIntact)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    w.engine.record_change(change(kArticle, ChangeKind::remove, three_triples(), EntityState(kArticle)));
    const auto before = w.quads();
    const auto r = w.engine.restore(kArticle, 1, kAgent);
    EXPECT_EQ(r.snapshot.index, 3u);
    EXPECT_FALSE(r.snapshot.invalidated_at);
    EXPECT_EQ(w.repo.fetch_entity_state(kArticle), three_triples());
    EXPECT_TRUE(w.engine.list_deleted().empty());
    const auto after = w.quads();
    EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    const auto chain = w.engine.history(kArticle);
    ASSERT_EQ(chain.snapshots.size(), 3u);
    EXPECT_TRUE(chain.snapshots[1].invalidated_at);
}

TEST(Restore, BringsBackDeletedReferencedEntities)
{
    fuzz::World w;
    const Iri id("https://w3id.org/oc/meta/id/1");
    const EntityState ident = state(id, {{kType, Iri("http://purl.org/spar/datacite/Identifier")}});
    w.engine.record_change(change(id, ChangeKind::create, EntityState(id), ident));
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));

    auto cs = w.engine.begin();
    EntityState without = state(kArticle, {{kType, kJournalArticle}, {kTitle, Literal::string("Old title")}});
    w.engine.record_change(cs, change(id, ChangeKind::remove, ident, EntityState(id)));
    w.engine.record_change(cs, change(kArticle, ChangeKind::update, three_triples(), without));
    w.engine.commit(cs);
    ASSERT_EQ(w.engine.list_deleted().size(), 1u);

    const auto r = w.engine.restore(kArticle, 1, kAgent);
    ASSERT_EQ(r.related.size(), 1u);
    EXPECT_EQ(r.related[0].entity, id);
    EXPECT_EQ(w.repo.fetch_entity_state(id), ident);
    EXPECT_EQ(w.repo.fetch_entity_state(kArticle), three_triples());
    EXPECT_TRUE(w.engine.list_deleted().empty());
}

TEST(Restore, DepthCapRaisesRestoreErrorWithoutWrites)
{
    ProvenanceConfig cfg;
    cfg.restore_depth = 3;
    fuzz::World w(cfg);
    const Iri next("http://example.org/next");
    auto node = [](int i) { return Iri("https://w3id.org/oc/meta/ra/" + std::to_string(i)); };
    const int n = 6;
    std::vector<EntityState> states;
    for (int i = 0; i < n; ++i) {
        EntityState s(node(i));
        s.add(kTitle, Literal::string("node"));
        if (i + 1 < n) {
            s.add(next, node(i + 1));
        }
        states.push_back(s);
        w.engine.record_change(change(node(i), ChangeKind::create, EntityState(node(i)), s));
    }
    for (int i = 0; i < n; ++i) {
        w.engine.record_change(change(node(i), ChangeKind::remove, states[i], EntityState(node(i))));
    }
    const auto before = w.quads();
    EXPECT_THROW(w.engine.restore(node(0), 1, kAgent), RestoreError);
    EXPECT_EQ(w.quads(), before);

    cfg.restore_depth = 16;
    ProvenanceEngine deep(w.repo, cfg, w.clock.clock());
    const auto r = deep.restore(node(0), 1, kAgent);
    EXPECT_EQ(r.related.size(), static_cast<std::size_t>(n - 1));
    EXPECT_TRUE(deep.list_deleted().empty());
}

TEST(Restore, CyclesTerminate)
{
    fuzz::World w;
    const Iri rel("http://example.org/rel");
    const Iri a("https://w3id.org/oc/meta/ra/a"), b("https://w3id.org/oc/meta/ra/b");
    const EntityState sa = state(a, {{rel, b}}), sb = state(b, {{rel, a}});
    w.engine.record_change(change(a, ChangeKind::create, EntityState(a), sa));
    w.engine.record_change(change(b, ChangeKind::create, EntityState(b), sb));
    w.engine.record_change(change(a, ChangeKind::remove, sa, EntityState(a)));
    w.engine.record_change(change(b, ChangeKind::remove, sb, EntityState(b)));
    const auto r = w.engine.restore(a, 1, kAgent);
    EXPECT_EQ(r.related.size(), 1u);
    EXPECT_EQ(w.repo.fetch_entity_state(b), sb);
}

TEST(Baseline, PreExistingEntityGetsBaselineBeforeFirstEdit)
{
    ProvenanceConfig cfg;
    cfg.baseline_source = "https://doi.org/10.5281/zenodo.7574917";
    cfg.baseline_created_at = parse_timestamp("2023-01-15T10:00:00Z");
    fuzz::World w(cfg);
    w.endpoint->load_nquads(three_triples().canonical());
    auto edited = three_triples();
    edited.add(kTitle, Literal::string("Extra"));
    const auto s = w.engine.record_change(change(kArticle, ChangeKind::update, three_triples(), edited));
    EXPECT_EQ(s.index, 2u);
    const auto chain = w.engine.history(kArticle);
    ASSERT_EQ(chain.snapshots.size(), 2u);
    const auto& base = chain.snapshots[0];
    EXPECT_EQ(base.attributed_to, cfg.system_agent);
    EXPECT_EQ(base.primary_source, cfg.baseline_source);
    EXPECT_EQ(base.generated_at, *cfg.baseline_created_at);
    EXPECT_EQ(base.delta.insertions(), three_triples().triples());
    EXPECT_EQ(chain.snapshots[1].derived_from, std::vector<Iri>{base.id});
}

TEST(Baseline, IsIdempotent)
{
    fuzz::World w;
    w.endpoint->load_nquads(three_triples().canonical());
    const auto first = w.engine.ensure_baseline(kArticle, three_triples());
    const auto quads = w.quads();
    const auto second = w.engine.ensure_baseline(kArticle, three_triples());
    EXPECT_EQ(second.id, first.id);
    EXPECT_EQ(second.generated_at, first.generated_at);
    EXPECT_EQ(w.quads(), quads);
}

TEST(Baseline, ExistingChainIsReturnedUntouched)
{
    fuzz::World w;
    const auto created =
        w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    const auto quads = w.quads();
    EXPECT_EQ(w.engine.ensure_baseline(kArticle, three_triples()).id, created.id);
    EXPECT_EQ(w.quads(), quads);
}

TEST(RecordMerge, SurvivorDerivesFromBothChains)
{
    fuzz::World w;
    const Iri surv("https://w3id.org/oc/meta/ra/1"), gone("https://w3id.org/oc/meta/ra/2");
    const Iri name("http://xmlns.com/foaf/0.1/name"), id_pred = kHasId;
    const EntityState s0 = state(surv, {{name, Literal::string("Silvio Peroni")}});
    const EntityState g0 = state(gone, {{name, Literal::string("Silvio Peroni")},
                                        {id_pred, Iri("https://w3id.org/oc/meta/id/9")},
                                        {kTitle, Literal::string("x")}});
    w.engine.record_change(change(surv, ChangeKind::create, EntityState(surv), s0));
    const auto glast = w.engine.record_change(change(gone, ChangeKind::create, EntityState(gone), g0));
    EntityState s1 = s0;
    s1.add(id_pred, Iri("https://w3id.org/oc/meta/id/9"));
    s1.add(kTitle, Literal::string("x"));
    auto cs = w.engine.begin();
    const auto [kept, removed] = w.engine.record_merge(cs, surv, gone, s0, s1, g0, kAgent, "");
    w.engine.commit(cs);
    EXPECT_EQ(kept.delta.insertions().size(), 2u);
    ASSERT_EQ(kept.derived_from.size(), 2u);
    EXPECT_EQ(kept.derived_from[0], snapshot_iri(surv, 1));
    EXPECT_EQ(kept.derived_from[1], glast.id);
    EXPECT_TRUE(removed.invalidated_at);
    EXPECT_EQ(w.engine.history(surv).head().derived_from.size(), 2u);
    const auto deleted = w.engine.list_deleted();
    ASSERT_EQ(deleted.size(), 1u);
    EXPECT_EQ(deleted[0].entity, gone);

    auto again = w.engine.begin();
    EXPECT_THROW(w.engine.record_merge(again, surv, surv, s1, s1, s1, kAgent, ""), MergeError);
    EXPECT_THROW(w.engine.record_merge(again, surv, gone, s1, s1, g0, kAgent, ""), ChainError);
    EXPECT_THROW(w.engine.record_merge(again, surv, gone, s1, s1, EntityState(gone), kAgent, ""), MergeError);
}

TEST(ChangeSet, FailedCommitWritesNothing)
{
    fuzz::World w;
    w.engine.record_change(change(kArticle, ChangeKind::create, EntityState(kArticle), three_triples()));
    const auto before = w.quads();
    int calls = 0;
    w.endpoint->set_fault_injector([&](const rdf::Quad&) {
        if (++calls == 4) {
            throw StoreError("injected");
        }
    });
    EXPECT_THROW(w.engine.record_change(change(kArticle, ChangeKind::remove, three_triples(), EntityState(kArticle))),
                 StoreError);
    w.endpoint->set_fault_injector(nullptr);
    EXPECT_EQ(w.quads(), before);
}

TEST(ListDeleted, FreshStoreIsEmpty)
{
    fuzz::World w;
    EXPECT_TRUE(w.engine.list_deleted().empty());
}

// Random create/update/delete/restore sequences: backward materialization
// equals the recorded state at every index, provenance only grows, and the
// chain stays gapless with one predecessor link per snapshot.
TEST(ProvenanceProperty, ReplayEquivalenceAndNonDestructiveness)
{
    std::mt19937_64 rng(20240101);
    const Iri e = fuzz::fuzz_entity();
    for (int round = 0; round < 40; ++round) {
        fuzz::World w;
        std::vector<EntityState> expected;
        EntityState live(e);
        bool deleted = false;
        if (rng() % 2 == 0) {
            live = fuzz::random_state(rng, 6);
            if (!live.empty()) {
                w.endpoint->load_nquads(live.canonical());
            }
        }
        const int ops = 1 + static_cast<int>(rng() % 15);
        for (int i = 0; i < ops; ++i) {
            const auto prov_before = w.quads();
            const bool has_chain = w.engine.has_history(e);
            const int pick = static_cast<int>(rng() % 4);
            EntityState next(e);
            try {
                if (live.empty()) {
                    if (pick == 3 && has_chain) {
                        const auto k = 1 + rng() % w.engine.history(e).snapshots.size();
                        w.engine.restore(e, k, kAgent);
                        next = expected[k - 1];
                    } else {
                        do {
                            next = fuzz::random_state(rng, 6);
                        } while (next.empty());
                        w.engine.record_change(change(e, ChangeKind::create, live, next));
                    }
                } else if (pick == 0) {
                    w.engine.record_change(change(e, ChangeKind::remove, live, next));
                } else if (pick == 3 && has_chain) {
                    const auto k = 1 + rng() % w.engine.history(e).snapshots.size();
                    w.engine.restore(e, k, kAgent);
                    next = expected[k - 1];
                } else {
                    next = fuzz::random_state(rng, 6);
                    w.engine.record_change(change(e, next.empty() ? ChangeKind::remove : ChangeKind::update, live, next));
                }
            } catch (const NoOpError&) {
                EXPECT_EQ(w.quads(), prov_before);
                continue;
            }
            if (expected.size() + 1 < w.engine.history(e).snapshots.size()) {
                expected.push_back(live);  // baseline staged before this change
            }
            expected.push_back(next);
            live = next;
            deleted = live.empty();
            const auto prov_after = w.quads();
            for (const auto& q : prov_before) {
                if (q.graph) {
                    EXPECT_TRUE(prov_after.count(q)) << rdf::to_nquads(q);
                }
            }
        }
        if (!w.engine.has_history(e)) {
            continue;
        }
        const auto chain = w.engine.history(e);
        ASSERT_EQ(chain.snapshots.size(), expected.size());
        EXPECT_EQ(chain.deleted(), deleted);
        for (std::size_t k = 1; k <= chain.snapshots.size(); ++k) {
            EXPECT_EQ(w.engine.materialize(e, k), expected[k - 1]) << "round " << round << " index " << k;
            EXPECT_EQ(chain.snapshots[k - 1].index, k);
            if (k > 1) {
                EXPECT_EQ(chain.snapshots[k - 1].derived_from.front(), chain.snapshots[k - 2].id);
                EXPECT_LE(chain.snapshots[k - 2].generated_at, chain.snapshots[k - 1].generated_at);
            } else {
                EXPECT_TRUE(chain.snapshots[0].derived_from.empty());
            }
        }
    }
}
