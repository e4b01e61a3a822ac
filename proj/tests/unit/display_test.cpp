#include "provcurate/display/rules.hpp"
#include "provcurate/error.hpp"
#include "provcurate/shacl/shapes.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace provcurate;
using namespace provcurate::display;

namespace {

const shacl::ShapeCatalog& meta_catalog()
{
    static const auto catalog = shacl::parse_shapes(fuzz::read_fixture("meta_shapes.ttl"), "meta_shapes.ttl");
    return catalog;
}

const shacl::ShapeCatalog& issue_catalog()
{
    static const auto catalog = shacl::parse_shapes(fuzz::read_fixture("issues.ttl"), "issues.ttl");
    return catalog;
}

Iri iri(const std::string& s) { return Iri(s); }

const std::string kFoaf = "http://xmlns.com/foaf/0.1/";

ConfigError expect_config_error(const std::string& yaml, const shacl::ShapeCatalog& catalog)
{
    try {
        load_rules(yaml, catalog, "test.yaml");
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << yaml;
    return ConfigError("none");
}

} // namespace

TEST(LoadRules, EmptyDocumentHasDefaults)
{
    const auto rules = load_rules("", meta_catalog());
    EXPECT_TRUE(rules.entries.empty());
    EXPECT_EQ(rules.defaults.orphan_policy, OrphanPolicy::ask);
    EXPECT_EQ(rules.defaults.lock_ttl_seconds, 300);
}

TEST(LoadRules, MetaFixture)
{
    const auto rules = load_rules(fuzz::read_fixture("meta_rules.yaml"), meta_catalog());
    ASSERT_EQ(rules.entries.size(), 5u);
    const auto& id = rules.entries[1];
    EXPECT_EQ(id.binding, (Binding{Binding::Kind::shape, iri("http://schema.org/JournalArticleIdentifierShape")}));
    EXPECT_EQ(id.display_name, "Identifier");
    const auto& article = rules.entries[0];
    EXPECT_EQ(article.orphan_policy, OrphanPolicy::remove);
    ASSERT_TRUE(article.ordering.has_value());
    EXPECT_EQ(article.ordering->next.str(), "https://w3id.org/oc/ontology/hasNext");
    ASSERT_EQ(article.virtual_properties.size(), 1u);
    EXPECT_EQ(article.virtual_properties[0].intermediate_class.str(), "http://purl.org/spar/cito/Citation");
    const auto* ids = article.field(iri("http://purl.org/spar/datacite/hasIdentifier"));
    ASSERT_NE(ids, nullptr);
    EXPECT_EQ(ids->autocomplete, (AutocompleteRule{3, store::SearchTarget::parent}));
    const auto& person = rules.entries[2];
    ASSERT_TRUE(person.duplicates.has_value());
    EXPECT_EQ(person.duplicates->any_of.size(), 2u);
    const auto& role = rules.entries[3];
    const auto visible = role.visible_fields();
    ASSERT_EQ(visible.size(), 2u);
    EXPECT_EQ(visible[0].display_name, "Role");
}

TEST(LoadRules, VisibleFieldsFollowOrder)
{
    const auto rules = load_rules(R"(
entities:
  - class: http://ex.org/C
    fields:
      - { path: http://ex.org/c, order: 3 }
      - { path: http://ex.org/a, order: -1 }
      - { path: http://ex.org/hidden, order: 0, visible: false }
      - { path: http://ex.org/b, order: 2 }
)", meta_catalog());
    const auto fields = rules.entries[0].visible_fields();
    ASSERT_EQ(fields.size(), 3u);
    EXPECT_EQ(fields[0].path.str(), "http://ex.org/a");
    EXPECT_EQ(fields[1].path.str(), "http://ex.org/b");
    EXPECT_EQ(fields[2].path.str(), "http://ex.org/c");
    EXPECT_EQ(fields[2].display_name, "c");
}

TEST(LoadRules, PositionedErrors)
{
    auto e = expect_config_error("entities:\n  - shape: http://schema.org/NoSuchShape\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].shape");
    EXPECT_EQ(e.line(), 2u);
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n    colour: red\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].colour");
    EXPECT_EQ(e.line(), 3u);
    e = expect_config_error("entities: [\n", meta_catalog());
    EXPECT_GT(e.line(), 0u);
    e = expect_config_error("entities:\n  - class: nope:C\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].class");
    e = expect_config_error("defaults:\n  lockTtlSeconds: 5\n", meta_catalog());
    EXPECT_EQ(e.path(), "defaults.lockTtlSeconds");
    e = expect_config_error("defaults:\n  orphanPolicy: maybe\n", meta_catalog());
    EXPECT_EQ(e.path(), "defaults.orphanPolicy");
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n  - class: http://ex.org/C\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[1]");
    e = expect_config_error(
        "entities:\n  - class: http://ex.org/C\n    fields:\n      - {path: http://ex.org/a, order: 1}\n"
        "      - {path: http://ex.org/b, order: 1}\n",
        meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].fields[1].order");
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n    fields:\n      - {path: http://ex.org/a, "
                            "autocomplete: {minChars: 0}}\n",
                            meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].fields[0].autocomplete.minChars");
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n    duplicates: {anyOf: [[]]}\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].duplicates.anyOf[0]");
}

TEST(LoadRules, LabelQueryMustSelectOneVariable)
{
    auto e = expect_config_error(
        "entities:\n  - class: http://ex.org/C\n    labelQuery: SELECT ?a ?b WHERE { ?entity ?a ?b }\n", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].labelQuery");
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n    labelQuery: ASK { ?entity ?a ?b }\n",
                            meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].labelQuery");
    e = expect_config_error("entities:\n  - class: http://ex.org/C\n    labelQuery: SELECT ?a WHERE {\n",
                            meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].labelQuery");
}

TEST(LoadRules, IncompatibleWidgetOverride)
{
    auto e = expect_config_error(R"(
entities:
  - class: http://purl.org/spar/fabio/JournalArticle
    fields:
      - path: http://purl.org/dc/terms/title
        widget: dropdown
)", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].fields[0].widget");
    e = expect_config_error(R"(
entities:
  - shape: http://schema.org/JournalArticleShape
    fields:
      - path: http://purl.org/spar/datacite/hasIdentifier
        widget: textarea
)", meta_catalog());
    EXPECT_EQ(e.path(), "entities[0].fields[0].widget");
    EXPECT_NO_THROW(load_rules(R"(
entities:
  - shape: http://schema.org/JournalArticleShape
    fields:
      - path: http://purl.org/spar/datacite/hasIdentifier
        widget: reference
)", meta_catalog()));
}

TEST(ResolveEntityConfig, ShapeBindingWins)
{
    const auto rules = load_rules(R"(
prefixes: { ex: "https://example.org/shapes/", fabio: "http://purl.org/spar/fabio/" }
entities:
  - class: fabio:JournalIssue
    displayName: Issue
  - shape: ex:SpecialIssueShape
    displayName: Special issue
)", issue_catalog());
    const std::vector<Iri> classes = {iri("http://purl.org/spar/fabio/JournalIssue")};
    auto cfg = resolve_entity_config(rules, classes, iri("https://example.org/shapes/SpecialIssueShape"));
    ASSERT_TRUE(cfg);
    EXPECT_EQ(cfg->binding.kind, Binding::Kind::shape);
    EXPECT_EQ(cfg->display_name, "Special issue");
    cfg = resolve_entity_config(rules, classes, iri("https://example.org/shapes/JournalIssueShape"));
    ASSERT_TRUE(cfg);
    EXPECT_EQ(cfg->binding.kind, Binding::Kind::cls);
    EXPECT_FALSE(resolve_entity_config(rules, {iri("http://purl.org/spar/fabio/Journal")}, std::nullopt));
}

TEST(ComputeLabel, CompositeVolumeLabel)
{
    store::EmbeddedEndpoint ep;
    ep.load_nquads(R"(
<https://w3id.org/oc/meta/br/0603> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://purl.org/spar/fabio/JournalVolume> .
<https://w3id.org/oc/meta/br/0603> <http://purl.org/spar/fabio/hasSequenceIdentifier> "3" .
<https://w3id.org/oc/meta/br/0603> <http://purl.org/vocab/frbr/core#partOf> <https://w3id.org/oc/meta/br/0602> .
<https://w3id.org/oc/meta/br/0602> <http://purl.org/dc/terms/title> "Nature" .
)");
    const auto rules = load_rules(R"(
prefixes:
  fabio: http://purl.org/spar/fabio/
  frbr: http://purl.org/vocab/frbr/core#
  dcterms: http://purl.org/dc/terms/
entities:
  - class: fabio:JournalVolume
    labelQuery: |
      SELECT (CONCAT("Volume ", ?n, " of ", ?journal) AS ?label)
      WHERE { ?entity fabio:hasSequenceIdentifier ?n ; frbr:partOf ?j . ?j dcterms:title ?journal }
)", meta_catalog());
    const auto& cfg = rules.entries[0];
    EXPECT_EQ(compute_label(iri("https://w3id.org/oc/meta/br/0603"), &cfg, rules, ep), "Volume 3 of Nature");
    EXPECT_EQ(compute_label(iri("https://w3id.org/oc/meta/ra/0601"), nullptr, rules, ep), "0601");
    EXPECT_EQ(compute_label(iri("https://w3id.org/oc/meta/br/0999"), &cfg, rules, ep), "0999");
}

TEST(ComputeLabel, FailureFallsBackWithDiagnostic)
{
    class Broken : public store::SparqlEndpoint {
    public:
        store::QueryResult query(std::string_view) override { throw StoreError("down"); }
        void update(std::string_view) override {}
        std::string describe() const override { return "broken"; }
    } broken;
    const auto rules = load_rules("entities:\n  - class: http://ex.org/C\n    labelQuery: SELECT ?l WHERE { ?entity "
                                  "<http://ex.org/l> ?l }\n",
                                  meta_catalog());
    DiagnosticsLog log;
    EXPECT_EQ(compute_label(iri("http://ex.org/x#frag"), &rules.entries[0], rules, broken, &log), "frag");
    ASSERT_EQ(log.snapshot().size(), 1u);
    EXPECT_EQ(log.snapshot()[0].source, "label-query");
}

TEST(DuplicateQuery, PersonExampleUsesOnlyInstantiableClause)
{
    DuplicateRule rule{{{iri(kFoaf + "name")}, {iri(kFoaf + "givenName"), iri(kFoaf + "familyName")}}};
    const std::map<Iri, std::vector<Term>> values = {
        {iri(kFoaf + "givenName"), {rdf::Literal::string("A")}},
        {iri(kFoaf + "familyName"), {rdf::Literal::string("B")}},
    };
    const auto q = build_duplicate_query(rule, values, iri("https://ex.org/ra/new"));
    EXPECT_EQ(q.find("UNION"), std::string::npos);
    EXPECT_EQ(q.find("/name>"), std::string::npos);
    EXPECT_NE(q.find("givenName"), std::string::npos);

    store::EmbeddedEndpoint ep;
    ep.load_nquads(R"(
<https://ex.org/ra/1> <http://xmlns.com/foaf/0.1/givenName> "A" .
<https://ex.org/ra/1> <http://xmlns.com/foaf/0.1/familyName> "B" .
<https://ex.org/ra/2> <http://xmlns.com/foaf/0.1/givenName> "A" .
<https://ex.org/ra/2> <http://xmlns.com/foaf/0.1/familyName> "b" .
<https://ex.org/ra/new> <http://xmlns.com/foaf/0.1/givenName> "A" .
<https://ex.org/ra/new> <http://xmlns.com/foaf/0.1/familyName> "B" .
)");
    const auto r = ep.query(q);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(rdf::lexical_value(*r.rows[0][0]), "https://ex.org/ra/1");
}

TEST(DuplicateQuery, SingleClauseAndNoClause)
{
    DuplicateRule rule{{{iri(kFoaf + "name")}}};
    const auto q = build_duplicate_query(rule, {{iri(kFoaf + "name"), {rdf::Literal::string("X")}}}, iri("https://ex.org/a"));
    EXPECT_EQ(q.find("UNION"), std::string::npos);
    EXPECT_THROW(build_duplicate_query(rule, {}, iri("https://ex.org/a")), NoApplicableClauseError);
    DuplicateRule two{{{iri(kFoaf + "name")}, {iri(kFoaf + "mbox")}}};
    const auto both = build_duplicate_query(
        two, {{iri(kFoaf + "name"), {rdf::Literal::string("X")}}, {iri(kFoaf + "mbox"), {iri("mailto:x@y")}}},
        iri("https://ex.org/a"));
    EXPECT_NE(both.find("UNION"), std::string::npos);
}

// Any-match on multi-valued paths; the candidate never matches itself.
TEST(DuplicateQuery, NeverMatchesCandidateProperty)
{
    std::mt19937_64 rng(5);
    const Iri name(kFoaf + "name");
    const Iri given(kFoaf + "givenName");
    const Iri family(kFoaf + "familyName");
    DuplicateRule rule{{{name}, {given, family}}};
    for (int round = 0; round < 50; ++round) {
        store::EmbeddedEndpoint ep;
        std::string data;
        auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
        for (int e = 0; e < 8; ++e) {
            const std::string s = "<https://ex.org/ra/" + std::to_string(e) + "> ";
            for (int k = pick(3); k > 0; --k) {
                data += s + "<" + name.str() + "> \"n" + std::to_string(pick(3)) + "\" .\n";
            }
            data += s + "<" + given.str() + "> \"g" + std::to_string(pick(2)) + "\" .\n";
            data += s + "<" + family.str() + "> \"f" + std::to_string(pick(2)) + "\" .\n";
        }
        ep.load_nquads(data);
        const Iri candidate("https://ex.org/ra/" + std::to_string(pick(8)));
        std::map<Iri, std::vector<Term>> values;
        for (const auto& q : ep.quads()) {
            if (q.triple.subject == rdf::Subject(candidate)) {
                values[q.triple.predicate].push_back(q.triple.object);
            }
        }
        const auto r = ep.query(build_duplicate_query(rule, values, candidate));
        std::set<std::string> got;
        for (const auto& row : r.rows) {
            got.insert(rdf::lexical_value(*row[0]));
        }
        EXPECT_EQ(got.count(candidate.str()), 0u);
        // Brute-force oracle.
        std::map<std::string, std::map<Iri, std::set<Term>>> by_entity;
        for (const auto& q : ep.quads()) {
            by_entity[std::get<Iri>(q.triple.subject).str()][q.triple.predicate].insert(q.triple.object);
        }
        std::set<std::string> expected;
        for (const auto& [e, props] : by_entity) {
            if (e == candidate.str()) {
                continue;
            }
            for (const auto& clause : rule.any_of) {
                bool all = true;
                for (const auto& p : clause) {
                    bool any = false;
                    for (const auto& v : values[p]) {
                        any = any || (props.count(p) && props.at(p).count(v));
                    }
                    all = all && any;
                }
                if (all) {
                    expected.insert(e);
                }
            }
        }
        EXPECT_EQ(got, expected);
    }
}

TEST(DumpRules, RoundTripsFixture)
{
    const auto rules = load_rules(fuzz::read_fixture("meta_rules.yaml"), meta_catalog());
    const auto again = load_rules(dump_rules(rules), meta_catalog());
    EXPECT_EQ(rules, again);
}

TEST(DumpRules, RoundTripsRandomRules)
{
    std::mt19937_64 rng(17);
    auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    const std::vector<std::string> shapes = {"http://schema.org/JournalArticleShape", "http://schema.org/AgentShape",
                                             "http://schema.org/JournalShape"};
    for (int round = 0; round < 100; ++round) {
        DisplayRules rules;
        if (pick(2)) {
            rules.prefixes["ex"] = "http://ex.org/";
        }
        rules.defaults.orphan_policy = static_cast<OrphanPolicy>(pick(3));
        rules.defaults.lock_ttl_seconds = 10 + pick(1000);
        const int n = pick(4);
        for (int i = 0; i < n; ++i) {
            EntityConfig e;
            e.binding = pick(2) ? Binding{Binding::Kind::shape, iri(shapes[static_cast<std::size_t>(i)])}
                                : Binding{Binding::Kind::cls, iri("http://ex.org/C" + std::to_string(i))};
            e.display_name = pick(2) ? "Name \"quoted\": yes" : "plain";
            if (pick(2)) {
                e.label_query = "SELECT ?l WHERE { ?entity <http://ex.org/l> ?l }";
            }
            if (pick(2)) {
                e.orphan_policy = static_cast<OrphanPolicy>(pick(3));
            }
            for (int f = 0; f < pick(4); ++f) {
                FieldRule fr;
                fr.path = iri("http://ex.org/p" + std::to_string(f));
                fr.display_name = "Field #" + std::to_string(f);
                fr.visible = pick(2);
                fr.order = f * 10 - 5;
                if (pick(2)) {
                    fr.widget = pick(2) ? shacl::WidgetKind::textarea : shacl::WidgetKind::text;
                }
                if (pick(2)) {
                    fr.autocomplete = AutocompleteRule{static_cast<std::size_t>(1 + pick(5)),
                                                       pick(2) ? store::SearchTarget::parent : store::SearchTarget::same_type};
                }
                e.fields.push_back(fr);
            }
            if (pick(2)) {
                e.duplicates = DuplicateRule{{{iri("http://ex.org/p0")}, {iri("http://ex.org/p1"), iri("http://ex.org/p2")}}};
            }
            if (pick(2)) {
                e.virtual_properties.push_back(VirtualPropertyRule{"Cites", iri("http://schema.org/CitationShape"),
                                                                   iri("http://ex.org/Citation"), iri("http://ex.org/from"),
                                                                   iri("http://ex.org/to")});
            }
            if (pick(2)) {
                e.ordering = OrderingRule{iri("http://ex.org/p0"), iri("http://ex.org/next")};
            }
            rules.entries.push_back(std::move(e));
        }
        const auto text = dump_rules(rules);
        EXPECT_EQ(load_rules(text, meta_catalog()), rules) << text;
    }
}

TEST(RulesHolder, ReadersKeepTheirSnapshot)
{
    RulesHolder holder;
    const auto before = holder.get();
    auto next = std::make_shared<DisplayRules>();
    next->defaults.lock_ttl_seconds = 60;
    holder.replace(next);
    EXPECT_EQ(before->defaults.lock_ttl_seconds, 300);
    EXPECT_EQ(holder.get()->defaults.lock_ttl_seconds, 60);
}
