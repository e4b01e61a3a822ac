#include "provcurate/error.hpp"
#include "provcurate/store/endpoint.hpp"
#include "provcurate/store/sparql.hpp"

#include <gtest/gtest.h>

using namespace provcurate;
using namespace provcurate::store;

namespace {

const char* kData = R"(
<https://ex.org/a1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <https://ex.org/Article> .
<https://ex.org/a1> <https://ex.org/title> "Deep Learning"@en .
<https://ex.org/a1> <https://ex.org/year> "2020"^^<http://www.w3.org/2001/XMLSchema#integer> .
<https://ex.org/a1> <https://ex.org/author> <https://ex.org/p1> .
<https://ex.org/a1> <https://ex.org/author> <https://ex.org/p2> .
<https://ex.org/a2> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <https://ex.org/Article> .
<https://ex.org/a2> <https://ex.org/title> "Graph Stores" .
<https://ex.org/a2> <https://ex.org/year> "2018"^^<http://www.w3.org/2001/XMLSchema#integer> .
<https://ex.org/a2> <https://ex.org/author> <https://ex.org/p2> .
<https://ex.org/p1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <https://ex.org/Person> .
<https://ex.org/p1> <https://ex.org/name> "Ada" .
<https://ex.org/p2> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <https://ex.org/Person> .
<https://ex.org/p2> <https://ex.org/name> "Bob" .
<https://ex.org/a1/prov/se/1> <http://www.w3.org/ns/prov#specializationOf> <https://ex.org/a1> <https://ex.org/a1/prov/> .
)";

class SparqlTest : public ::testing::Test {
protected:
    void SetUp() override { ep.load_nquads(kData); }

    std::vector<std::string> column(const QueryResult& r, const std::string& var)
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const auto& v = r.get(i, var);
            out.push_back(v ? rdf::lexical_value(*v) : "UNBOUND");
        }
        return out;
    }

    EmbeddedEndpoint ep;
};

const std::string kPrefix = "PREFIX ex: <https://ex.org/> ";

} // namespace

TEST_F(SparqlTest, BasicPatternWithSemicolonAndA)
{
    auto r = ep.query(kPrefix + "SELECT ?a ?t WHERE { ?a a ex:Article ; ex:title ?t } ORDER BY ?a");
    EXPECT_EQ(column(r, "t"), (std::vector<std::string>{"Deep Learning", "Graph Stores"}));
}

TEST_F(SparqlTest, DefaultGraphExcludesNamedGraphs)
{
    auto r = ep.query("SELECT ?s WHERE { ?s <http://www.w3.org/ns/prov#specializationOf> ?e }");
    EXPECT_TRUE(r.rows.empty());
    r = ep.query("SELECT ?g ?s WHERE { GRAPH ?g { ?s <http://www.w3.org/ns/prov#specializationOf> ?e } }");
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(column(r, "g"), std::vector<std::string>{"https://ex.org/a1/prov/"});
    r = ep.query("ASK { GRAPH <https://ex.org/a1/prov/> { ?s ?p ?o } }");
    EXPECT_TRUE(r.boolean);
}

TEST_F(SparqlTest, OptionalLeavesUnbound)
{
    auto r = ep.query(kPrefix + "SELECT ?p ?n ?x WHERE { ?p a ex:Person . OPTIONAL { ?p ex:missing ?x } "
                                "OPTIONAL { ?p ex:name ?n } } ORDER BY ?n");
    EXPECT_EQ(column(r, "n"), (std::vector<std::string>{"Ada", "Bob"}));
    EXPECT_EQ(column(r, "x"), (std::vector<std::string>{"UNBOUND", "UNBOUND"}));
}

TEST_F(SparqlTest, UnionAndDistinct)
{
    auto r = ep.query(kPrefix + "SELECT DISTINCT ?x WHERE { { ?x a ex:Person } UNION { ?a ex:author ?x } } ORDER BY ?x");
    EXPECT_EQ(column(r, "x"), (std::vector<std::string>{"https://ex.org/p1", "https://ex.org/p2"}));
}

TEST_F(SparqlTest, FilterFunctions)
{
    auto r = ep.query(kPrefix + "SELECT ?a WHERE { ?a ex:title ?t FILTER(CONTAINS(LCASE(STR(?t)), \"graph\")) }");
    EXPECT_EQ(column(r, "a"), std::vector<std::string>{"https://ex.org/a2"});
    r = ep.query(kPrefix + "SELECT ?a WHERE { ?a ex:year ?y FILTER(?y >= 2019) }");
    EXPECT_EQ(column(r, "a"), std::vector<std::string>{"https://ex.org/a1"});
    r = ep.query(kPrefix + "SELECT ?a WHERE { ?a ex:title ?t FILTER(LANG(?t) = \"en\" && REGEX(?t, \"^deep\", \"i\")) }");
    EXPECT_EQ(column(r, "a"), std::vector<std::string>{"https://ex.org/a1"});
    r = ep.query(kPrefix + "SELECT ?p WHERE { ?p ex:name ?n FILTER(?n IN (\"Bob\", \"Zed\")) }");
    EXPECT_EQ(column(r, "p"), std::vector<std::string>{"https://ex.org/p2"});
    r = ep.query(kPrefix + "SELECT ?p WHERE { ?p a ex:Person FILTER(!sameTerm(?p, ex:p1) && isIRI(?p)) }");
    EXPECT_EQ(column(r, "p"), std::vector<std::string>{"https://ex.org/p2"});
    r = ep.query(kPrefix + "SELECT (STRLEN(\"日本\") AS ?n) (SUBSTR(\"abcdef\", 2, 3) AS ?s) (CONCAT(\"a\", \"b\") AS ?c) "
                           "(UCASE(\"x\") AS ?u) WHERE {}");
    EXPECT_EQ(column(r, "n"), std::vector<std::string>{"2"});
    EXPECT_EQ(column(r, "s"), std::vector<std::string>{"bcd"});
    EXPECT_EQ(column(r, "c"), std::vector<std::string>{"ab"});
    EXPECT_EQ(column(r, "u"), std::vector<std::string>{"X"});
}

TEST_F(SparqlTest, ExistsAndMinus)
{
    auto r = ep.query(kPrefix + "SELECT ?p WHERE { ?p a ex:Person FILTER NOT EXISTS { ex:a2 ex:author ?p } }");
    EXPECT_EQ(column(r, "p"), std::vector<std::string>{"https://ex.org/p1"});
    r = ep.query(kPrefix + "SELECT ?p WHERE { ?p a ex:Person MINUS { ?p ex:name \"Bob\" } }");
    EXPECT_EQ(column(r, "p"), std::vector<std::string>{"https://ex.org/p1"});
}

TEST_F(SparqlTest, GroupCountOrder)
{
    auto r = ep.query("SELECT ?c (COUNT(?s) AS ?n) WHERE { ?s a ?c } GROUP BY ?c ORDER BY DESC(?n) ?c");
    EXPECT_EQ(column(r, "c"), (std::vector<std::string>{"https://ex.org/Article", "https://ex.org/Person"}));
    EXPECT_EQ(column(r, "n"), (std::vector<std::string>{"2", "2"}));
    r = ep.query(kPrefix + "SELECT ?p (COUNT(?a) AS ?n) (GROUP_CONCAT(?y; SEPARATOR=\",\") AS ?ys) "
                           "WHERE { ?a ex:author ?p ; ex:year ?y } GROUP BY ?p ORDER BY DESC(?n)");
    EXPECT_EQ(column(r, "p"), (std::vector<std::string>{"https://ex.org/p2", "https://ex.org/p1"}));
    EXPECT_EQ(column(r, "n"), (std::vector<std::string>{"2", "1"}));
    r = ep.query("SELECT (COUNT(*) AS ?n) WHERE { ?s <https://ex.org/nothing> ?o }");
    EXPECT_EQ(column(r, "n"), std::vector<std::string>{"0"});
    r = ep.query(kPrefix + "SELECT (MAX(?y) AS ?m) (SUM(?y) AS ?s) WHERE { ?a ex:year ?y }");
    EXPECT_EQ(column(r, "m"), std::vector<std::string>{"2020"});
    EXPECT_EQ(column(r, "s"), std::vector<std::string>{"4038"});
}

TEST_F(SparqlTest, LimitOffsetValuesBind)
{
    auto r = ep.query(kPrefix + "SELECT ?n WHERE { ?p ex:name ?n } ORDER BY DESC(?n) LIMIT 1 OFFSET 1");
    EXPECT_EQ(column(r, "n"), std::vector<std::string>{"Ada"});
    r = ep.query(kPrefix + "SELECT ?p ?n WHERE { VALUES ?p { ex:p2 } ?p ex:name ?n BIND(CONCAT(\"Dr \", ?n) AS ?d) }");
    EXPECT_EQ(column(r, "n"), std::vector<std::string>{"Bob"});
    r = ep.query(kPrefix + "SELECT ?d WHERE { ex:p1 ex:name ?n BIND(CONCAT(\"Dr \", ?n) AS ?d) }");
    EXPECT_EQ(column(r, "d"), std::vector<std::string>{"Dr Ada"});
}

TEST_F(SparqlTest, Construct)
{
    auto r = ep.query(kPrefix + "CONSTRUCT { ?p ex:wrote ?a } WHERE { ?a ex:author ?p }");
    EXPECT_EQ(r.kind, QueryResult::Kind::graph);
    EXPECT_EQ(r.triples.size(), 3u);
}

TEST_F(SparqlTest, UpdatesAndClear)
{
    ep.update(kPrefix + "INSERT DATA { ex:p3 a ex:Person ; ex:name \"Cy\" . GRAPH ex:g { ex:p3 ex:x 1 } } ; "
                        "DELETE DATA { ex:p1 ex:name \"Ada\" }");
    EXPECT_TRUE(ep.query(kPrefix + "ASK { ex:p3 ex:name \"Cy\" }").boolean);
    EXPECT_FALSE(ep.query(kPrefix + "ASK { ex:p1 ex:name ?n }").boolean);
    EXPECT_TRUE(ep.query(kPrefix + "ASK { GRAPH ex:g { ex:p3 ex:x 1 } }").boolean);
    ep.update(kPrefix + "CLEAR GRAPH ex:g");
    EXPECT_FALSE(ep.query(kPrefix + "ASK { GRAPH ex:g { ?s ?p ?o } }").boolean);
}

TEST_F(SparqlTest, ParseErrorsCarryPosition)
{
    try {
        ep.query("SELECT ?x WHERE {\n  ?x ?p \n}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(ep.query("SELECT ?x WHERE { ?x nope:p ?o }"), ParseError);
    EXPECT_THROW(ep.update("INSERT DATA { ?s <https://ex.org/p> 1 }"), ParseError);
    EXPECT_THROW(ep.update("INSERT DATA { _:b <https://ex.org/p> 1 }"), ParseError);
    EXPECT_THROW(ep.update("DELETE { ?s ?p ?o } WHERE { ?s ?p ?o }"), ParseError);
}

TEST_F(SparqlTest, LooksLikeUpdate)
{
    EXPECT_TRUE(looks_like_update("PREFIX ex: <https://ex.org/> INSERT DATA { ex:a ex:b ex:c }"));
    EXPECT_FALSE(looks_like_update("SELECT * WHERE { ?s ?p ?o }"));
}

TEST_F(SparqlTest, SelectStarSkipsBlankVariables)
{
    auto r = ep.query(kPrefix + "SELECT * WHERE { ?a ex:author _:x . _:x ex:name \"Ada\" }");
    EXPECT_EQ(r.variables, std::vector<std::string>{"a"});
    EXPECT_EQ(column(r, "a"), std::vector<std::string>{"https://ex.org/a1"});
}
