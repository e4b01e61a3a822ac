#include "provcurate/error.hpp"
#include "provcurate/rdf/term.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <gtest/gtest.h>

using namespace provcurate;
using namespace provcurate::rdf;

TEST(IriTest, RequiresScheme)
{
    EXPECT_NO_THROW(Iri("https://example.org/a"));
    EXPECT_NO_THROW(Iri("urn:uuid:1234"));
    EXPECT_THROW(Iri(""), ContractViolation);
    EXPECT_THROW(Iri("example.org/a"), ContractViolation);
    EXPECT_THROW(Iri("1http://x"), ContractViolation);
    EXPECT_THROW(Iri("http://exa mple.org"), ContractViolation);
    EXPECT_THROW(Iri("http://example.org/<a>"), ContractViolation);
}

TEST(IriTest, LocalName)
{
    EXPECT_EQ(local_name(Iri("https://w3id.org/oc/meta/ra/0601")), "0601");
    EXPECT_EQ(local_name(Iri("http://purl.org/spar/datacite#doi")), "doi");
    EXPECT_EQ(local_name(Iri("https://example.org/")), "https://example.org/");
}

TEST(LiteralTest, PlainLiteralIsXsdString)
{
    const auto l = Literal::string("x");
    EXPECT_EQ(l.datatype().str(), vocab::xsd_string);
    EXPECT_FALSE(l.language());
}

TEST(LiteralTest, LanguageImpliesLangString)
{
    const Literal l("ciao", std::string("IT"));
    EXPECT_EQ(l.datatype().str(), vocab::rdf_lang_string);
    EXPECT_EQ(*l.language(), "it");
    EXPECT_THROW(Literal("x", Iri(std::string(vocab::rdf_lang_string))), ContractViolation);
}

TEST(NTriplesTest, EscapesLexicalForms)
{
    EXPECT_EQ(to_ntriples(Term{Literal::string("a\"b\\c\nd\te")}),
              "\"a\\\"b\\\\c\\nd\\te\"^^<http://www.w3.org/2001/XMLSchema#string>");
    EXPECT_EQ(to_ntriples(Term{Literal::string(std::string("\x01", 1))}),
              "\"\\u0001\"^^<http://www.w3.org/2001/XMLSchema#string>");
    EXPECT_EQ(to_ntriples(Term{Literal("x", std::string("en"))}), "\"x\"@en");
    EXPECT_EQ(to_ntriples(Term{BlankNode{"b0"}}), "_:b0");
}

TEST(NTriplesTest, CanonicalOrderUsesRenderedForms)
{
    const Iri s("http://e.org/s");
    // Raw string order says "a" < "a!", rendered order says "<...a!>" < "<...a>".
    const Triple t1{s, Iri("http://e.org/a"), Iri("http://e.org/o")};
    const Triple t2{s, Iri("http://e.org/a!"), Iri("http://e.org/o")};
    EXPECT_TRUE(CanonicalTripleLess{}(t2, t1));
    EXPECT_FALSE(CanonicalTripleLess{}(t1, t2));
}
