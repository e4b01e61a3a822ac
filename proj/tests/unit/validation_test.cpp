#include "provcurate/rdf/vocab.hpp"
#include "provcurate/validation/validator.hpp"

#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

#include <boost/regex.hpp>
#include <gtest/gtest.h>

using namespace provcurate;
using namespace provcurate::validation;
using rdf::EntityState;
using rdf::Iri;
using rdf::Literal;

namespace {

const Iri E("https://example.org/id/1");
const Iri type(std::string(vocab::rdf_type));
const Iri uses_scheme("http://purl.org/spar/datacite/usesIdentifierScheme");
const Iri doi("http://purl.org/spar/datacite/doi");
const Iri pmid("http://purl.org/spar/datacite/pmid");
const Iri has_literal_value("http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue");
const std::string doi_pattern = R"(^10\.\d{4,9}/[-._;()/:A-Z0-9]+$)";

shacl::FormSchema identifier_schema()
{
    static const auto catalog = shacl::parse_shapes(fuzz::read_fixture("identifier_shape.ttl"));
    return shacl::compile_shape(Iri("http://schema.org/JournalArticleIdentifierShape"), catalog);
}

EntityState identifier(const Iri& scheme, const std::string& value)
{
    EntityState s(E);
    s.add(type, Iri("http://purl.org/spar/datacite/Identifier"));
    s.add(uses_scheme, scheme);
    s.add(has_literal_value, Literal::string(value));
    return s;
}

bool oracle_matches(const std::string& value)
{
    // single-line mode: ^ and $ anchor at the ends of the whole string, as in XPath regexes
    return boost::regex_search(value, boost::regex(doi_pattern, boost::regex::perl), boost::match_single_line);
}

} // namespace

TEST(ValidateEntityTest, ValidDoiPasses)
{
    ASSERT_TRUE(oracle_matches("10.1234/ABC"));
    EXPECT_TRUE(validate_entity(identifier(doi, "10.1234/ABC"), identifier_schema()).empty());
}

TEST(ValidateEntityTest, InvalidDoiFailsConditionPattern)
{
    ASSERT_FALSE(oracle_matches("hello"));
    const auto v = validate_entity(identifier(doi, "hello"), identifier_schema());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::condition_pattern);
    EXPECT_EQ(v[0].path, has_literal_value);
    EXPECT_EQ(v[0].value, rdf::Term{Literal::string("hello")});
    EXPECT_FALSE(v[0].message.empty());
}

TEST(ValidateEntityTest, MissingScheme)
{
    EntityState s(E);
    s.add(has_literal_value, Literal::string("10.1234/ABC"));
    const auto v = validate_entity(s, identifier_schema());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::missing_required);
    EXPECT_EQ(v[0].path, uses_scheme);
}

TEST(ValidateEntityTest, AgreesWithIndependentRegexEngine)
{
    const std::vector<std::string> samples = {
        "10.1234/ABC", "10.1000/XYZ-123", "10.123/ABC", "10.1234/abc", "10.12345678901/A", "hello", "",
        "10.1234/", "x10.1234/ABC", "10.1234/A B", "10.99999/(A);B:C/D.E_F-G", "10.1234/ABC\n",
    };
    for (const auto& s : samples) {
        const auto v = validate_entity(identifier(doi, s), identifier_schema());
        EXPECT_EQ(v.empty(), oracle_matches(s)) << s;
        EXPECT_TRUE(validate_entity(identifier(pmid, s), identifier_schema()).size() <= 1) << s;
    }
}

TEST(ValidateEntityTest, Cardinality)
{
    auto s = identifier(doi, "10.1234/ABC");
    s.add(has_literal_value, Literal::string("10.1234/DEF"));
    const auto v = validate_entity(s, identifier_schema());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::too_many);
}

TEST(ValidateEntityTest, NotInOptionsAndDatatype)
{
    EntityState s(E);
    s.add(uses_scheme, Iri("http://purl.org/spar/datacite/isbn"));
    s.add(has_literal_value, Literal("10.1234/ABC", std::string("en")));
    const auto v = validate_entity(s, identifier_schema());
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].kind, ViolationKind::not_in_options);
    EXPECT_EQ(v[1].kind, ViolationKind::datatype);
}

TEST(ValidateEntityTest, ClosedWorldExceptType)
{
    auto s = identifier(doi, "10.1234/ABC");
    s.add(Iri("http://purl.org/dc/terms/title"), Literal::string("not declared"));
    const auto v = validate_entity(s, identifier_schema());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::undeclared_property);
    EXPECT_EQ(v[0].path, Iri("http://purl.org/dc/terms/title"));
}

TEST(ValidateEntityTest, EmptySchemaEmptyState)
{
    EXPECT_TRUE(validate_entity(EntityState(E), shacl::FormSchema{Iri("https://example.org/S"), std::nullopt, {}}).empty());
}

TEST(ValidateEntityTest, ConditionalRulesNeverFireWhenConditionFalse)
{
    std::mt19937_64 rng(5);
    const auto schema = identifier_schema();
    for (int i = 0; i < 500; ++i) {
        EntityState s(E);
        if (rng() % 2) {
            s.add(uses_scheme, pmid);
        }
        s.add(has_literal_value, Literal::string(fuzz::random_text(rng)));
        for (const auto& v : validate_entity(s, schema)) {
            EXPECT_NE(v.kind, ViolationKind::condition_pattern);
        }
    }
}

TEST(ValidateEntityTest, Deterministic)
{
    const auto s = identifier(Iri("http://purl.org/spar/datacite/isbn"), "x");
    EXPECT_EQ(validate_entity(s, identifier_schema()), validate_entity(s, identifier_schema()));
}

TEST(CheckConditionTest, Examples)
{
    const shacl::ConditionSpec cond{uses_scheme, doi};
    EXPECT_TRUE(check_condition(identifier(doi, "x"), cond));
    EXPECT_FALSE(check_condition(identifier(pmid, "x"), cond));
    EntityState none(E);
    none.add(has_literal_value, Literal::string("x"));
    EXPECT_FALSE(check_condition(none, cond));
}

TEST(CoerceLiteralTest, Examples)
{
    const Iri date(std::string(vocab::xsd_date));
    const Iri g_year(std::string(vocab::xsd_g_year));
    EXPECT_EQ(coerce_literal("2024-05-02", date), Literal("2024-05-02", date));
    EXPECT_THROW(coerce_literal("abc", g_year), CoercionError);
    EXPECT_EQ(coerce_literal("1998", g_year).datatype(), g_year);
}

TEST(CoerceLiteralTest, LexicalSpaces)
{
    const Iri date(std::string(vocab::xsd_date));
    const Iri dt(std::string(vocab::xsd_date_time));
    const Iri integer(std::string(vocab::xsd_integer));
    const Iri decimal(std::string(vocab::xsd_decimal));
    const Iri boolean(std::string(vocab::xsd_boolean));
    EXPECT_TRUE(is_valid_lexical("2024-02-29", date));
    EXPECT_FALSE(is_valid_lexical("2023-02-29", date));
    EXPECT_FALSE(is_valid_lexical("2024-13-01", date));
    EXPECT_TRUE(is_valid_lexical("2024-05-02Z", date));
    EXPECT_TRUE(is_valid_lexical("2024-05-02T10:00:00.5+02:00", dt));
    EXPECT_FALSE(is_valid_lexical("2024-05-02 10:00:00", dt));
    EXPECT_TRUE(is_valid_lexical("-12", integer));
    EXPECT_FALSE(is_valid_lexical("1.5", integer));
    EXPECT_TRUE(is_valid_lexical(".5", decimal));
    EXPECT_TRUE(is_valid_lexical("true", boolean));
    EXPECT_FALSE(is_valid_lexical("yes", boolean));
    EXPECT_FALSE(is_valid_lexical("0", Iri(std::string(vocab::xsd) + "positiveInteger")));
    EXPECT_TRUE(is_valid_lexical("anything", Iri("https://example.org/customType")));
    try {
        coerce_literal("abc", integer);
        FAIL();
    } catch (const CoercionError& e) {
        EXPECT_EQ(e.datatype(), integer);
        EXPECT_NE(std::string(e.what()).find("integer"), std::string::npos);
    }
}
