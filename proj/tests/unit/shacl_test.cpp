#include "provcurate/rdf/vocab.hpp"
#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/shacl/resolve.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace provcurate;
using namespace provcurate::shacl;
using rdf::Iri;
using rdf::Literal;

namespace {

const Iri datacite_identifier("http://purl.org/spar/datacite/Identifier");
const Iri uses_scheme("http://purl.org/spar/datacite/usesIdentifierScheme");
const Iri doi("http://purl.org/spar/datacite/doi");
const Iri has_literal_value("http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue");
const Iri identifier_shape("http://schema.org/JournalArticleIdentifierShape");
const Iri xsd_string(std::string(vocab::xsd_string));

const std::string prefixes = R"(
@prefix sh: <http://www.w3.org/ns/shacl#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix ex: <https://example.org/> .
)";

} // namespace

TEST(ParseShapesTest, IdentifierShapeFixture)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("identifier_shape.ttl"));
    ASSERT_EQ(catalog.size(), 1u);
    const auto* shape = catalog.find(identifier_shape);
    ASSERT_NE(shape, nullptr);
    EXPECT_EQ(shape->target_class, datacite_identifier);
    ASSERT_EQ(shape->constraints.size(), 3u);
    EXPECT_EQ(shape->constraints[0].in_values, std::vector<rdf::Term>{doi});
    ASSERT_TRUE(shape->constraints[2].condition);
    EXPECT_EQ(shape->constraints[2].condition->path, uses_scheme);
    EXPECT_EQ(shape->constraints[2].condition->has_value, rdf::Term{doi});
    EXPECT_TRUE(catalog.warnings().empty());
}

TEST(ParseShapesTest, EmptyDocument)
{
    const auto catalog = parse_shapes("");
    EXPECT_EQ(catalog.size(), 0u);
    EXPECT_TRUE(catalog.warnings().empty());
}

TEST(ParseShapesTest, UnsupportedFeatureBecomesWarning)
{
    const auto catalog = parse_shapes(prefixes + R"(
        ex:S a sh:NodeShape ; sh:targetClass ex:C ;
          sh:property [ sh:path ex:p ; sh:sparql [ sh:select "SELECT $this WHERE {}" ] ] .
    )");
    ASSERT_EQ(catalog.size(), 1u);
    ASSERT_EQ(catalog.warnings().size(), 1u);
    EXPECT_NE(catalog.warnings()[0].message.find("unsupported constraint kind sh:sparql"), std::string::npos);
    EXPECT_EQ(catalog.find(Iri("https://example.org/S"))->constraints.size(), 1u);
}

TEST(ParseShapesTest, FlagsAndComplexPathsWarn)
{
    const auto catalog = parse_shapes(prefixes + R"(
        ex:S sh:targetClass ex:C ;
          sh:property [ sh:path ex:p ; sh:pattern "a" ; sh:flags "i" ] ;
          sh:property [ sh:path ( ex:p ex:q ) ] ;
          sh:closed true .
    )");
    EXPECT_EQ(catalog.warnings().size(), 3u);
    EXPECT_EQ(catalog.find(Iri("https://example.org/S"))->constraints.size(), 1u);
}

TEST(ParseShapesTest, SemanticErrors)
{
    EXPECT_THROW(parse_shapes(prefixes + "ex:S sh:targetClass ex:C ; sh:property [ sh:path ex:p ; sh:minCount 2 ; sh:maxCount 1 ] ."),
                 ShapeError);
    EXPECT_THROW(parse_shapes(prefixes + "ex:S sh:targetClass ex:C ; sh:property [ sh:path ex:p ; sh:pattern \"(\" ] ."),
                 ShapeError);
    EXPECT_THROW(parse_shapes(prefixes + "ex:S sh:targetClass ex:C ; sh:property [ sh:path ex:p ; sh:minCount \"x\" ] ."),
                 ShapeError);
    EXPECT_THROW(parse_shapes("ex:S a sh:NodeShape ."), ParseError);
}

TEST(CompileShapeTest, IdentifierShapeGolden)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("identifier_shape.ttl"));
    const auto schema = compile_shape(identifier_shape, catalog);

    FormField scheme;
    scheme.path = uses_scheme;
    scheme.widget = WidgetKind::dropdown;
    scheme.required = true;
    scheme.repeatable = false;
    scheme.min_count = 1;
    scheme.max_count = 1;
    scheme.options = std::vector<rdf::Term>{doi};
    scheme.rules = {ValidationRule{std::nullopt, RuleKind::in, std::nullopt, std::nullopt, {doi}}};

    FormField value;
    value.path = has_literal_value;
    value.widget = WidgetKind::text;
    value.required = true;
    value.repeatable = false;
    value.min_count = 1;
    value.max_count = 1;
    value.rules = {
        ValidationRule{std::nullopt, RuleKind::datatype, std::nullopt, xsd_string, {}},
        ValidationRule{ConditionSpec{uses_scheme, doi}, RuleKind::pattern,
                       std::string(R"(^10\.\d{4,9}/[-._;()/:A-Z0-9]+$)"), std::nullopt, {}},
    };

    const FormSchema expected{identifier_shape, datacite_identifier, {scheme, value}};
    EXPECT_EQ(schema, expected);
}

TEST(CompileShapeTest, Deterministic)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("identifier_shape.ttl"));
    EXPECT_EQ(compile_shape(identifier_shape, catalog), compile_shape(identifier_shape, catalog));
}

TEST(CompileShapeTest, EmptyShape)
{
    const auto catalog = parse_shapes(prefixes + "ex:S a sh:NodeShape ; sh:targetClass ex:C .");
    EXPECT_TRUE(compile_shape(Iri("https://example.org/S"), catalog).fields.empty());
}

TEST(CompileShapeTest, OrOfDatatypesIsDropdown)
{
    const auto catalog = parse_shapes(prefixes + R"(
        ex:S sh:targetClass ex:C ;
          sh:property [ sh:path ex:when ; sh:or ( [ sh:datatype xsd:date ] [ sh:datatype xsd:gYear ] ) ] .
    )");
    const auto schema = compile_shape(Iri("https://example.org/S"), catalog);
    ASSERT_EQ(schema.fields.size(), 1u);
    EXPECT_EQ(schema.fields[0].widget, WidgetKind::dropdown);
    EXPECT_EQ(schema.fields[0].options,
              (std::vector<rdf::Term>{Iri(std::string(vocab::xsd_date)), Iri(std::string(vocab::xsd_g_year))}));
    EXPECT_EQ(schema.fields[0].alternatives.size(), 2u);
}

TEST(CompileShapeTest, NestedShapes)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("issues.ttl"));
    const auto schema = compile_shape(Iri("https://example.org/shapes/JournalIssueShape"), catalog);
    const auto* part_of = schema.field(Iri("http://purl.org/vocab/frbr/core#partOf"));
    ASSERT_NE(part_of, nullptr);
    EXPECT_EQ(part_of->widget, WidgetKind::nested_entity);
    EXPECT_EQ(part_of->nested_shape, Iri("https://example.org/shapes/JournalVolumeShape"));

    const auto dangling = parse_shapes(prefixes + "ex:S sh:targetClass ex:C ; sh:property [ sh:path ex:p ; sh:node ex:Nope ] .");
    EXPECT_EQ(dangling.warnings().size(), 1u);
    EXPECT_THROW(compile_shape(Iri("https://example.org/S"), dangling), MissingShapeError);
    EXPECT_THROW(compile_shape(Iri("https://example.org/Unknown"), dangling), NotFoundError);
}

TEST(CompileShapeTest, FieldPathsComeFromShape)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("issues.ttl"));
    for (const auto& [id, shape] : catalog.shapes()) {
        const auto schema = compile_shape(id, catalog);
        for (const auto& f : schema.fields) {
            EXPECT_TRUE(std::any_of(shape.constraints.begin(), shape.constraints.end(),
                                    [&f](const PropertyConstraint& c) { return c.path == f.path; }));
        }
    }
}

TEST(SelectWidgetTest, DecisionTable)
{
    PropertyConstraint c;
    c.path = Iri("https://example.org/p");
    c.datatype = Iri(std::string(vocab::xsd_date));
    EXPECT_EQ(select_widget(c), WidgetKind::date);
    c.datatype = Iri(std::string(vocab::xsd_g_year));
    EXPECT_EQ(select_widget(c), WidgetKind::year);
    c.datatype = Iri(std::string(vocab::xsd_date_time));
    EXPECT_EQ(select_widget(c), WidgetKind::datetime);
    c.datatype = Iri(std::string(vocab::xsd_integer));
    EXPECT_EQ(select_widget(c), WidgetKind::number);
    c.datatype = xsd_string;
    EXPECT_EQ(select_widget(c), WidgetKind::text);
    EXPECT_EQ(select_widget(c, WidgetKind::textarea), WidgetKind::textarea);
    c.in_values = std::vector<rdf::Term>{doi};
    EXPECT_EQ(select_widget(c), WidgetKind::dropdown);
    c.in_values = std::vector<rdf::Term>{};
    EXPECT_EQ(select_widget(c, WidgetKind::dropdown), WidgetKind::text);
    c.node_shape = Iri("https://example.org/S");
    EXPECT_EQ(select_widget(c), WidgetKind::nested_entity);
    EXPECT_EQ(select_widget(c, WidgetKind::reference), WidgetKind::reference);
    EXPECT_EQ(select_widget(c, WidgetKind::text), WidgetKind::nested_entity);
}

TEST(SelectWidgetTest, NeverDropdownWithoutOptions)
{
    std::mt19937_64 rng(3);
    const std::vector<std::optional<WidgetKind>> overrides = {
        std::nullopt, WidgetKind::dropdown, WidgetKind::text, WidgetKind::reference, WidgetKind::tag};
    for (int i = 0; i < 500; ++i) {
        PropertyConstraint c;
        c.path = Iri("https://example.org/p");
        if (rng() % 2) {
            c.in_values = std::vector<rdf::Term>(rng() % 3, rdf::Term{doi});
        }
        if (rng() % 2) {
            c.or_alternatives = std::vector<ConstraintAlternative>(rng() % 2);
        }
        if (rng() % 2) {
            c.node_shape = Iri("https://example.org/S");
        }
        const auto w = select_widget(c, overrides[rng() % overrides.size()]);
        if (w == WidgetKind::dropdown) {
            const bool has = (c.in_values && !c.in_values->empty()) || (c.or_alternatives && !c.or_alternatives->empty());
            EXPECT_TRUE(has);
        }
    }
}

TEST(ResolveShapeTest, SpecialIssuePreferredWhenTitled)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("issues.ttl"));
    rdf::EntityState issue(Iri("https://example.org/issue/1"));
    issue.add(Iri(std::string(vocab::rdf_type)), Iri("http://purl.org/spar/fabio/JournalIssue"));
    issue.add(Iri("http://purl.org/spar/fabio/hasSequenceIdentifier"), Literal::string("4"));
    EXPECT_EQ(resolve_shape(issue, catalog), Iri("https://example.org/shapes/JournalIssueShape"));

    issue.add(Iri("http://purl.org/dc/terms/title"), Literal::string("Special issue on provenance"));
    EXPECT_EQ(resolve_shape(issue, catalog), Iri("https://example.org/shapes/SpecialIssueShape"));
}

TEST(ResolveShapeTest, TieBreaks)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("issues.ttl"));
    rdf::EntityState issue(Iri("https://example.org/issue/2"));
    issue.add(Iri(std::string(vocab::rdf_type)), Iri("http://purl.org/spar/fabio/JournalIssue"));
    const std::vector<ShapeId> pref{Iri("https://example.org/shapes/SpecialIssueShape")};
    EXPECT_EQ(resolve_shape(issue, catalog, pref), Iri("https://example.org/shapes/SpecialIssueShape"));
    // lexicographic fallback
    EXPECT_EQ(resolve_shape(issue, catalog), Iri("https://example.org/shapes/JournalIssueShape"));
}

TEST(ResolveShapeTest, SingleCandidateAndFallback)
{
    const auto catalog = parse_shapes(fuzz::read_fixture("issues.ttl"));
    rdf::EntityState vol(Iri("https://example.org/vol/1"));
    vol.add(Iri(std::string(vocab::rdf_type)), Iri("http://purl.org/spar/fabio/JournalVolume"));
    EXPECT_EQ(resolve_shape(vol, catalog), Iri("https://example.org/shapes/JournalVolumeShape"));

    rdf::EntityState untyped(Iri("https://example.org/x"));
    untyped.add(Iri("http://purl.org/dc/terms/title"), Literal::string("t"));
    EXPECT_THROW(resolve_shape(untyped, catalog), NoShapeError);
}
