#include "provcurate/rdf/delta.hpp"

#include "provcurate/rdf/lexer.hpp"
#include "provcurate/rdf/prefix_map.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <vector>

namespace provcurate::rdf {

namespace {

bool has_blank(const Triple& t)
{
    return std::holds_alternative<BlankNode>(t.subject) || std::holds_alternative<BlankNode>(t.object);
}

void check_subject(const EntityState& state, const Triple& t)
{
    const auto* s = std::get_if<Iri>(&t.subject);
    if (s == nullptr || *s != state.entity()) {
        throw ContractViolation("delta triple " + to_ntriples(t) + " does not describe " + state.entity().str());
    }
}

std::string render_block(std::string_view keyword, const std::set<Triple>& triples)
{
    std::vector<const Triple*> sorted;
    sorted.reserve(triples.size());
    for (const auto& t : triples) {
        sorted.push_back(&t);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Triple* a, const Triple* b) { return CanonicalTripleLess{}(*a, *b); });
    std::string out(keyword);
    out += " {";
    for (const auto* t : sorted) {
        out += ' ';
        out += to_ntriples(*t);
    }
    out += " }";
    return out;
}

class DeltaParser {
public:
    explicit DeltaParser(std::string_view text) : tokens_(tokenize(text)), ts_(tokens_) {}

    GraphDelta run()
    {
        reject_unsupported();
        std::set<Triple> deletions;
        std::set<Triple> insertions;
        bool seen_delete = false;
        bool seen_insert = false;
        while (ts_.accept_keyword("PREFIX")) {
            prefix_decl();
        }
        while (!ts_.at_end()) {
            const Token& kw = ts_.next();
            if (kw.is_keyword("DELETE")) {
                if (seen_delete) {
                    ts_.fail_at(kw, "more than one DELETE DATA block");
                }
                seen_delete = true;
                ts_.expect_keyword("DATA");
                block(deletions);
            } else if (kw.is_keyword("INSERT")) {
                if (seen_insert) {
                    ts_.fail_at(kw, "more than one INSERT DATA block");
                }
                seen_insert = true;
                ts_.expect_keyword("DATA");
                block(insertions);
            } else {
                ts_.fail_at(kw, "expected DELETE DATA or INSERT DATA but found " + describe(kw));
            }
            if (!ts_.accept_punct(";")) {
                break;
            }
        }
        if (!ts_.at_end()) {
            ts_.fail("trailing input after delta");
        }
        for (const auto& t : deletions) {
            if (insertions.count(t) != 0) {
                throw ParseError("triple both deleted and inserted: " + to_ntriples(t), 1, 1);
            }
        }
        return GraphDelta(std::move(deletions), std::move(insertions));
    }

private:
    std::vector<Token> tokens_;
    TokenStream ts_;
    PrefixMap prefixes_;

    void reject_unsupported() const
    {
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            const Token& t = tokens_[i];
            if (t.kind == TokenKind::variable) {
                throw UnsupportedDeltaError("variables are not allowed in a delta (line " +
                                            std::to_string(t.line) + ")");
            }
            if (t.kind == TokenKind::blank || t.is_punct("[")) {
                throw UnsupportedDeltaError("blank nodes are not allowed in a delta (line " +
                                            std::to_string(t.line) + ")");
            }
            for (const auto kw : {"WHERE", "GRAPH", "WITH", "USING", "LOAD", "CLEAR", "DROP", "CREATE",
                                  "ADD", "MOVE", "COPY", "SERVICE"}) {
                if (t.is_keyword(kw)) {
                    throw UnsupportedDeltaError(std::string(kw) + " is not allowed in a delta (line " +
                                                std::to_string(t.line) + ")");
                }
            }
            if ((t.is_keyword("DELETE") || t.is_keyword("INSERT")) && i + 1 < tokens_.size() &&
                !tokens_[i + 1].is_keyword("DATA")) {
                throw UnsupportedDeltaError("only DELETE DATA / INSERT DATA are allowed in a delta");
            }
        }
    }

    void prefix_decl()
    {
        const Token& name = ts_.next();
        const Token& iri = ts_.next();
        if (name.kind != TokenKind::prefixed || name.text.back() != ':' || iri.kind != TokenKind::iri) {
            ts_.fail_at(name, "malformed PREFIX declaration");
        }
        prefixes_.declare(name.text.substr(0, name.text.size() - 1), iri.text);
    }

    Iri iri(const Token& t)
    {
        if (t.kind == TokenKind::iri) {
            if (!is_absolute_iri(t.text)) {
                ts_.fail_at(t, "relative IRI in delta");
            }
            return Iri(t.text);
        }
        if (t.kind == TokenKind::prefixed) {
            if (auto e = prefixes_.expand(t.text)) {
                return *e;
            }
            ts_.fail_at(t, "undeclared prefix in '" + t.text + "'");
        }
        if (t.kind == TokenKind::word && t.text == "a") {
            return Iri(std::string(vocab::rdf_type));
        }
        ts_.fail_at(t, "expected IRI but found " + describe(t));
    }

    Term object()
    {
        const Token& t = ts_.next();
        switch (t.kind) {
        case TokenKind::string:
            if (ts_.peek().kind == TokenKind::lang_tag) {
                return Literal(t.text, ts_.next().text);
            }
            if (ts_.accept_punct("^^")) {
                return Literal(t.text, iri(ts_.next()));
            }
            return Literal::string(t.text);
        case TokenKind::integer:
            return Literal(t.text, Iri(std::string(vocab::xsd_integer)));
        case TokenKind::decimal:
            return Literal(t.text, Iri(std::string(vocab::xsd_decimal)));
        case TokenKind::double_:
            return Literal(t.text, Iri(std::string(vocab::xsd_double)));
        case TokenKind::word:
            if (t.text == "true" || t.text == "false") {
                return Literal(t.text, Iri(std::string(vocab::xsd_boolean)));
            }
            [[fallthrough]];
        default:
            return iri(t);
        }
    }

    void block(std::set<Triple>& into)
    {
        ts_.expect_punct("{");
        while (!ts_.accept_punct("}")) {
            if (ts_.at_end()) {
                ts_.fail("unterminated DATA block");
            }
            Triple t;
            t.subject = iri(ts_.next());
            t.predicate = iri(ts_.next());
            t.object = object();
            if (!into.insert(std::move(t)).second) {
                // duplicates collapse under set semantics
            }
            if (!ts_.accept_punct(".") && !ts_.peek().is_punct("}")) {
                ts_.fail("expected '.' or '}' after triple");
            }
        }
    }
};

} // namespace

GraphDelta::GraphDelta(std::set<Triple> deletions, std::set<Triple> insertions)
    : deletions_(std::move(deletions)), insertions_(std::move(insertions))
{
    for (const auto& t : deletions_) {
        if (insertions_.count(t) != 0) {
            throw ContractViolation("delta deletes and inserts " + to_ntriples(t));
        }
        if (has_blank(t)) {
            throw ContractViolation("blank node in delta: " + to_ntriples(t));
        }
    }
    for (const auto& t : insertions_) {
        if (has_blank(t)) {
            throw ContractViolation("blank node in delta: " + to_ntriples(t));
        }
    }
}

GraphDelta diff(const EntityState& before, const EntityState& after)
{
    if (before.entity() != after.entity()) {
        throw ContractViolation("diff of different entities: " + before.entity().str() + " vs " +
                                after.entity().str());
    }
    std::set<Triple> deletions;
    std::set<Triple> insertions;
    std::set_difference(before.triples().begin(), before.triples().end(), after.triples().begin(),
                        after.triples().end(), std::inserter(deletions, deletions.end()));
    std::set_difference(after.triples().begin(), after.triples().end(), before.triples().begin(),
                        before.triples().end(), std::inserter(insertions, insertions.end()));
    return GraphDelta(std::move(deletions), std::move(insertions));
}

EntityState apply_delta(const EntityState& state, const GraphDelta& delta)
{
    std::set<Triple> triples = state.triples();
    for (const auto& t : delta.deletions()) {
        check_subject(state, t);
        if (triples.erase(t) == 0) {
            throw ReplayIntegrityError("deletion of absent triple " + to_ntriples(t));
        }
    }
    for (const auto& t : delta.insertions()) {
        check_subject(state, t);
        if (!triples.insert(t).second) {
            throw ReplayIntegrityError("insertion of present triple " + to_ntriples(t));
        }
    }
    return EntityState(state.entity(), std::move(triples));
}

GraphDelta invert_delta(const GraphDelta& delta)
{
    return GraphDelta(delta.insertions(), delta.deletions());
}

std::string serialize_delta(const GraphDelta& delta)
{
    std::string out;
    if (!delta.deletions().empty()) {
        out += render_block("DELETE DATA", delta.deletions());
    }
    if (!delta.insertions().empty()) {
        if (!out.empty()) {
            out += "; ";
        }
        out += render_block("INSERT DATA", delta.insertions());
    }
    return out;
}

GraphDelta parse_delta(std::string_view text)
{
    return DeltaParser(text).run();
}

} // namespace provcurate::rdf
