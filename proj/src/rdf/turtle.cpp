#include "provcurate/rdf/turtle.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/lexer.hpp"
#include "provcurate/rdf/vocab.hpp"

namespace provcurate::rdf {

namespace {

class TurtleParser {
public:
    TurtleParser(std::string_view text, std::optional<std::string> base) : ts_(tokenize(text))
    {
        if (base) {
            doc_.prefixes.set_base(std::move(*base));
        }
    }

    TurtleDocument run()
    {
        while (!ts_.at_end()) {
            statement();
        }
        return std::move(doc_);
    }

private:
    TokenStream ts_;
    TurtleDocument doc_;
    std::size_t next_blank_ = 0;

    BlankNode fresh_blank() { return BlankNode{"genid" + std::to_string(next_blank_++)}; }

    void emit(const Subject& s, const Iri& p, Term o)
    {
        doc_.triples.push_back(Triple{s, p, std::move(o)});
    }

    void statement()
    {
        const Token& t = ts_.peek();
        if (t.is(TokenKind::lang_tag, "prefix")) {
            ts_.next();
            prefix_decl();
            ts_.expect_punct(".");
            return;
        }
        if (t.is(TokenKind::lang_tag, "base")) {
            ts_.next();
            base_decl();
            ts_.expect_punct(".");
            return;
        }
        if (t.is_keyword("PREFIX")) {
            ts_.next();
            prefix_decl();
            return;
        }
        if (t.is_keyword("BASE")) {
            ts_.next();
            base_decl();
            return;
        }
        triples();
        ts_.expect_punct(".");
    }

    void prefix_decl()
    {
        const Token& name = ts_.next();
        if (name.kind != TokenKind::prefixed || name.text.back() != ':' ||
            name.text.find(':') != name.text.size() - 1) {
            ts_.fail_at(name, "expected prefix name ending in ':'");
        }
        const Token& iri = ts_.next();
        if (iri.kind != TokenKind::iri) {
            ts_.fail_at(iri, "expected namespace IRI");
        }
        doc_.prefixes.declare(name.text.substr(0, name.text.size() - 1), resolve(iri).str());
    }

    void base_decl()
    {
        const Token& iri = ts_.next();
        if (iri.kind != TokenKind::iri) {
            ts_.fail_at(iri, "expected base IRI");
        }
        doc_.prefixes.set_base(resolve(iri).str());
    }

    Iri resolve(const Token& tok)
    {
        try {
            return doc_.prefixes.resolve(tok.text);
        } catch (const ContractViolation& e) {
            ts_.fail_at(tok, e.what());
        }
    }

    Iri iri_token(const Token& tok)
    {
        if (tok.kind == TokenKind::iri) {
            return resolve(tok);
        }
        if (tok.kind == TokenKind::prefixed) {
            auto expanded = doc_.prefixes.expand(tok.text);
            if (!expanded) {
                ts_.fail_at(tok, "undeclared prefix in '" + tok.text + "'");
            }
            return *expanded;
        }
        ts_.fail_at(tok, "expected IRI but found " + describe(tok));
    }

    void triples()
    {
        if (ts_.peek().is_punct("[")) {
            const Subject s = blank_property_list();
            if (!ts_.peek().is_punct(".")) {
                predicate_object_list(s);
            }
            return;
        }
        const Subject s = subject();
        predicate_object_list(s);
    }

    Subject subject()
    {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::blank) {
            ts_.next();
            return BlankNode{t.text};
        }
        if (t.is_punct("(")) {
            return to_subject(collection());
        }
        return iri_token(ts_.next());
    }

    void predicate_object_list(const Subject& s)
    {
        while (true) {
            const Iri p = verb();
            object_list(s, p);
            if (!ts_.accept_punct(";")) {
                return;
            }
            while (ts_.accept_punct(";")) {
            }
            const Token& t = ts_.peek();
            if (t.is_punct(".") || t.is_punct("]")) {
                return;
            }
        }
    }

    Iri verb()
    {
        const Token& t = ts_.next();
        if (t.kind == TokenKind::word && t.text == "a") {
            return Iri(std::string(vocab::rdf_type));
        }
        return iri_token(t);
    }

    void object_list(const Subject& s, const Iri& p)
    {
        do {
            emit(s, p, object());
        } while (ts_.accept_punct(","));
    }

    Subject blank_property_list()
    {
        ts_.expect_punct("[");
        const BlankNode b = fresh_blank();
        if (!ts_.peek().is_punct("]")) {
            predicate_object_list(b);
        }
        ts_.expect_punct("]");
        return b;
    }

    Term collection()
    {
        ts_.expect_punct("(");
        std::vector<Term> items;
        while (!ts_.accept_punct(")")) {
            if (ts_.at_end()) {
                ts_.fail("unterminated collection");
            }
            items.push_back(object());
        }
        Term head = Iri(std::string(vocab::rdf_nil));
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
            const BlankNode node = fresh_blank();
            emit(node, Iri(std::string(vocab::rdf_first)), *it);
            emit(node, Iri(std::string(vocab::rdf_rest)), head);
            head = node;
        }
        return head;
    }

    Term object()
    {
        const Token& t = ts_.peek();
        switch (t.kind) {
        case TokenKind::blank:
            ts_.next();
            return BlankNode{t.text};
        case TokenKind::string:
            return literal();
        case TokenKind::integer:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_integer)));
        case TokenKind::decimal:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_decimal)));
        case TokenKind::double_:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_double)));
        case TokenKind::punct:
            if (t.is_punct("[")) {
                return to_term(blank_property_list());
            }
            if (t.is_punct("(")) {
                return collection();
            }
            if (t.is_punct("-") || t.is_punct("+")) {
                ts_.next();
                const Token& num = ts_.next();
                const std::string sign = t.text == "-" ? "-" : "+";
                if (num.kind == TokenKind::integer) {
                    return Literal(sign + num.text, Iri(std::string(vocab::xsd_integer)));
                }
                if (num.kind == TokenKind::decimal) {
                    return Literal(sign + num.text, Iri(std::string(vocab::xsd_decimal)));
                }
                if (num.kind == TokenKind::double_) {
                    return Literal(sign + num.text, Iri(std::string(vocab::xsd_double)));
                }
                ts_.fail_at(num, "expected number after sign");
            }
            break;
        case TokenKind::word:
            if (t.text == "true" || t.text == "false") {
                ts_.next();
                return Literal(t.text, Iri(std::string(vocab::xsd_boolean)));
            }
            break;
        default:
            break;
        }
        return iri_token(ts_.next());
    }

    Term literal()
    {
        const Token& s = ts_.next();
        std::string lexical = s.text;
        if (ts_.peek().kind == TokenKind::lang_tag) {
            return Literal(std::move(lexical), ts_.next().text);
        }
        if (ts_.accept_punct("^^")) {
            return Literal(std::move(lexical), iri_token(ts_.next()));
        }
        return Literal::string(std::move(lexical));
    }
};

} // namespace

TurtleDocument parse_turtle(std::string_view text, std::optional<std::string> base)
{
    return TurtleParser(text, std::move(base)).run();
}

std::vector<Quad> parse_nquads(std::string_view text)
{
    TokenStream ts(tokenize(text));
    std::vector<Quad> out;
    auto subject_term = [&ts]() -> Subject {
        const Token& t = ts.next();
        if (t.kind == TokenKind::iri && is_absolute_iri(t.text)) {
            return Iri(t.text);
        }
        if (t.kind == TokenKind::blank) {
            return BlankNode{t.text};
        }
        ts.fail_at(t, "expected IRI or blank node");
    };
    while (!ts.at_end()) {
        Quad q;
        q.triple.subject = subject_term();
        const Token& p = ts.next();
        if (p.kind != TokenKind::iri || !is_absolute_iri(p.text)) {
            ts.fail_at(p, "expected predicate IRI");
        }
        q.triple.predicate = Iri(p.text);
        const Token& o = ts.peek();
        if (o.kind == TokenKind::string) {
            ts.next();
            if (ts.peek().kind == TokenKind::lang_tag) {
                q.triple.object = Literal(o.text, ts.next().text);
            } else if (ts.accept_punct("^^")) {
                const Token& dt = ts.next();
                if (dt.kind != TokenKind::iri || !is_absolute_iri(dt.text)) {
                    ts.fail_at(dt, "expected datatype IRI");
                }
                q.triple.object = Literal(o.text, Iri(dt.text));
            } else {
                q.triple.object = Literal::string(o.text);
            }
        } else {
            q.triple.object = to_term(subject_term());
        }
        if (ts.peek().kind == TokenKind::iri) {
            const Token& g = ts.next();
            if (!is_absolute_iri(g.text)) {
                ts.fail_at(g, "expected graph IRI");
            }
            q.graph = Iri(g.text);
        }
        ts.expect_punct(".");
        out.push_back(std::move(q));
    }
    return out;
}

std::string write_nquads(const std::vector<Quad>& quads)
{
    std::string out;
    for (const auto& q : quads) {
        out += to_nquads(q);
        out += '\n';
    }
    return out;
}

} // namespace provcurate::rdf
