#include "provcurate/store/sparql.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/lexer.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace provcurate::store {

using rdf::BlankNode;
using rdf::Iri;
using rdf::Literal;
using rdf::Term;
using rdf::Token;
using rdf::TokenKind;

namespace {

std::string upper(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

const std::set<std::string>& builtin_names()
{
    static const std::set<std::string> names = {
        "STR", "LANG", "LANGMATCHES", "DATATYPE", "BOUND", "IRI", "URI", "LCASE", "UCASE", "CONTAINS",
        "STRSTARTS", "STRENDS", "STRLEN", "STRBEFORE", "STRAFTER", "CONCAT", "REGEX", "REPLACE", "SUBSTR",
        "ISIRI", "ISURI", "ISBLANK", "ISLITERAL", "ISNUMERIC", "SAMETERM", "IF", "COALESCE", "ABS",
        "STRDT", "STRLANG", "ENCODE_FOR_URI"};
    return names;
}

const std::set<std::string>& aggregate_names()
{
    static const std::set<std::string> names = {"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"};
    return names;
}

ExprPtr make_expr(Expr::Op op, std::vector<ExprPtr> args = {})
{
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = std::move(args);
    return e;
}

class SparqlParser {
public:
    explicit SparqlParser(std::string_view text) : ts_(rdf::tokenize(text)) {}

    Query query()
    {
        prologue();
        Query q;
        if (ts_.accept_keyword("SELECT")) {
            select_clause(q);
            dataset_clause();
            ts_.accept_keyword("WHERE");
            q.where = group();
            solution_modifiers(q);
        } else if (ts_.accept_keyword("ASK")) {
            q.form = Query::Form::ask;
            dataset_clause();
            ts_.accept_keyword("WHERE");
            q.where = group();
            solution_modifiers(q);
        } else if (ts_.accept_keyword("CONSTRUCT")) {
            q.form = Query::Form::construct;
            if (ts_.peek().is_keyword("WHERE")) {
                ts_.next();
                q.where = group();
                for (const auto& el : q.where.elements) {
                    if (const auto* tp = std::get_if<TriplePattern>(&el)) {
                        q.construct_template.push_back(*tp);
                    } else {
                        ts_.fail("CONSTRUCT WHERE accepts only triple patterns");
                    }
                }
            } else {
                ts_.expect_punct("{");
                GroupPattern tmpl;
                triples_block_until(tmpl, "}");
                ts_.expect_punct("}");
                for (auto& el : tmpl.elements) {
                    q.construct_template.push_back(std::get<TriplePattern>(el));
                }
                dataset_clause();
                ts_.accept_keyword("WHERE");
                q.where = group();
            }
            solution_modifiers(q);
        } else {
            ts_.fail("expected SELECT, ASK or CONSTRUCT but found " + rdf::describe(ts_.peek()));
        }
        if (!ts_.at_end()) {
            ts_.fail("unexpected " + rdf::describe(ts_.peek()) + " after query");
        }
        return q;
    }

    Update update()
    {
        Update u;
        prologue();
        while (!ts_.at_end()) {
            UpdateOperation op;
            const Token& kw = ts_.peek();
            if (ts_.accept_keyword("INSERT")) {
                ts_.expect_keyword("DATA");
                op.kind = UpdateOperation::Kind::insert_data;
                op.quads = quad_data();
            } else if (ts_.accept_keyword("DELETE")) {
                ts_.expect_keyword("DATA");
                op.kind = UpdateOperation::Kind::delete_data;
                op.quads = quad_data();
            } else if (ts_.accept_keyword("CLEAR") || ts_.accept_keyword("DROP")) {
                ts_.accept_keyword("SILENT");
                if (ts_.accept_keyword("ALL")) {
                    op.kind = UpdateOperation::Kind::clear_all;
                } else {
                    ts_.expect_keyword("GRAPH");
                    op.kind = UpdateOperation::Kind::clear_graph;
                    op.graph = iri(ts_.next());
                }
            } else {
                ts_.fail_at(kw, "unsupported update operation " + rdf::describe(kw));
            }
            u.operations.push_back(std::move(op));
            if (!ts_.accept_punct(";")) {
                break;
            }
            prologue();
        }
        if (!ts_.at_end()) {
            ts_.fail("unexpected " + rdf::describe(ts_.peek()) + " after update");
        }
        return u;
    }

    bool starts_update()
    {
        prologue();
        const Token& t = ts_.peek();
        return t.is_keyword("INSERT") || t.is_keyword("DELETE") || t.is_keyword("CLEAR") ||
               t.is_keyword("DROP") || t.is_keyword("LOAD") || t.is_keyword("CREATE") || t.is_keyword("WITH");
    }

private:
    rdf::TokenStream ts_;
    rdf::PrefixMap prefixes_;
    std::size_t anon_ = 0;

    void prologue()
    {
        while (true) {
            if (ts_.accept_keyword("PREFIX")) {
                const Token& name = ts_.next();
                if (name.kind != TokenKind::prefixed || name.text.back() != ':') {
                    ts_.fail_at(name, "expected prefix name ending in ':'");
                }
                const Token& ns = ts_.next();
                if (ns.kind != TokenKind::iri) {
                    ts_.fail_at(ns, "expected namespace IRI");
                }
                prefixes_.declare(name.text.substr(0, name.text.size() - 1), resolve(ns).str());
            } else if (ts_.accept_keyword("BASE")) {
                const Token& b = ts_.next();
                if (b.kind != TokenKind::iri) {
                    ts_.fail_at(b, "expected base IRI");
                }
                prefixes_.set_base(resolve(b).str());
            } else {
                return;
            }
        }
    }

    void dataset_clause()
    {
        if (ts_.peek().is_keyword("FROM")) {
            ts_.fail("FROM clauses are not supported");
        }
    }

    Iri resolve(const Token& tok)
    {
        try {
            return prefixes_.resolve(tok.text);
        } catch (const ContractViolation& e) {
            ts_.fail_at(tok, e.what());
        }
    }

    Iri iri(const Token& tok)
    {
        if (tok.kind == TokenKind::iri) {
            return resolve(tok);
        }
        if (tok.kind == TokenKind::prefixed) {
            auto expanded = prefixes_.expand(tok.text);
            if (!expanded) {
                ts_.fail_at(tok, "undeclared prefix in '" + tok.text + "'");
            }
            return *expanded;
        }
        ts_.fail_at(tok, "expected IRI but found " + rdf::describe(tok));
    }

    Var fresh_var() { return Var{"_:anon" + std::to_string(anon_++)}; }

    void select_clause(Query& q)
    {
        if (ts_.accept_keyword("DISTINCT")) {
            q.distinct = true;
        } else {
            ts_.accept_keyword("REDUCED");
        }
        if (ts_.accept_punct("*")) {
            q.select_all = true;
            return;
        }
        while (true) {
            const Token& t = ts_.peek();
            if (t.kind == TokenKind::variable) {
                ts_.next();
                q.projection.push_back(Projection{Var{t.text}, nullptr});
            } else if (t.is_punct("(")) {
                ts_.next();
                auto e = expression();
                ts_.expect_keyword("AS");
                const Token& v = ts_.next();
                if (v.kind != TokenKind::variable) {
                    ts_.fail_at(v, "expected variable after AS");
                }
                ts_.expect_punct(")");
                q.projection.push_back(Projection{Var{v.text}, std::move(e)});
            } else {
                break;
            }
        }
        if (q.projection.empty()) {
            ts_.fail("empty SELECT projection");
        }
    }

    void solution_modifiers(Query& q)
    {
        if (ts_.accept_keyword("GROUP")) {
            ts_.expect_keyword("BY");
            do {
                q.group_by.push_back(order_operand());
            } while (ts_.peek().kind == TokenKind::variable || ts_.peek().is_punct("("));
        }
        if (ts_.accept_keyword("HAVING")) {
            do {
                q.having.push_back(order_operand());
            } while (ts_.peek().is_punct("("));
        }
        if (ts_.accept_keyword("ORDER")) {
            ts_.expect_keyword("BY");
            while (true) {
                const Token& t = ts_.peek();
                if (t.is_keyword("ASC") || t.is_keyword("DESC")) {
                    ts_.next();
                    ts_.expect_punct("(");
                    auto e = expression();
                    ts_.expect_punct(")");
                    q.order_by.push_back(OrderCondition{std::move(e), t.is_keyword("DESC")});
                } else if (t.kind == TokenKind::variable || t.is_punct("(")) {
                    q.order_by.push_back(OrderCondition{order_operand(), false});
                } else if (t.kind == TokenKind::word && builtin_names().count(upper(t.text))) {
                    q.order_by.push_back(OrderCondition{primary(), false});
                } else {
                    break;
                }
            }
            if (q.order_by.empty()) {
                ts_.fail("empty ORDER BY");
            }
        }
        for (int i = 0; i < 2; ++i) {
            if (ts_.accept_keyword("LIMIT")) {
                q.limit = count_value();
            } else if (ts_.accept_keyword("OFFSET")) {
                q.offset = count_value();
            }
        }
    }

    std::size_t count_value()
    {
        const Token& t = ts_.next();
        if (t.kind != TokenKind::integer) {
            ts_.fail_at(t, "expected non-negative integer");
        }
        return static_cast<std::size_t>(std::stoull(t.text));
    }

    ExprPtr order_operand()
    {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::variable) {
            ts_.next();
            auto e = std::make_shared<Expr>();
            e->op = Expr::Op::variable;
            e->name = t.text;
            return e;
        }
        ts_.expect_punct("(");
        auto e = expression();
        ts_.expect_punct(")");
        return e;
    }

    // ---- graph patterns ----

    GroupPattern group()
    {
        ts_.expect_punct("{");
        GroupPattern g;
        while (!ts_.accept_punct("}")) {
            if (ts_.at_end()) {
                ts_.fail("unterminated group pattern");
            }
            const Token& t = ts_.peek();
            if (t.is_punct("{")) {
                auto first = std::make_shared<GroupPattern>(group());
                if (ts_.peek().is_keyword("UNION")) {
                    UnionPattern u;
                    u.branches.push_back(first);
                    while (ts_.accept_keyword("UNION")) {
                        u.branches.push_back(std::make_shared<GroupPattern>(group()));
                    }
                    g.elements.emplace_back(std::move(u));
                } else {
                    g.elements.emplace_back(GroupPtr(first));
                }
            } else if (ts_.accept_keyword("OPTIONAL")) {
                g.elements.emplace_back(OptionalPattern{std::make_shared<GroupPattern>(group())});
            } else if (ts_.accept_keyword("MINUS")) {
                g.elements.emplace_back(MinusPattern{std::make_shared<GroupPattern>(group())});
            } else if (ts_.accept_keyword("GRAPH")) {
                VarOrTerm name = var_or_iri();
                g.elements.emplace_back(GraphPattern{std::move(name), std::make_shared<GroupPattern>(group())});
            } else if (ts_.accept_keyword("FILTER")) {
                g.elements.emplace_back(FilterPattern{constraint()});
            } else if (ts_.accept_keyword("BIND")) {
                ts_.expect_punct("(");
                auto e = expression();
                ts_.expect_keyword("AS");
                const Token& v = ts_.next();
                if (v.kind != TokenKind::variable) {
                    ts_.fail_at(v, "expected variable after AS");
                }
                ts_.expect_punct(")");
                g.elements.emplace_back(BindPattern{std::move(e), Var{v.text}});
            } else if (ts_.accept_keyword("VALUES")) {
                g.elements.emplace_back(values());
            } else if (t.is_keyword("SELECT")) {
                ts_.fail_at(t, "sub-queries are not supported");
            } else {
                triples_same_subject(g);
            }
            ts_.accept_punct(".");
        }
        return g;
    }

    ValuesPattern values()
    {
        ValuesPattern v;
        bool single = false;
        if (ts_.peek().kind == TokenKind::variable) {
            single = true;
            v.vars.push_back(Var{ts_.next().text});
        } else {
            ts_.expect_punct("(");
            while (!ts_.accept_punct(")")) {
                const Token& t = ts_.next();
                if (t.kind != TokenKind::variable) {
                    ts_.fail_at(t, "expected variable in VALUES");
                }
                v.vars.push_back(Var{t.text});
            }
        }
        ts_.expect_punct("{");
        while (!ts_.accept_punct("}")) {
            std::vector<std::optional<Term>> row;
            if (single) {
                row.push_back(data_value());
            } else {
                ts_.expect_punct("(");
                while (!ts_.accept_punct(")")) {
                    row.push_back(data_value());
                }
                if (row.size() != v.vars.size()) {
                    ts_.fail("VALUES row has wrong arity");
                }
            }
            v.rows.push_back(std::move(row));
        }
        return v;
    }

    std::optional<Term> data_value()
    {
        if (ts_.accept_keyword("UNDEF")) {
            return std::nullopt;
        }
        return term(false);
    }

    ExprPtr constraint()
    {
        const Token& t = ts_.peek();
        if (t.is_punct("(")) {
            ts_.next();
            auto e = expression();
            ts_.expect_punct(")");
            return e;
        }
        return primary();
    }

    void triples_block_until(GroupPattern& g, std::string_view closer)
    {
        while (!ts_.peek().is_punct(closer)) {
            if (ts_.at_end()) {
                ts_.fail("unterminated triples block");
            }
            triples_same_subject(g);
            if (!ts_.accept_punct(".")) {
                break;
            }
        }
    }

    void triples_same_subject(GroupPattern& g)
    {
        VarOrTerm s;
        if (ts_.peek().is_punct("[")) {
            ts_.next();
            s = fresh_var();
            if (!ts_.peek().is_punct("]")) {
                property_list(g, s);
            }
            ts_.expect_punct("]");
            if (ts_.peek().is_punct(".") || ts_.peek().is_punct("}")) {
                return;
            }
        } else {
            s = node();
        }
        property_list(g, s);
    }

    void property_list(GroupPattern& g, const VarOrTerm& s)
    {
        while (true) {
            VarOrTerm p = verb();
            do {
                VarOrTerm o = object(g);
                g.elements.emplace_back(TriplePattern{s, p, std::move(o)});
            } while (ts_.accept_punct(","));
            if (!ts_.accept_punct(";")) {
                return;
            }
            while (ts_.accept_punct(";")) {
            }
            const Token& t = ts_.peek();
            if (t.is_punct(".") || t.is_punct("}") || t.is_punct("]")) {
                return;
            }
        }
    }

    VarOrTerm verb()
    {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::word && t.text == "a") {
            ts_.next();
            return Term(Iri(std::string(vocab::rdf_type)));
        }
        if (t.kind == TokenKind::variable) {
            ts_.next();
            return Var{t.text};
        }
        return Term(iri(ts_.next()));
    }

    VarOrTerm object(GroupPattern& g)
    {
        if (ts_.peek().is_punct("[")) {
            ts_.next();
            VarOrTerm b = fresh_var();
            if (!ts_.peek().is_punct("]")) {
                property_list(g, b);
            }
            ts_.expect_punct("]");
            return b;
        }
        return node();
    }

    VarOrTerm node()
    {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::variable) {
            ts_.next();
            return Var{t.text};
        }
        if (t.kind == TokenKind::blank) {
            ts_.next();
            return Var{"_:" + t.text};
        }
        return term(false);
    }

    VarOrTerm var_or_iri()
    {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::variable) {
            ts_.next();
            return Var{t.text};
        }
        return Term(iri(ts_.next()));
    }

    /// Ground term: IRI, literal, number or boolean (blank nodes when `allow_blank`).
    Term term(bool allow_blank)
    {
        const Token& t = ts_.peek();
        switch (t.kind) {
        case TokenKind::string: {
            ts_.next();
            if (ts_.peek().kind == TokenKind::lang_tag) {
                return Literal(t.text, ts_.next().text);
            }
            if (ts_.accept_punct("^^")) {
                return Literal(t.text, iri(ts_.next()));
            }
            return Literal::string(t.text);
        }
        case TokenKind::integer:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_integer)));
        case TokenKind::decimal:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_decimal)));
        case TokenKind::double_:
            ts_.next();
            return Literal(t.text, Iri(std::string(vocab::xsd_double)));
        case TokenKind::blank:
            if (!allow_blank) {
                ts_.fail_at(t, "blank nodes are not allowed here");
            }
            ts_.next();
            return BlankNode{t.text};
        case TokenKind::punct:
            if (t.is_punct("-") || t.is_punct("+")) {
                ts_.next();
                const Token& num = ts_.next();
                const std::string sign = t.text == "-" ? "-" : "";
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
        return iri(ts_.next());
    }

    // ---- update data ----

    std::vector<rdf::Quad> quad_data()
    {
        std::vector<rdf::Quad> out;
        ts_.expect_punct("{");
        while (!ts_.accept_punct("}")) {
            if (ts_.at_end()) {
                ts_.fail("unterminated data block");
            }
            if (ts_.accept_keyword("GRAPH")) {
                const Iri g = iri(ts_.next());
                ts_.expect_punct("{");
                ground_triples(out, g);
                ts_.expect_punct("}");
            } else {
                ground_triples(out, std::nullopt);
            }
            ts_.accept_punct(".");
        }
        return out;
    }

    void ground_triples(std::vector<rdf::Quad>& out, const std::optional<Iri>& graph)
    {
        while (!ts_.peek().is_punct("}") && !ts_.peek().is_keyword("GRAPH")) {
            if (ts_.at_end()) {
                ts_.fail("unterminated data block");
            }
            const Token& st = ts_.peek();
            if (st.kind == TokenKind::variable || st.kind == TokenKind::blank || st.is_punct("[")) {
                ts_.fail_at(st, "data blocks must be ground and free of blank nodes");
            }
            const Iri s = iri(ts_.next());
            while (true) {
                const Token& pt = ts_.peek();
                Iri p = (pt.kind == TokenKind::word && pt.text == "a")
                            ? (ts_.next(), Iri(std::string(vocab::rdf_type)))
                            : iri(ts_.next());
                do {
                    const Token& ot = ts_.peek();
                    if (ot.kind == TokenKind::variable || ot.kind == TokenKind::blank || ot.is_punct("[")) {
                        ts_.fail_at(ot, "data blocks must be ground and free of blank nodes");
                    }
                    out.push_back(rdf::Quad{rdf::Triple{s, p, term(false)}, graph});
                } while (ts_.accept_punct(","));
                if (!ts_.accept_punct(";")) {
                    break;
                }
                if (ts_.peek().is_punct(".") || ts_.peek().is_punct("}")) {
                    break;
                }
            }
            if (!ts_.accept_punct(".")) {
                break;
            }
        }
    }

    // ---- expressions ----

    ExprPtr expression()
    {
        auto lhs = and_expression();
        while (ts_.accept_punct("||")) {
            lhs = make_expr(Expr::Op::logical_or, {lhs, and_expression()});
        }
        return lhs;
    }

    ExprPtr and_expression()
    {
        auto lhs = relational();
        while (ts_.accept_punct("&&")) {
            lhs = make_expr(Expr::Op::logical_and, {lhs, relational()});
        }
        return lhs;
    }

    ExprPtr relational()
    {
        auto lhs = additive();
        static const std::pair<std::string_view, Expr::Op> ops[] = {
            {"=", Expr::Op::eq}, {"!=", Expr::Op::ne}, {"<", Expr::Op::lt},
            {">", Expr::Op::gt}, {"<=", Expr::Op::le}, {">=", Expr::Op::ge}};
        for (const auto& [text, op] : ops) {
            if (ts_.accept_punct(text)) {
                return make_expr(op, {lhs, additive()});
            }
        }
        if (ts_.peek().is_keyword("IN")) {
            ts_.next();
            auto args = expression_list();
            args.insert(args.begin(), lhs);
            return make_expr(Expr::Op::in, std::move(args));
        }
        if (ts_.peek().is_keyword("NOT") && ts_.peek(1).is_keyword("IN")) {
            ts_.next();
            ts_.next();
            auto args = expression_list();
            args.insert(args.begin(), lhs);
            return make_expr(Expr::Op::not_in, std::move(args));
        }
        return lhs;
    }

    std::vector<ExprPtr> expression_list()
    {
        std::vector<ExprPtr> out;
        ts_.expect_punct("(");
        if (ts_.accept_punct(")")) {
            return out;
        }
        do {
            out.push_back(expression());
        } while (ts_.accept_punct(","));
        ts_.expect_punct(")");
        return out;
    }

    ExprPtr additive()
    {
        auto lhs = multiplicative();
        while (true) {
            if (ts_.accept_punct("+")) {
                lhs = make_expr(Expr::Op::add, {lhs, multiplicative()});
            } else if (ts_.accept_punct("-")) {
                lhs = make_expr(Expr::Op::sub, {lhs, multiplicative()});
            } else {
                return lhs;
            }
        }
    }

    ExprPtr multiplicative()
    {
        auto lhs = unary();
        while (true) {
            if (ts_.accept_punct("*")) {
                lhs = make_expr(Expr::Op::mul, {lhs, unary()});
            } else if (ts_.accept_punct("/")) {
                lhs = make_expr(Expr::Op::div, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    ExprPtr unary()
    {
        if (ts_.accept_punct("!")) {
            return make_expr(Expr::Op::logical_not, {unary()});
        }
        if (ts_.accept_punct("-")) {
            return make_expr(Expr::Op::negate, {unary()});
        }
        ts_.accept_punct("+");
        return primary();
    }

    ExprPtr primary()
    {
        const Token& t = ts_.peek();
        if (t.is_punct("(")) {
            ts_.next();
            auto e = expression();
            ts_.expect_punct(")");
            return e;
        }
        if (t.kind == TokenKind::variable) {
            ts_.next();
            auto e = std::make_shared<Expr>();
            e->op = Expr::Op::variable;
            e->name = t.text;
            return e;
        }
        if (t.kind == TokenKind::word) {
            const std::string name = upper(t.text);
            if (name == "EXISTS" || (name == "NOT" && ts_.peek(1).is_keyword("EXISTS"))) {
                ts_.next();
                if (name == "NOT") {
                    ts_.next();
                }
                auto e = std::make_shared<Expr>();
                e->op = name == "NOT" ? Expr::Op::not_exists : Expr::Op::exists;
                e->pattern = std::make_shared<GroupPattern>(group());
                return e;
            }
            if (aggregate_names().count(name)) {
                ts_.next();
                return aggregate(name);
            }
            if (builtin_names().count(name)) {
                ts_.next();
                auto e = std::make_shared<Expr>();
                e->op = Expr::Op::call;
                e->name = name;
                e->args = expression_list();
                return e;
            }
        }
        auto e = std::make_shared<Expr>();
        e->op = Expr::Op::constant;
        e->constant = term(false);
        return e;
    }

    ExprPtr aggregate(const std::string& name)
    {
        auto e = std::make_shared<Expr>();
        e->op = Expr::Op::aggregate;
        e->name = name;
        ts_.expect_punct("(");
        e->distinct = ts_.accept_keyword("DISTINCT");
        if (name == "COUNT" && ts_.accept_punct("*")) {
            ts_.expect_punct(")");
            return e;
        }
        e->args.push_back(expression());
        if (name == "GROUP_CONCAT" && ts_.accept_punct(";")) {
            ts_.expect_keyword("SEPARATOR");
            ts_.expect_punct("=");
            const Token& s = ts_.next();
            if (s.kind != TokenKind::string) {
                ts_.fail_at(s, "expected separator string");
            }
            e->separator = s.text;
        }
        ts_.expect_punct(")");
        return e;
    }
};

bool contains_aggregate(const ExprPtr& e)
{
    if (!e) {
        return false;
    }
    if (e->op == Expr::Op::aggregate) {
        return true;
    }
    return std::any_of(e->args.begin(), e->args.end(), contains_aggregate);
}

} // namespace

bool Query::is_aggregate() const
{
    if (!group_by.empty() || !having.empty()) {
        return true;
    }
    return std::any_of(projection.begin(), projection.end(),
                       [](const Projection& p) { return contains_aggregate(p.expr); });
}

Query parse_query(std::string_view text)
{
    return SparqlParser(text).query();
}

Update parse_update(std::string_view text)
{
    return SparqlParser(text).update();
}

bool looks_like_update(std::string_view text)
{
    try {
        return SparqlParser(text).starts_update();
    } catch (const ParseError&) {
        return false;
    }
}

std::string quad_data_block(const std::vector<rdf::Quad>& quads)
{
    std::string out = "{ ";
    std::optional<Iri> open;
    bool in_graph = false;
    std::vector<rdf::Quad> sorted = quads;
    std::stable_sort(sorted.begin(), sorted.end(), [](const rdf::Quad& a, const rdf::Quad& b) {
        return a.graph < b.graph;
    });
    for (const auto& q : sorted) {
        if (!in_graph || q.graph != open) {
            if (in_graph && open) {
                out += "} ";
            }
            open = q.graph;
            in_graph = true;
            if (open) {
                out += "GRAPH <" + open->str() + "> { ";
            }
        }
        out += rdf::to_ntriples(q.triple) + " ";
    }
    if (in_graph && open) {
        out += "} ";
    }
    out += "}";
    return out;
}

} // namespace provcurate::store
