#include "provcurate/store/sparql_eval.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace provcurate::store {

using rdf::BlankNode;
using rdf::Iri;
using rdf::Literal;
using rdf::Term;

namespace {

using Solution = std::map<std::string, Term>;
using Solutions = std::vector<Solution>;
using Value = std::optional<Term>;

const Iri& xsd(std::string_view name)
{
    static std::mutex m;
    static std::map<std::string, Iri, std::less<>> cache;
    std::lock_guard lock(m);
    auto it = cache.find(name);
    if (it == cache.end()) {
        it = cache.emplace(std::string(name), Iri(std::string(name))).first;
    }
    return it->second;
}

Term boolean(bool b)
{
    return Literal(b ? "true" : "false", xsd(vocab::xsd_boolean));
}

Term string_literal(std::string s)
{
    return Literal::string(std::move(s));
}

const std::set<std::string, std::less<>>& integer_types()
{
    static const std::set<std::string, std::less<>> types = [] {
        const std::string x = "http://www.w3.org/2001/XMLSchema#";
        std::set<std::string, std::less<>> s;
        for (const char* n : {"integer", "int", "long", "short", "byte", "nonNegativeInteger", "positiveInteger",
                              "nonPositiveInteger", "negativeInteger", "unsignedInt", "unsignedLong",
                              "unsignedShort", "unsignedByte"}) {
            s.insert(x + n);
        }
        return s;
    }();
    return types;
}

struct Number {
    enum class Kind { integer, decimal, double_ } kind = Kind::integer;
    long double value = 0;
};

std::optional<Number> numeric(const Term& t)
{
    const auto* lit = std::get_if<Literal>(&t);
    if (!lit || lit->language()) {
        return std::nullopt;
    }
    const auto& dt = lit->datatype().str();
    Number n;
    if (integer_types().count(dt)) {
        n.kind = Number::Kind::integer;
    } else if (dt == vocab::xsd_decimal) {
        n.kind = Number::Kind::decimal;
    } else if (dt == vocab::xsd_double || dt == vocab::xsd_float) {
        n.kind = Number::Kind::double_;
    } else {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        n.value = std::stold(lit->lexical(), &used);
        if (used != lit->lexical().size()) {
            return std::nullopt;
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return n;
}

Term number_term(const Number& n)
{
    if (n.kind == Number::Kind::integer) {
        return Literal(std::to_string(static_cast<long long>(n.value)), xsd(vocab::xsd_integer));
    }
    std::ostringstream out;
    out << std::setprecision(17) << static_cast<double>(n.value);
    std::string text = out.str();
    if (n.kind == Number::Kind::decimal) {
        if (text.find_first_of(".eE") == std::string::npos) {
            text += ".0";
        }
        return Literal(text, xsd(vocab::xsd_decimal));
    }
    if (text.find_first_of("eE") == std::string::npos) {
        text += "E0";
    }
    return Literal(text, xsd(vocab::xsd_double));
}

bool is_string_literal(const Term& t)
{
    const auto* lit = std::get_if<Literal>(&t);
    return lit && (lit->language() || lit->datatype().str() == vocab::xsd_string);
}

bool is_plain_string(const Term& t)
{
    const auto* lit = std::get_if<Literal>(&t);
    return lit && !lit->language() && lit->datatype().str() == vocab::xsd_string;
}

std::optional<bool> effective_boolean(const Value& v)
{
    if (!v) {
        return std::nullopt;
    }
    const auto* lit = std::get_if<Literal>(&*v);
    if (!lit) {
        return std::nullopt;
    }
    if (lit->datatype().str() == vocab::xsd_boolean) {
        return lit->lexical() == "true" || lit->lexical() == "1";
    }
    if (auto n = numeric(*v)) {
        return n->value != 0 && !std::isnan(static_cast<double>(n->value));
    }
    if (is_string_literal(*v)) {
        return !lit->lexical().empty();
    }
    return std::nullopt;
}

/// -1, 0, 1 or nullopt when the values are not comparable.
std::optional<int> compare_values(const Term& a, const Term& b)
{
    auto na = numeric(a);
    auto nb = numeric(b);
    if (na && nb) {
        return na->value < nb->value ? -1 : (na->value > nb->value ? 1 : 0);
    }
    const auto* la = std::get_if<Literal>(&a);
    const auto* lb = std::get_if<Literal>(&b);
    if (!la || !lb) {
        return std::nullopt;
    }
    if (la->datatype() != lb->datatype() || la->language() != lb->language()) {
        return std::nullopt;
    }
    const auto& dt = la->datatype().str();
    if (la->language() || dt == vocab::xsd_string || dt == vocab::xsd_date_time ||
        dt == vocab::xsd_date || dt == vocab::xsd_g_year || dt == vocab::xsd_boolean) {
        const int c = la->lexical().compare(lb->lexical());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    return std::nullopt;
}

std::optional<bool> equal_values(const Term& a, const Term& b)
{
    if (a == b) {
        return true;
    }
    const bool la = rdf::is_literal(a);
    const bool lb = rdf::is_literal(b);
    if (!la || !lb) {
        return false;
    }
    if (numeric(a) && numeric(b)) {
        return compare_values(a, b) == 0;
    }
    const auto& x = std::get<Literal>(a);
    const auto& y = std::get<Literal>(b);
    if (x.datatype() == y.datatype() && x.language() == y.language()) {
        return false;
    }
    if (is_string_literal(a) && is_string_literal(b)) {
        return false;
    }
    return std::nullopt;
}

/// Total order used by ORDER BY: unbound, blank nodes, IRIs, literals.
int order_compare(const Value& a, const Value& b)
{
    auto rank = [](const Value& v) { return !v ? 0 : (rdf::is_blank(*v) ? 1 : (rdf::is_iri(*v) ? 2 : 3)); };
    const int ra = rank(a);
    const int rb = rank(b);
    if (ra != rb) {
        return ra < rb ? -1 : 1;
    }
    if (!a) {
        return 0;
    }
    if (ra == 3) {
        if (auto c = compare_values(*a, *b)) {
            return *c;
        }
    }
    const auto sa = rdf::to_ntriples(*a);
    const auto sb = rdf::to_ntriples(*b);
    return sa < sb ? -1 : (sa > sb ? 1 : 0);
}

std::size_t utf8_length(const std::string& s)
{
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) {
            ++n;
        }
    }
    return n;
}

/// Byte offset of the code point at index `cp` (clamped to the end).
std::size_t utf8_offset(const std::string& s, std::size_t cp)
{
    std::size_t i = 0;
    while (i < s.size() && cp > 0) {
        ++i;
        while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) {
            ++i;
        }
        --cp;
    }
    return i;
}

const std::regex& cached_regex(const std::string& pattern, const std::string& flags)
{
    static std::mutex m;
    static std::unordered_map<std::string, std::regex> cache;
    std::lock_guard lock(m);
    const std::string key = flags + '\x01' + pattern;
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto opts = std::regex::ECMAScript;
        if (flags.find('i') != std::string::npos) {
            opts |= std::regex::icase;
        }
        if (cache.size() > 512) {
            cache.clear();
        }
        it = cache.emplace(key, std::regex(pattern, opts)).first;
    }
    return it->second;
}

/// Literal with the same language tag or datatype-less string form as `like`.
Term string_like(const Term& like, std::string lexical)
{
    const auto& lit = std::get<Literal>(like);
    if (lit.language()) {
        return Literal(std::move(lexical), *lit.language());
    }
    return string_literal(std::move(lexical));
}

struct GroupContext {
    const Solutions* rows = nullptr;
};

void collect_vars(const GroupPattern& g, std::vector<std::string>& out)
{
    auto add = [&out](const std::string& name) {
        if (name.rfind("_:", 0) != 0 && std::find(out.begin(), out.end(), name) == out.end()) {
            out.push_back(name);
        }
    };
    auto add_vt = [&add](const VarOrTerm& v) {
        if (const auto* var = std::get_if<Var>(&v)) {
            add(var->name);
        }
    };
    for (const auto& el : g.elements) {
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, TriplePattern>) {
                    add_vt(e.subject);
                    add_vt(e.predicate);
                    add_vt(e.object);
                } else if constexpr (std::is_same_v<T, GroupPtr>) {
                    collect_vars(*e, out);
                } else if constexpr (std::is_same_v<T, OptionalPattern>) {
                    collect_vars(*e.group, out);
                } else if constexpr (std::is_same_v<T, UnionPattern>) {
                    for (const auto& b : e.branches) {
                        collect_vars(*b, out);
                    }
                } else if constexpr (std::is_same_v<T, GraphPattern>) {
                    add_vt(e.graph);
                    collect_vars(*e.group, out);
                } else if constexpr (std::is_same_v<T, BindPattern>) {
                    add(e.var.name);
                } else if constexpr (std::is_same_v<T, ValuesPattern>) {
                    for (const auto& v : e.vars) {
                        add(v.name);
                    }
                }
            },
            el);
    }
}

class Evaluator {
public:
    explicit Evaluator(const QuadStore& store) : store_(store) {}

    QueryResult run(const Query& q)
    {
        Solutions sols = group(q.where, std::nullopt, Solution{});
        QueryResult r;
        if (q.form == Query::Form::ask) {
            r.kind = QueryResult::Kind::boolean;
            r.boolean = !sols.empty();
            return r;
        }
        if (q.form == Query::Form::construct) {
            order(q, sols, nullptr);
            slice(q, sols);
            return construct(q, sols);
        }
        return select(q, std::move(sols));
    }

private:
    const QuadStore& store_;
    using ActiveGraph = std::optional<Iri>;

    // ---- patterns ----

    Solutions group(const GroupPattern& g, const ActiveGraph& graph, const Solution& seed)
    {
        Solutions omega{seed};
        std::vector<const Expr*> filters;
        for (const auto& el : g.elements) {
            if (omega.empty()) {
                break;
            }
            std::visit(
                [&](const auto& e) {
                    using T = std::decay_t<decltype(e)>;
                    Solutions next;
                    if constexpr (std::is_same_v<T, TriplePattern>) {
                        for (const auto& mu : omega) {
                            match(e, graph, mu, next);
                        }
                    } else if constexpr (std::is_same_v<T, GroupPtr>) {
                        for (const auto& mu : omega) {
                            append(next, group(*e, graph, mu));
                        }
                    } else if constexpr (std::is_same_v<T, OptionalPattern>) {
                        for (const auto& mu : omega) {
                            auto r = group(*e.group, graph, mu);
                            if (r.empty()) {
                                next.push_back(mu);
                            } else {
                                append(next, std::move(r));
                            }
                        }
                    } else if constexpr (std::is_same_v<T, UnionPattern>) {
                        for (const auto& mu : omega) {
                            for (const auto& b : e.branches) {
                                append(next, group(*b, graph, mu));
                            }
                        }
                    } else if constexpr (std::is_same_v<T, MinusPattern>) {
                        const auto removed = group(*e.group, graph, Solution{});
                        for (const auto& mu : omega) {
                            const bool drop = std::any_of(removed.begin(), removed.end(), [&mu](const Solution& r) {
                                bool shared = false;
                                for (const auto& [k, v] : r) {
                                    auto it = mu.find(k);
                                    if (it != mu.end()) {
                                        if (it->second != v) {
                                            return false;
                                        }
                                        shared = true;
                                    }
                                }
                                return shared;
                            });
                            if (!drop) {
                                next.push_back(mu);
                            }
                        }
                    } else if constexpr (std::is_same_v<T, GraphPattern>) {
                        for (const auto& mu : omega) {
                            graph_pattern(e, mu, next);
                        }
                    } else if constexpr (std::is_same_v<T, FilterPattern>) {
                        filters.push_back(e.expr.get());
                        next = std::move(omega);
                    } else if constexpr (std::is_same_v<T, BindPattern>) {
                        for (auto& mu : omega) {
                            if (auto v = eval(*e.expr, mu, graph, nullptr); v && !mu.count(e.var.name)) {
                                mu.emplace(e.var.name, std::move(*v));
                            }
                            next.push_back(std::move(mu));
                        }
                    } else if constexpr (std::is_same_v<T, ValuesPattern>) {
                        for (const auto& mu : omega) {
                            for (const auto& row : e.rows) {
                                Solution m = mu;
                                bool ok = true;
                                for (std::size_t i = 0; i < e.vars.size() && ok; ++i) {
                                    if (!row[i]) {
                                        continue;
                                    }
                                    auto [it, inserted] = m.emplace(e.vars[i].name, *row[i]);
                                    ok = inserted || it->second == *row[i];
                                }
                                if (ok) {
                                    next.push_back(std::move(m));
                                }
                            }
                        }
                    }
                    omega = std::move(next);
                },
                el);
        }
        if (filters.empty()) {
            return omega;
        }
        Solutions kept;
        for (auto& mu : omega) {
            const bool pass = std::all_of(filters.begin(), filters.end(), [&](const Expr* f) {
                return effective_boolean(eval(*f, mu, graph, nullptr)).value_or(false);
            });
            if (pass) {
                kept.push_back(std::move(mu));
            }
        }
        return kept;
    }

    static void append(Solutions& out, Solutions&& more)
    {
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }

    void graph_pattern(const GraphPattern& e, const Solution& mu, Solutions& out)
    {
        if (const auto* t = std::get_if<Term>(&e.graph)) {
            append(out, group(*e.group, std::get<Iri>(*t), mu));
            return;
        }
        const auto& var = std::get<Var>(e.graph).name;
        if (auto it = mu.find(var); it != mu.end()) {
            if (const auto* iri = std::get_if<Iri>(&it->second)) {
                append(out, group(*e.group, *iri, mu));
            }
            return;
        }
        for (const auto& g : store_.named_graphs()) {
            Solution m = mu;
            m.emplace(var, g);
            append(out, group(*e.group, g, m));
        }
    }

    void match(const TriplePattern& tp, const ActiveGraph& graph, const Solution& mu, Solutions& out)
    {
        auto bound = [&mu](const VarOrTerm& v) -> std::optional<Term> {
            if (const auto* t = std::get_if<Term>(&v)) {
                return *t;
            }
            auto it = mu.find(std::get<Var>(v).name);
            if (it == mu.end()) {
                return std::nullopt;
            }
            return it->second;
        };
        const auto s = bound(tp.subject);
        const auto p = bound(tp.predicate);
        const auto o = bound(tp.object);
        std::optional<rdf::Subject> subj;
        if (s) {
            if (rdf::is_literal(*s)) {
                return;
            }
            subj = rdf::to_subject(*s);
        }
        std::optional<Iri> pred;
        if (p) {
            if (!rdf::is_iri(*p)) {
                return;
            }
            pred = std::get<Iri>(*p);
        }
        const auto selector = graph ? GraphSelector::named(*graph) : GraphSelector::default_graph();
        store_.match(subj, pred, o, selector, [&](const rdf::Triple& t, const std::optional<Iri>&) {
            Solution m = mu;
            auto bind = [&m](const VarOrTerm& v, Term value) {
                const auto* var = std::get_if<Var>(&v);
                if (!var) {
                    return true;
                }
                auto [it, inserted] = m.emplace(var->name, value);
                return inserted || it->second == value;
            };
            if (bind(tp.subject, rdf::to_term(t.subject)) && bind(tp.predicate, t.predicate) &&
                bind(tp.object, t.object)) {
                out.push_back(std::move(m));
            }
        });
    }

    // ---- expressions ----

    Value eval(const Expr& e, const Solution& mu, const ActiveGraph& graph, const GroupContext* grp)
    {
        using Op = Expr::Op;
        switch (e.op) {
        case Op::constant:
            return e.constant;
        case Op::variable: {
            auto it = mu.find(e.name);
            if (it == mu.end()) {
                return std::nullopt;
            }
            return it->second;
        }
        case Op::logical_or: {
            const auto a = effective_boolean(eval(*e.args[0], mu, graph, grp));
            const auto b = effective_boolean(eval(*e.args[1], mu, graph, grp));
            if ((a && *a) || (b && *b)) {
                return boolean(true);
            }
            if (a && b) {
                return boolean(false);
            }
            return std::nullopt;
        }
        case Op::logical_and: {
            const auto a = effective_boolean(eval(*e.args[0], mu, graph, grp));
            const auto b = effective_boolean(eval(*e.args[1], mu, graph, grp));
            if ((a && !*a) || (b && !*b)) {
                return boolean(false);
            }
            if (a && b) {
                return boolean(true);
            }
            return std::nullopt;
        }
        case Op::logical_not: {
            const auto a = effective_boolean(eval(*e.args[0], mu, graph, grp));
            if (!a) {
                return std::nullopt;
            }
            return boolean(!*a);
        }
        case Op::eq:
        case Op::ne: {
            const auto a = eval(*e.args[0], mu, graph, grp);
            const auto b = eval(*e.args[1], mu, graph, grp);
            if (!a || !b) {
                return std::nullopt;
            }
            const auto eq = equal_values(*a, *b);
            if (!eq) {
                return std::nullopt;
            }
            return boolean(e.op == Op::eq ? *eq : !*eq);
        }
        case Op::lt:
        case Op::gt:
        case Op::le:
        case Op::ge: {
            const auto a = eval(*e.args[0], mu, graph, grp);
            const auto b = eval(*e.args[1], mu, graph, grp);
            if (!a || !b) {
                return std::nullopt;
            }
            const auto c = compare_values(*a, *b);
            if (!c) {
                return std::nullopt;
            }
            switch (e.op) {
            case Op::lt: return boolean(*c < 0);
            case Op::gt: return boolean(*c > 0);
            case Op::le: return boolean(*c <= 0);
            default: return boolean(*c >= 0);
            }
        }
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div: {
            const auto a = eval(*e.args[0], mu, graph, grp);
            const auto b = eval(*e.args[1], mu, graph, grp);
            if (!a || !b) {
                return std::nullopt;
            }
            auto x = numeric(*a);
            auto y = numeric(*b);
            if (!x || !y) {
                return std::nullopt;
            }
            Number r;
            r.kind = std::max(x->kind, y->kind);
            switch (e.op) {
            case Op::add: r.value = x->value + y->value; break;
            case Op::sub: r.value = x->value - y->value; break;
            case Op::mul: r.value = x->value * y->value; break;
            default:
                if (y->value == 0 && r.kind != Number::Kind::double_) {
                    return std::nullopt;
                }
                r.value = x->value / y->value;
                if (r.kind == Number::Kind::integer) {
                    r.kind = Number::Kind::decimal;
                }
            }
            return number_term(r);
        }
        case Op::negate: {
            const auto a = eval(*e.args[0], mu, graph, grp);
            auto x = a ? numeric(*a) : std::nullopt;
            if (!x) {
                return std::nullopt;
            }
            x->value = -x->value;
            return number_term(*x);
        }
        case Op::in:
        case Op::not_in: {
            const auto a = eval(*e.args[0], mu, graph, grp);
            if (!a) {
                return std::nullopt;
            }
            bool error = false;
            for (std::size_t i = 1; i < e.args.size(); ++i) {
                const auto b = eval(*e.args[i], mu, graph, grp);
                const auto eq = b ? equal_values(*a, *b) : std::nullopt;
                if (eq && *eq) {
                    return boolean(e.op == Op::in);
                }
                error = error || !eq;
            }
            if (error) {
                return std::nullopt;
            }
            return boolean(e.op == Op::not_in);
        }
        case Op::exists:
        case Op::not_exists: {
            const bool found = !group(*e.pattern, graph, mu).empty();
            return boolean(e.op == Op::exists ? found : !found);
        }
        case Op::aggregate:
            if (!grp) {
                return std::nullopt;
            }
            return aggregate(e, graph, *grp);
        case Op::call:
            return call(e, mu, graph, grp);
        }
        return std::nullopt;
    }

    Value aggregate(const Expr& e, const ActiveGraph& graph, const GroupContext& grp)
    {
        std::vector<Term> values;
        if (e.args.empty()) {
            if (!e.distinct) {
                return number_term(Number{Number::Kind::integer, static_cast<long double>(grp.rows->size())});
            }
            std::set<Solution> distinct(grp.rows->begin(), grp.rows->end());
            return number_term(Number{Number::Kind::integer, static_cast<long double>(distinct.size())});
        }
        bool error = false;
        for (const auto& row : *grp.rows) {
            if (auto v = eval(*e.args[0], row, graph, nullptr)) {
                values.push_back(std::move(*v));
            } else {
                error = true;
            }
        }
        if (e.distinct) {
            std::vector<Term> unique;
            std::set<Term> seen;
            for (auto& v : values) {
                if (seen.insert(v).second) {
                    unique.push_back(v);
                }
            }
            values = std::move(unique);
        }
        if (e.name == "COUNT") {
            return number_term(Number{Number::Kind::integer, static_cast<long double>(values.size())});
        }
        if (e.name == "SAMPLE") {
            if (values.empty()) {
                return std::nullopt;
            }
            return values.front();
        }
        if (e.name == "GROUP_CONCAT") {
            std::string out;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) {
                    out += e.separator;
                }
                out += rdf::lexical_value(values[i]);
            }
            return string_literal(std::move(out));
        }
        if (e.name == "MIN" || e.name == "MAX") {
            if (values.empty()) {
                return std::nullopt;
            }
            const bool want_min = e.name == "MIN";
            Term best = values.front();
            for (const auto& v : values) {
                const int c = order_compare(v, best);
                if ((want_min && c < 0) || (!want_min && c > 0)) {
                    best = v;
                }
            }
            return best;
        }
        if (error) {
            return std::nullopt;
        }
        Number sum;
        for (const auto& v : values) {
            auto n = numeric(v);
            if (!n) {
                return std::nullopt;
            }
            sum.kind = std::max(sum.kind, n->kind);
            sum.value += n->value;
        }
        if (e.name == "AVG") {
            if (values.empty()) {
                return number_term(Number{});
            }
            sum.value /= static_cast<long double>(values.size());
            if (sum.kind == Number::Kind::integer) {
                sum.kind = Number::Kind::decimal;
            }
        }
        return number_term(sum);
    }

    Value call(const Expr& e, const Solution& mu, const ActiveGraph& graph, const GroupContext* grp)
    {
        const std::string& f = e.name;
        if (f == "BOUND") {
            if (e.args.size() != 1 || e.args[0]->op != Expr::Op::variable) {
                return std::nullopt;
            }
            return boolean(mu.count(e.args[0]->name) != 0);
        }
        if (f == "IF") {
            if (e.args.size() != 3) {
                return std::nullopt;
            }
            const auto c = effective_boolean(eval(*e.args[0], mu, graph, grp));
            if (!c) {
                return std::nullopt;
            }
            return eval(*e.args[*c ? 1 : 2], mu, graph, grp);
        }
        if (f == "COALESCE") {
            for (const auto& a : e.args) {
                if (auto v = eval(*a, mu, graph, grp)) {
                    return v;
                }
            }
            return std::nullopt;
        }
        std::vector<Term> args;
        for (const auto& a : e.args) {
            auto v = eval(*a, mu, graph, grp);
            if (!v) {
                return std::nullopt;
            }
            args.push_back(std::move(*v));
        }
        auto arity = [&args](std::size_t lo, std::size_t hi) { return args.size() >= lo && args.size() <= hi; };
        auto lit = [](const Term& t) { return std::get_if<Literal>(&t); };

        if (f == "STR" && arity(1, 1)) {
            if (rdf::is_blank(args[0])) {
                return std::nullopt;
            }
            return string_literal(rdf::lexical_value(args[0]));
        }
        if (f == "LANG" && arity(1, 1)) {
            const auto* l = lit(args[0]);
            if (!l) {
                return std::nullopt;
            }
            return string_literal(l->language().value_or(""));
        }
        if (f == "LANGMATCHES" && arity(2, 2)) {
            if (!is_plain_string(args[0]) || !is_plain_string(args[1])) {
                return std::nullopt;
            }
            auto lower = [](std::string s) {
                std::transform(s.begin(), s.end(), s.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                return s;
            };
            const auto tag = lower(lit(args[0])->lexical());
            const auto range = lower(lit(args[1])->lexical());
            if (range == "*") {
                return boolean(!tag.empty());
            }
            return boolean(tag == range || (tag.rfind(range, 0) == 0 && tag.size() > range.size() &&
                                            tag[range.size()] == '-'));
        }
        if (f == "DATATYPE" && arity(1, 1)) {
            const auto* l = lit(args[0]);
            if (!l) {
                return std::nullopt;
            }
            return l->datatype();
        }
        if ((f == "IRI" || f == "URI") && arity(1, 1)) {
            if (rdf::is_iri(args[0])) {
                return args[0];
            }
            if (!is_plain_string(args[0]) || !rdf::is_absolute_iri(lit(args[0])->lexical())) {
                return std::nullopt;
            }
            try {
                return Iri(lit(args[0])->lexical());
            } catch (const ContractViolation&) {
                return std::nullopt;
            }
        }
        if ((f == "ISIRI" || f == "ISURI") && arity(1, 1)) {
            return boolean(rdf::is_iri(args[0]));
        }
        if (f == "ISBLANK" && arity(1, 1)) {
            return boolean(rdf::is_blank(args[0]));
        }
        if (f == "ISLITERAL" && arity(1, 1)) {
            return boolean(rdf::is_literal(args[0]));
        }
        if (f == "ISNUMERIC" && arity(1, 1)) {
            return boolean(numeric(args[0]).has_value());
        }
        if (f == "SAMETERM" && arity(2, 2)) {
            return boolean(args[0] == args[1]);
        }
        if (f == "STRDT" && arity(2, 2)) {
            if (!is_plain_string(args[0]) || !rdf::is_iri(args[1])) {
                return std::nullopt;
            }
            return Literal(lit(args[0])->lexical(), std::get<Iri>(args[1]));
        }
        if (f == "STRLANG" && arity(2, 2)) {
            if (!is_plain_string(args[0]) || !is_plain_string(args[1])) {
                return std::nullopt;
            }
            return Literal(lit(args[0])->lexical(), lit(args[1])->lexical());
        }
        if (f == "ABS" && arity(1, 1)) {
            auto n = numeric(args[0]);
            if (!n) {
                return std::nullopt;
            }
            n->value = std::fabs(n->value);
            return number_term(*n);
        }
        if (f == "SUBSTR" && arity(2, 3)) {
            auto start = numeric(args[1]);
            auto len = args.size() == 3 ? numeric(args[2]) : std::optional<Number>{};
            if (!is_string_literal(args[0]) || !start || (args.size() == 3 && !len)) {
                return std::nullopt;
            }
            const auto& s = std::get<Literal>(args[0]).lexical();
            const long long from = std::llround(static_cast<double>(start->value));
            const long long to = len ? from + std::llround(static_cast<double>(len->value))
                                     : static_cast<long long>(utf8_length(s)) + 1;
            const auto first = static_cast<std::size_t>(std::max(1LL, from) - 1);
            const auto last = static_cast<std::size_t>(std::max(1LL, to) - 1);
            if (last <= first) {
                return string_like(args[0], "");
            }
            const auto b = utf8_offset(s, first);
            return string_like(args[0], s.substr(b, utf8_offset(s, last) - b));
        }
        // The remaining functions operate on string literals.
        for (const auto& a : args) {
            if (!is_string_literal(a) && f != "CONCAT" && f != "ENCODE_FOR_URI") {
                return std::nullopt;
            }
            if ((f == "CONCAT" || f == "ENCODE_FOR_URI") && !rdf::is_literal(a)) {
                return std::nullopt;
            }
        }
        auto text = [&args](std::size_t i) -> const std::string& { return std::get<Literal>(args[i]).lexical(); };
        if ((f == "LCASE" || f == "UCASE") && arity(1, 1)) {
            std::string s = text(0);
            std::transform(s.begin(), s.end(), s.begin(), [&f](unsigned char c) {
                return static_cast<char>(f == "LCASE" ? std::tolower(c) : std::toupper(c));
            });
            return string_like(args[0], std::move(s));
        }
        if (f == "STRLEN" && arity(1, 1)) {
            return number_term(Number{Number::Kind::integer, static_cast<long double>(utf8_length(text(0)))});
        }
        if (f == "CONTAINS" && arity(2, 2)) {
            return boolean(text(0).find(text(1)) != std::string::npos);
        }
        if (f == "STRSTARTS" && arity(2, 2)) {
            return boolean(text(0).rfind(text(1), 0) == 0);
        }
        if (f == "STRENDS" && arity(2, 2)) {
            const auto& s = text(0);
            const auto& suffix = text(1);
            return boolean(s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0);
        }
        if ((f == "STRBEFORE" || f == "STRAFTER") && arity(2, 2)) {
            const auto pos = text(0).find(text(1));
            if (pos == std::string::npos) {
                return string_literal("");
            }
            return string_like(args[0], f == "STRBEFORE" ? text(0).substr(0, pos)
                                                         : text(0).substr(pos + text(1).size()));
        }
        if (f == "CONCAT") {
            std::string out;
            for (std::size_t i = 0; i < args.size(); ++i) {
                out += text(i);
            }
            return string_literal(std::move(out));
        }
        if (f == "ENCODE_FOR_URI" && arity(1, 1)) {
            static constexpr char hex[] = "0123456789ABCDEF";
            std::string out;
            for (unsigned char c : text(0)) {
                if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
                    out += static_cast<char>(c);
                } else {
                    out += '%';
                    out += hex[c >> 4];
                    out += hex[c & 0xF];
                }
            }
            return string_literal(std::move(out));
        }
        if ((f == "REGEX" && arity(2, 3)) || (f == "REPLACE" && arity(3, 4))) {
            const std::size_t flag_index = f == "REGEX" ? 2 : 3;
            const std::string flags = args.size() > flag_index ? text(flag_index) : "";
            try {
                const auto& re = cached_regex(text(1), flags);
                if (f == "REGEX") {
                    return boolean(std::regex_search(text(0), re));
                }
                return string_like(args[0], std::regex_replace(text(0), re, text(2)));
            } catch (const std::regex_error&) {
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    // ---- solution modifiers ----

    void order(const Query& q, Solutions& sols, const std::vector<Solutions>* groups)
    {
        if (q.order_by.empty()) {
            return;
        }
        std::vector<std::vector<Value>> keys(sols.size());
        for (std::size_t i = 0; i < sols.size(); ++i) {
            GroupContext ctx{groups ? &(*groups)[i] : nullptr};
            for (const auto& c : q.order_by) {
                keys[i].push_back(eval(*c.expr, sols[i], std::nullopt, groups ? &ctx : nullptr));
            }
        }
        std::vector<std::size_t> idx(sols.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            for (std::size_t k = 0; k < q.order_by.size(); ++k) {
                const int c = order_compare(keys[a][k], keys[b][k]);
                if (c != 0) {
                    return q.order_by[k].descending ? c > 0 : c < 0;
                }
            }
            return false;
        });
        Solutions sorted;
        sorted.reserve(sols.size());
        for (auto i : idx) {
            sorted.push_back(std::move(sols[i]));
        }
        sols = std::move(sorted);
    }

    template <typename T>
    static void slice(const Query& q, std::vector<T>& items)
    {
        const auto begin = std::min(q.offset, items.size());
        items.erase(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(begin));
        if (q.limit && items.size() > *q.limit) {
            items.resize(*q.limit);
        }
    }

    QueryResult construct(const Query& q, const Solutions& sols)
    {
        QueryResult r;
        r.kind = QueryResult::Kind::graph;
        std::set<rdf::Triple> seen;
        for (std::size_t i = 0; i < sols.size(); ++i) {
            const auto& mu = sols[i];
            auto inst = [&](const VarOrTerm& v) -> Value {
                if (const auto* t = std::get_if<Term>(&v)) {
                    return *t;
                }
                const auto& name = std::get<Var>(v).name;
                if (auto it = mu.find(name); it != mu.end()) {
                    return it->second;
                }
                if (name.rfind("_:", 0) == 0) {
                    return BlankNode{name.substr(2) + "_" + std::to_string(i)};
                }
                return std::nullopt;
            };
            for (const auto& tp : q.construct_template) {
                const auto s = inst(tp.subject);
                const auto p = inst(tp.predicate);
                const auto o = inst(tp.object);
                if (!s || !p || !o || rdf::is_literal(*s) || !rdf::is_iri(*p)) {
                    continue;
                }
                rdf::Triple t{rdf::to_subject(*s), std::get<Iri>(*p), *o};
                if (seen.insert(t).second) {
                    r.triples.push_back(std::move(t));
                }
            }
        }
        return r;
    }

    QueryResult select(const Query& q, Solutions sols)
    {
        QueryResult r;
        r.kind = QueryResult::Kind::bindings;
        if (q.select_all) {
            collect_vars(q.where, r.variables);
        } else {
            for (const auto& p : q.projection) {
                r.variables.push_back(p.var.name);
            }
        }
        if (q.is_aggregate()) {
            std::vector<Solutions> groups;
            Solutions keyed;
            std::map<std::vector<Value>, std::size_t> index;
            for (auto& mu : sols) {
                std::vector<Value> key;
                for (const auto& g : q.group_by) {
                    key.push_back(eval(*g, mu, std::nullopt, nullptr));
                }
                auto [it, inserted] = index.emplace(key, groups.size());
                if (inserted) {
                    Solution k;
                    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
                        if (q.group_by[i]->op == Expr::Op::variable && key[i]) {
                            k.emplace(q.group_by[i]->name, *key[i]);
                        }
                    }
                    keyed.push_back(std::move(k));
                    groups.emplace_back();
                }
                groups[it->second].push_back(std::move(mu));
            }
            if (groups.empty() && q.group_by.empty()) {
                groups.emplace_back();
                keyed.emplace_back();
            }
            Solutions out;
            std::vector<Solutions> out_groups;
            for (std::size_t i = 0; i < groups.size(); ++i) {
                GroupContext ctx{&groups[i]};
                Solution k = keyed[i];
                for (const auto& p : q.projection) {
                    if (p.expr) {
                        if (auto v = eval(*p.expr, k, std::nullopt, &ctx)) {
                            k[p.var.name] = std::move(*v);
                        }
                    }
                }
                const bool pass = std::all_of(q.having.begin(), q.having.end(), [&](const ExprPtr& h) {
                    return effective_boolean(eval(*h, k, std::nullopt, &ctx)).value_or(false);
                });
                if (pass) {
                    out.push_back(std::move(k));
                    out_groups.push_back(std::move(groups[i]));
                }
            }
            order(q, out, &out_groups);
            sols = std::move(out);
        } else {
            for (auto& mu : sols) {
                for (const auto& p : q.projection) {
                    if (p.expr && !mu.count(p.var.name)) {
                        if (auto v = eval(*p.expr, mu, std::nullopt, nullptr)) {
                            mu.emplace(p.var.name, std::move(*v));
                        }
                    }
                }
            }
            order(q, sols, nullptr);
        }
        std::set<Row> seen;
        for (const auto& mu : sols) {
            Row row;
            for (const auto& v : r.variables) {
                auto it = mu.find(v);
                row.push_back(it == mu.end() ? Value{} : Value{it->second});
            }
            if (q.distinct && !seen.insert(row).second) {
                continue;
            }
            r.rows.push_back(std::move(row));
        }
        slice(q, r.rows);
        return r;
    }
};

} // namespace

QueryResult evaluate(const Query& query, const QuadStore& store)
{
    return Evaluator(store).run(query);
}

std::size_t apply_update(const Update& update, QuadStore& store)
{
    std::size_t changed = 0;
    for (const auto& op : update.operations) {
        switch (op.kind) {
        case UpdateOperation::Kind::insert_data:
            for (const auto& q : op.quads) {
                changed += store.insert(q) ? 1 : 0;
            }
            break;
        case UpdateOperation::Kind::delete_data:
            for (const auto& q : op.quads) {
                changed += store.erase(q) ? 1 : 0;
            }
            break;
        case UpdateOperation::Kind::clear_graph:
        case UpdateOperation::Kind::clear_all:
            for (const auto& q : store.quads()) {
                if (op.kind == UpdateOperation::Kind::clear_all || q.graph == op.graph) {
                    changed += store.erase(q) ? 1 : 0;
                }
            }
            break;
        }
    }
    return changed;
}

} // namespace provcurate::store
