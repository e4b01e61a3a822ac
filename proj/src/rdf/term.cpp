#include "provcurate/rdf/term.hpp"

#include "provcurate/error.hpp"
#include "provcurate/rdf/vocab.hpp"

#include <cctype>
#include <cstdio>

namespace provcurate::rdf {

namespace {

bool forbidden_in_iri(unsigned char c) noexcept
{
    if (c <= 0x20) {
        return true;
    }
    switch (c) {
    case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
        return true;
    default:
        return false;
    }
}

} // namespace

bool is_absolute_iri(std::string_view text) noexcept
{
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) {
        return false;
    }
    std::size_t i = 1;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c == ':') {
            break;
        }
        if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') {
            return false;
        }
        ++i;
    }
    if (i >= text.size()) {
        return false;
    }
    for (const char ch : text) {
        if (forbidden_in_iri(static_cast<unsigned char>(ch))) {
            return false;
        }
    }
    return true;
}

Iri::Iri(std::string value) : value_(std::move(value))
{
    if (!is_absolute_iri(value_)) {
        throw ContractViolation("not an absolute IRI: '" + value_ + "'");
    }
}

std::string local_name(const Iri& iri)
{
    const auto& s = iri.str();
    const auto pos = s.find_last_of("/#");
    if (pos == std::string::npos || pos + 1 == s.size()) {
        return s;
    }
    return s.substr(pos + 1);
}

Literal::Literal(std::string lexical, Iri datatype)
    : lexical_(std::move(lexical)), datatype_(std::move(datatype))
{
    if (datatype_.empty()) {
        throw ContractViolation("literal without datatype");
    }
    if (datatype_.str() == vocab::rdf_lang_string) {
        throw ContractViolation("rdf:langString literal requires a language tag");
    }
}

Literal::Literal(std::string lexical, std::string language)
    : lexical_(std::move(lexical)), datatype_(std::string(vocab::rdf_lang_string))
{
    if (language.empty()) {
        throw ContractViolation("empty language tag");
    }
    for (auto& c : language) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    language_ = std::move(language);
}

Literal Literal::string(std::string lexical)
{
    return Literal(std::move(lexical), Iri(std::string(vocab::xsd_string)));
}

Term to_term(const Subject& s)
{
    return std::visit([](const auto& v) -> Term { return v; }, s);
}

Subject to_subject(const Term& t)
{
    if (const auto* iri = std::get_if<Iri>(&t)) {
        return *iri;
    }
    if (const auto* b = std::get_if<BlankNode>(&t)) {
        return *b;
    }
    throw ContractViolation("literal in subject position");
}

Triple make_triple(const Iri& s, const Iri& p, Term o)
{
    return Triple{s, p, std::move(o)};
}

std::string escape_string(std::string_view lexical)
{
    std::string out;
    out.reserve(lexical.size() + 2);
    for (const char ch : lexical) {
        const auto c = static_cast<unsigned char>(ch);
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        default:
            if (c < 0x20 || c == 0x7f) {
                char buf[12];
                std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    return out;
}

std::string to_ntriples(const Term& t)
{
    struct Visitor {
        std::string operator()(const Iri& iri) const { return "<" + iri.str() + ">"; }
        std::string operator()(const BlankNode& b) const { return "_:" + b.id; }
        std::string operator()(const Literal& l) const
        {
            std::string out = "\"" + escape_string(l.lexical()) + "\"";
            if (l.language()) {
                return out + "@" + *l.language();
            }
            return out + "^^<" + l.datatype().str() + ">";
        }
    };
    return std::visit(Visitor{}, t);
}

std::string to_ntriples(const Subject& s)
{
    return to_ntriples(to_term(s));
}

std::string to_ntriples(const Triple& t)
{
    return to_ntriples(t.subject) + " <" + t.predicate.str() + "> " + to_ntriples(t.object) + " .";
}

std::string to_nquads(const Quad& q)
{
    std::string out = to_ntriples(q.triple.subject) + " <" + q.triple.predicate.str() + "> " +
        to_ntriples(q.triple.object);
    if (q.graph) {
        out += " <" + q.graph->str() + ">";
    }
    return out + " .";
}

std::string lexical_value(const Term& t)
{
    struct Visitor {
        std::string operator()(const Iri& iri) const { return iri.str(); }
        std::string operator()(const BlankNode& b) const { return b.id; }
        std::string operator()(const Literal& l) const { return l.lexical(); }
    };
    return std::visit(Visitor{}, t);
}

bool CanonicalTripleLess::operator()(const Triple& a, const Triple& b) const
{
    if (a.subject != b.subject) {
        return to_ntriples(a.subject) < to_ntriples(b.subject);
    }
    if (a.predicate != b.predicate) {
        return to_ntriples(Term{a.predicate}) < to_ntriples(Term{b.predicate});
    }
    if (a.object != b.object) {
        return to_ntriples(a.object) < to_ntriples(b.object);
    }
    return false;
}

} // namespace provcurate::rdf
