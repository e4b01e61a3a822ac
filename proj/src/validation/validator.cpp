#include "provcurate/validation/validator.hpp"

#include "provcurate/rdf/vocab.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <regex>

namespace provcurate::validation {

namespace {

using rdf::Literal;
using shacl::FormField;
using shacl::RuleKind;
using shacl::ValidationRule;

const std::regex& compiled(const std::string& pattern)
{
    static std::mutex mutex;
    static std::map<std::string, std::regex> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(pattern);
    if (it == cache.end()) {
        it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript)).first;
    }
    return it->second;
}

bool leap(long year)
{
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

bool valid_timezone(std::string_view tz)
{
    if (tz.empty() || tz == "Z") {
        return true;
    }
    static const std::regex re(R"([+-](\d{2}):(\d{2}))");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(tz.begin(), tz.end(), m, re)) {
        return false;
    }
    const int hh = std::stoi(m[1].str());
    const int mm = std::stoi(m[2].str());
    return hh < 14 ? mm < 60 : (hh == 14 && mm == 0);
}

bool valid_date(std::string_view s, std::string_view* rest)
{
    static const std::regex re(R"((-?\d{4,})-(\d{2})-(\d{2}))");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(s.begin(), s.end(), m, re, std::regex_constants::match_continuous)) {
        return false;
    }
    const long year = std::stol(m[1].str());
    const int month = std::stoi(m[2].str());
    const int day = std::stoi(m[3].str());
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (year == 0 || month < 1 || month > 12 || day < 1) {
        return false;
    }
    const int max_day = days[month - 1] + (month == 2 && leap(year) ? 1 : 0);
    if (day > max_day) {
        return false;
    }
    *rest = s.substr(static_cast<std::size_t>(m.length(0)));
    return true;
}

bool valid_time(std::string_view s, std::string_view* rest)
{
    static const std::regex re(R"((\d{2}):(\d{2}):(\d{2})(\.\d+)?)");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(s.begin(), s.end(), m, re, std::regex_constants::match_continuous)) {
        return false;
    }
    const int h = std::stoi(m[1].str());
    const int mi = std::stoi(m[2].str());
    const int se = std::stoi(m[3].str());
    if (h > 24 || mi > 59 || se > 59 || (h == 24 && (mi != 0 || se != 0))) {
        return false;
    }
    *rest = s.substr(static_cast<std::size_t>(m.length(0)));
    return true;
}

bool regex_whole(std::string_view s, const char* pattern)
{
    const std::regex re(pattern);
    return std::regex_match(s.begin(), s.end(), re);
}

std::string show(const Term& t)
{
    return rdf::is_literal(t) ? "\"" + std::get<Literal>(t).lexical() + "\"" : rdf::to_ntriples(t);
}

bool conforms_to_datatype(const Term& value, const Iri& datatype)
{
    const auto* lit = std::get_if<Literal>(&value);
    return lit != nullptr && lit->datatype() == datatype && is_valid_lexical(lit->lexical(), datatype);
}

bool satisfies_alternative(const Term& value, const shacl::ConstraintAlternative& alt)
{
    if (alt.has_value) {
        return value == *alt.has_value;
    }
    if (alt.datatype) {
        return conforms_to_datatype(value, *alt.datatype);
    }
    if (alt.node_shape) {
        return !rdf::is_literal(value);
    }
    return true;
}

void check_rule(const FormField& field, const ValidationRule& rule, const std::vector<Term>& values,
                std::vector<Violation>& out)
{
    const bool guarded = rule.condition.has_value();
    const std::string guard = guarded ? " (required when <" + rule.condition->path.str() + "> is " +
                                            show(rule.condition->has_value) + ")"
                                      : "";
    switch (rule.kind) {
    case RuleKind::datatype:
        for (const auto& v : values) {
            if (!conforms_to_datatype(v, *rule.datatype)) {
                out.push_back({field.path, ViolationKind::datatype,
                               "value " + show(v) + " is not a valid <" + rule.datatype->str() + ">" + guard, v});
            }
        }
        break;
    case RuleKind::in:
        for (const auto& v : values) {
            if (std::find(rule.values.begin(), rule.values.end(), v) == rule.values.end()) {
                out.push_back({field.path, ViolationKind::not_in_options,
                               "value " + show(v) + " is not one of the allowed options" + guard, v});
            }
        }
        break;
    case RuleKind::pattern:
        for (const auto& v : values) {
            if (rdf::is_blank(v) || !pattern_matches(*rule.pattern, rdf::lexical_value(v))) {
                out.push_back({field.path, guarded ? ViolationKind::condition_pattern : ViolationKind::pattern,
                               "value " + show(v) + " does not match pattern " + *rule.pattern + guard, v});
            }
        }
        break;
    case RuleKind::has_value:
        if (std::find(values.begin(), values.end(), rule.values.front()) == values.end()) {
            out.push_back({field.path, ViolationKind::not_in_options,
                           "value " + show(rule.values.front()) + " must be present" + guard, std::nullopt});
        }
        break;
    }
}

} // namespace

std::string_view to_string(ViolationKind k) noexcept
{
    switch (k) {
    case ViolationKind::missing_required: return "missing-required";
    case ViolationKind::too_many: return "too-many";
    case ViolationKind::datatype: return "datatype";
    case ViolationKind::pattern: return "pattern";
    case ViolationKind::not_in_options: return "not-in-options";
    case ViolationKind::undeclared_property: return "undeclared-property";
    case ViolationKind::condition_pattern: return "condition-pattern";
    }
    return "unknown";
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? std::string("validation failed")
                               : "validation failed: " + violations.front().message +
                                     (violations.size() > 1 ? " (+" + std::to_string(violations.size() - 1) + " more)" : "")),
      violations_(std::move(violations))
{
}

CoercionError::CoercionError(std::string input, Iri datatype)
    : Error("'" + input + "' is not a valid <" + datatype.str() + ">"), datatype_(std::move(datatype))
{
}

bool pattern_matches(const std::string& pattern, std::string_view text)
{
    return std::regex_search(text.begin(), text.end(), compiled(pattern));
}

bool check_condition(const rdf::EntityState& state, const shacl::ConditionSpec& condition)
{
    return state.contains(rdf::Triple{state.entity(), condition.path, condition.has_value});
}

bool is_valid_lexical(std::string_view s, const Iri& datatype)
{
    const auto& dt = datatype.str();
    if (dt == vocab::xsd_string || dt == vocab::rdf_lang_string) {
        return true;
    }
    if (dt == vocab::xsd_boolean) {
        return s == "true" || s == "false" || s == "1" || s == "0";
    }
    if (dt == vocab::xsd_integer) {
        return regex_whole(s, R"([+-]?\d+)");
    }
    if (dt == vocab::xsd_decimal) {
        return regex_whole(s, R"([+-]?(\d+(\.\d*)?|\.\d+))");
    }
    if (dt == vocab::xsd_double || dt == vocab::xsd_float) {
        return regex_whole(s, R"([+-]?((\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?|INF)|NaN)");
    }
    if (dt == vocab::xsd_g_year) {
        static const std::regex re(R"((-?\d{4,})(.*))");
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_match(s.begin(), s.end(), m, re)) {
            return false;
        }
        return std::stol(m[1].str()) != 0 && valid_timezone(m[2].str());
    }
    if (dt == vocab::xsd_date) {
        std::string_view rest;
        return valid_date(s, &rest) && valid_timezone(rest);
    }
    if (dt == vocab::xsd_date_time) {
        std::string_view rest;
        if (!valid_date(s, &rest) || rest.empty() || rest.front() != 'T') {
            return false;
        }
        std::string_view tz;
        return valid_time(rest.substr(1), &tz) && valid_timezone(tz);
    }
    if (shacl::is_numeric_datatype(datatype)) {
        if (!regex_whole(s, R"([+-]?\d+)")) {
            return false;
        }
        const bool negative = s.front() == '-';
        const bool zero = s.find_first_not_of("+-0") == std::string_view::npos;
        const auto local = dt.substr(vocab::xsd.size());
        if (local == "nonNegativeInteger" || local.rfind("unsigned", 0) == 0) {
            return !negative || zero;
        }
        if (local == "positiveInteger") {
            return !negative && !zero;
        }
        if (local == "nonPositiveInteger") {
            return negative || zero;
        }
        if (local == "negativeInteger") {
            return negative && !zero;
        }
        return true;
    }
    return true;
}

rdf::Literal coerce_literal(std::string_view input, const Iri& datatype)
{
    if (datatype.str() == vocab::rdf_lang_string || !is_valid_lexical(input, datatype)) {
        throw CoercionError(std::string(input), datatype);
    }
    return Literal(std::string(input), datatype);
}

std::vector<Violation> validate_entity(const rdf::EntityState& state, const shacl::FormSchema& schema)
{
    std::vector<Violation> out;
    for (const auto& field : schema.fields) {
        std::vector<Violation> found;
        const auto values = state.objects(field.path);
        if (field.min_count && values.size() < *field.min_count) {
            found.push_back({field.path, ViolationKind::missing_required,
                             "at least " + std::to_string(*field.min_count) + " value(s) required for <" +
                                 field.path.str() + ">",
                             std::nullopt});
        }
        if (field.max_count && values.size() > *field.max_count) {
            found.push_back({field.path, ViolationKind::too_many,
                             "at most " + std::to_string(*field.max_count) + " value(s) allowed for <" +
                                 field.path.str() + ">",
                             std::nullopt});
        }
        if (field.nested_shape) {
            for (const auto& v : values) {
                if (rdf::is_literal(v)) {
                    found.push_back({field.path, ViolationKind::datatype,
                                     "value " + show(v) + " must reference an entity", v});
                }
            }
        }
        if (!field.alternatives.empty()) {
            for (const auto& v : values) {
                if (std::none_of(field.alternatives.begin(), field.alternatives.end(),
                                 [&v](const auto& alt) { return satisfies_alternative(v, alt); })) {
                    found.push_back({field.path, ViolationKind::datatype,
                                     "value " + show(v) + " matches none of the sh:or alternatives", v});
                }
            }
        }
        for (const auto& rule : field.rules) {
            if (rule.condition && !check_condition(state, *rule.condition)) {
                continue;
            }
            check_rule(field, rule, values, found);
        }
        std::stable_sort(found.begin(), found.end(),
                         [](const Violation& a, const Violation& b) { return a.kind < b.kind; });
        out.insert(out.end(), found.begin(), found.end());
    }
    const Iri type(std::string(vocab::rdf_type));
    for (const auto& t : state.triples()) {
        if (t.predicate == type || schema.field(t.predicate) != nullptr) {
            continue;
        }
        out.push_back({t.predicate, ViolationKind::undeclared_property,
                       "property <" + t.predicate.str() + "> is not declared by shape <" + schema.shape.str() + ">",
                       t.object});
    }
    return out;
}

} // namespace provcurate::validation
