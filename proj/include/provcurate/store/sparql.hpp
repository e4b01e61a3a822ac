#pragma once

#include "provcurate/rdf/prefix_map.hpp"
#include "provcurate/rdf/term.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace provcurate::store {

/// Query variable; blank nodes in patterns become variables named "_:label".
struct Var {
    std::string name;
    friend bool operator==(const Var&, const Var&) = default;
};

using VarOrTerm = std::variant<Var, rdf::Term>;

struct TriplePattern {
    VarOrTerm subject;
    VarOrTerm predicate;
    VarOrTerm object;
};

struct GroupPattern;
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using GroupPtr = std::shared_ptr<const GroupPattern>;

struct Expr {
    enum class Op {
        constant, variable,
        logical_or, logical_and, logical_not,
        eq, ne, lt, gt, le, ge,
        add, sub, mul, div, negate,
        in, not_in,
        call,       // builtin function, `name` upper-cased
        exists, not_exists,
        aggregate,  // `name` is COUNT/SUM/MIN/MAX/AVG/SAMPLE/GROUP_CONCAT; no args means COUNT(*)
    };
    Op op = Op::constant;
    rdf::Term constant;
    std::string name;
    std::vector<ExprPtr> args;
    GroupPtr pattern;
    bool distinct = false;
    std::string separator = " ";
};

struct OptionalPattern { GroupPtr group; };
struct UnionPattern { std::vector<GroupPtr> branches; };
struct MinusPattern { GroupPtr group; };
struct GraphPattern { VarOrTerm graph; GroupPtr group; };
struct FilterPattern { ExprPtr expr; };
struct BindPattern { ExprPtr expr; Var var; };
struct ValuesPattern {
    std::vector<Var> vars;
    std::vector<std::vector<std::optional<rdf::Term>>> rows;
};

using PatternElement = std::variant<TriplePattern, GroupPtr, OptionalPattern, UnionPattern, MinusPattern,
                                    GraphPattern, FilterPattern, BindPattern, ValuesPattern>;

struct GroupPattern {
    std::vector<PatternElement> elements;
};

struct Projection {
    Var var;
    ExprPtr expr;  // null for a plain variable
};

struct OrderCondition {
    ExprPtr expr;
    bool descending = false;
};

struct Query {
    enum class Form { select, ask, construct };
    Form form = Form::select;
    bool distinct = false;
    bool select_all = false;
    std::vector<Projection> projection;
    std::vector<TriplePattern> construct_template;
    GroupPattern where;
    std::vector<ExprPtr> group_by;
    std::vector<ExprPtr> having;
    std::vector<OrderCondition> order_by;
    std::optional<std::size_t> limit;
    std::size_t offset = 0;

    bool is_aggregate() const;
};

struct UpdateOperation {
    enum class Kind { insert_data, delete_data, clear_graph, clear_all };
    Kind kind = Kind::insert_data;
    std::vector<rdf::Quad> quads;
    std::optional<rdf::Iri> graph;  // clear_graph target
};

struct Update {
    std::vector<UpdateOperation> operations;
};

/// Parses a SELECT, ASK or CONSTRUCT query in the supported subset.
/// Throws ParseError with line and column.
Query parse_query(std::string_view text);

/// Parses `INSERT DATA`, `DELETE DATA`, `CLEAR GRAPH` and `CLEAR ALL`
/// operations separated by ';'. Variables and blank nodes are rejected.
Update parse_update(std::string_view text);

/// True when the text's first keyword after the prologue starts an update.
bool looks_like_update(std::string_view text);

/// Renders ground quads as one `INSERT DATA` or `DELETE DATA` operation body.
std::string quad_data_block(const std::vector<rdf::Quad>& quads);

} // namespace provcurate::store
