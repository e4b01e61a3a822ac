#pragma once

#include "provcurate/store/quad_store.hpp"
#include "provcurate/store/results.hpp"
#include "provcurate/store/sparql.hpp"

namespace provcurate::store {

/// Evaluates `query` against `store`. The default graph is only the
/// unnamed graph; named graphs are reachable through GRAPH patterns.
/// The caller holds at least a shared lock on the store.
QueryResult evaluate(const Query& query, const QuadStore& store);

/// Applies every operation in order without rollback. Returns the number
/// of quads actually added or removed.
std::size_t apply_update(const Update& update, QuadStore& store);

} // namespace provcurate::store
