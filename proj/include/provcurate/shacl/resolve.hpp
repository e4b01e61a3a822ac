#pragma once

#include "provcurate/rdf/entity_state.hpp"
#include "provcurate/shacl/shapes.hpp"

#include <span>

namespace provcurate::shacl {

/// No shape targets any class the entity declares; callers fall back to free-form editing.
class NoShapeError : public Error {
public:
    using Error::Error;
};

/// Picks, among shapes targeting one of the entity's rdf:type values, the
/// one with the fewest validation violations. Ties go to the earliest entry
/// of `preference`, then to the smallest ShapeId.
ShapeId resolve_shape(const rdf::EntityState& state, const ShapeCatalog& catalog,
                      std::span<const ShapeId> preference = {});

} // namespace provcurate::shacl
