#include "provcurate/shacl/resolve.hpp"

#include "provcurate/shacl/form_schema.hpp"
#include "provcurate/validation/validator.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

namespace provcurate::shacl {

ShapeId resolve_shape(const rdf::EntityState& state, const ShapeCatalog& catalog, std::span<const ShapeId> preference)
{
    std::set<ShapeId> candidates;
    for (const auto& cls : state.types()) {
        for (auto& id : catalog.shapes_targeting(cls)) {
            candidates.insert(std::move(id));
        }
    }
    if (candidates.empty()) {
        throw NoShapeError("no shape targets the classes of <" + state.entity().str() + ">");
    }
    auto rank = [&preference](const ShapeId& id) {
        const auto it = std::find(preference.begin(), preference.end(), id);
        return it == preference.end() ? std::numeric_limits<std::size_t>::max()
                                      : static_cast<std::size_t>(it - preference.begin());
    };
    std::optional<std::tuple<std::size_t, std::size_t, ShapeId>> best;
    for (const auto& id : candidates) {
        const auto violations = validation::validate_entity(state, compile_shape(id, catalog)).size();
        std::tuple<std::size_t, std::size_t, ShapeId> key{violations, rank(id), id};
        if (!best || key < *best) {
            best = std::move(key);
        }
    }
    return std::get<2>(*best);
}

} // namespace provcurate::shacl
