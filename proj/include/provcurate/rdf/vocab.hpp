#pragma once

#include <string_view>

// Vocabulary IRIs used across modules.
namespace provcurate::vocab {

inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_first = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view rdf_rest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view rdf_nil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view rdf_lang_string = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view xsd_float = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view xsd_date = "http://www.w3.org/2001/XMLSchema#date";
inline constexpr std::string_view xsd_date_time = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view xsd_g_year = "http://www.w3.org/2001/XMLSchema#gYear";

inline constexpr std::string_view sh = "http://www.w3.org/ns/shacl#";

inline constexpr std::string_view prov = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view prov_entity = "http://www.w3.org/ns/prov#Entity";
inline constexpr std::string_view prov_specialization_of = "http://www.w3.org/ns/prov#specializationOf";
inline constexpr std::string_view prov_generated_at_time = "http://www.w3.org/ns/prov#generatedAtTime";
inline constexpr std::string_view prov_invalidated_at_time = "http://www.w3.org/ns/prov#invalidatedAtTime";
inline constexpr std::string_view prov_was_attributed_to = "http://www.w3.org/ns/prov#wasAttributedTo";
inline constexpr std::string_view prov_had_primary_source = "http://www.w3.org/ns/prov#hadPrimarySource";
inline constexpr std::string_view prov_was_derived_from = "http://www.w3.org/ns/prov#wasDerivedFrom";

inline constexpr std::string_view oco_has_update_query = "https://w3id.org/oc/ontology/hasUpdateQuery";
inline constexpr std::string_view dcterms_description = "http://purl.org/dc/terms/description";

} // namespace provcurate::vocab
