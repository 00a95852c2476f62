#pragma once

// JSON configuration: parsing of classes, maps, measures and options into the
// library types. Every object is checked against its allowed keys.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnum/distortion.hpp"
#include "tnum/dynamics.hpp"
#include "tnum/homovec.hpp"
#include "tnum/seifert.hpp"

namespace tnum::config {

using json = nlohmann::json;

/// Throws ValidationError naming the first key of `obj` not in `allowed`.
void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where);

/// Typed accessors; all throw ValidationError with the key path on mismatch.
const json& require(const json& obj, const char* key, const std::string& where);
double get_double(const json& v, const std::string& where);
std::int64_t get_int(const json& v, const std::string& where);
std::size_t get_count(const json& v, const std::string& where);
bool get_bool(const json& v, const std::string& where);
std::string get_string(const json& v, const std::string& where);
Vec get_vec(const json& v, const std::string& where);
/// A JSON string ("1/3", "0.25") or integer, converted exactly.
Rational get_rational(const json& v, const std::string& where);

/// {"coefficients": "integer"|"real", "entries": [...]}
CohomologyClass parse_class(const json& j);
json class_to_json(const CohomologyClass& a);

/// {"constant": c, "terms": [{"k": [..] | int, "sin": s, "cos": c}]}
TrigPolynomial parse_trig(const json& j, std::size_t dim, const std::string& where);

/// {"family": ..., family parameters, "fiber_shift": c}
BundleAutomorphism parse_automorphism(const json& j, const std::string& where = "map");

/// {"family": "linear"|"skew"|"sin_shear"|"arnold", ...}
Isotopy parse_isotopy(const json& j);

/// {"kind": "lebesgue"} | {"kind": "dirac_orbit", "point", "period"} |
/// {"kind": "empirical", "samples", "weights"}
InvariantMeasure parse_measure(const json& j, std::size_t dim);

/// A coordinate list, or the string "random" for a seeded uniform point.
TorusPoint parse_point(const json& j, std::size_t dim, std::mt19937_64& rng, const std::string& where);

/// {"kind": "fiber_translation", "r"} | {"kind": "rotation", "v"} |
/// {"kind": "affine", "matrix", "v", "fiber_shift"}; numbers exact.
ExactAffineAutomorphism parse_exact(const json& j, std::size_t dim, const std::string& where);

/// {"genus": g, "pairs": [[alpha, beta], ...]}
SeifertData parse_seifert(const json& j);

}  // namespace tnum::config
