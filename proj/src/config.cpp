#include "tnum/config.hpp"

#include <algorithm>
#include <cmath>

#include "tnum/errors.hpp"

namespace tnum::config {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
    if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing required key '" + key + "'");
  }
  return obj.at(key);
}

double get_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(where + ": must be finite");
  return d;
}

std::int64_t get_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw ValidationError(where + ": expected an integer");
}

std::size_t get_count(const json& v, const std::string& where) {
  const std::int64_t n = get_int(v, where);
  if (n < 0) throw ValidationError(where + ": must be nonnegative");
  return static_cast<std::size_t>(n);
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ValidationError(where + ": expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": expected a string");
  return v.get<std::string>();
}

Vec get_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ValidationError(where + ": expected a nonempty array of numbers");
  Vec out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_double(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Rational get_rational(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (v.is_number_integer() || v.is_number_float()) {
    if (v.is_number_float() && std::floor(v.get<double>()) != v.get<double>()) {
      throw ValidationError(where + ": non-integer exact values must be strings such as \"1/3\"");
    }
    return Rational(mpz_class(std::to_string(get_int(v, where))));
  }
  throw ValidationError(where + ": expected an exact number");
}

CohomologyClass parse_class(const json& j) {
  check_keys(j, {"coefficients", "entries"}, "class");
  const std::string kind = j.contains("coefficients") ? get_string(j["coefficients"], "class.coefficients")
                                                      : std::string("integer");
  const json& entries = require(j, "entries", "class");
  if (!entries.is_array() || entries.empty()) throw ValidationError("class.entries: expected a nonempty array");
  if (kind == "integer") {
    std::vector<std::int64_t> e;
    for (std::size_t i = 0; i < entries.size(); ++i)
      e.push_back(get_int(entries[i], "class.entries[" + std::to_string(i) + "]"));
    return CohomologyClass::integral(std::move(e));
  }
  if (kind == "real") return CohomologyClass::real(get_vec(entries, "class.entries"));
  throw ValidationError("class.coefficients: expected \"integer\" or \"real\", got \"" + kind + "\"");
}

json class_to_json(const CohomologyClass& a) {
  json j;
  j["coefficients"] = a.is_integral() ? "integer" : "real";
  if (a.is_integral()) {
    j["entries"] = std::vector<std::int64_t>(a.integer_entries().begin(), a.integer_entries().end());
  } else {
    j["entries"] = Vec(a.entries().begin(), a.entries().end());
  }
  return j;
}

TrigPolynomial parse_trig(const json& j, std::size_t dim, const std::string& where) {
  check_keys(j, {"constant", "terms"}, where);
  const double constant = j.contains("constant") ? get_double(j["constant"], where + ".constant") : 0.0;
  std::vector<TrigPolynomial::Term> terms;
  if (j.contains("terms")) {
    const json& ts = j["terms"];
    if (!ts.is_array()) throw ValidationError(where + ".terms: expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      check_keys(ts[i], {"k", "sin", "cos"}, w);
      TrigPolynomial::Term t;
      const json& k = require(ts[i], "k", w);
      if (k.is_array()) {
        for (std::size_t m = 0; m < k.size(); ++m)
          t.frequency.push_back(static_cast<int>(get_int(k[m], w + ".k")));
      } else {
        t.frequency.push_back(static_cast<int>(get_int(k, w + ".k")));
      }
      require_same_dim(dim, t.frequency.size(), "trigonometric frequency");
      if (ts[i].contains("sin")) t.sin_coef = get_double(ts[i]["sin"], w + ".sin");
      if (ts[i].contains("cos")) t.cos_coef = get_double(ts[i]["cos"], w + ".cos");
      terms.push_back(std::move(t));
    }
  }
  return TrigPolynomial(dim, constant, std::move(terms));
}

namespace {

Vec optional_vec(const json& j, const char* key, Vec fallback, const std::string& where) {
  return j.contains(key) ? get_vec(j[key], where + "." + key) : fallback;
}

IntMatrix parse_matrix(const json& m, const std::string& where) {
  if (!m.is_array() || m.empty()) throw ValidationError(where + ": expected a square array of rows");
  const std::size_t n = m.size();
  std::vector<std::int64_t> entries;
  for (std::size_t r = 0; r < n; ++r) {
    if (!m[r].is_array() || m[r].size() != n) throw ValidationError(where + ": matrix must be square");
    for (std::size_t c = 0; c < n; ++c) entries.push_back(get_int(m[r][c], where));
  }
  return IntMatrix(n, std::move(entries));
}

}  // namespace

BundleAutomorphism parse_automorphism(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  const std::string family = get_string(require(j, "family", where), where + ".family");
  auto shift = [&] { return j.contains("fiber_shift") ? get_double(j["fiber_shift"], where + ".fiber_shift") : 0.0; };

  if (family == "identity") {
    check_keys(j, {"family", "dim", "fiber_shift"}, where);
    const std::size_t dim = get_count(require(j, "dim", where), where + ".dim");
    if (dim == 0) throw ValidationError(where + ".dim must be >= 1");
    return {maps::identity(dim), shift()};
  }
  if (family == "rotation") {
    check_keys(j, {"family", "v", "fiber_shift"}, where);
    return {maps::rotation(get_vec(require(j, "v", where), where + ".v")), shift()};
  }
  if (family == "affine") {
    check_keys(j, {"family", "matrix", "v", "fiber_shift"}, where);
    IntMatrix m = parse_matrix(require(j, "matrix", where), where + ".matrix");
    Vec v = optional_vec(j, "v", Vec(m.dim(), 0.0), where);
    return {maps::affine(std::move(m), std::move(v)), shift()};
  }
  if (family == "shear") {
    check_keys(j, {"family", "k", "v", "fiber_shift"}, where);
    return {maps::shear(get_int(require(j, "k", where), where + ".k"), optional_vec(j, "v", {0.0, 0.0}, where)),
            shift()};
  }
  if (family == "arnold") {
    check_keys(j, {"family", "omega", "K", "fiber_shift"}, where);
    return {maps::arnold(get_double(require(j, "omega", where), where + ".omega"),
                         get_double(require(j, "K", where), where + ".K")),
            shift()};
  }
  if (family == "sin_shear") {
    check_keys(j, {"family", "eps", "v", "fiber_shift"}, where);
    return {maps::sin_shear(get_double(require(j, "eps", where), where + ".eps"),
                            optional_vec(j, "v", {0.0, 0.0}, where)),
            shift()};
  }
  if (family == "skew") {
    check_keys(j, {"family", "omega", "c", "fiber_shift"}, where);
    return {maps::skew(get_double(require(j, "omega", where), where + ".omega"),
                       parse_trig(require(j, "c", where), 1, where + ".c")),
            shift()};
  }
  throw ValidationError(where + ".family: unknown map family '" + family + "'");
}

Isotopy parse_isotopy(const json& j) {
  const std::string where = "isotopy";
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  const std::string family = get_string(require(j, "family", where), where + ".family");
  if (family == "linear") {
    check_keys(j, {"family", "v"}, where);
    return isotopies::linear(get_vec(require(j, "v", where), where + ".v"));
  }
  if (family == "skew") {
    check_keys(j, {"family", "omega", "c"}, where);
    return isotopies::skew(get_double(require(j, "omega", where), where + ".omega"),
                           parse_trig(require(j, "c", where), 1, where + ".c"));
  }
  if (family == "sin_shear") {
    check_keys(j, {"family", "eps", "v"}, where);
    return isotopies::sin_shear(get_double(require(j, "eps", where), where + ".eps"),
                                optional_vec(j, "v", {0.0, 0.0}, where));
  }
  if (family == "arnold") {
    check_keys(j, {"family", "omega", "K"}, where);
    return isotopies::arnold(get_double(require(j, "omega", where), where + ".omega"),
                             get_double(require(j, "K", where), where + ".K"));
  }
  throw ValidationError(where + ".family: unknown isotopy family '" + family + "'");
}

InvariantMeasure parse_measure(const json& j, std::size_t dim) {
  const std::string where = "measure";
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  const std::string kind = get_string(require(j, "kind", where), where + ".kind");
  if (kind == "lebesgue") {
    check_keys(j, {"kind"}, where);
    return InvariantMeasure::lebesgue();
  }
  if (kind == "dirac_orbit") {
    check_keys(j, {"kind", "point", "period"}, where);
    Vec p = get_vec(require(j, "point", where), where + ".point");
    require_same_dim(dim, p.size(), "measure.point");
    return InvariantMeasure::dirac_orbit(TorusPoint(std::move(p)),
                                         get_count(require(j, "period", where), where + ".period"));
  }
  if (kind == "empirical") {
    check_keys(j, {"kind", "samples", "weights"}, where);
    const json& s = require(j, "samples", where);
    if (!s.is_array() || s.empty()) throw ValidationError(where + ".samples: expected a nonempty array");
    std::vector<TorusPoint> samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Vec p = get_vec(s[i], where + ".samples[" + std::to_string(i) + "]");
      require_same_dim(dim, p.size(), "measure.samples");
      samples.emplace_back(std::move(p));
    }
    Vec w = j.contains("weights") ? get_vec(j["weights"], where + ".weights")
                                  : Vec(samples.size(), 1.0 / static_cast<double>(samples.size()));
    return InvariantMeasure::empirical(std::move(samples), std::move(w));
  }
  throw ValidationError(where + ".kind: unknown measure kind '" + kind + "'");
}

TorusPoint parse_point(const json& j, std::size_t dim, std::mt19937_64& rng, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "random") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec p(dim);
    for (double& c : p) c = u(rng);
    return TorusPoint(std::move(p));
  }
  Vec p = get_vec(j, where);
  require_same_dim(dim, p.size(), where.c_str());
  return TorusPoint(std::move(p));
}

ExactAffineAutomorphism parse_exact(const json& j, std::size_t dim, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  const std::string kind = get_string(require(j, "kind", where), where + ".kind");
  auto exact_vec = [&](const json& v, const std::string& w) {
    if (!v.is_array()) throw ValidationError(w + ": expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_rational(v[i], w + "[" + std::to_string(i) + "]"));
    require_same_dim(dim, out.size(), w.c_str());
    return out;
  };
  if (kind == "fiber_translation") {
    check_keys(j, {"kind", "r"}, where);
    return ExactAffineAutomorphism::fiber_translation(dim, get_rational(require(j, "r", where), where + ".r"));
  }
  if (kind == "rotation") {
    check_keys(j, {"kind", "v"}, where);
    return ExactAffineAutomorphism::rotation(exact_vec(require(j, "v", where), where + ".v"));
  }
  if (kind == "affine") {
    check_keys(j, {"kind", "matrix", "v", "fiber_shift"}, where);
    IntMatrix m = parse_matrix(require(j, "matrix", where), where + ".matrix");
    require_same_dim(dim, m.dim(), (where + ".matrix").c_str());
    std::vector<Rational> v = j.contains("v") ? exact_vec(j["v"], where + ".v")
                                              : std::vector<Rational>(dim, Rational(0));
    Rational c = j.contains("fiber_shift") ? get_rational(j["fiber_shift"], where + ".fiber_shift") : Rational(0);
    return ExactAffineAutomorphism(std::move(m), std::move(v), std::move(c));
  }
  throw ValidationError(where + ".kind: unknown exact generator kind '" + kind + "'");
}

SeifertData parse_seifert(const json& j) {
  check_keys(j, {"genus", "pairs"}, "seifert");
  SeifertData d;
  d.genus = j.contains("genus") ? get_int(j["genus"], "seifert.genus") : 0;
  const json& pairs = require(j, "pairs", "seifert");
  if (!pairs.is_array()) throw ValidationError("seifert.pairs: expected an array of [alpha, beta]");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string w = "seifert.pairs[" + std::to_string(i) + "]";
    if (!pairs[i].is_array() || pairs[i].size() != 2) throw ValidationError(w + ": expected [alpha, beta]");
    d.pairs.push_back({get_int(pairs[i][0], w), get_int(pairs[i][1], w)});
  }
  d.validate();
  return d;
}

}  // namespace tnum::config
