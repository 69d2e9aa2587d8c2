#pragma once

// JSON front end: payload schemas, decoding, command dispatch and encoding.
// Integers travel as decimal strings; inputs also accept JSON integers.

#include "projdyn/cone.hpp"
#include "projdyn/monomial_dynamics.hpp"
#include "projdyn/mult_relations.hpp"
#include "projdyn/normal_form.hpp"
#include "projdyn/spectral.hpp"
#include "projdyn/sym_power.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projdyn::cli {

using json = nlohmann::ordered_json;

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"relations", "normal-form", "growth", "decompose", "cone", "simulate"};
    return names;
}

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JobRequest {
    std::string command;
    json payload;
    std::optional<std::int64_t> seed;  // reserved for randomized generators; no current command draws from it
};

struct JobResult {
    json output;
    int exit_code = 0;
};

// ---------------------------------------------------------------------------
// Schemas (JSON Schema 2020-12 subset).

namespace schema_detail {

inline json defs() {
    static const json d = json::parse(R"({
  "int_string": {"type": "string", "pattern": "^-?[0-9]+$"},
  "nat_string": {"type": "string", "pattern": "^[0-9]+$"},
  "rational_string": {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"},
  "int_in": {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^\\s*(-|−)?[0-9]+\\s*$"}]},
  "nat_in": {"anyOf": [{"type": "integer", "minimum": 0}, {"type": "string", "pattern": "^\\s*[0-9]+\\s*$"}]},
  "rational_in": {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^\\s*(-|−)?[0-9]+\\s*(/\\s*[0-9]+\\s*)?$"}]},
  "eigenvalue_in": {"anyOf": [
    {"type": "string", "minLength": 1},
    {"type": "integer"},
    {"type": "object",
     "properties": {
       "torsion": {"type": "object",
                   "properties": {"order": {"$ref": "#/$defs/nat_in"}, "exp": {"$ref": "#/$defs/int_in"}},
                   "required": ["order", "exp"]},
       "magnitude": {"type": "array",
                     "items": {"type": "array", "minItems": 2, "maxItems": 2,
                               "prefixItems": [{"$ref": "#/$defs/nat_in"}, {"$ref": "#/$defs/int_in"}]}}
     }}
  ]},
  "eigenvalue_out": {"type": "object",
    "properties": {
      "torsion": {"type": "object",
                  "properties": {"order": {"$ref": "#/$defs/nat_string"}, "exp": {"$ref": "#/$defs/nat_string"}},
                  "required": ["order", "exp"], "additionalProperties": false},
      "magnitude": {"type": "array",
                    "items": {"type": "array", "minItems": 2, "maxItems": 2,
                              "prefixItems": [{"$ref": "#/$defs/nat_string"}, {"$ref": "#/$defs/int_string"}]}},
      "text": {"type": "string"}
    },
    "required": ["torsion", "magnitude", "text"], "additionalProperties": false},
  "qmatrix_in": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/rational_in"}}},
  "imatrix_in": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/int_in"}}},
  "imatrix_out": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/int_string"}}},
  "spectral_in": {"type": "object",
    "properties": {
      "blocks": {"type": "array", "minItems": 1,
                 "items": {"type": "object",
                           "properties": {"eigenvalue": {"$ref": "#/$defs/eigenvalue_in"}, "size": {"$ref": "#/$defs/nat_in"}},
                           "required": ["eigenvalue", "size"]}},
      "normalized": {"type": "boolean"}
    },
    "required": ["blocks"]},
  "spectral_out": {"type": "object",
    "properties": {
      "blocks": {"type": "array",
                 "items": {"type": "object",
                           "properties": {"eigenvalue": {"$ref": "#/$defs/eigenvalue_out"}, "size": {"$ref": "#/$defs/nat_string"}},
                           "required": ["eigenvalue", "size"], "additionalProperties": false}},
      "normalized": {"type": "boolean"},
      "dimension": {"$ref": "#/$defs/nat_string"}
    },
    "required": ["blocks", "normalized", "dimension"], "additionalProperties": false},
  "monomial_in": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/nat_in"}},
  "monomial_out": {"type": "array", "items": {"$ref": "#/$defs/nat_string"}},
  "polynomial_in": {"type": "array",
    "items": {"type": "array", "minItems": 2, "maxItems": 2,
              "prefixItems": [{"$ref": "#/$defs/monomial_in"}, {"$ref": "#/$defs/rational_in"}]}},
  "polynomial_out": {"type": "array",
    "items": {"type": "array", "minItems": 2, "maxItems": 2,
              "prefixItems": [{"$ref": "#/$defs/monomial_out"}, {"$ref": "#/$defs/rational_string"}]}},
  "lattice_out": {"type": "object",
    "properties": {"ambient_dim": {"$ref": "#/$defs/nat_string"}, "rank": {"$ref": "#/$defs/nat_string"},
                   "basis": {"$ref": "#/$defs/imatrix_out"}},
    "required": ["ambient_dim", "rank", "basis"], "additionalProperties": false},
  "growth_out": {"type": "object",
    "properties": {
      "class": {"type": "string"},
      "kind": {"enum": ["Exponential", "Polynomial", "Bounded"]},
      "degree": {"anyOf": [{"$ref": "#/$defs/nat_string"}, {"type": "null"}]},
      "rate": {"anyOf": [{"type": "number"}, {"type": "null"}]},
      "exact_rate": {"anyOf": [{"$ref": "#/$defs/rational_string"}, {"type": "null"}]},
      "approximate": {"type": "boolean"}
    },
    "required": ["class", "kind", "degree", "rate", "exact_rate", "approximate"], "additionalProperties": false},
  "normal_form_out": {"type": "object",
    "properties": {
      "case": {"enum": ["FiniteOrder", "M1", "M2"]},
      "order": {"anyOf": [{"$ref": "#/$defs/nat_string"}, {"type": "null"}]},
      "k": {"$ref": "#/$defs/nat_string"},
      "target": {"$ref": "#/$defs/spectral_out"},
      "conjugator": {"anyOf": [{"$ref": "#/$defs/imatrix_out"}, {"type": "null"}]},
      "conjugator_status": {"enum": ["not_applicable", "monomial", "not_constructed"]}
    },
    "required": ["case", "order", "k", "target", "conjugator", "conjugator_status"], "additionalProperties": false},
  "normal_form_in": {"type": "object",
    "properties": {
      "case": {"enum": ["FiniteOrder", "M1", "M2"]},
      "k": {"$ref": "#/$defs/nat_in"},
      "order": {"anyOf": [{"$ref": "#/$defs/nat_in"}, {"type": "null"}]},
      "target": {"$ref": "#/$defs/spectral_in"}
    },
    "required": ["case", "k", "target"]}
})");
    return d;
}

inline json with_defs(json body) {
    json s = {{"$schema", "https://json-schema.org/draft/2020-12/schema"}};
    for (auto& [k, v] : body.items()) s[k] = v;
    s["$defs"] = defs();
    return s;
}

inline json ref(const std::string& name) { return {{"$ref", "#/$defs/" + name}}; }
inline json nullable(const json& s) { return {{"anyOf", json::array({s, {{"type", "null"}}})}}; }
inline json array_of(const json& s) { return {{"type", "array"}, {"items", s}}; }

inline json object(json properties, std::vector<std::string> required, bool closed = true) {
    json s = {{"type", "object"}, {"properties", std::move(properties)}, {"required", std::move(required)}};
    if (closed) s["additionalProperties"] = false;
    return s;
}

inline json matrix_or_spectral_payload() {
    return {{"type", "object"},
            {"properties",
             {{"matrix", ref("qmatrix_in")},
              {"blocks", json(defs()["spectral_in"]["properties"]["blocks"])},
              {"normalized", {{"type", "boolean"}}}}},
            {"oneOf", json::array({{{"required", {"matrix"}}}, {{"required", {"blocks"}}}})},
            {"additionalProperties", false}};
}

}  // namespace schema_detail

// {"payload": schema, "result": schema} for a command.
inline json schema_for(const std::string& command) {
    using namespace schema_detail;
    json payload, result;
    if (command == "relations") {
        const json values = {{"type", "array"}, {"minItems", 1}, {"items", ref("eigenvalue_in")}};
        payload = {{"anyOf", json::array({values, object({{"values", values}}, {"values"})})}};
        result = object({{"values", array_of(ref("eigenvalue_out"))},
                         {"exact", ref("lattice_out")},
                         {"up_to_torsion", ref("lattice_out")},
                         {"independent", {{"type", "boolean"}}},
                         {"partition", object({{"k_torsion", ref("nat_string")},
                                               {"conjugator", ref("imatrix_out")},
                                               {"transformed", array_of(ref("eigenvalue_out"))}},
                                              {"k_torsion", "conjugator", "transformed"})}},
                        {"values", "exact", "up_to_torsion", "independent", "partition"});
    } else if (command == "normal-form") {
        payload = matrix_or_spectral_payload();
        result = ref("normal_form_out");
    } else if (command == "growth") {
        payload = matrix_or_spectral_payload();
        const json qu = object({{"kind", {{"enum", {"FiniteOrder", "QuasiUnipotentInfinite", "HasEigenvalueOffUnitCircle"}}}},
                                {"order", nullable(ref("nat_string"))},
                                {"unipotent_index", ref("nat_string")},
                                {"bound", ref("nat_string")}},
                               {"kind", "order", "unipotent_index", "bound"});
        result = object({{"growth", ref("growth_out")},
                         {"source", {{"enum", {"spectral", "integer_operator"}}}},
                         {"spectral", nullable(ref("spectral_out"))},
                         {"quasi_unipotent", nullable(qu)}},
                        {"growth", "source", "spectral", "quasi_unipotent"});
    } else if (command == "decompose") {
        payload = object({{"blocks", json(defs()["spectral_in"]["properties"]["blocks"])},
                          {"normalized", {{"type", "boolean"}}},
                          {"degree", ref("nat_in")},
                          {"case", {{"enum", {"m1", "m2"}}}},
                          {"generators", {{"type", "array"}, {"items", ref("polynomial_in")}}}},
                         {"blocks", "degree"});
        const json component = object({{"character", array_of(ref("nat_string"))},
                                       {"torsion_index", ref("nat_string")},
                                       {"torsion_modulus", ref("nat_string")},
                                       {"basis", array_of(ref("monomial_out"))}},
                                      {"character", "torsion_index", "torsion_modulus", "basis"});
        const json m1_gen = object({{"p", ref("polynomial_out")}, {"q", ref("monomial_out")}}, {"p", "q"});
        const json chain = object({{"chain_top", ref("polynomial_out")},
                                   {"chain", array_of(ref("polynomial_out"))},
                                   {"q", ref("monomial_out")},
                                   {"base_poly", ref("polynomial_out")},
                                   {"iterate", ref("nat_string")},
                                   {"scalar", ref("eigenvalue_out")}},
                                  {"chain_top", "chain", "q", "base_poly", "iterate", "scalar"});
        result = object({{"case", {{"enum", {"m1", "m2"}}}},
                         {"degree", ref("nat_string")},
                         {"components", nullable(array_of(component))},
                         {"invariant", nullable({{"type", "boolean"}})},
                         {"structure", nullable(array_of(m1_gen))},
                         {"chains", nullable(array_of(chain))}},
                        {"case", "degree", "components", "invariant", "structure", "chains"});
    } else if (command == "cone") {
        payload = object({{"normal_form", ref("normal_form_in")},
                          {"generators", {{"type", "array"}, {"minItems", 1}, {"items", ref("polynomial_in")}}},
                          {"degree", ref("nat_in")}},
                         {"normal_form", "generators", "degree"});
        result = object({{"case", {{"enum", {"M1", "M2"}}}},
                         {"vertex_vanishing", array_of(ref("nat_string"))},
                         {"base_vanishing", array_of(ref("nat_string"))},
                         {"generators", array_of(ref("polynomial_out"))},
                         {"stripped_generators", array_of(ref("polynomial_out"))},
                         {"monomial_factors", array_of(ref("monomial_out"))},
                         {"warnings", array_of({{"type", "string"}})},
                         {"caller_asserted", array_of({{"type", "string"}})}},
                        {"case", "vertex_vanishing", "base_vanishing", "generators", "stripped_generators",
                         "monomial_factors", "warnings", "caller_asserted"});
    } else if (command == "simulate") {
        payload = object({{"matrix", ref("imatrix_in")}, {"steps", ref("nat_in")}, {"compare", {{"type", "boolean"}}}},
                         {"matrix", "steps"});
        result = object({{"degrees", array_of(ref("nat_string"))},
                         {"window", ref("nat_string")},
                         {"predicted", nullable({{"type", "string"}})},
                         {"empirical", nullable({{"type", "string"}})},
                         {"agree", nullable({{"type", "boolean"}})}},
                        {"degrees", "window", "predicted", "empirical", "agree"});
    } else {
        throw MalformedInput("unknown command: " + command);
    }
    return {{"payload", with_defs(payload)}, {"result", with_defs(result)}};
}

inline json error_schema() {
    return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
            {"type", "object"},
            {"properties", {{"error", {{"enum", {"domain_error", "malformed_input"}}}}, {"detail", {{"type", "string"}}}}},
            {"required", {"error", "detail"}},
            {"additionalProperties", false}};
}

// ---------------------------------------------------------------------------
// Validator for the keywords used above.

class SchemaValidator {
public:
    explicit SchemaValidator(json root) : root_(std::move(root)) {}

    // Empty when valid, otherwise a description of the first violation.
    std::optional<std::string> validate(const json& instance) const { return check(root_, instance, "$"); }

private:
    std::optional<std::string> check(const json& s, const json& v, const std::string& path) const {
        if (s.contains("$ref")) {
            const std::string r = s["$ref"];
            const std::string prefix = "#/$defs/";
            if (r.rfind(prefix, 0) != 0) throw std::logic_error("unsupported $ref " + r);
            if (auto e = check(root_["$defs"].at(r.substr(prefix.size())), v, path)) return e;
        }
        if (s.contains("type") && !type_matches(s["type"], v)) return path + ": expected type " + s["type"].dump();
        if (s.contains("enum")) {
            bool found = false;
            for (const auto& e : s["enum"]) found = found || e == v;
            if (!found) return path + ": value not in enum " + s["enum"].dump();
        }
        if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
            return path + ": below minimum";
        if (v.is_string()) {
            const auto& str = v.get_ref<const std::string&>();
            if (s.contains("minLength") && str.size() < s["minLength"].get<std::size_t>()) return path + ": string too short";
            if (s.contains("pattern") && !std::regex_search(str, std::regex(s["pattern"].get<std::string>())))
                return path + ": string does not match " + s["pattern"].get<std::string>();
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) return path + ": too few items";
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) return path + ": too many items";
            std::size_t first = 0;
            if (s.contains("prefixItems")) {
                const auto& pre = s["prefixItems"];
                for (; first < pre.size() && first < v.size(); ++first)
                    if (auto e = check(pre[first], v[first], path + "[" + std::to_string(first) + "]")) return e;
            }
            if (s.contains("items"))
                for (std::size_t i = first; i < v.size(); ++i)
                    if (auto e = check(s["items"], v[i], path + "[" + std::to_string(i) + "]")) return e;
        }
        if (v.is_object()) {
            if (s.contains("required"))
                for (const auto& r : s["required"])
                    if (!v.contains(r.get<std::string>())) return path + ": missing property " + r.get<std::string>();
            const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
            for (const auto& [k, item] : v.items()) {
                if (s.contains("properties") && s["properties"].contains(k)) {
                    if (auto e = check(s["properties"][k], item, path + "." + k)) return e;
                } else if (closed) {
                    return path + ": unexpected property " + k;
                }
            }
        }
        if (s.contains("anyOf")) {
            bool any = false;
            for (const auto& alt : s["anyOf"]) any = any || !check(alt, v, path);
            if (!any) return path + ": matches no allowed alternative";
        }
        if (s.contains("oneOf")) {
            std::size_t hits = 0;
            for (const auto& alt : s["oneOf"]) hits += !check(alt, v, path);
            if (hits != 1) return path + ": must match exactly one alternative";
        }
        return std::nullopt;
    }

    static bool type_matches(const json& t, const json& v) {
        if (t.is_array()) {
            for (const auto& x : t)
                if (type_matches(x, v)) return true;
            return false;
        }
        const std::string name = t;
        if (name == "object") return v.is_object();
        if (name == "array") return v.is_array();
        if (name == "string") return v.is_string();
        if (name == "integer") return v.is_number_integer();
        if (name == "number") return v.is_number();
        if (name == "boolean") return v.is_boolean();
        if (name == "null") return v.is_null();
        return false;
    }

    json root_;
};

// ---------------------------------------------------------------------------
// Decoding. Schema validation runs first, so these only guard semantics.

inline BigInt get_int(const json& v) {
    if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
    return parse_bigint(v.get<std::string>());
}

inline std::size_t get_size(const json& v) {
    const BigInt b = get_int(v);
    if (b < 0 || b > 1'000'000) throw MalformedInput("size out of range: " + b.str());
    return b.convert_to<std::size_t>();
}

inline Rational get_rational(const json& v) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    return parse_rational(v.get<std::string>());
}

inline Eigenvalue get_eigenvalue(const json& v) {
    if (v.is_string()) return parse_eigenvalue(v.get<std::string>());
    if (v.is_number_integer()) return factor_rational(BigInt(v.get<std::int64_t>()), BigInt(1));
    RootOfUnity z;
    if (v.contains("torsion")) z = RootOfUnity(get_int(v["torsion"]["exp"]), get_int(v["torsion"]["order"]));
    FactoredRational::FactorMap f;
    if (v.contains("magnitude"))
        for (const auto& pe : v["magnitude"]) {
            const BigInt p = get_int(pe[0]);
            if (!is_probable_prime(p)) throw MalformedInput("magnitude base is not prime: " + p.str());
            if (f.contains(p)) throw MalformedInput("repeated prime in magnitude: " + p.str());
            const BigInt e = get_int(pe[1]);
            if (e != 0) f[p] = e;
        }
    return {z, FactoredRational(f)};
}

inline QMatrix get_qmatrix(const json& v) {
    const std::size_t cols = v[0].size();
    QMatrix m(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].size() != cols) throw MalformedInput("matrix rows have different lengths");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = get_rational(v[i][j]);
    }
    return m;
}

inline IntMatrix get_imatrix(const json& v) {
    const std::size_t cols = v[0].size();
    IntMatrix m(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].size() != cols) throw MalformedInput("matrix rows have different lengths");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = get_int(v[i][j]);
    }
    return m;
}

inline SpectralData get_spectral(const json& v) {
    SpectralData s;
    for (const auto& b : v["blocks"]) {
        const std::size_t size = get_size(b["size"]);
        if (size == 0) throw MalformedInput("Jordan block size must be positive");
        s.blocks.push_back({get_eigenvalue(b["eigenvalue"]), size});
    }
    const bool claimed = v.value("normalized", true);
    if (claimed && !s.blocks.front().eigenvalue.is_one())
        throw MalformedInput("normalized spectral data must start with eigenvalue 1");
    s.normalized = claimed;
    return claimed ? s : normalize(s);
}

inline MultiIndex get_monomial(const json& v) {
    std::vector<std::uint32_t> e;
    for (const auto& x : v) {
        const BigInt b = get_int(x);
        if (b < 0 || b > 100000) throw MalformedInput("exponent out of range: " + b.str());
        e.push_back(b.convert_to<std::uint32_t>());
    }
    return MultiIndex(std::move(e));
}

inline PolynomialQ get_polynomial(const json& v, std::size_t n_vars) {
    PolynomialQ p(n_vars);
    for (const auto& term : v) {
        const MultiIndex m = get_monomial(term[0]);
        if (m.n_vars() != n_vars) throw MalformedInput("monomial has " + std::to_string(m.n_vars()) + " exponents, expected " + std::to_string(n_vars));
        p.add_term(m, get_rational(term[1]));
    }
    return p;
}

inline std::vector<PolynomialQ> get_polynomials(const json& v, std::size_t n_vars) {
    std::vector<PolynomialQ> out;
    for (const auto& p : v) out.push_back(get_polynomial(p, n_vars));
    return out;
}

// ---------------------------------------------------------------------------
// Encoding.

inline json put(const BigInt& v) { return v.str(); }
inline json put(std::size_t v) { return std::to_string(v); }
inline json put(const Rational& v) { return to_string(v); }

inline json put(const Eigenvalue& v) {
    json mag = json::array();
    for (const auto& [p, e] : v.magnitude().factors()) mag.push_back({p.str(), e.str()});
    return {{"torsion", {{"order", v.torsion().order().str()}, {"exp", v.torsion().exponent().str()}}},
            {"magnitude", mag},
            {"text", to_string(v)}};
}

inline json put(const std::vector<Eigenvalue>& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back(put(e));
    return a;
}

inline json put(const IntMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        a.push_back(row);
    }
    return a;
}

inline json put(const LatticeBasis& l) {
    return {{"ambient_dim", put(l.ambient_dim)}, {"rank", put(l.rank())}, {"basis", put(l.basis)}};
}

inline json put(const SpectralData& s) {
    json blocks = json::array();
    for (const auto& b : s.blocks) blocks.push_back({{"eigenvalue", put(b.eigenvalue)}, {"size", put(b.size)}});
    return {{"blocks", blocks}, {"normalized", s.normalized}, {"dimension", put(s.dimension())}};
}

inline json put(const MultiIndex& m) {
    json a = json::array();
    for (auto e : m.exponents) a.push_back(std::to_string(e));
    return a;
}

inline json put(const PolynomialQ& p) {
    json a = json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) a.push_back({put(it->first), put(it->second)});
    return a;
}

inline json put(const std::vector<PolynomialQ>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(put(p));
    return a;
}

inline json put(const GrowthClass& g) {
    const bool exp = g.kind == GrowthClass::Kind::Exponential;
    return {{"class", to_string(g)},
            {"kind", tag(g)},
            {"degree", g.kind == GrowthClass::Kind::Polynomial ? put(g.degree) : json(nullptr)},
            {"rate", exp ? json(g.rate) : json(nullptr)},
            {"exact_rate", exp && g.exact_rate ? put(*g.exact_rate) : json(nullptr)},
            {"approximate", g.approximate}};
}

inline json put(const NormalFormResult& r) {
    return {{"case", to_string(r.kind)},
            {"order", r.kind == NormalFormResult::Case::FiniteOrder ? put(r.order) : json(nullptr)},
            {"k", put(r.k)},
            {"target", put(r.target)},
            {"conjugator", r.conjugator ? put(*r.conjugator) : json(nullptr)},
            {"conjugator_status", r.conjugator_status()}};
}

inline NormalFormResult get_normal_form(const json& v) {
    NormalFormResult r;
    const std::string c = v["case"];
    r.kind = c == "M1" ? NormalFormResult::Case::M1 : c == "M2" ? NormalFormResult::Case::M2 : NormalFormResult::Case::FiniteOrder;
    r.k = get_size(v["k"]);
    if (v.contains("order") && !v["order"].is_null()) r.order = get_int(v["order"]);
    r.target = get_spectral(v["target"]);
    return r;
}

// ---------------------------------------------------------------------------
// Commands.

namespace commands_detail {

inline SpectralData spectral_from(const json& p) {
    if (p.contains("matrix")) {
        const QMatrix m = get_qmatrix(p["matrix"]);
        if (!m.is_square()) throw MalformedInput("matrix must be square");
        return jordan_data_rational(m);
    }
    return get_spectral(p);
}

inline json relations(const json& p) {
    const json& list = p.is_array() ? p : p["values"];
    std::vector<Eigenvalue> values;
    for (const auto& v : list) values.push_back(get_eigenvalue(v));
    const auto lat = relation_lattice(values);
    const auto part = independence_partition(values);
    return {{"values", put(values)},
            {"exact", put(lat.exact)},
            {"up_to_torsion", put(lat.up_to_torsion)},
            {"independent", lat.exact.is_trivial()},
            {"partition", {{"k_torsion", put(part.k_torsion)}, {"conjugator", put(part.conjugator)}, {"transformed", put(part.transformed)}}}};
}

inline json normal_form(const json& p) { return put(classify_automorphism(spectral_from(p))); }

inline json growth(const json& p) {
    json qu = nullptr;
    std::optional<IntMatrix> integral;
    if (p.contains("matrix")) {
        const QMatrix m = get_qmatrix(p["matrix"]);
        if (!m.is_square()) throw MalformedInput("matrix must be square");
        integral = to_integer(m);
        if (integral && is_unimodular(*integral)) {
            const auto q = quasi_unipotent_test(*integral);
            qu = {{"kind", q.kind == QuasiUnipotentResult::Kind::FiniteOrder              ? "FiniteOrder"
                           : q.kind == QuasiUnipotentResult::Kind::QuasiUnipotentInfinite ? "QuasiUnipotentInfinite"
                                                                                          : "HasEigenvalueOffUnitCircle"},
                  {"order", q.kind == QuasiUnipotentResult::Kind::FiniteOrder ? put(q.order) : json(nullptr)},
                  {"unipotent_index", put(q.unipotent_index)},
                  {"bound", put(q.bound)}};
        } else {
            integral.reset();
        }
    }
    try {
        const auto s = spectral_from(p);
        return {{"growth", put(growth_class(s))}, {"source", "spectral"}, {"spectral", put(s)}, {"quasi_unipotent", qu}};
    } catch (const IrrationalSpectrum&) {
        if (!integral) throw;
        return {{"growth", put(predicted_growth(*integral))}, {"source", "integer_operator"}, {"spectral", nullptr}, {"quasi_unipotent", qu}};
    }
}

inline json decompose(const json& p) {
    const SpectralData s = get_spectral(p);
    const std::size_t d = get_size(p["degree"]);
    if (d == 0) throw MalformedInput("degree must be positive");
    const std::string kind = p.contains("case") ? p["case"].get<std::string>() : (s.is_semisimple() ? "m1" : "m2");
    std::optional<std::vector<PolynomialQ>> gens;
    if (p.contains("generators")) gens = get_polynomials(p["generators"], s.dimension());
    if (gens)
        for (const auto& g : *gens)
            if (g.is_zero() || g.degree() != d) throw MalformedInput("generators must be nonzero forms of the requested degree");
    json out = {{"case", kind}, {"degree", put(d)}, {"components", nullptr}, {"invariant", nullptr}, {"structure", nullptr}, {"chains", nullptr}};
    if (kind == "m1") {
        json comps = json::array();
        for (const auto& c : weight_decomposition(s, static_cast<std::uint32_t>(d))) {
            json ch = json::array(), basis = json::array();
            for (auto e : c.character) ch.push_back(std::to_string(e));
            for (const auto& m : c.basis) basis.push_back(put(m));
            comps.push_back({{"character", ch}, {"torsion_index", put(c.torsion_index)}, {"torsion_modulus", put(c.torsion_modulus)}, {"basis", basis}});
        }
        out["components"] = comps;
        if (gens) {
            const bool inv = invariant_subspace_test(s, *gens);
            out["invariant"] = inv;
            if (inv) {
                json st = json::array();
                for (const auto& g : m1_invariant_structure(s, *gens)) st.push_back({{"p", put(g.p)}, {"q", put(g.q)}});
                out["structure"] = st;
            }
        }
        return out;
    }
    if (!gens) throw MalformedInput("case m2 needs generators");
    m2_layout(s);
    const bool inv = invariant_subspace_test(s, *gens);
    out["invariant"] = inv;
    if (!inv) return out;
    json chains = json::array();
    for (const auto& c : m2_chain_decomposition(s, *gens))
        chains.push_back({{"chain_top", put(c.chain_top)},
                          {"chain", put(c.chain)},
                          {"q", put(c.q)},
                          {"base_poly", put(c.base_poly)},
                          {"iterate", put(c.iterate)},
                          {"scalar", put(c.scalar)}});
    out["chains"] = chains;
    return out;
}

inline json cone(const json& p) {
    const auto r = get_normal_form(p["normal_form"]);
    const auto gens = get_polynomials(p["generators"], r.target.dimension());
    const auto c = cone_structure(r, gens, static_cast<std::uint32_t>(get_size(p["degree"])));
    json vertex = json::array(), base = json::array(), factors = json::array();
    for (auto i : c.vertex_vanishing) vertex.push_back(put(i));
    for (auto i : c.base_vanishing) base.push_back(put(i));
    for (const auto& m : c.monomial_factors) factors.push_back(put(m));
    return {{"case", to_string(c.kind)},
            {"vertex_vanishing", vertex},
            {"base_vanishing", base},
            {"generators", put(c.generators)},
            {"stripped_generators", put(c.stripped_generators)},
            {"monomial_factors", factors},
            {"warnings", c.warnings},
            {"caller_asserted", c.caller_asserted}};
}

// The empirical classifier needs a window of at least 12 steps; shorter runs
// still report only the requested prefix of degrees.
inline constexpr std::size_t kGrowthWindow = 12;

inline json simulate(const json& p) {
    const IntMatrix a = get_imatrix(p["matrix"]);
    if (!a.is_square()) throw MalformedInput("matrix must be square");
    const std::size_t steps = get_size(p["steps"]);
    if (steps == 0) throw MalformedInput("steps must be positive");
    const bool compare = p.value("compare", true);
    const std::size_t window = compare ? std::max(steps, kGrowthWindow) : steps;
    const auto degrees = degree_sequence(a, window);
    json ds = json::array();
    for (std::size_t i = 0; i < steps; ++i) ds.push_back(put(degrees[i]));
    json out = {{"degrees", ds}, {"window", put(window)}, {"predicted", nullptr}, {"empirical", nullptr}, {"agree", nullptr}};
    if (compare) {
        const auto predicted = predicted_growth(a);
        const auto empirical = empirical_growth(degrees);
        bool agree = tag(predicted) == tag(empirical);
        if (agree && predicted.kind == GrowthClass::Kind::Polynomial) agree = predicted.degree == empirical.degree;
        if (agree && predicted.kind == GrowthClass::Kind::Exponential)
            agree = std::abs(empirical.rate - predicted.rate) <= 0.15 * predicted.rate;
        const auto label = [](const GrowthClass& g) {
            return g.kind == GrowthClass::Kind::Exponential ? to_string(GrowthClass::exponential(g.rate)) : to_string(g);
        };
        out["predicted"] = label(predicted);
        out["empirical"] = label(empirical);
        out["agree"] = agree;
    }
    return out;
}

}  // namespace commands_detail

inline json error_json(const std::string& kind, const std::string& detail) { return {{"error", kind}, {"detail", detail}}; }

inline JobResult run(const JobRequest& job) {
    json schema;
    try {
        schema = schema_for(job.command);
    } catch (const MalformedInput& e) {
        return {error_json("malformed_input", e.what()), 1};
    }
    if (auto problem = SchemaValidator(schema["payload"]).validate(job.payload))
        return {error_json("malformed_input", "payload fails schema: " + *problem), 1};
    try {
        json out;
        if (job.command == "relations") out = commands_detail::relations(job.payload);
        else if (job.command == "normal-form") out = commands_detail::normal_form(job.payload);
        else if (job.command == "growth") out = commands_detail::growth(job.payload);
        else if (job.command == "decompose") out = commands_detail::decompose(job.payload);
        else if (job.command == "cone") out = commands_detail::cone(job.payload);
        else out = commands_detail::simulate(job.payload);
        return {std::move(out), 0};
    } catch (const MalformedInput& e) {
        return {error_json("malformed_input", e.what()), 1};
    } catch (const std::invalid_argument& e) {
        return {error_json("malformed_input", e.what()), 1};
    } catch (const json::exception& e) {
        return {error_json("malformed_input", e.what()), 1};
    } catch (const std::exception& e) {
        return {error_json("domain_error", e.what()), 2};
    }
}

// One JSON-lines batch entry: {"command": ..., "payload": ..., "seed": ...}.
inline JobResult run_line(const std::string& line) {
    json req;
    try {
        req = json::parse(line);
    } catch (const json::parse_error& e) {
        return {error_json("malformed_input", e.what()), 1};
    }
    if (!req.is_object() || !req.contains("command") || !req["command"].is_string() || !req.contains("payload"))
        return {error_json("malformed_input", "batch entries need \"command\" and \"payload\""), 1};
    JobRequest job{req["command"], req["payload"], std::nullopt};
    if (req.contains("seed")) {
        if (!req["seed"].is_number_integer()) return {error_json("malformed_input", "seed must be an integer"), 1};
        job.seed = req["seed"].get<std::int64_t>();
    }
    return run(job);
}

}  // namespace projdyn::cli
