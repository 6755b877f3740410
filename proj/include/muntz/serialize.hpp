#pragma once

// JSON forms used in run records:
//   MuntzPoly     -> [{"exponent": e, "coefficient": a}, ...]
//   ExponentRule  -> {"kind": ..., "parameters": {...}, "length": n}
//   NormResult    -> {"value": v, "argmax": x | null, "error_radius": r}

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "muntz/norms.hpp"
#include "muntz/poly.hpp"

namespace muntz {

using json = nlohmann::json;

inline json to_json(const MuntzPoly& f) {
    json out = json::array();
    for (const Term& term : f.terms()) out.push_back({{"exponent", term.exponent}, {"coefficient", term.coefficient}});
    return out;
}

inline MuntzPoly poly_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("polynomial must be a JSON array of terms");
    std::vector<Term> terms;
    for (const json& t : j) terms.push_back({t.at("exponent").get<double>(), t.at("coefficient").get<double>()});
    return MuntzPoly(std::move(terms));
}

inline json to_json(const ExponentRule& rule) {
    json params = json::object();
    switch (rule.kind()) {
        case ExponentRule::Kind::explicit_list: params["values"] = rule.explicit_values(); break;
        case ExponentRule::Kind::geometric:
            params["base"] = rule.base();
            params["ratio"] = rule.ratio();
            break;
        case ExponentRule::Kind::power: params["p"] = rule.power_exponent(); break;
    }
    return {{"kind", to_string(rule.kind())}, {"parameters", params}, {"length", rule.length()}};
}

inline ExponentRule rule_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("rule must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "kind" && key != "parameters" && key != "length") {
            throw std::invalid_argument("unknown rule key '" + key + "'");
        }
    }
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("parameters", json::object());
    auto length = [&] {
        const long long n = j.at("length").get<long long>();
        if (n <= 0) throw std::invalid_argument("rule length must be positive");
        return std::size_t(n);
    };
    if (kind == "explicit") {
        auto values = params.at("values").get<std::vector<double>>();
        if (j.contains("length")) {
            const std::size_t n = length();
            if (n > values.size()) throw std::invalid_argument("rule length exceeds the explicit list");
            values.resize(n);
        }
        return ExponentRule::explicit_list(std::move(values));
    }
    if (kind == "geometric") {
        return ExponentRule::geometric(params.at("base").get<double>(), params.at("ratio").get<double>(), length());
    }
    if (kind == "power") return ExponentRule::power(params.at("p").get<double>(), length());
    throw std::invalid_argument("unknown rule kind '" + kind + "'");
}

inline json to_json(const NormResult& r) {
    return {{"value", r.value},
            {"argmax", r.argmax ? json(*r.argmax) : json(nullptr)},
            {"error_radius", r.error_radius}};
}

}  // namespace muntz
