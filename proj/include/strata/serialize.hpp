/*
 * Copyright 2026 The strata authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <string>

#include "strata/ring.hpp"

namespace strata {

inline nlohmann::ordered_json spec_to_json(const RingSpec &spec) {
    nlohmann::ordered_json j;
    j["n"] = spec.n;
    j["num_y"] = spec.num_y;
    j["f_cap"] = spec.f_cap;
    j["d_symbolic"] = spec.d_symbolic;
    j["basis"] = spec.basis == Basis::F ? "F" : "Q";
    j["k"] = spec.k;
    return j;
}

inline RingSpec spec_from_json(const nlohmann::json &j) {
    try {
        RingSpec s;
        s.n = j.at("n").get<int>();
        s.num_y = j.at("num_y").get<int>();
        s.f_cap = j.at("f_cap").get<int>();
        s.d_symbolic = j.value("d_symbolic", true);
        std::string basis = j.value("basis", std::string("F"));
        if (basis != "F" && basis != "Q")
            throw Error(ErrorKind::ParseError, "basis must be F or Q");
        s.basis = basis == "F" ? Basis::F : Basis::Q;
        s.k = j.value("k", 0);
        s.validate();
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("ring spec: ") + e.what());
    }
}

/// Canonical JSON: terms sorted lexicographically by exponent tuple.
inline nlohmann::ordered_json to_json(const ClassPoly &a) {
    nlohmann::ordered_json j;
    j["spec"] = spec_to_json(a.spec());
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto &[m, c] : a.terms()) {
        nlohmann::ordered_json exp = nlohmann::ordered_json::array();
        for (int s = 0; s < a.spec().slots(); ++s)
            exp.push_back(static_cast<int>(m[s]));
        terms.push_back({{"exp", exp}, {"coef", c.str()}});
    }
    j["terms"] = terms;
    return j;
}

inline ClassPoly from_json(const nlohmann::json &j) {
    RingSpec spec = spec_from_json(j.at("spec"));
    std::vector<std::pair<std::vector<int>, DPoly>> terms;
    try {
        for (const auto &t : j.at("terms"))
            terms.emplace_back(t.at("exp").get<std::vector<int>>(), DPoly::parse(t.at("coef").get<std::string>()));
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("class terms: ") + e.what());
    }
    return make_poly(spec, terms);
}

/// Human-readable text such as "(d-1)*X^2*F + 3*X*F^2"; highest terms first.
inline std::string to_text(const ClassPoly &a) {
    if (a.is_zero())
        return "0";
    std::string out;
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        const auto &[m, c] = *it;
        std::string coef = c.str();
        const auto nonzero = c.coeffs().size() - std::count(c.coeffs().begin(), c.coeffs().end(), 0);
        bool negative = nonzero == 1 && c.coeff(c.degree()) < 0;
        if (negative)
            coef = coef.substr(1);
        if (nonzero > 1)
            coef = "(" + coef + ")";
        std::string mono;
        for (int s = 0; s < a.spec().slots(); ++s) {
            if (m[s] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += a.spec().var_name(s);
            if (m[s] > 1)
                mono += "^" + std::to_string(m[s]);
        }
        std::string term;
        if (mono.empty())
            term = coef;
        else if (coef == "1")
            term = mono;
        else
            term = coef + "*" + mono;
        if (out.empty())
            out = negative ? "-" + term : term;
        else
            out += negative ? " - " + term : " + " + term;
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const DPoly &p) { return os << p.str(); }
inline std::ostream &operator<<(std::ostream &os, const ClassPoly &a) { return os << to_text(a); }

} // namespace strata
