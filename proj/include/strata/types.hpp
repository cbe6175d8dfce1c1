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

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strata/diagram.hpp"
#include "strata/error.hpp"

namespace strata {

/// A singularity type as named in the closed-form tables.
///   ordinary(p)        f^{(p)} vanishes at x (A1 = ordinary(1), the discriminant)
///   A<k>, D<k>, E6, E8 simple singularities
///   P8, X9, Q10, S11, U12 unimodal types
///   corank(r)          corank-r point of multiplicity two with cubic jet
///   reducible(r1xp1,...|aut)  reducible jet with factors of degree p_j and
///                             multiplicity r_j, divided by |Aut|
///   T(p,q,r)           T_pqr
struct TypeId {
    enum class Family { Ordinary, A, D, E, P8, X9, Q10, S11, U12, Corank, Reducible, T };
    Family family = Family::A;
    int index = 1;
    std::vector<std::pair<int, int>> factors; // (r_j, p_j) for reducible jets
    int aut = 1;
    std::vector<int> pqr;

    std::string name() const {
        switch (family) {
        case Family::Ordinary: return "ordinary(" + std::to_string(index) + ")";
        case Family::A: return "A" + std::to_string(index);
        case Family::D: return "D" + std::to_string(index);
        case Family::E: return "E" + std::to_string(index);
        case Family::P8: return "P8";
        case Family::X9: return "X9";
        case Family::Q10: return "Q10";
        case Family::S11: return "S11";
        case Family::U12: return "U12";
        case Family::Corank: return "corank(" + std::to_string(index) + ")";
        case Family::Reducible: {
            std::string s = "reducible(";
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (i)
                    s += ',';
                s += std::to_string(factors[i].first) + "x" + std::to_string(factors[i].second);
            }
            if (aut != 1)
                s += "|" + std::to_string(aut);
            return s + ")";
        }
        case Family::T:
            return "T(" + std::to_string(pqr[0]) + "," + std::to_string(pqr[1]) + "," + std::to_string(pqr[2]) + ")";
        }
        return "?";
    }

    bool operator==(const TypeId &) const = default;

    static TypeId ordinary(int p) { return TypeId{Family::Ordinary, p, {}, 1, {}}; }
    static TypeId A(int k) { return TypeId{Family::A, k, {}, 1, {}}; }
    static TypeId D(int k) { return TypeId{Family::D, k, {}, 1, {}}; }
    static TypeId E(int k) { return TypeId{Family::E, k, {}, 1, {}}; }
    static TypeId corank(int r) { return TypeId{Family::Corank, r, {}, 1, {}}; }
    static TypeId reducible(std::vector<std::pair<int, int>> f, int aut) {
        return TypeId{Family::Reducible, 0, std::move(f), aut, {}};
    }
    static TypeId of(Family f) { return TypeId{f, 0, {}, 1, {}}; }
};

namespace detail {

inline int parse_positive(std::string_view s, std::string_view whole) {
    if (s.empty() || s.size() > 6)
        throw Error(ErrorKind::ParseError, "bad number in type name '" + std::string(whole) + "'");
    int v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw Error(ErrorKind::ParseError, "bad number in type name '" + std::string(whole) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

inline std::string_view inner_args(std::string_view s, std::string_view head) {
    std::string_view rest = s.substr(head.size());
    if (rest.size() >= 2 && (rest.front() == '(' || rest.front() == '[') && (rest.back() == ')' || rest.back() == ']'))
        return rest.substr(1, rest.size() - 2);
    if (!rest.empty() && rest.front() == ':')
        return rest.substr(1);
    return rest;
}

} // namespace detail

inline TypeId parse_type(std::string_view s) {
    using F = TypeId::Family;
    auto starts = [&](std::string_view p) { return s.substr(0, p.size()) == p; };
    if (s == "discriminant" || s == "A1")
        return TypeId::A(1);
    if (s == "P8")
        return TypeId::of(F::P8);
    if (s == "X9")
        return TypeId::of(F::X9);
    if (s == "Q10")
        return TypeId::of(F::Q10);
    if (s == "S11")
        return TypeId::of(F::S11);
    if (s == "U12")
        return TypeId::of(F::U12);
    if (starts("ordinary"))
        return TypeId::ordinary(detail::parse_positive(detail::inner_args(s, "ordinary"), s));
    if (starts("corank"))
        return TypeId::corank(detail::parse_positive(detail::inner_args(s, "corank"), s));
    if (starts("reducible")) {
        std::string_view args = detail::inner_args(s, "reducible");
        int aut = 1;
        if (auto bar = args.find('|'); bar != std::string_view::npos) {
            aut = detail::parse_positive(args.substr(bar + 1), s);
            args = args.substr(0, bar);
        }
        std::vector<std::pair<int, int>> factors;
        while (!args.empty()) {
            auto comma = args.find(',');
            std::string_view f = args.substr(0, comma);
            auto x = f.find('x');
            if (x == std::string_view::npos)
                throw Error(ErrorKind::ParseError, "reducible factor must be <r>x<p> in '" + std::string(s) + "'");
            factors.emplace_back(detail::parse_positive(f.substr(0, x), s), detail::parse_positive(f.substr(x + 1), s));
            if (comma == std::string_view::npos)
                break;
            args = args.substr(comma + 1);
        }
        if (factors.empty() || aut < 1)
            throw Error(ErrorKind::ParseError, "reducible type needs factors: '" + std::string(s) + "'");
        return TypeId::reducible(std::move(factors), aut);
    }
    if (starts("T")) {
        std::string_view args = detail::inner_args(s, "T");
        std::vector<int> v;
        while (!args.empty()) {
            auto comma = args.find(',');
            v.push_back(detail::parse_positive(args.substr(0, comma), s));
            if (comma == std::string_view::npos)
                break;
            args = args.substr(comma + 1);
        }
        if (v.size() != 3)
            throw Error(ErrorKind::ParseError, "T needs three indices: '" + std::string(s) + "'");
        TypeId t = TypeId::of(F::T);
        t.pqr = v;
        return t;
    }
    if (s.size() >= 2 && (s[0] == 'A' || s[0] == 'D' || s[0] == 'E')) {
        int k = detail::parse_positive(s.substr(1), s);
        if (s[0] == 'A' && k >= 1)
            return TypeId::A(k);
        if (s[0] == 'D' && k >= 4)
            return TypeId::D(k);
        if (s[0] == 'E' && (k == 6 || k == 8))
            return TypeId::E(k);
    }
    throw Error(ErrorKind::ParseError, "unknown singularity type '" + std::string(s) + "'");
}

/// Smallest ambient dimension for which the type is defined here.
inline int min_dimension(const TypeId &t) {
    using F = TypeId::Family;
    switch (t.family) {
    case F::Ordinary: return 1;
    case F::P8:
    case F::Q10:
    case F::S11:
    case F::U12:
    case F::T: return 3;
    case F::Corank: return std::max(1, t.index);
    default: return 2;
    }
}

/// Support of a representative normal form in n variables, when the type
/// has a commode one (Q10 and S11 do not; their closed forms stand alone).
inline std::vector<Exponent> representative_support(const TypeId &t, int n) {
    using F = TypeId::Family;
    if (n < min_dimension(t))
        throw Error(ErrorKind::OutOfValidity, t.name() + " needs n >= " + std::to_string(min_dimension(t)));
    std::vector<Exponent> s;
    auto mono = [&](std::initializer_list<std::pair<int, int>> parts) {
        Exponent e(n, 0);
        for (auto [axis, pw] : parts)
            e[axis] = pw;
        s.push_back(e);
    };
    int core = 1;
    switch (t.family) {
    case F::Ordinary:
        for (int i = 0; i < n; ++i)
            mono({{i, t.index + 1}});
        return s;
    case F::A:
        mono({{0, t.index + 1}});
        break;
    case F::D:
        mono({{0, t.index - 1}});
        mono({{0, 1}, {1, 2}});
        mono({{1, 3}});
        core = 2;
        break;
    case F::E:
        mono({{0, 3}});
        mono({{1, t.index == 6 ? 4 : 5}});
        core = 2;
        break;
    case F::P8:
        mono({{0, 3}});
        mono({{1, 3}});
        mono({{2, 3}});
        core = 3;
        break;
    case F::X9:
        mono({{0, 4}});
        mono({{1, 4}});
        core = 2;
        break;
    case F::U12:
        mono({{0, 3}});
        mono({{1, 3}});
        mono({{2, 4}});
        core = 3;
        break;
    case F::Corank:
        for (int i = 0; i < t.index; ++i)
            mono({{i, 3}});
        core = t.index;
        break;
    case F::T:
        mono({{0, t.pqr[0]}});
        mono({{1, t.pqr[1]}});
        mono({{2, t.pqr[2]}});
        mono({{0, 1}, {1, 1}, {2, 1}});
        core = 3;
        break;
    default:
        throw Error(ErrorKind::Unsupported, "no commode representative for " + t.name());
    }
    for (int i = core; i < n; ++i)
        mono({{i, 2}});
    return s;
}

inline NewtonDiagram representative_diagram(const TypeId &t, int n) {
    return build_diagram(n, representative_support(t, n), t.name());
}

} // namespace strata
