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

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strata/checksum.hpp"
#include "strata/closed_forms_data.hpp"
#include "strata/dpoly.hpp"
#include "strata/error.hpp"
#include "strata/formula.hpp"
#include "strata/numeric.hpp"
#include "strata/ring.hpp"
#include "strata/types.hpp"

namespace strata {

/// One block of the closed-form table; every field is formula text.
struct ClosedFormEntry {
    std::string name;
    std::vector<std::string> params;
    std::string k = "2";
    std::string min_n = "1";
    int y = 0;
    std::vector<std::string> gysin;
    std::string cls;
    std::string degree;
    std::string value;
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty())
        out.push_back(trim(cur));
    return out;
}

} // namespace detail

/// Parses the table text. Throws ParseError on malformed blocks.
inline std::map<std::string, ClosedFormEntry> parse_closed_forms(std::string_view text) {
    std::map<std::string, ClosedFormEntry> table;
    ClosedFormEntry *cur = nullptr;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw Error(ErrorKind::ParseError, "closed forms line " + std::to_string(lineno) + ": bad header");
            std::string name = t.substr(1, t.size() - 2);
            if (table.count(name))
                throw Error(ErrorKind::ParseError, "duplicate closed-form entry " + name);
            cur = &table[name];
            cur->name = name;
            continue;
        }
        auto eq = t.find('=');
        if (cur == nullptr || eq == std::string::npos)
            throw Error(ErrorKind::ParseError, "closed forms line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(t.substr(0, eq)), val = detail::trim(t.substr(eq + 1));
        if (key == "params")
            cur->params = detail::split_list(val);
        else if (key == "k")
            cur->k = val;
        else if (key == "min_n")
            cur->min_n = val;
        else if (key == "y")
            cur->y = std::stoi(val);
        else if (key == "gysin")
            cur->gysin = detail::split_list(val);
        else if (key == "class")
            cur->cls = val;
        else if (key == "degree")
            cur->degree = val;
        else if (key == "value")
            cur->value = val;
        else
            throw Error(ErrorKind::ParseError, "closed forms line " + std::to_string(lineno) + ": unknown key " + key);
    }
    return table;
}

/// The embedded table, checked against its recorded SHA-256 on first use.
inline const std::map<std::string, ClosedFormEntry> &closed_form_table() {
    static const std::map<std::string, ClosedFormEntry> table = [] {
        std::string actual = sha256_hex(generated::closed_forms_text);
        if (actual != generated::closed_forms_sha256)
            throw Error(ErrorKind::CorruptData, "closed-form table checksum " + actual + " does not match " +
                                                    std::string(generated::closed_forms_sha256));
        return parse_closed_forms(generated::closed_forms_text);
    }();
    return table;
}

inline const ClosedFormEntry &closed_form_entry(const std::string &name) {
    const auto &table = closed_form_table();
    auto it = table.find(name);
    if (it == table.end())
        throw Error(ErrorKind::Unsupported, "no closed form named " + name);
    return it->second;
}

namespace detail {

using Bindings = std::map<std::string, mpq_class>;

inline void check_validity(const ClosedFormEntry &e, int n, const Bindings &b, const std::string &what) {
    long min_n = to_long(formula::eval_number(e.min_n, b));
    if (n < min_n)
        throw Error(ErrorKind::OutOfValidity, what + " is given for n >= " + std::to_string(min_n));
}

/// Evaluates an entry's class in a Q-basis ring sized from a trial run.
inline ClassPoly eval_entry_class(const ClosedFormEntry &e, int n, const Bindings &extra, const std::string &what) {
    if (e.cls.empty())
        throw Error(ErrorKind::Unsupported, "no class formula for " + what);
    Bindings b = extra;
    b["n"] = n;
    check_validity(e, n, b, what);
    int k = static_cast<int>(to_long(formula::eval_number(e.k, b)));
    ClassPoly wide = formula::eval_class(e.cls, ring_q(n, e.y, 4000, k), b);
    RingSpec tight = ring_q(n, e.y, std::max(1, wide.degree()), k);
    std::vector<int> map(e.y + 1);
    for (int s = 0; s <= e.y; ++s)
        map[s] = s;
    return embed(wide, tight, map);
}

} // namespace detail

/// Printed corank constant C_{n,r} for the given row of the table, if any.
/// Rows: "C1".."C4" (r fixed), "Cnn" (r = n), "Cnn1" (r = n-1), "Cnn2" (r = n-2).
inline std::optional<mpq_class> printed_corank_constant(const std::string &row, int n, int r) {
    if (row == "C1" || row == "C2" || row == "C3" || row == "C4") {
        if (r != row[1] - '0')
            return std::nullopt;
    } else if (row == "Cnn") {
        if (r != n)
            return std::nullopt;
    } else if (row == "Cnn1") {
        if (r != n - 1)
            return std::nullopt;
    } else if (row == "Cnn2") {
        if (r != n - 2)
            return std::nullopt;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown corank constant row " + row);
    }
    if (r < 1)
        return std::nullopt;
    return formula::eval_number(closed_form_entry(row).value, {{"n", n}, {"r", r}});
}

/// C_{n,r}: the r <= 4 family first, then the r = n, n-1, n-2 rows.
inline mpq_class corank_constant(int n, int r) {
    if (r < 1 || r > n)
        throw Error(ErrorKind::OutOfValidity, "corank r must satisfy 1 <= r <= n");
    for (const char *row : {"C1", "C2", "C3", "C4", "Cnn", "Cnn1", "Cnn2"})
        if (auto c = printed_corank_constant(row, n, r))
            return *c;
    throw Error(ErrorKind::UnknownConstant,
                "C_{n,r} is not known for n=" + std::to_string(n) + ", r=" + std::to_string(r));
}

/// Class of the minimal lifting of the corank-r double point with cubic
/// jet, with constant C_{n,r} (or the given constant).
inline ClassPoly corank_class(int n, int r, std::optional<mpq_class> constant = std::nullopt) {
    mpq_class c = constant ? *constant : corank_constant(n, r);
    return detail::eval_entry_class(closed_form_entry("corank"), n, {{"r", r}, {"C", c}},
                                    "corank(" + std::to_string(r) + ")");
}

/// Class of the reducible-jet stratum: the p-jet is a product of k mutually
/// generic forms of degrees p_j, each with multiplicity r_j; divided by |Aut|.
inline ClassPoly reducible_class(const std::vector<std::pair<int, int>> &factors, int aut, int n) {
    if (factors.empty() || aut < 1 || n < 1)
        throw Error(ErrorKind::InvalidArgument, "reducible jet needs factors, |Aut| >= 1 and n >= 1");
    long p = 0;
    for (auto [r, pj] : factors) {
        if (r < 1 || pj < 1)
            throw Error(ErrorKind::InvalidArgument, "reducible factors need r_j, p_j >= 1");
        p += static_cast<long>(r) * pj;
    }
    const long k = static_cast<long>(factors.size());
    const long M = binomial(p + n, n).get_si();
    long S = 0;
    std::vector<long> lo, hi, base;
    for (auto [r, pj] : factors) {
        S += binomial(pj - 1 + n, pj).get_si();
        lo.push_back(binomial(pj - 1 + n, pj - 1).get_si() - 1);
        hi.push_back(binomial(pj + n, n).get_si() - 1);
        base.push_back(binomial(pj - 1 + n, n).get_si());
    }
    RingSpec ring = ring_q(n, 0, static_cast<int>(std::max(1L, M)), static_cast<int>(p));
    ClassPoly out(ring);
    std::vector<long> idx(k);
    for (long i = 0; i < M; ++i) {
        mpz_class total = 0;
        auto rec = [&](auto &&self, long j, long left) -> void {
            if (j == k - 1) {
                if (left < lo[j] || left > hi[j])
                    return;
                idx[j] = left;
                mpz_class t = multinomial(idx);
                for (long q = 0; q < k; ++q) {
                    mpz_class rp;
                    mpz_ui_pow_ui(rp.get_mpz_t(), static_cast<unsigned long>(factors[q].first),
                                  static_cast<unsigned long>(idx[q]));
                    t *= rp * binomial(base[q], hi[q] - idx[q]);
                }
                total += t;
                return;
            }
            for (long v = lo[j]; v <= std::min(hi[j], left); ++v) {
                idx[j] = v;
                self(self, j + 1, left - v);
            }
        };
        rec(rec, 0, i);
        if (total == 0)
            continue;
        long e = k + i - S;
        if (e < 0)
            throw Error(ErrorKind::InvalidArgument, "reducible-jet formula produced a negative power of X");
        if (e > n)
            continue;
        Mono m{};
        m[0] = static_cast<int>(e);
        m[ring.top()] = static_cast<int>(M - 1 - i);
        out.add_term(m, DPoly(mpq_class(total, aut)));
    }
    return out;
}

/// Whether the table prints a degree line for the type.
inline std::optional<std::string> degree_line_entry(const TypeId &t) {
    using F = TypeId::Family;
    switch (t.family) {
    case F::Ordinary: return "ordinary";
    case F::A:
        if (t.index >= 1 && t.index <= 4)
            return "A" + std::to_string(t.index);
        return std::nullopt;
    case F::D:
        if (t.index == 4)
            return "D4";
        return std::nullopt;
    case F::P8: return "P8";
    case F::Corank:
        if (t.index == 1)
            return "A2";
        if (t.index == 2)
            return "D4";
        if (t.index == 3)
            return "P8";
        return std::nullopt;
    default: return std::nullopt;
    }
}

/// The minimal-lifting class of the type in the Q-basis (Q = F + (d-k)X).
inline ClassPoly closed_form_class(const TypeId &t, int n) {
    using F = TypeId::Family;
    if (n < 1)
        throw Error(ErrorKind::OutOfValidity, "n must be >= 1");
    auto entry = [&](const std::string &name, detail::Bindings b = {}) {
        return detail::eval_entry_class(closed_form_entry(name), n, std::move(b), t.name());
    };
    switch (t.family) {
    case F::Ordinary: return entry("ordinary", {{"p", t.index}});
    case F::A:
        if (t.index == 1)
            return entry("A1");
        if (t.index == 2)
            return corank_class(n, 1);
        if (t.index == 3 || t.index == 4)
            return entry("A" + std::to_string(t.index));
        break;
    case F::D:
        if (t.index == 4)
            return corank_class(n, 2);
        if (t.index == 5 || t.index == 6)
            return entry("D" + std::to_string(t.index));
        break;
    case F::E:
        if (t.index == 6)
            return entry("E6");
        break;
    case F::P8:
        if (n < 3)
            throw Error(ErrorKind::OutOfValidity, "P8 is given for n >= 3");
        return corank_class(n, 3);
    case F::X9: return entry("X9");
    case F::Q10: return entry("Q10");
    case F::S11: return entry("S11");
    case F::U12: return entry("U12");
    case F::Corank: return corank_class(n, t.index);
    case F::Reducible: return reducible_class(t.factors, t.aut, n);
    case F::T: break;
    }
    throw Error(ErrorKind::Unsupported, "no closed-form class for " + t.name());
}

/// The stratum degree: the printed degree line when there is one, the Gysin
/// image of the closed-form class otherwise.
inline DPoly closed_form_degree(const TypeId &t, int n) {
    if (n < 1)
        throw Error(ErrorKind::OutOfValidity, "n must be >= 1");
    if (auto name = degree_line_entry(t)) {
        const ClosedFormEntry &e = closed_form_entry(*name);
        detail::Bindings b{{"n", n}};
        if (t.family == TypeId::Family::Ordinary)
            b["p"] = t.index;
        detail::check_validity(e, n, b, t.name());
        if (t.family == TypeId::Family::Corank && t.index > n)
            throw Error(ErrorKind::OutOfValidity, "corank r must satisfy r <= n");
        return formula::eval_degree(e.degree, b);
    }
    return stratum_degree(closed_form_class(t, n));
}

/// A printed class of a lifted stratum with auxiliary points ("A2_lifted",
/// "A3_lifted", "D4_lifted"), together with the Y exponents that reach the
/// stratum degree.
struct LiftedClosedForm {
    ClassPoly cls;
    std::vector<int> gysin;
    DPoly degree() const { return stratum_degree(cls, gysin); }
};

inline LiftedClosedForm printed_lifted_class(const std::string &name, int n) {
    const ClosedFormEntry &e = closed_form_entry(name);
    if (e.y == 0)
        throw Error(ErrorKind::InvalidArgument, name + " is not a lifted class");
    LiftedClosedForm out{detail::eval_entry_class(e, n, {}, name), {}};
    for (const auto &g : e.gysin)
        out.gysin.push_back(static_cast<int>(to_long(formula::eval_number(g, {{"n", n}}))));
    return out;
}

} // namespace strata
