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

#include <gmpxx.h>
#include <json.hpp>

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "strata/error.hpp"

namespace strata {

/// Exponent vector (m_1..m_n) of a monomial z_1^{m_1}...z_n^{m_n}.
using Exponent = std::vector<int>;

/// Total degree first, then lexicographic with z_1 greatest.
inline std::strong_ordering monomial_compare(const Exponent &a, const Exponent &b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::InvalidArgument, "exponent vectors of different length");
    int da = 0, db = 0;
    for (int v : a)
        da += v;
    for (int v : b)
        db += v;
    if (da != db)
        return da <=> db;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return a[i] <=> b[i];
    return std::strong_ordering::equal;
}

/// A compact facet of the diagram: the hyperplane sum_i m_i / k_i = 1.
struct Facet {
    std::vector<mpq_class> normal;     // a_i = 1/k_i
    std::vector<mpq_class> intercepts; // k_i
    std::vector<Exponent> points;      // support points on the facet

    mpq_class value(const Exponent &m) const {
        mpq_class s = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            s += normal[i] * m[i];
        return s;
    }

    std::vector<mpq_class> sorted_intercepts() const {
        auto k = intercepts;
        std::sort(k.begin(), k.end(), std::greater<>());
        return k;
    }

    mpq_class max_intercept() const { return *std::max_element(intercepts.begin(), intercepts.end()); }
    mpq_class min_intercept() const { return *std::min_element(intercepts.begin(), intercepts.end()); }

    /// Intercepts as exact fractions separated by spaces.
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < intercepts.size(); ++i) {
            if (i)
                s += ' ';
            s += intercepts[i].get_str();
        }
        return s;
    }
};

struct NewtonDiagram {
    int n = 1;
    std::string name;
    std::vector<Exponent> support;
    std::vector<Facet> facets;
};

namespace detail {

/// Solves the square system rows * a = 1 exactly; empty result if singular.
inline std::vector<mpq_class> solve_unit_rhs(const std::vector<Exponent> &rows) {
    const std::size_t n = rows.size();
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = rows[i][j];
        m[i][n] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0)
            ++piv;
        if (piv == n)
            return {};
        std::swap(m[piv], m[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0)
                continue;
            mpq_class f = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= n; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    std::vector<mpq_class> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = m[i][n] / m[i][i];
    return a;
}

inline void for_each_subset(std::size_t total, std::size_t size,
                            const std::function<void(const std::vector<std::size_t> &)> &fn) {
    if (size > total)
        return;
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i)
        idx[i] = i;
    for (;;) {
        fn(idx);
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == total - size + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

inline void for_each_composition(int n, int total, const std::function<void(const Exponent &)> &fn) {
    Exponent e(n, 0);
    auto rec = [&](auto &&self, int i, int left) -> void {
        if (i == n - 1) {
            e[i] = left;
            fn(e);
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[i] = v;
            self(self, i + 1, left - v);
        }
    };
    if (n == 0) {
        if (total == 0)
            fn(e);
        return;
    }
    rec(rec, 0, total);
}

} // namespace detail

/// Builds the diagram from a representative support: the compact facets of
/// the lower hull of supp + R^n_{>=0}, found exactly from n-point subsets.
inline NewtonDiagram build_diagram(int n, std::vector<Exponent> support, std::string name = {}) {
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "diagram needs n >= 1");
    if (support.empty())
        throw Error(ErrorKind::InvalidArgument, "empty support");
    for (const auto &m : support) {
        if (static_cast<int>(m.size()) != n)
            throw Error(ErrorKind::InvalidArgument, "support point of wrong length");
        int deg = 0;
        for (int v : m) {
            if (v < 0)
                throw Error(ErrorKind::InvalidArgument, "negative exponent in support");
            deg += v;
        }
        if (deg == 0)
            throw Error(ErrorKind::InvalidArgument, "support contains the constant monomial");
    }
    std::sort(support.begin(), support.end(),
              [](const Exponent &a, const Exponent &b) { return monomial_compare(a, b) < 0; });
    support.erase(std::unique(support.begin(), support.end()), support.end());

    for (int axis = 0; axis < n; ++axis) {
        bool hit = std::any_of(support.begin(), support.end(), [&](const Exponent &m) {
            for (int j = 0; j < n; ++j)
                if ((j == axis) != (m[j] > 0))
                    return false;
            return true;
        });
        if (!hit)
            throw Error(ErrorKind::NotCommode, "no support point on axis z" + std::to_string(axis + 1));
    }

    NewtonDiagram d;
    d.n = n;
    d.name = std::move(name);
    d.support = support;
    std::set<std::vector<mpq_class>> seen;
    detail::for_each_subset(support.size(), static_cast<std::size_t>(n), [&](const std::vector<std::size_t> &idx) {
        std::vector<Exponent> rows;
        for (auto i : idx)
            rows.push_back(support[i]);
        auto a = detail::solve_unit_rhs(rows);
        if (a.empty())
            return;
        for (const auto &v : a)
            if (v <= 0)
                return;
        Facet f;
        f.normal = a;
        for (const auto &m : support) {
            mpq_class val = f.value(m);
            if (val < 1)
                return;
            if (val == 1)
                f.points.push_back(m);
        }
        if (!seen.insert(a).second)
            return;
        for (const auto &v : a)
            f.intercepts.push_back(1 / v);
        d.facets.push_back(std::move(f));
    });
    std::sort(d.facets.begin(), d.facets.end(), [](const Facet &a, const Facet &b) { return a.normal < b.normal; });
    return d;
}

/// Lattice points of total degree r lying strictly below the diagram.
inline std::vector<Exponent> points_under(const NewtonDiagram &d, int r) {
    std::vector<Exponent> out;
    if (r < 0)
        return out;
    detail::for_each_composition(d.n, r, [&](const Exponent &m) {
        for (const auto &f : d.facets)
            if (f.value(m) < 1) {
                out.push_back(m);
                return;
            }
    });
    std::sort(out.begin(), out.end(), [](const Exponent &a, const Exponent &b) { return monomial_compare(a, b) < 0; });
    return out;
}

/// Every lattice point strictly below the diagram, in monomial order.
inline std::vector<Exponent> all_points_under(const NewtonDiagram &d) {
    std::vector<Exponent> out;
    mpq_class kmax = 0;
    for (const auto &f : d.facets)
        kmax = std::max(kmax, f.max_intercept());
    mpz_class top = kmax.get_num() / kmax.get_den();
    for (int r = 0; r <= top.get_si(); ++r) {
        auto pts = points_under(d, r);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

/// Coordinate subspaces V_1 ⊆ ... ⊆ V_n, each as its sorted axis indices
/// (0-based). The homogeneous lift adds the axis e_0 in front.
struct FlagSpec {
    int n = 1;
    std::vector<std::vector<int>> spaces;

    std::vector<int> homogeneous(std::size_t i) const {
        std::vector<int> out{0};
        for (int a : spaces.at(i))
            out.push_back(a + 1);
        return out;
    }
};

/// V(e_i) = span of the axes whose intercept is at least k_i.
inline std::vector<std::vector<int>> facet_axis_spaces(const Facet &f) {
    const int n = static_cast<int>(f.intercepts.size());
    std::vector<std::vector<int>> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (f.intercepts[j] >= f.intercepts[i])
                out[i].push_back(j);
    return out;
}

inline FlagSpec face_flag(const Facet &f, int n) {
    if (static_cast<int>(f.intercepts.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "facet dimension does not match n");
    auto axis_space = facet_axis_spaces(f);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return f.intercepts[a] > f.intercepts[b]; });
    FlagSpec flag;
    flag.n = n;
    for (int i = 0; i < n; ++i)
        flag.spaces.push_back(axis_space[order[i]]);
    return flag;
}

/// Axes carrying an isolated square z_i^2 (no other support point uses z_i).
inline std::vector<bool> square_axes(const NewtonDiagram &d) {
    std::vector<bool> sq(d.n, false);
    for (int i = 0; i < d.n; ++i) {
        bool has_square = false, other = false;
        for (const auto &m : d.support) {
            if (m[i] == 0)
                continue;
            bool pure = true;
            for (int j = 0; j < d.n; ++j)
                if (j != i && m[j] != 0)
                    pure = false;
            if (pure && m[i] == 2)
                has_square = true;
            else
                other = true;
        }
        sq[i] = has_square && !other;
    }
    return sq;
}

/// The space associated with each axis: the core diagram (square axes
/// removed) determines the spaces of the core axes, minimized over facets;
/// square axes and a trivial core give the whole space.
inline std::vector<std::vector<int>> axis_spaces(const NewtonDiagram &d) {
    auto sq = square_axes(d);
    std::vector<int> core;
    for (int i = 0; i < d.n; ++i)
        if (!sq[i])
            core.push_back(i);
    std::vector<int> all(d.n);
    for (int i = 0; i < d.n; ++i)
        all[i] = i;
    std::vector<std::vector<int>> out(d.n, all);
    if (core.empty())
        return out;
    std::vector<Exponent> core_support;
    for (const auto &m : d.support) {
        bool in_core = true;
        for (int i = 0; i < d.n; ++i)
            if (sq[i] && m[i] != 0)
                in_core = false;
        if (!in_core)
            continue;
        Exponent c;
        for (int i : core)
            c.push_back(m[i]);
        core_support.push_back(c);
    }
    NewtonDiagram cd = build_diagram(static_cast<int>(core.size()), core_support);
    for (std::size_t ci = 0; ci < core.size(); ++ci) {
        std::vector<int> best;
        for (const auto &f : cd.facets) {
            auto spaces = facet_axis_spaces(f);
            std::vector<int> mapped;
            for (int j : spaces[ci])
                mapped.push_back(core[j]);
            if (best.empty() || mapped.size() < best.size())
                best = mapped;
        }
        out[core[ci]] = best;
    }
    return out;
}

/// Distinct coordinate subspaces from all facet flags, ordered by
/// (dimension, axes), with the strict inclusions between them.
struct VectorSpaceCollection {
    int n = 1;
    std::vector<std::vector<int>> spaces;
    std::vector<std::pair<int, int>> inclusions; // (i, j): spaces[i] ⊊ spaces[j]

    bool is_flag() const {
        for (std::size_t i = 0; i + 1 < spaces.size(); ++i)
            if (!std::includes(spaces[i + 1].begin(), spaces[i + 1].end(), spaces[i].begin(), spaces[i].end()))
                return false;
        return true;
    }
    bool contains(const std::vector<int> &s) const { return std::find(spaces.begin(), spaces.end(), s) != spaces.end(); }
};

inline VectorSpaceCollection vector_space_collection(const NewtonDiagram &d) {
    auto sq = square_axes(d);
    std::set<std::vector<int>> spaces;
    std::vector<int> all(d.n);
    for (int i = 0; i < d.n; ++i)
        all[i] = i;
    spaces.insert(all);
    std::vector<int> core;
    for (int i = 0; i < d.n; ++i)
        if (!sq[i])
            core.push_back(i);
    if (!core.empty() && core.size() < static_cast<std::size_t>(d.n)) {
        std::vector<Exponent> core_support;
        for (const auto &m : d.support) {
            bool in_core = true;
            for (int i = 0; i < d.n; ++i)
                if (sq[i] && m[i] != 0)
                    in_core = false;
            if (!in_core)
                continue;
            Exponent c;
            for (int i : core)
                c.push_back(m[i]);
            core_support.push_back(c);
        }
        NewtonDiagram cd = build_diagram(static_cast<int>(core.size()), core_support);
        for (const auto &f : cd.facets)
            for (const auto &s : face_flag(f, cd.n).spaces) {
                std::vector<int> mapped;
                for (int j : s)
                    mapped.push_back(core[j]);
                spaces.insert(mapped);
            }
    } else if (!core.empty()) {
        for (const auto &f : d.facets)
            for (const auto &s : face_flag(f, d.n).spaces)
                spaces.insert(s);
    }
    VectorSpaceCollection c;
    c.n = d.n;
    c.spaces.assign(spaces.begin(), spaces.end());
    std::sort(c.spaces.begin(), c.spaces.end(), [](const auto &a, const auto &b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (std::size_t i = 0; i < c.spaces.size(); ++i)
        for (std::size_t j = 0; j < c.spaces.size(); ++j)
            if (i != j && c.spaces[i].size() < c.spaces[j].size() &&
                std::includes(c.spaces[j].begin(), c.spaces[j].end(), c.spaces[i].begin(), c.spaces[i].end()))
                c.inclusions.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return c;
}

/// Slope criterion, read per facet as max intercept <= 2 * min intercept.
inline bool is_linear_type(const NewtonDiagram &d) {
    for (const auto &f : d.facets)
        if (f.max_intercept() > 2 * f.min_intercept())
            return false;
    return true;
}

/// Diagram of f + z_{n+1}^2 + ... + z_{n+extra}^2.
inline NewtonDiagram stable_extension(const NewtonDiagram &d, int extra) {
    if (extra < 0)
        throw Error(ErrorKind::InvalidArgument, "negative extension");
    if (extra == 0)
        return d;
    const int m = d.n + extra;
    std::vector<Exponent> support;
    for (auto p : d.support) {
        p.resize(m, 0);
        support.push_back(p);
    }
    for (int i = d.n; i < m; ++i) {
        Exponent e(m, 0);
        e[i] = 2;
        support.push_back(e);
    }
    return build_diagram(m, support, d.name);
}

/// (p, k): p the lowest degree of a support point on the diagram, k the
/// largest intercept rounded up.
inline std::pair<int, int> multiplicity_and_determinacy(const NewtonDiagram &d) {
    int p = -1;
    mpq_class kmax = 0;
    for (const auto &f : d.facets) {
        kmax = std::max(kmax, f.max_intercept());
        for (const auto &m : f.points) {
            int deg = 0;
            for (int v : m)
                deg += v;
            if (p < 0 || deg < p)
                p = deg;
        }
    }
    mpz_class k = kmax.get_num() / kmax.get_den();
    if (k * kmax.get_den() != kmax.get_num())
        k += 1;
    return {p, static_cast<int>(k.get_si())};
}

inline NewtonDiagram diagram_from_json(const nlohmann::json &j) {
    try {
        int n = j.at("n").get<int>();
        auto support = j.at("support").get<std::vector<Exponent>>();
        std::string name = j.contains("name") ? j.at("name").get<std::string>() : std::string();
        return build_diagram(n, support, name);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("diagram JSON: ") + e.what());
    }
}

inline nlohmann::ordered_json diagram_to_json(const NewtonDiagram &d) {
    nlohmann::ordered_json j;
    j["n"] = d.n;
    if (!d.name.empty())
        j["name"] = d.name;
    j["support"] = d.support;
    auto facets = nlohmann::ordered_json::array();
    for (const auto &f : d.facets) {
        auto k = nlohmann::ordered_json::array();
        for (const auto &v : f.intercepts)
            k.push_back(v.get_str());
        facets.push_back(k);
    }
    j["facets"] = facets;
    return j;
}

/// One facet per line, intercepts as exact fractions.
inline std::string facet_report(const NewtonDiagram &d) {
    std::string out;
    for (const auto &f : d.facets)
        out += f.str() + "\n";
    return out;
}

} // namespace strata
