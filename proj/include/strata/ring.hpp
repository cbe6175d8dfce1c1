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

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strata/dpoly.hpp"
#include "strata/error.hpp"
#include "strata/numeric.hpp"

namespace strata {

/// Which generator occupies the last slot: F itself, or Q = (d-k)X + F.
enum class Basis { F, Q };

constexpr int kMaxSlots = 10;

/// Shape of the truncated ring Q[d][X, Y_1..Y_r, F] / (X^{n+1}, Y_i^{n+1}).
/// Slot 0 is X, slots 1..num_y are the Y_i, slot num_y+1 is F (or Q).
struct RingSpec {
    int n = 1;
    int num_y = 0;
    int f_cap = 1;
    bool d_symbolic = true;
    Basis basis = Basis::F;
    int k = 0;

    int slots() const { return num_y + 2; }
    int top() const { return num_y + 1; }
    int cap(int slot) const { return slot == top() ? f_cap : n; }

    bool operator==(const RingSpec &) const = default;

    void validate() const {
        if (n < 1)
            throw Error(ErrorKind::InvalidArgument, "ring dimension n must be >= 1");
        if (num_y < 0 || num_y + 2 > kMaxSlots)
            throw Error(ErrorKind::InvalidArgument, "num_y out of supported range");
        if (f_cap < 1 || f_cap > 60000)
            throw Error(ErrorKind::InvalidArgument, "f_cap out of range");
    }

    std::string var_name(int slot) const {
        if (slot == 0)
            return "X";
        if (slot == top())
            return basis == Basis::F ? "F" : "Q";
        return "Y" + std::to_string(slot);
    }

    int slot_of(std::string_view name) const {
        for (int s = 0; s < slots(); ++s)
            if (var_name(s) == name)
                return s;
        if (name == "Y" && num_y == 1)
            return 1;
        throw Error(ErrorKind::UnknownVariable, "no generator named '" + std::string(name) + "'");
    }

    RingSpec in_basis(Basis b, int offset) const {
        RingSpec r = *this;
        r.basis = b;
        r.k = b == Basis::Q ? offset : 0;
        if (b == Basis::Q || basis == Basis::Q)
            r.d_symbolic = true;
        return r;
    }
};

inline RingSpec ring_f(int n, int num_y, int f_cap) {
    RingSpec s{n, num_y, f_cap, true, Basis::F, 0};
    s.validate();
    return s;
}

inline RingSpec ring_q(int n, int num_y, int f_cap, int k) {
    RingSpec s{n, num_y, f_cap, true, Basis::Q, k};
    s.validate();
    return s;
}

/// Exponent vector, ordered lexicographically (X first, then Y_i, then F).
struct Mono {
    std::array<std::uint16_t, kMaxSlots> e{};

    std::uint16_t &operator[](int i) { return e[i]; }
    std::uint16_t operator[](int i) const { return e[i]; }
    auto operator<=>(const Mono &) const = default;

    int total() const {
        int t = 0;
        for (auto v : e)
            t += v;
        return t;
    }
};

inline Mono make_mono(std::initializer_list<int> exps) {
    Mono m;
    int i = 0;
    for (int v : exps)
        m[i++] = static_cast<std::uint16_t>(v);
    return m;
}

/// An element of the truncated cohomology ring. Values are immutable in
/// practice: every operation returns a new ClassPoly.
class ClassPoly {
  public:
    using Terms = std::map<Mono, DPoly>;

    ClassPoly() = default;
    explicit ClassPoly(const RingSpec &spec) : spec_(spec) { spec.validate(); }

    static ClassPoly constant(const RingSpec &spec, const DPoly &c) {
        ClassPoly r(spec);
        if (!c.is_zero())
            r.terms_[Mono{}] = c;
        return r;
    }
    static ClassPoly one(const RingSpec &spec) { return constant(spec, DPoly(1)); }
    static ClassPoly generator(const RingSpec &spec, int slot) {
        if (slot < 0 || slot >= spec.slots())
            throw Error(ErrorKind::UnknownVariable, "generator slot " + std::to_string(slot));
        ClassPoly r(spec);
        Mono m;
        m[slot] = 1;
        r.add_term(m, DPoly(1));
        return r;
    }
    static ClassPoly X(const RingSpec &spec) { return generator(spec, 0); }
    static ClassPoly Y(const RingSpec &spec, int i) {
        if (i < 1 || i > spec.num_y)
            throw Error(ErrorKind::UnknownVariable, "Y" + std::to_string(i));
        return generator(spec, i);
    }
    static ClassPoly top(const RingSpec &spec) { return generator(spec, spec.top()); }

    const RingSpec &spec() const { return spec_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    DPoly coeff(const Mono &m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? DPoly() : it->second;
    }

    bool within_caps(const Mono &m) const {
        for (int s = 0; s < spec_.slots(); ++s)
            if (m[s] > spec_.cap(s))
                return false;
        for (int s = spec_.slots(); s < kMaxSlots; ++s)
            if (m[s] != 0)
                return false;
        return true;
    }

    /// Adds c*m; exponents beyond the caps are an error.
    void add_term(const Mono &m, const DPoly &c) {
        if (!within_caps(m))
            throw Error(ErrorKind::ExponentOutOfRange, "monomial exceeds truncation");
        accumulate(m, c);
    }

    /// Adds c*m with ring truncation: X/Y overflow vanishes, F overflow throws.
    void add_term_truncating(const Mono &m, const DPoly &c) {
        for (int s = 0; s < spec_.top(); ++s)
            if (m[s] > spec_.n)
                return;
        if (m[spec_.top()] > spec_.f_cap)
            throw Error(ErrorKind::FCapExceeded, "F exponent " + std::to_string(m[spec_.top()]) +
                                                     " exceeds f_cap " + std::to_string(spec_.f_cap));
        accumulate(m, c);
    }

    /// Largest total degree among the terms (-1 for zero).
    int degree() const {
        int d = -1;
        for (const auto &[m, c] : terms_)
            d = std::max(d, m.total());
        return d;
    }

    bool is_homogeneous() const {
        int d = -2;
        for (const auto &[m, c] : terms_) {
            if (d == -2)
                d = m.total();
            else if (m.total() != d)
                return false;
        }
        return true;
    }

    /// True when every coefficient is a constant (no d dependence).
    bool d_free() const {
        for (const auto &[m, c] : terms_)
            if (!c.is_constant())
                return false;
        return true;
    }

    int max_exponent(int slot) const {
        int e = 0;
        for (const auto &[m, c] : terms_)
            e = std::max<int>(e, m[slot]);
        return e;
    }

    ClassPoly &operator+=(const ClassPoly &o) {
        require_same(o);
        for (const auto &[m, c] : o.terms_)
            accumulate(m, c);
        return *this;
    }
    ClassPoly &operator-=(const ClassPoly &o) {
        require_same(o);
        for (const auto &[m, c] : o.terms_)
            accumulate(m, -c);
        return *this;
    }
    ClassPoly &operator*=(const mpq_class &s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[m, c] : terms_)
            c *= s;
        return *this;
    }
    ClassPoly &operator*=(const DPoly &s) {
        Terms out;
        for (const auto &[m, c] : terms_) {
            DPoly p = c * s;
            if (!p.is_zero())
                out.emplace(m, std::move(p));
        }
        terms_ = std::move(out);
        return *this;
    }

    friend ClassPoly operator+(ClassPoly a, const ClassPoly &b) { return a += b; }
    friend ClassPoly operator-(ClassPoly a, const ClassPoly &b) { return a -= b; }
    friend ClassPoly operator-(ClassPoly a) { return a *= mpq_class(-1); }
    friend ClassPoly operator*(ClassPoly a, const mpq_class &s) { return a *= s; }
    friend ClassPoly operator*(const mpq_class &s, ClassPoly a) { return a *= s; }
    friend ClassPoly operator*(ClassPoly a, long s) { return a *= mpq_class(s); }
    friend ClassPoly operator*(long s, ClassPoly a) { return a *= mpq_class(s); }
    friend ClassPoly operator*(ClassPoly a, const DPoly &s) { return a *= s; }

    friend ClassPoly operator*(const ClassPoly &a, const ClassPoly &b) {
        a.require_same(b);
        ClassPoly r(a.spec_);
        const int top = a.spec_.top();
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                Mono m;
                bool dead = false;
                for (int s = 0; s < top; ++s) {
                    int v = ma[s] + mb[s];
                    if (v > a.spec_.n) {
                        dead = true;
                        break;
                    }
                    m[s] = static_cast<std::uint16_t>(v);
                }
                if (dead)
                    continue;
                m[top] = static_cast<std::uint16_t>(ma[top] + mb[top]);
                if (m[top] > a.spec_.f_cap)
                    throw Error(ErrorKind::FCapExceeded, "product reaches F^" + std::to_string(m[top]));
                if (ca.is_constant() && cb.is_constant())
                    r.accumulate(m, DPoly(ca.constant_term() * cb.constant_term()));
                else
                    r.accumulate(m, ca * cb);
            }
        }
        return r;
    }
    ClassPoly &operator*=(const ClassPoly &o) { return *this = *this * o; }

    friend bool operator==(const ClassPoly &a, const ClassPoly &b) {
        return a.spec_ == b.spec_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ClassPoly &a, const ClassPoly &b) { return !(a == b); }

    void require_same(const ClassPoly &o) const {
        if (!(spec_ == o.spec_))
            throw Error(ErrorKind::SpecMismatch, "operands live in different rings");
    }

  private:
    void accumulate(const Mono &m, const DPoly &c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    RingSpec spec_;
    Terms terms_;
};

/// Builds a ClassPoly from explicit terms; exponents beyond a cap throw.
inline ClassPoly make_poly(const RingSpec &spec, const std::vector<std::pair<std::vector<int>, DPoly>> &terms) {
    ClassPoly r(spec);
    for (const auto &[exps, c] : terms) {
        if (static_cast<int>(exps.size()) != spec.slots())
            throw Error(ErrorKind::InvalidArgument, "exponent tuple has wrong length");
        Mono m;
        for (int s = 0; s < spec.slots(); ++s) {
            if (exps[s] < 0 || exps[s] > spec.cap(s))
                throw Error(ErrorKind::ExponentOutOfRange,
                            spec.var_name(s) + "^" + std::to_string(exps[s]) + " exceeds its cap");
            m[s] = static_cast<std::uint16_t>(exps[s]);
        }
        r.add_term(m, c);
    }
    return r;
}

inline ClassPoly mul(const ClassPoly &a, const ClassPoly &b) { return a * b; }

inline ClassPoly pow(const ClassPoly &a, long e) {
    if (e < 0)
        throw Error(ErrorKind::InvalidArgument, "negative power");
    ClassPoly result = ClassPoly::one(a.spec());
    ClassPoly base = a;
    while (e > 0) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e > 0)
            base *= base;
    }
    return result;
}

namespace detail {

inline void check_slot(const RingSpec &spec, int slot) {
    if (slot < 0 || slot >= spec.slots())
        throw Error(ErrorKind::UnknownVariable, "generator slot " + std::to_string(slot) + " not in ring");
}

/// Rewrites the top generator T as T' + shift*X, where shift is a polynomial in d.
inline ClassPoly substitute_top(const ClassPoly &a, const RingSpec &target, const DPoly &shift) {
    ClassPoly r(target);
    const int top = target.top();
    std::vector<DPoly> shift_pow{DPoly(1)};
    for (const auto &[m, c] : a.terms()) {
        const int e = m[top];
        while (static_cast<int>(shift_pow.size()) <= e)
            shift_pow.push_back(shift_pow.back() * shift);
        for (int j = 0; j <= e && m[0] + j <= target.n; ++j) {
            Mono t = m;
            t[0] = static_cast<std::uint16_t>(m[0] + j);
            t[top] = static_cast<std::uint16_t>(e - j);
            r.add_term(t, c * shift_pow[j] * mpq_class(binomial(e, j)));
        }
    }
    return r;
}

} // namespace detail

/// Re-expresses a Q-basis class over F by Q = (d-k)X + F.
inline ClassPoly to_f_basis(const ClassPoly &a) {
    if (a.spec().basis == Basis::F)
        return a;
    RingSpec target = a.spec().in_basis(Basis::F, 0);
    return detail::substitute_top(a, target, DPoly::linear(-a.spec().k, 1));
}

/// Re-expresses a class over Q = (d-k)X + F (from either basis).
inline ClassPoly to_q_basis(const ClassPoly &a, int k) {
    if (a.spec().basis == Basis::Q && a.spec().k == k)
        return a;
    ClassPoly f = to_f_basis(a);
    RingSpec target = f.spec().in_basis(Basis::Q, k);
    return detail::substitute_top(f, target, DPoly::linear(k, -1));
}

/// Substitutes d and/or expands Q. `expand_q_k` must name the class's own offset.
inline ClassPoly specialize(const ClassPoly &a, std::optional<mpq_class> d_value, std::optional<int> expand_q_k) {
    ClassPoly cur = a;
    if (expand_q_k) {
        if (a.spec().basis != Basis::Q || a.spec().k != *expand_q_k)
            throw Error(ErrorKind::SpecMismatch, "class is not expressed over Q with k=" + std::to_string(*expand_q_k));
        cur = to_f_basis(cur);
    }
    if (d_value) {
        RingSpec target = cur.spec();
        target.d_symbolic = false;
        ClassPoly r(target);
        for (const auto &[m, c] : cur.terms())
            r.add_term(m, DPoly(c.eval(*d_value)));
        cur = r;
    }
    return cur;
}

/// Coefficient of the given monomial in the listed generators, as a class in
/// the remaining ones. Extracted Y generators are removed from the ring; an
/// extracted X stays as a slot with exponent 0. Extracting X from a Q-basis
/// class first expands Q, since that coefficient is basis-dependent.
inline ClassPoly gysin_extract(const ClassPoly &a, const std::vector<std::pair<int, int>> &which) {
    const RingSpec &spec = a.spec();
    std::vector<int> target(spec.slots(), -1);
    bool has_x = false;
    for (const auto &[slot, e] : which) {
        detail::check_slot(spec, slot);
        if (slot == spec.top())
            throw Error(ErrorKind::UnknownVariable, "cannot extract the F/Q generator");
        if (e < 0 || e > spec.cap(slot))
            throw Error(ErrorKind::ExponentOutOfRange, "target exponent beyond cap");
        target[slot] = e;
        has_x = has_x || slot == 0;
    }
    const ClassPoly src = (has_x && spec.basis == Basis::Q) ? to_f_basis(a) : a;
    RingSpec out_spec = src.spec();
    std::vector<int> keep;
    keep.push_back(0);
    for (int s = 1; s <= spec.num_y; ++s)
        if (target[s] < 0)
            keep.push_back(s);
    out_spec.num_y = static_cast<int>(keep.size()) - 1;
    keep.push_back(spec.top());
    ClassPoly r(out_spec);
    for (const auto &[m, c] : src.terms()) {
        bool match = true;
        for (int s = 0; s < spec.top() && match; ++s)
            if (target[s] >= 0 && m[s] != target[s])
                match = false;
        if (!match)
            continue;
        Mono t;
        for (std::size_t i = 0; i < keep.size(); ++i)
            t[static_cast<int>(i)] = m[keep[i]];
        if (target[0] >= 0)
            t[0] = 0;
        r.add_term(t, c);
    }
    return r;
}

/// Coefficient of slot^e, keeping the ring (the slot's exponent becomes 0).
inline ClassPoly coefficient_of(const ClassPoly &a, int slot, int e) {
    detail::check_slot(a.spec(), slot);
    ClassPoly r(a.spec());
    for (const auto &[m, c] : a.terms()) {
        if (m[slot] != e)
            continue;
        Mono t = m;
        t[slot] = 0;
        r.add_term(t, c);
    }
    return r;
}

/// Formal partial derivative of the given order.
inline ClassPoly derivative(const ClassPoly &a, int slot, int order) {
    detail::check_slot(a.spec(), slot);
    if (order < 0)
        throw Error(ErrorKind::InvalidArgument, "negative derivative order");
    ClassPoly r(a.spec());
    for (const auto &[m, c] : a.terms()) {
        if (m[slot] < order)
            continue;
        mpz_class f = 1;
        for (int i = 0; i < order; ++i)
            f *= m[slot] - i;
        Mono t = m;
        t[slot] = static_cast<std::uint16_t>(m[slot] - order);
        r.add_term(t, c * mpq_class(f));
    }
    return r;
}

/// Unique P with P*c = r. The part of c of highest degree in the top
/// generator must be a nonzero constant multiple of a pure power of it; the
/// quotient is then found by descending induction on that degree.
inline ClassPoly divide_exact(const ClassPoly &r, const ClassPoly &c) {
    r.require_same(c);
    const int top = r.spec().top();
    if (c.is_zero())
        throw Error(ErrorKind::BadDivisor, "division by zero");
    const int m = c.max_exponent(top);
    mpq_class unit = 0;
    for (const auto &[mono, coef] : c.terms()) {
        if (mono[top] != m)
            continue;
        Mono pure;
        pure[top] = static_cast<std::uint16_t>(m);
        if (!(mono == pure) || !coef.is_constant())
            throw Error(ErrorKind::BadDivisor, "leading F part of the divisor is not a constant multiple of F^" +
                                                   std::to_string(m));
        unit = coef.constant_term();
    }
    if (unit == 0)
        throw Error(ErrorKind::BadDivisor, "divisor has no leading F term");
    ClassPoly quotient(r.spec());
    ClassPoly rem = r;
    while (!rem.is_zero()) {
        const int e = rem.max_exponent(top);
        if (e < m)
            break;
        ClassPoly step(r.spec());
        for (const auto &[mono, coef] : rem.terms()) {
            if (mono[top] != e)
                continue;
            Mono t = mono;
            t[top] = static_cast<std::uint16_t>(e - m);
            step.add_term(t, coef * (1 / unit));
        }
        quotient += step;
        rem -= step * c;
    }
    if (!rem.is_zero())
        throw Error(ErrorKind::NotDivisible, "remainder of F-degree below the divisor's is nonzero");
    return quotient;
}

/// Applies a permutation of {X, Y_1..Y_r}: slot i is sent to perm[i].
inline ClassPoly permute(const ClassPoly &a, const std::vector<int> &perm) {
    const RingSpec &spec = a.spec();
    if (static_cast<int>(perm.size()) != spec.num_y + 1)
        throw Error(ErrorKind::InvalidArgument, "permutation must act on X and every Y");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p > spec.num_y || seen[p])
            throw Error(ErrorKind::InvalidArgument, "not a permutation of {X, Y_i}");
        seen[p] = true;
    }
    ClassPoly r(spec);
    for (const auto &[m, c] : a.terms()) {
        Mono t = m;
        for (int s = 0; s <= spec.num_y; ++s)
            t[perm[s]] = m[s];
        r.add_term(t, c);
    }
    return r;
}

inline bool check_symmetry(const ClassPoly &a, const std::vector<std::vector<int>> &group) {
    for (const auto &perm : group)
        if (permute(a, perm) != a)
            return false;
    return true;
}

/// Maps a class into a larger ring: old slot i (X or Y) goes to slot_map[i];
/// the top generator maps to the top generator.
inline ClassPoly embed(const ClassPoly &a, const RingSpec &target, const std::vector<int> &slot_map) {
    const RingSpec &spec = a.spec();
    if (target.n != spec.n || target.basis != spec.basis || target.k != spec.k)
        throw Error(ErrorKind::SpecMismatch, "embedding requires the same n and basis");
    if (static_cast<int>(slot_map.size()) != spec.num_y + 1)
        throw Error(ErrorKind::InvalidArgument, "slot map must cover X and every Y");
    ClassPoly r(target);
    for (const auto &[m, c] : a.terms()) {
        Mono t;
        for (int s = 0; s <= spec.num_y; ++s) {
            detail::check_slot(target, slot_map[s]);
            t[slot_map[s]] = static_cast<std::uint16_t>(t[slot_map[s]] + m[s]);
        }
        t[target.top()] = m[spec.top()];
        r.add_term(t, c);
    }
    return r;
}

/// Identity embedding into a ring with more Y slots and/or a larger f_cap.
inline ClassPoly widen(const ClassPoly &a, const RingSpec &target) {
    std::vector<int> map(a.spec().num_y + 1);
    for (int s = 0; s <= a.spec().num_y; ++s)
        map[s] = s;
    return embed(a, target, map);
}

/// Drops every monomial whose exponent in some slot exceeds caps[slot]
/// (caps entries < 0 mean "no constraint").
inline ClassPoly drop_above(const ClassPoly &a, const std::vector<int> &caps) {
    ClassPoly r(a.spec());
    for (const auto &[m, c] : a.terms()) {
        bool ok = true;
        for (std::size_t s = 0; s < caps.size() && ok; ++s)
            if (caps[s] >= 0 && m[static_cast<int>(s)] > caps[s])
                ok = false;
        if (ok)
            r.add_term(m, c);
    }
    return r;
}

/// Same class in the F-basis, ignoring f_cap and d_symbolic differences.
inline bool same_class(const ClassPoly &a, const ClassPoly &b) {
    if (a.spec().n != b.spec().n || a.spec().num_y != b.spec().num_y)
        return false;
    ClassPoly fa = to_f_basis(a), fb = to_f_basis(b);
    return fa.terms() == fb.terms();
}

/// The degree of the stratum: extract X^n and Y_i^{y_caps[i-1]}, expand Q,
/// and read off the single pure-F coefficient.
inline DPoly stratum_degree(const ClassPoly &a, const std::vector<int> &y_caps = {}) {
    std::vector<std::pair<int, int>> which{{0, a.spec().n}};
    if (static_cast<int>(y_caps.size()) != a.spec().num_y)
        throw Error(ErrorKind::InvalidArgument, "one Y cap per auxiliary point is required");
    for (int i = 0; i < a.spec().num_y; ++i)
        which.emplace_back(i + 1, y_caps[i]);
    ClassPoly g = gysin_extract(a, which);
    if (g.is_zero())
        return DPoly();
    if (g.size() != 1)
        throw Error(ErrorKind::InvalidArgument, "Gysin image is not a single power of F");
    return g.terms().begin()->second;
}

/// Complete homogeneous symmetric polynomial h_deg in the listed generators.
inline ClassPoly complete_homogeneous(const RingSpec &spec, const std::vector<int> &slots, int deg) {
    ClassPoly r(spec);
    if (deg < 0)
        return r;
    for (int s : slots)
        detail::check_slot(spec, s);
    if (slots.empty())
        return deg == 0 ? ClassPoly::one(spec) : r;
    std::vector<int> e(slots.size(), 0);
    // Enumerate compositions of deg into |slots| parts.
    auto rec = [&](auto &&self, std::size_t i, int left) -> void {
        if (i + 1 == slots.size()) {
            e[i] = left;
            Mono m;
            for (std::size_t j = 0; j < slots.size(); ++j) {
                if (e[j] > spec.cap(slots[j]))
                    return;
                m[slots[j]] = static_cast<std::uint16_t>(m[slots[j]] + e[j]);
            }
            r.add_term(m, DPoly(1));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            e[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, deg);
    return r;
}

} // namespace strata
