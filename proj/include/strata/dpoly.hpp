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

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strata/error.hpp"
#include "strata/numeric.hpp"

namespace strata {

/// Univariate polynomial in the degree parameter d with rational
/// coefficients, stored in ascending powers with no trailing zeros.
class DPoly {
  public:
    DPoly() = default;
    DPoly(long c) {
        if (c != 0)
            c_.emplace_back(c);
    }
    DPoly(const mpq_class &c) {
        if (c != 0) {
            c_.push_back(c);
            c_.back().canonicalize();
        }
    }
    explicit DPoly(std::vector<mpq_class> ascending) : c_(std::move(ascending)) {
        for (auto &q : c_)
            q.canonicalize();
        trim();
    }

    /// The polynomial a + b*d.
    static DPoly linear(const mpq_class &a, const mpq_class &b) { return DPoly(std::vector<mpq_class>{a, b}); }
    static DPoly d() { return linear(0, 1); }

    const std::vector<mpq_class> &coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    mpq_class constant_term() const { return c_.empty() ? mpq_class(0) : c_[0]; }
    mpq_class coeff(int power) const {
        return power >= 0 && power < static_cast<int>(c_.size()) ? c_[power] : mpq_class(0);
    }

    mpq_class eval(const mpq_class &x) const {
        mpq_class acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    bool has_integer_coefficients() const {
        for (const auto &q : c_)
            if (!is_integer(q))
                return false;
        return true;
    }

    DPoly &operator+=(const DPoly &o) {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }
    DPoly &operator-=(const DPoly &o) {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    DPoly &operator*=(const mpq_class &scalar) {
        if (scalar == 0) {
            c_.clear();
            return *this;
        }
        mpq_class s = scalar;
        s.canonicalize();
        for (auto &q : c_)
            q *= s;
        return *this;
    }
    DPoly &operator*=(const DPoly &o) {
        *this = *this * o;
        return *this;
    }

    friend DPoly operator+(DPoly a, const DPoly &b) { return a += b; }
    friend DPoly operator-(DPoly a, const DPoly &b) { return a -= b; }
    friend DPoly operator-(DPoly a) {
        for (auto &q : a.c_)
            q = -q;
        return a;
    }
    friend DPoly operator*(const DPoly &a, const DPoly &b) {
        if (a.c_.empty() || b.c_.empty())
            return DPoly();
        DPoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, mpq_class(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend DPoly operator*(DPoly a, const mpq_class &s) { return a *= s; }
    friend bool operator==(const DPoly &a, const DPoly &b) { return a.c_ == b.c_; }
    friend bool operator!=(const DPoly &a, const DPoly &b) { return !(a == b); }

    DPoly pow(int e) const {
        DPoly r(1);
        for (int i = 0; i < e; ++i)
            r *= *this;
        return r;
    }

    /// Exact division; throws NotDivisible when a remainder is left.
    DPoly divide_exact(const DPoly &den) const {
        if (den.is_zero())
            throw Error(ErrorKind::BadDivisor, "division of a polynomial in d by zero");
        std::vector<mpq_class> rem = c_;
        int dd = den.degree();
        int qd = degree() - dd;
        if (qd < 0) {
            if (!is_zero())
                throw Error(ErrorKind::NotDivisible, str() + " by " + den.str());
            return DPoly();
        }
        std::vector<mpq_class> q(qd + 1);
        for (int i = qd; i >= 0; --i) {
            q[i] = rem[i + dd] / den.c_[dd];
            for (int j = 0; j <= dd; ++j)
                rem[i + j] -= q[i] * den.c_[j];
        }
        for (const auto &r : rem)
            if (r != 0)
                throw Error(ErrorKind::NotDivisible, str() + " by " + den.str());
        return DPoly(std::move(q));
    }

    /// True when the polynomial takes integer values at every integer d.
    bool integer_valued() const {
        for (int i = 0; i <= std::max(degree(), 0); ++i)
            if (!is_integer(eval(i)))
                return false;
        return true;
    }

    /// The unique polynomial of degree < points.size() through the given
    /// (distinct) points, via Newton divided differences.
    static DPoly interpolate(const std::vector<std::pair<mpq_class, mpq_class>> &points) {
        const std::size_t m = points.size();
        std::vector<mpq_class> coef(m);
        for (std::size_t i = 0; i < m; ++i)
            coef[i] = points[i].second;
        for (std::size_t j = 1; j < m; ++j)
            for (std::size_t i = m - 1; i >= j; --i) {
                const mpq_class dx = points[i].first - points[i - j].first;
                if (dx == 0)
                    throw Error(ErrorKind::InvalidArgument, "duplicate interpolation point");
                coef[i] = (coef[i] - coef[i - 1]) / dx;
            }
        DPoly r;
        for (std::size_t i = m; i-- > 0;)
            r = r * DPoly::linear(-points[i].first, 1) + DPoly(coef[i]);
        return r;
    }

    /// Canonical text: descending powers, e.g. "3/2*d^2-d+1"; zero is "0".
    std::string str() const {
        if (c_.empty())
            return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const mpq_class &q = c_[i];
            if (q == 0)
                continue;
            mpq_class a = abs(q);
            if (q < 0)
                out += "-";
            else if (!out.empty())
                out += "+";
            if (i == 0) {
                out += a.get_str();
                continue;
            }
            if (a != 1)
                out += a.get_str() + "*";
            out += "d";
            if (i > 1)
                out += "^" + std::to_string(i);
        }
        return out;
    }

    /// Inverse of str(); also accepts whitespace and repeated powers.
    static DPoly parse(std::string_view text) {
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                s += ch;
        if (s.empty())
            throw Error(ErrorKind::ParseError, "empty polynomial");
        DPoly result;
        std::size_t i = 0;
        while (i < s.size()) {
            mpq_class sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                if (s[i] == '-')
                    sign = -1;
                ++i;
            } else if (i != 0) {
                throw Error(ErrorKind::ParseError, "expected sign in '" + s + "'");
            }
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/'))
                ++j;
            mpq_class coef = 1;
            bool had_coef = j > i;
            if (had_coef)
                coef = parse_rational(s.substr(i, j - i));
            i = j;
            int power = 0;
            if (i < s.size() && s[i] == '*')
                ++i;
            if (i < s.size() && s[i] == 'd') {
                power = 1;
                ++i;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    std::size_t k = i;
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])))
                        ++k;
                    if (k == i)
                        throw Error(ErrorKind::ParseError, "missing exponent in '" + s + "'");
                    power = std::stoi(s.substr(i, k - i));
                    i = k;
                }
            } else if (!had_coef) {
                throw Error(ErrorKind::ParseError, "malformed term in '" + s + "'");
            }
            std::vector<mpq_class> mono(power + 1);
            mono[power] = sign * coef;
            result += DPoly(std::move(mono));
        }
        return result;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<mpq_class> c_;
};

} // namespace strata
