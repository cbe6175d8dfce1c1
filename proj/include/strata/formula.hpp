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
#include <map>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strata/error.hpp"
#include "strata/numeric.hpp"
#include "strata/ring.hpp"

/// A small expression language for transcribed closed forms: numbers,
/// + - * / ^, parentheses, C(a,b) binomials and sum(i, lo, hi, expr).
/// Identifiers: n, d, the ring generators (Q or F, X or x, Y / Y1..Yr) and
/// any integer parameters bound by the caller or by an enclosing sum.
namespace strata::formula {

struct Node {
    enum class Kind { Number, Name, Neg, Add, Sub, Mul, Div, Pow, Binom, Sum };
    Kind kind;
    mpq_class number;
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string &what) const {
        throw Error(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static NodePtr make(Node::Kind k, std::vector<NodePtr> args) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->args = std::move(args);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make(Node::Kind::Add, {lhs, term()});
            else if (eat('-'))
                lhs = make(Node::Kind::Sub, {lhs, term()});
            else
                return lhs;
        }
    }
    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = make(Node::Kind::Mul, {lhs, unary()});
            else if (eat('/'))
                lhs = make(Node::Kind::Div, {lhs, unary()});
            else
                return lhs;
        }
    }
    NodePtr unary() {
        if (eat('-'))
            return make(Node::Kind::Neg, {unary()});
        if (eat('+'))
            return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (eat('^'))
            return make(Node::Kind::Pow, {base, unary()});
        return base;
    }
    NodePtr atom() {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')'))
                fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            n->number = mpq_class(std::string(s_.substr(start, pos_ - start)));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            if (id == "C" && eat('(')) {
                NodePtr a = expr();
                if (!eat(','))
                    fail("C(a,b) needs two arguments");
                NodePtr b = expr();
                if (!eat(')'))
                    fail("missing ')' after C(a,b)");
                return make(Node::Kind::Binom, {a, b});
            }
            if (id == "sum" && eat('(')) {
                skip();
                std::size_t vstart = pos_;
                while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
                std::string var(s_.substr(vstart, pos_ - vstart));
                if (var.empty() || !eat(','))
                    fail("sum(var, lo, hi, expr) expected");
                NodePtr lo = expr();
                if (!eat(','))
                    fail("sum needs a lower bound");
                NodePtr hi = expr();
                if (!eat(','))
                    fail("sum needs an upper bound");
                NodePtr body = expr();
                if (!eat(')'))
                    fail("missing ')' after sum");
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Sum;
                n->name = var;
                n->args = {lo, hi, body};
                return n;
            }
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Name;
            n->name = id;
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline NodePtr parse(std::string_view text) { return Parser(text).parse(); }

/// A value during evaluation: a rational number, a rational function of d,
/// or a ring element.
struct Value {
    enum class Kind { Number, RatFun, Class };
    Kind kind = Kind::Number;
    mpq_class number = 0;
    DPoly num, den{1};
    ClassPoly cls;
};

class Evaluator {
  public:
    /// `ring` is used for generator names; pass nullptr for pure degree lines.
    Evaluator(const RingSpec *ring, std::map<std::string, mpq_class> bindings)
        : ring_(ring), bindings_(std::move(bindings)) {}

    Value eval(const Node &node) {
        switch (node.kind) {
        case Node::Kind::Number: return number(node.number);
        case Node::Kind::Name: return name(node.name);
        case Node::Kind::Neg: return scale(eval(*node.args[0]), -1);
        case Node::Kind::Add: return add(eval(*node.args[0]), eval(*node.args[1]), 1);
        case Node::Kind::Sub: return add(eval(*node.args[0]), eval(*node.args[1]), -1);
        case Node::Kind::Mul: return mul(eval(*node.args[0]), eval(*node.args[1]));
        case Node::Kind::Div: return div(eval(*node.args[0]), eval(*node.args[1]));
        case Node::Kind::Pow: return power(eval(*node.args[0]), integer(*node.args[1]));
        case Node::Kind::Binom: {
            long a = integer(*node.args[0]), b = integer(*node.args[1]);
            return number(mpq_class(binomial(a, b)));
        }
        case Node::Kind::Sum: {
            long lo = integer(*node.args[0]), hi = integer(*node.args[1]);
            auto saved = bindings_.find(node.name) != bindings_.end()
                             ? std::optional<mpq_class>(bindings_[node.name])
                             : std::nullopt;
            Value acc = number(0);
            for (long i = lo; i <= hi; ++i) {
                bindings_[node.name] = i;
                acc = add(acc, eval(*node.args[2]), 1);
            }
            if (saved)
                bindings_[node.name] = *saved;
            else
                bindings_.erase(node.name);
            return acc;
        }
        }
        throw Error(ErrorKind::ParseError, "unknown node");
    }

    long integer(const Node &node) {
        Value v = eval(node);
        if (v.kind != Value::Kind::Number || !is_integer(v.number))
            throw Error(ErrorKind::InvalidArgument, "exponent, binomial argument or sum bound is not an integer");
        return to_long(v.number);
    }

  private:
    static Value number(const mpq_class &q) {
        Value v;
        v.kind = Value::Kind::Number;
        v.number = q;
        v.number.canonicalize();
        return v;
    }
    static Value ratfun(DPoly num, DPoly den) {
        Value v;
        v.kind = Value::Kind::RatFun;
        v.num = std::move(num);
        v.den = std::move(den);
        return v;
    }
    Value cls(ClassPoly c) const {
        Value v;
        v.kind = Value::Kind::Class;
        v.cls = std::move(c);
        return v;
    }

    Value name(const std::string &id) {
        if (auto it = bindings_.find(id); it != bindings_.end())
            return number(it->second);
        if (id == "d")
            return ratfun(DPoly::d(), DPoly(1));
        if (ring_ == nullptr)
            throw Error(ErrorKind::UnknownVariable, "'" + id + "' in a formula without a ring");
        if (id == "X" || id == "x")
            return cls(ClassPoly::X(*ring_));
        if ((id == "Q" && ring_->basis == Basis::Q) || (id == "F" && ring_->basis == Basis::F))
            return cls(ClassPoly::top(*ring_));
        if (id == "Y" && ring_->num_y >= 1)
            return cls(ClassPoly::Y(*ring_, 1));
        if (id.size() > 1 && id[0] == 'Y') {
            int i = std::stoi(id.substr(1));
            return cls(ClassPoly::Y(*ring_, i));
        }
        throw Error(ErrorKind::UnknownVariable, "'" + id + "' is not bound");
    }

    /// Promotes a value to a ring element; only constant denominators allowed.
    ClassPoly as_class(const Value &v) const {
        switch (v.kind) {
        case Value::Kind::Class: return v.cls;
        case Value::Kind::Number: return ClassPoly::constant(*ring_, DPoly(v.number));
        case Value::Kind::RatFun:
            if (!v.den.is_constant())
                throw Error(ErrorKind::InvalidArgument, "non-polynomial coefficient in a class formula");
            return ClassPoly::constant(*ring_, v.num * (1 / v.den.constant_term()));
        }
        return v.cls;
    }
    static std::pair<DPoly, DPoly> as_ratfun(const Value &v) {
        if (v.kind == Value::Kind::Number)
            return {DPoly(v.number), DPoly(1)};
        return {v.num, v.den};
    }

    Value scale(Value v, const mpq_class &s) {
        switch (v.kind) {
        case Value::Kind::Number: v.number *= s; break;
        case Value::Kind::RatFun: v.num *= s; break;
        case Value::Kind::Class: v.cls *= s; break;
        }
        return v;
    }
    Value add(const Value &a, const Value &b, int sign) {
        if (a.kind == Value::Kind::Number && b.kind == Value::Kind::Number)
            return number(a.number + sign * b.number);
        if (a.kind == Value::Kind::Class || b.kind == Value::Kind::Class) {
            ClassPoly r = as_class(a);
            r += as_class(b) * mpq_class(sign);
            return cls(r);
        }
        auto [an, ad] = as_ratfun(a);
        auto [bn, bd] = as_ratfun(b);
        return ratfun(an * bd + bn * ad * mpq_class(sign), ad * bd);
    }
    Value mul(const Value &a, const Value &b) {
        if (a.kind == Value::Kind::Number && b.kind == Value::Kind::Number)
            return number(a.number * b.number);
        if (a.kind == Value::Kind::Class || b.kind == Value::Kind::Class)
            return cls(as_class(a) * as_class(b));
        auto [an, ad] = as_ratfun(a);
        auto [bn, bd] = as_ratfun(b);
        return ratfun(an * bn, ad * bd);
    }
    Value div(const Value &a, const Value &b) {
        if (b.kind == Value::Kind::Class)
            throw Error(ErrorKind::InvalidArgument, "division by a ring element");
        if (b.kind == Value::Kind::Number) {
            if (b.number == 0)
                throw Error(ErrorKind::InvalidArgument, "division by zero in formula");
            return scale(a, 1 / b.number);
        }
        if (a.kind == Value::Kind::Class) {
            if (!b.num.is_constant())
                throw Error(ErrorKind::InvalidArgument, "class divided by a polynomial in d");
            ClassPoly r = a.cls * b.den;
            return cls(r * (1 / b.num.constant_term()));
        }
        auto [an, ad] = as_ratfun(a);
        return ratfun(an * b.den, ad * b.num);
    }
    Value power(const Value &a, long e) {
        if (a.kind == Value::Kind::Class) {
            if (e < 0)
                throw Error(ErrorKind::InvalidArgument, "negative power of a ring element");
            return cls(strata::pow(a.cls, e));
        }
        if (a.kind == Value::Kind::Number) {
            mpq_class r = 1;
            for (long i = 0; i < std::labs(e); ++i)
                r *= a.number;
            if (e < 0) {
                if (r == 0)
                    throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
                r = 1 / r;
            }
            return number(r);
        }
        DPoly n = a.num.pow(static_cast<int>(std::labs(e))), d = a.den.pow(static_cast<int>(std::labs(e)));
        return e >= 0 ? ratfun(n, d) : ratfun(d, n);
    }

    const RingSpec *ring_;
    std::map<std::string, mpq_class> bindings_;
};

/// Evaluates a class formula in the given ring.
inline ClassPoly eval_class(std::string_view text, const RingSpec &ring, std::map<std::string, mpq_class> bindings) {
    NodePtr ast = parse(text);
    Evaluator ev(&ring, std::move(bindings));
    Value v = ev.eval(*ast);
    if (v.kind == Value::Kind::Class)
        return v.cls;
    if (v.kind == Value::Kind::Number)
        return ClassPoly::constant(ring, DPoly(v.number));
    if (!v.den.is_constant())
        throw Error(ErrorKind::InvalidArgument, "class formula evaluates to a rational function");
    return ClassPoly::constant(ring, v.num * (1 / v.den.constant_term()));
}

/// Evaluates a degree line to a polynomial in d (exact division required).
inline DPoly eval_degree(std::string_view text, std::map<std::string, mpq_class> bindings) {
    NodePtr ast = parse(text);
    Evaluator ev(nullptr, std::move(bindings));
    Value v = ev.eval(*ast);
    if (v.kind == Value::Kind::Number)
        return DPoly(v.number);
    if (v.kind == Value::Kind::Class)
        throw Error(ErrorKind::InvalidArgument, "degree formula contains ring generators");
    return v.num.divide_exact(v.den);
}

/// Evaluates an expression that must reduce to a rational number.
inline mpq_class eval_number(std::string_view text, std::map<std::string, mpq_class> bindings) {
    NodePtr ast = parse(text);
    Evaluator ev(nullptr, std::move(bindings));
    Value v = ev.eval(*ast);
    if (v.kind != Value::Kind::Number)
        throw Error(ErrorKind::InvalidArgument, "expression is not a number: " + std::string(text));
    return v.number;
}

} // namespace strata::formula
