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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strata/diagram.hpp"
#include "strata/numeric.hpp"
#include "strata/ring.hpp"

namespace strata {

/// f^{(order)}|_x contracted with the labelled points (0 = x, i = y_i) at the
/// given multiplicities, with `free_indices` uncontracted tensor slots.
struct CovariantCondition {
    int order = 0;
    std::map<int, int> contractions;
    int free_indices = 0;
    long components = 1;
    Exponent point; // the lattice point this condition was read from

    int contracted() const {
        int s = 0;
        for (const auto &[label, m] : contractions)
            s += m;
        return s;
    }

    /// True when this condition follows from `other`: other's contractions
    /// are a sub-multiset of ours and other's order is at least ours (the
    /// spare slots are filled with our labels or, by Euler, with x).
    bool implied_by(const CovariantCondition &other) const {
        if (other.order < order)
            return false;
        for (const auto &[label, m] : other.contractions) {
            auto it = contractions.find(label);
            if (it == contractions.end() || it->second < m)
                return false;
        }
        return true;
    }

    bool same_shape(const CovariantCondition &o) const {
        return order == o.order && contractions == o.contractions && free_indices == o.free_indices;
    }
};

/// An auxiliary point y_i ranging over the homogeneous lift of `space`.
struct AuxPoint {
    std::string label;
    int axis = 0;
    std::vector<int> space;
    int dim() const { return static_cast<int>(space.size()); }
};

struct LiftedStratumSpec {
    std::string name;
    int n = 1;
    NewtonDiagram diagram;
    std::vector<AuxPoint> aux;
    std::vector<CovariantCondition> raw;        // one per lattice point under the diagram
    std::vector<CovariantCondition> conditions; // implied ones removed, in monomial order
    bool extended_labels = false;
    std::optional<ClassPoly> cls;

    int num_y() const { return static_cast<int>(aux.size()); }
};

enum class LabelMode {
    /// Axes whose space is the whole space are free indices.
    Plain,
    /// Core axes are labelled as if one square variable were added, so that
    /// in small n no condition is left with several free slots.
    Extended,
    /// Plain, unless that leaves a contracted condition with two or more
    /// free slots.
    Auto,
};

namespace detail {

inline LiftedStratumSpec conditions_with_labels(const NewtonDiagram &d, bool extended) {
    LiftedStratumSpec spec;
    spec.name = d.name;
    spec.n = d.n;
    spec.diagram = d;
    spec.extended_labels = extended;

    // In extended mode the lattice points come from the diagram with one
    // square variable added; that extra axis always carries free indices.
    const NewtonDiagram src = extended ? stable_extension(d, 1) : d;
    const int dims = src.n;
    const std::vector<std::vector<int>> spaces = axis_spaces(src);

    std::vector<int> labelled;
    for (int i = 0; i < d.n; ++i)
        if (static_cast<int>(spaces[i].size()) < dims)
            labelled.push_back(i);
    std::stable_sort(labelled.begin(), labelled.end(),
                     [&](int a, int b) { return spaces[a].size() < spaces[b].size(); });
    std::vector<int> label_of(dims, 0);
    for (std::size_t j = 0; j < labelled.size(); ++j) {
        AuxPoint p;
        p.label = "y" + std::to_string(j + 1);
        p.axis = labelled[j];
        for (int a : spaces[labelled[j]])
            if (a < d.n)
                p.space.push_back(a);
        spec.aux.push_back(p);
        label_of[labelled[j]] = static_cast<int>(j) + 1;
    }

    for (const auto &m : all_points_under(src)) {
        CovariantCondition c;
        c.point = m;
        for (int i = 0; i < dims; ++i) {
            c.order += m[i];
            if (m[i] == 0)
                continue;
            if (label_of[i] > 0)
                c.contractions[label_of[i]] += m[i];
            else
                c.free_indices += m[i];
        }
        c.components = binomial(c.free_indices + d.n, c.free_indices).get_si();
        spec.raw.push_back(c);
    }

    for (std::size_t i = 0; i < spec.raw.size(); ++i) {
        const auto &c = spec.raw[i];
        bool drop = false;
        for (std::size_t j = 0; j < spec.raw.size() && !drop; ++j) {
            if (i == j)
                continue;
            const auto &o = spec.raw[j];
            if (c.same_shape(o))
                drop = j < i;
            else if (c.implied_by(o))
                drop = true;
        }
        if (!drop)
            spec.conditions.push_back(c);
    }
    return spec;
}

} // namespace detail

/// Translates every lattice point under the diagram into a covariant
/// condition and keeps the ones not implied by others.
inline LiftedStratumSpec covariant_conditions(const NewtonDiagram &d, LabelMode mode = LabelMode::Auto) {
    if (!is_linear_type(d))
        throw Error(ErrorKind::NotLinear, "diagram " + d.name + " fails the slope criterion");
    if (mode == LabelMode::Extended)
        return detail::conditions_with_labels(d, true);
    auto plain = detail::conditions_with_labels(d, false);
    if (mode == LabelMode::Plain)
        return plain;
    for (const auto &c : plain.conditions)
        if (!c.contractions.empty() && c.free_indices >= 2)
            return detail::conditions_with_labels(d, true);
    return plain;
}

/// Class of one component hypersurface: F + (d - p) X plus one generator
/// per contraction slot (X for x, Y_i for y_i), where p is the condition's
/// order unless `d_offset` overrides it. Over Q = (d-k)X + F this reads
/// Q + (k - p) X + contractions.
inline ClassPoly condition_class(const CovariantCondition &c, const RingSpec &ring, std::optional<int> d_offset = {}) {
    const int p = d_offset.value_or(c.order);
    ClassPoly r = ClassPoly::top(ring);
    r += ClassPoly::X(ring) * (ring.basis == Basis::Q ? DPoly(ring.k - p) : DPoly::linear(-p, 1));
    for (const auto &[label, m] : c.contractions) {
        if (label < 0 || label > ring.num_y)
            throw Error(ErrorKind::UnknownVariable, "condition uses a point outside the ring");
        r += ClassPoly::generator(ring, label) * mpq_class(m);
    }
    return r;
}

/// Q^{C(n+p,p)} over Q = (d-p)X + F: the lifted class of a point where all
/// derivatives up to order p vanish.
inline ClassPoly ordinary_point_class(int n, int p) {
    if (p < 1 || n < 1)
        throw Error(ErrorKind::InvalidArgument, "ordinary point needs n >= 1 and p >= 1");
    const long e = binomial(n + p, p).get_si();
    RingSpec ring = ring_q(n, 0, static_cast<int>(e) + 2, p);
    return pow(ClassPoly::top(ring), e);
}

inline nlohmann::ordered_json condition_to_json(const CovariantCondition &c) {
    nlohmann::ordered_json j;
    j["order"] = c.order;
    nlohmann::ordered_json con = nlohmann::ordered_json::object();
    for (const auto &[label, m] : c.contractions)
        con[label == 0 ? std::string("x") : "y" + std::to_string(label)] = m;
    j["contractions"] = con;
    j["free_indices"] = c.free_indices;
    j["components"] = c.components;
    return j;
}

inline nlohmann::ordered_json conditions_report(const LiftedStratumSpec &spec) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto &c : spec.conditions)
        arr.push_back(condition_to_json(c));
    return arr;
}

} // namespace strata
