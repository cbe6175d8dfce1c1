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
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "strata/conditions.hpp"
#include "strata/formula.hpp"
#include "strata/linalg.hpp"
#include "strata/ring.hpp"
#include "strata/types.hpp"

namespace strata {

// ---------------------------------------------------------------------------
// Cycles of jump and residual pieces
// ---------------------------------------------------------------------------

/// Class of the locus where the listed points are linearly dependent:
/// h_{n+2-k} in their generators, k = number of points.
inline ClassPoly diagonal_class(const RingSpec &ring, const std::vector<int> &slots) {
    const int k = static_cast<int>(slots.size());
    if (k < 2)
        throw Error(ErrorKind::InvalidArgument, "a diagonal needs at least two points");
    if (k > ring.n + 2)
        throw Error(ErrorKind::TooManyPoints, std::to_string(k) + " points in P^" + std::to_string(ring.n));
    std::set<int> distinct(slots.begin(), slots.end());
    if (static_cast<int>(distinct.size()) != k)
        throw Error(ErrorKind::InvalidArgument, "diagonal points must be distinct");
    for (int s : slots)
        if (s < 0 || s >= ring.top())
            throw Error(ErrorKind::UnknownVariable, "diagonal point must be X or some Y_i");
    return complete_homogeneous(ring, slots, ring.n + 2 - k);
}

/// sum_{i=0}^{M-1} a^i b^{M-1-i}: the class of rank(a_vec, b_vec) <= 1 for two
/// M-vectors whose entries have classes a and b.
inline ClassPoly proportionality_class(int M, const ClassPoly &a, const ClassPoly &b) {
    if (M < 1)
        throw Error(ErrorKind::InvalidArgument, "proportionality needs M >= 1");
    a.require_same(b);
    ClassPoly r(a.spec());
    std::vector<ClassPoly> bp{ClassPoly::one(a.spec())};
    for (int i = 1; i < M; ++i)
        bp.push_back(bp.back() * b);
    ClassPoly ap = ClassPoly::one(a.spec());
    for (int i = 0; i < M; ++i) {
        r += ap * bp[M - 1 - i];
        if (i + 1 < M)
            ap = ap * a;
    }
    return r;
}

/// Multiplicity of the residual piece when an order-p condition degenerates
/// on a point already carrying an order-m one, with k the determinacy gap.
inline int intersection_multiplicity(int m, int p, int k) {
    if (m < 0 || k < 1 || p < m + 1 || p > m + k)
        throw Error(ErrorKind::OutOfRange, "intersection multiplicity needs m+1 <= p <= m+k");
    return k + m + 1 - p;
}

/// [x = y] times the (n-r)-th scaled Y-derivative of `cls`: the residual piece
/// over the diagonal when y carries an r-dimensional kernel.
inline ClassPoly residual_over_diagonal(const ClassPoly &cls, int y_slot, int r, int x_slot = 0) {
    const RingSpec &ring = cls.spec();
    if (r < 0 || r >= ring.n)
        throw Error(ErrorKind::OutOfRange, "fiber dimension must satisfy 0 <= r < n");
    ClassPoly deriv = derivative(cls, y_slot, ring.n - r) * mpq_class(mpz_class(1), factorial(ring.n - r));
    const ClassPoly expanded = to_f_basis(deriv);
    for (const auto &[m, c] : expanded.terms())
        if (!c.integer_valued())
            throw Error(ErrorKind::NonIntegral, "scaled derivative has a non-integral coefficient " + c.str());
    return diagonal_class(ring, {x_slot, y_slot}) * deriv;
}

/// Cycle C(I, J): the projections to the coordinates I of the points J
/// (x = 0 always included) are linearly dependent.
struct CycleOfJump {
    std::vector<int> coordinates; // I, sorted
    std::vector<int> points;      // J, sorted, contains 0
    int stage = 0;
    int grading = 1;
    int jump_before = 0;
    int jump_final = 0;

    int codim() const { return static_cast<int>(coordinates.size()) + 1 - static_cast<int>(points.size()); }

    /// C(I,J) lies in C(I',J') when I' is a subset of I and J of J'.
    bool contained_in(const CycleOfJump &o) const {
        return std::includes(coordinates.begin(), coordinates.end(), o.coordinates.begin(), o.coordinates.end()) &&
               std::includes(o.points.begin(), o.points.end(), points.begin(), points.end());
    }

    ClassPoly cls(const RingSpec &ring) const { return complete_homogeneous(ring, points, codim()); }

    std::string describe() const {
        std::ostringstream os;
        os << "C(I={";
        for (std::size_t i = 0; i < coordinates.size(); ++i)
            os << (i ? "," : "") << coordinates[i];
        os << "}, J={";
        for (std::size_t i = 0; i < points.size(); ++i)
            os << (i ? "," : "") << (points[i] == 0 ? std::string("x") : "y" + std::to_string(points[i]));
        os << "})";
        return os.str();
    }
};

struct ResidualSpec {
    CycleOfJump cycle;
    int multiplicity = 1;
    std::optional<ClassPoly> cls;
};

/// current * component minus the known residual pieces.
inline ClassPoly degenerate_step(const ClassPoly &current, const ClassPoly &component,
                                 const std::vector<ResidualSpec> &residuals) {
    ClassPoly r = current * component;
    for (const auto &res : residuals) {
        if (!res.cls)
            throw Error(ErrorKind::InvalidArgument, "residual over " + res.cycle.describe() + " has no class");
        if (res.multiplicity < 1)
            throw Error(ErrorKind::InvalidArgument, "residual multiplicity must be positive");
        r -= *res.cls * mpq_class(res.multiplicity);
    }
    return r;
}

/// Assigns gradings: 1 for cycles containing no other cycle of the list,
/// otherwise one more than the largest grading among the contained ones.
inline void assign_gradings(std::vector<CycleOfJump> &cycles) {
    std::vector<int> order(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i)
        order[i] = static_cast<int>(i);
    // Smaller cycles (larger codimension) first.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cycles[a].codim() > cycles[b].codim(); });
    for (int i : order) {
        int g = 1;
        for (int j : order) {
            if (i == j || cycles[i].coordinates == cycles[j].coordinates && cycles[i].points == cycles[j].points)
                continue;
            if (cycles[j].contained_in(cycles[i]))
                g = std::max(g, cycles[j].grading + 1);
        }
        cycles[i].grading = g;
    }
}

// ---------------------------------------------------------------------------
// Linear consistency solver
// ---------------------------------------------------------------------------

/// An unknown class U entering as class = base - multiplier * U.
struct Unknown {
    std::string name;
    ClassPoly multiplier;
    int degree = 0;
    std::vector<int> vars;    // slots U may use (the top generator is always allowed)
    std::vector<int> caps;    // per slot, < 0 for the ring cap
    /// When set, U is a target: uniqueness is judged on view(U) alone.
    std::function<ClassPoly(const ClassPoly &)> view;
};

struct SolveConstraints {
    std::vector<int> caps; // per slot exponent caps on the class, < 0 for none
    bool vanish_all = false;
    std::vector<std::vector<int>> symmetry;
};

struct SolveResult {
    ClassPoly cls;
    std::vector<ClassPoly> unknowns;
    int columns = 0;
    int kernel_dim = 0;
};

namespace detail {

inline std::vector<Mono> unknown_monomials(const RingSpec &ring, const Unknown &u) {
    std::vector<int> slots = u.vars;
    if (std::find(slots.begin(), slots.end(), ring.top()) == slots.end())
        slots.push_back(ring.top());
    std::vector<Mono> out;
    if (u.degree < 0)
        return out;
    Mono m;
    auto cap_of = [&](int s) {
        int c = ring.cap(s);
        if (s < static_cast<int>(u.caps.size()) && u.caps[s] >= 0)
            c = std::min(c, u.caps[s]);
        return c;
    };
    auto rec = [&](auto &&self, std::size_t i, int left) -> void {
        if (i + 1 == slots.size()) {
            if (left > cap_of(slots[i]))
                return;
            m[slots[i]] = static_cast<std::uint16_t>(left);
            out.push_back(m);
            return;
        }
        for (int v = 0; v <= std::min(left, cap_of(slots[i])); ++v) {
            m[slots[i]] = static_cast<std::uint16_t>(v);
            self(self, i + 1, left - v);
        }
        m[slots[i]] = 0;
    };
    rec(rec, 0, u.degree);
    return out;
}

inline bool violates(const Mono &m, const std::vector<int> &caps) {
    for (std::size_t s = 0; s < caps.size(); ++s)
        if (caps[s] >= 0 && m[static_cast<int>(s)] > caps[s])
            return true;
    return false;
}

inline mpq_class const_coeff(const DPoly &c) {
    if (!c.is_constant())
        throw Error(ErrorKind::InvalidArgument, "coefficient depends on d");
    return c.constant_term();
}

inline SolveResult solve_constant(const ClassPoly &base, const std::vector<Unknown> &unknowns,
                                  const SolveConstraints &cons) {
    const RingSpec &ring = base.spec();
    std::vector<ClassPoly> cols;
    std::vector<std::pair<int, Mono>> origin;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        unknowns[u].multiplier.require_same(base);
        for (const auto &m : unknown_monomials(ring, unknowns[u])) {
            ClassPoly mono(ring);
            mono.add_term(m, DPoly(1));
            cols.push_back(unknowns[u].multiplier * mono);
            origin.emplace_back(static_cast<int>(u), m);
        }
    }
    const int ncols = static_cast<int>(cols.size());

    std::map<Mono, SparseLinearSystem::Row> rows;
    std::map<Mono, mpq_class> rhs;
    auto wanted = [&](const Mono &m) { return cons.vanish_all || violates(m, cons.caps); };
    for (int j = 0; j < ncols; ++j)
        for (const auto &[m, c] : cols[j].terms())
            if (wanted(m))
                rows[m][j] = const_coeff(c);
    for (const auto &[m, c] : base.terms())
        if (wanted(m)) {
            rows[m];
            rhs[m] = const_coeff(c);
        }

    SparseLinearSystem sys(ncols);
    for (auto &[m, row] : rows)
        if (!sys.add(row, rhs.count(m) ? rhs[m] : mpq_class(0)))
            throw Error(ErrorKind::NoSolution, "constraints are inconsistent");

    for (const auto &perm : cons.symmetry) {
        std::map<Mono, SparseLinearSystem::Row> srows;
        std::map<Mono, mpq_class> srhs;
        for (int j = 0; j < ncols; ++j) {
            const ClassPoly diff = cols[j] - permute(cols[j], perm);
            for (const auto &[m, c] : diff.terms())
                srows[m][j] = const_coeff(c);
        }
        const ClassPoly base_diff = base - permute(base, perm);
        for (const auto &[m, c] : base_diff.terms()) {
            srows[m];
            srhs[m] = const_coeff(c);
        }
        for (auto &[m, row] : srows)
            if (!sys.add(row, srhs.count(m) ? srhs[m] : mpq_class(0)))
                throw Error(ErrorKind::NoSolution, "symmetry constraints are inconsistent");
    }

    const auto x = sys.solution();
    const auto kernel = sys.kernel();
    bool has_target = false;
    for (const auto &u : unknowns)
        has_target = has_target || static_cast<bool>(u.view);
    int ambiguous = 0;
    for (const auto &v : kernel) {
        bool harmless = true;
        if (has_target) {
            std::vector<ClassPoly> part(unknowns.size(), ClassPoly(ring));
            for (const auto &[j, val] : v) {
                ClassPoly t(ring);
                t.add_term(origin[j].second, DPoly(val));
                part[origin[j].first] += t;
            }
            for (std::size_t u = 0; u < unknowns.size() && harmless; ++u)
                if (unknowns[u].view && !unknowns[u].view(part[u]).is_zero())
                    harmless = false;
        } else {
            ClassPoly eff(ring);
            for (const auto &[j, val] : v)
                eff += cols[j] * val;
            harmless = eff.is_zero();
        }
        if (!harmless)
            ++ambiguous;
    }
    if (ambiguous > 0)
        throw Error(ErrorKind::NonUnique, "solution is not determined by the constraints",
                    static_cast<long>(kernel.size()));

    SolveResult res;
    res.columns = ncols;
    res.kernel_dim = static_cast<int>(kernel.size());
    res.cls = base;
    res.unknowns.assign(unknowns.size(), ClassPoly(ring));
    for (int j = 0; j < ncols; ++j) {
        if (x[j] == 0)
            continue;
        res.cls -= cols[j] * x[j];
        ClassPoly t(ring);
        t.add_term(origin[j].second, DPoly(x[j]));
        res.unknowns[origin[j].first] += t;
    }
    return res;
}

inline int max_d_degree(const ClassPoly &a) {
    int d = 0;
    for (const auto &[m, c] : a.terms())
        d = std::max(d, c.degree());
    return d;
}

inline ClassPoly at_d(const ClassPoly &a, const mpq_class &d) { return specialize(a, d, std::nullopt); }

} // namespace detail

/// Finds the unknowns U_i such that base - sum multiplier_i * U_i satisfies
/// the constraints. When coefficients depend on d the system is solved at
/// sample values of d and every coefficient is interpolated (one surplus
/// sample is kept as a check).
inline SolveResult consistency_solve(const ClassPoly &base, const std::vector<Unknown> &unknowns,
                                     const SolveConstraints &cons) {
    bool constant = base.d_free();
    int ddeg = detail::max_d_degree(base);
    for (const auto &u : unknowns) {
        constant = constant && u.multiplier.d_free();
        ddeg = std::max(ddeg, detail::max_d_degree(u.multiplier));
    }
    if (constant)
        return detail::solve_constant(base, unknowns, cons);

    const RingSpec &ring = base.spec();
    const int bound = std::max(ring.n, ddeg);
    const int first = std::max(ring.k + 2, ring.n + 3);
    std::vector<std::pair<mpq_class, SolveResult>> samples;
    for (int i = 0; i < bound + 2; ++i) {
        const mpq_class d = first + i;
        std::vector<Unknown> us = unknowns;
        for (auto &u : us)
            u.multiplier = detail::at_d(u.multiplier, d);
        samples.emplace_back(d, detail::solve_constant(detail::at_d(base, d), us, cons));
    }
    auto lift = [&](auto get) {
        std::set<Mono> monos;
        for (const auto &[d, s] : samples)
            for (const auto &[m, c] : get(s).terms())
                monos.insert(m);
        ClassPoly out(ring);
        for (const auto &m : monos) {
            std::vector<std::pair<mpq_class, mpq_class>> pts;
            for (int i = 0; i <= bound; ++i)
                pts.emplace_back(samples[i].first, get(samples[i].second).coeff(m).constant_term());
            DPoly p = DPoly::interpolate(pts);
            const auto &check = samples.back();
            if (p.eval(check.first) != get(check.second).coeff(m).constant_term())
                throw Error(ErrorKind::InconsistentSamples, "coefficient is not a polynomial of degree <= " +
                                                                std::to_string(bound) + " in d",
                            to_long(check.first));
            out.add_term(m, p);
        }
        return out;
    };
    SolveResult res;
    res.columns = samples.front().second.columns;
    res.kernel_dim = samples.front().second.kernel_dim;
    res.cls = lift([](const SolveResult &s) -> const ClassPoly & { return s.cls; });
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        res.unknowns.push_back(lift([u](const SolveResult &s) -> const ClassPoly & { return s.unknowns[u]; }));
    return res;
}

// ---------------------------------------------------------------------------
// Chains of linear conditions
// ---------------------------------------------------------------------------

struct ChainStage {
    std::vector<CovariantCondition> conditions;
    bool batch = false;           // q = 0 conditions applied together as a product
    std::vector<int> span;        // labels y_i with f^{(q)}(y_i) already known to vanish
    int rank = 0;                 // independent components added by a single stage
    std::vector<int> introduced;  // labels known after the stage, ascending
    std::vector<int> caps;        // per slot exponent caps on the stage result
    bool final = false;

    std::string describe() const {
        std::ostringstream os;
        os << (batch ? "batch" : "stage") << " of " << conditions.size() << " condition(s)";
        if (!batch)
            os << ", rank " << rank;
        return os.str();
    }
};

struct ChainPlan {
    LiftedStratumSpec spec;
    RingSpec ring;
    int k = 2;
    int degree = 0;
    std::vector<CovariantCondition> base_conditions;
    std::optional<ClassPoly> base_class;
    std::vector<ChainStage> stages;
    std::vector<int> final_caps; // n - dim(space_j), one per label
};

struct StageReport {
    std::string description;
    int columns = 0;
    int kernel_dim = 0;
};

struct ChainResult {
    ChainPlan plan;
    ClassPoly lifted;
    std::vector<std::vector<int>> symmetry;
    bool symmetric = true;
    std::vector<StageReport> stages;
    std::vector<CycleOfJump> cycles;

    /// Gysin image on the stratum in P^N: coefficient of Y_j^{n - dim_j}.
    ClassPoly minimal() const {
        std::vector<std::pair<int, int>> which;
        for (std::size_t j = 0; j < plan.final_caps.size(); ++j)
            which.emplace_back(static_cast<int>(j) + 1, plan.final_caps[j]);
        return which.empty() ? lifted : gysin_extract(lifted, which);
    }
    DPoly degree() const { return stratum_degree(lifted, plan.final_caps); }
};

namespace detail {

inline std::vector<int> labels_of(const CovariantCondition &c) {
    std::vector<int> out;
    for (const auto &[label, m] : c.contractions)
        if (label > 0)
            out.push_back(label);
    return out;
}

inline bool is_flag(const LiftedStratumSpec &spec) {
    for (std::size_t i = 0; i < spec.aux.size(); ++i)
        for (std::size_t j = 0; j < spec.aux.size(); ++j) {
            const auto &a = spec.aux[i].space, &b = spec.aux[j].space;
            std::set<int> sa(a.begin(), a.end()), sb(b.begin(), b.end());
            bool ab = std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
            bool ba = std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
            if (!ab && !ba)
                return false;
        }
    return true;
}

} // namespace detail

/// Orders the conditions into stages. With `base` given, the chain starts
/// from its lifted class and skips the conditions it already implies.
inline ChainPlan plan_chain(const LiftedStratumSpec &spec, const LiftedStratumSpec *base = nullptr) {
    ChainPlan plan;
    plan.spec = spec;
    const int n = spec.n;
    if (!detail::is_flag(spec))
        throw Error(ErrorKind::Unsupported, spec.name + ": auxiliary spaces do not form a flag");

    std::vector<CovariantCondition> rest;
    std::set<int> introduced;
    int k = 0;
    for (const auto &c : spec.conditions)
        if (c.contractions.empty())
            k = std::max(k, c.order);
    if (spec.num_y() > 0)
        k = std::max(k, 2);
    plan.k = std::max(k, 1);
    if (base) {
        if (!base->cls)
            throw Error(ErrorKind::InvalidArgument, "base stratum has no lifted class");
        if (base->num_y() > spec.num_y())
            throw Error(ErrorKind::InvalidArgument, "base stratum has more points than the target");
        plan.base_conditions = base->conditions;
        // The symmetric form of the target lives in its own Q-basis.
        plan.base_class = to_q_basis(*base->cls, plan.k);
        plan.degree = base->cls->degree();
    } else {
        for (const auto &c : spec.conditions)
            if (c.contractions.empty()) {
                plan.base_conditions.push_back(c);
                plan.degree += static_cast<int>(c.components);
            }
    }
    for (const auto &b : plan.base_conditions)
        for (int l : detail::labels_of(b))
            introduced.insert(l);
    for (const auto &c : spec.conditions) {
        bool implied = false;
        for (const auto &b : plan.base_conditions)
            if (c.implied_by(b))
                implied = true;
        if (!implied)
            rest.push_back(c);
    }

    std::vector<CovariantCondition> singles, batch;
    for (const auto &c : rest) {
        if (c.free_indices >= 2)
            throw Error(ErrorKind::Unsupported, spec.name + ": condition with " + std::to_string(c.free_indices) +
                                                    " free slots left after relabelling");
        (c.free_indices == 1 ? singles : batch).push_back(c);
    }

    std::vector<CovariantCondition> seen = plan.base_conditions;
    for (const auto &c : singles) {
        ChainStage st;
        st.conditions = {c};
        std::set<int> span;
        for (const auto &o : seen) {
            if (o.order != c.order || o.free_indices != 1)
                continue;
            for (int l : introduced) {
                CovariantCondition widened = c;
                widened.contractions[l] += 1;
                bool sub = true;
                for (const auto &[label, m] : o.contractions) {
                    auto it = widened.contractions.find(label);
                    if (it == widened.contractions.end() || it->second < m)
                        sub = false;
                }
                if (sub && !(o.contractions == c.contractions))
                    span.insert(l);
            }
        }
        st.span.assign(span.begin(), span.end());
        st.rank = n + 1 - 1 - static_cast<int>(st.span.size());
        if (st.rank < 1)
            throw Error(ErrorKind::Unsupported, spec.name + ": stage without independent components");
        for (int l : detail::labels_of(c))
            introduced.insert(l);
        st.introduced.assign(introduced.begin(), introduced.end());
        plan.degree += st.rank;
        seen.push_back(c);
        plan.stages.push_back(st);
    }
    if (!batch.empty()) {
        ChainStage st;
        st.batch = true;
        st.conditions = batch;
        for (const auto &c : batch) {
            for (int l : detail::labels_of(c))
                introduced.insert(l);
            plan.degree += static_cast<int>(c.components);
        }
        st.introduced.assign(introduced.begin(), introduced.end());
        plan.stages.push_back(st);
    }

    for (const auto &a : spec.aux)
        plan.final_caps.push_back(n - a.dim());
    const int num_y = spec.num_y();
    for (std::size_t s = 0; s < plan.stages.size(); ++s) {
        auto &st = plan.stages[s];
        st.final = s + 1 == plan.stages.size();
        st.caps.assign(num_y + 2, -1);
        for (int l : st.introduced)
            st.caps[l] = st.final ? plan.final_caps[l - 1] : n - static_cast<int>(st.introduced.size());
    }
    plan.ring = ring_q(n, num_y, plan.degree + 2, plan.k);
    return plan;
}

/// The cycles of jump met along the chain: coordinate cycles of x for every
/// single stage and the dependence loci of x with the known labels.
inline std::vector<CycleOfJump> enumerate_cycles(const ChainPlan &plan) {
    std::vector<CycleOfJump> out;
    const int n = plan.spec.n;
    std::vector<int> all(n + 1);
    for (int i = 0; i <= n; ++i)
        all[i] = i;
    for (std::size_t s = 0; s < plan.stages.size(); ++s) {
        const auto &st = plan.stages[s];
        if (!st.batch) {
            for (int j = 1; j <= st.rank; ++j) {
                CycleOfJump c;
                for (int i = n + 1 - j; i <= n; ++i)
                    c.coordinates.push_back(i);
                c.points = {0};
                c.stage = static_cast<int>(s);
                c.jump_final = 1;
                c.jump_before = 0;
                out.push_back(c);
            }
            const auto fresh = detail::labels_of(st.conditions.front());
            CycleOfJump c;
            c.coordinates = all;
            c.points = {0};
            for (int l : st.span)
                c.points.push_back(l);
            for (int l : fresh)
                if (std::find(c.points.begin(), c.points.end(), l) == c.points.end())
                    c.points.push_back(l);
            std::sort(c.points.begin(), c.points.end());
            c.stage = static_cast<int>(s);
            c.jump_final = st.rank;
            c.jump_before = st.rank - 1;
            out.push_back(c);
        } else {
            std::vector<int> prefix{0};
            for (int l : st.introduced) {
                prefix.push_back(l);
                CycleOfJump c;
                c.coordinates = all;
                c.points = prefix;
                std::sort(c.points.begin(), c.points.end());
                c.stage = static_cast<int>(s);
                std::set<int> in(prefix.begin(), prefix.end());
                for (const auto &cond : st.conditions) {
                    bool inside = true;
                    for (int lab : detail::labels_of(cond))
                        inside = inside && in.count(lab);
                    if (inside)
                        ++c.jump_final;
                }
                c.jump_before = std::max(0, c.jump_final - 1);
                if (c.jump_final > 0 && c.codim() >= 1)
                    out.push_back(c);
            }
        }
    }
    assign_gradings(out);
    return out;
}

namespace detail {

/// sum_{i=0}^{rank} (-1)^i h_i(X, Y_span) L^{rank-i}: the class of rank
/// independent components of a vector of class L, after quotienting by
/// the directions the span already kills.
inline ClassPoly main_term(const RingSpec &ring, const ClassPoly &L, const std::vector<int> &span, int rank) {
    std::vector<int> slots{0};
    slots.insert(slots.end(), span.begin(), span.end());
    ClassPoly r(ring);
    std::vector<ClassPoly> lp{ClassPoly::one(ring)};
    for (int i = 1; i <= rank; ++i)
        lp.push_back(lp.back() * L);
    for (int i = 0; i <= rank; ++i) {
        ClassPoly t = complete_homogeneous(ring, slots, i) * lp[rank - i];
        if (i % 2)
            r -= t;
        else
            r += t;
    }
    return r;
}

inline std::vector<Unknown> residual_unknowns(const RingSpec &ring, const std::vector<int> &labels, int total) {
    std::vector<Unknown> out;
    std::vector<int> prefix{0};
    for (int l : labels) {
        prefix.push_back(l);
        const int codim = ring.n + 2 - static_cast<int>(prefix.size());
        if (codim < 0)
            break;
        Unknown u;
        u.name = "R" + std::to_string(prefix.size());
        u.multiplier = complete_homogeneous(ring, prefix, codim);
        u.degree = total - codim;
        for (int s = 0; s < ring.top(); ++s)
            u.vars.push_back(s);
        out.push_back(u);
    }
    return out;
}

inline std::vector<std::vector<int>> chain_symmetry(const ChainPlan &plan) {
    std::vector<std::vector<int>> group;
    const auto &aux = plan.spec.aux;
    const int r = static_cast<int>(aux.size());
    auto transposition = [&](int a, int b) {
        std::vector<int> p(r + 1);
        for (int i = 0; i <= r; ++i)
            p[i] = i;
        std::swap(p[a], p[b]);
        return p;
    };
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            if (aux[i].space == aux[j].space)
                group.push_back(transposition(i + 1, j + 1));
    // x plays the same role as the y_i when every condition is f^{(2)}(p) = 0
    // for one of the points p (cusp and corank-r liftings).
    bool x_like = r > 0;
    for (const auto &c : plan.spec.conditions) {
        const bool on_x = c.order == 1 && c.contractions.empty() && c.free_indices == 1;
        const bool on_y = c.order == 2 && c.free_indices == 1 && c.contractions.size() == 1 &&
                          c.contractions.begin()->first > 0 && c.contractions.begin()->second == 1;
        x_like = x_like && (on_x || on_y);
    }
    if (x_like)
        for (int i = 1; i <= r; ++i)
            group.push_back(transposition(0, i));
    return group;
}

} // namespace detail

inline ChainResult run_chain(const ChainPlan &plan) {
    ChainResult res;
    res.plan = plan;
    const RingSpec &ring = plan.ring;
    ClassPoly cur = ClassPoly::one(ring);
    if (plan.base_class) {
        const ClassPoly &b = *plan.base_class;
        if (b.spec().n != ring.n || b.spec().basis != Basis::Q)
            throw Error(ErrorKind::SpecMismatch, "base class must be a Q-basis class in the same dimension");
        std::vector<int> map(b.spec().num_y + 1);
        for (int s = 0; s <= b.spec().num_y; ++s)
            map[s] = s;
        cur = embed(b, ring, map);
    } else {
        for (const auto &c : plan.base_conditions)
            cur = cur * pow(condition_class(c, ring), c.components);
    }
    for (const auto &st : plan.stages) {
        ClassPoly product(ring);
        if (st.batch) {
            product = cur;
            for (const auto &c : st.conditions)
                product = product * pow(condition_class(c, ring), c.components);
        } else {
            product = cur * detail::main_term(ring, condition_class(st.conditions.front(), ring), st.span, st.rank);
        }
        const int total = product.degree();
        SolveConstraints cons;
        cons.caps = st.caps;
        auto unknowns = detail::residual_unknowns(ring, st.introduced, total);
        SolveResult sr = consistency_solve(product, unknowns, cons);
        cur = sr.cls;
        res.stages.push_back({st.describe(), sr.columns, sr.kernel_dim});
    }
    res.lifted = cur;
    res.symmetry = detail::chain_symmetry(plan);
    res.symmetric = check_symmetry(cur, res.symmetry);
    if (!res.symmetric)
        throw Error(ErrorKind::NoSolution, plan.spec.name + ": lifted class is not symmetric under its point group");
    for (std::size_t j = 0; j < plan.final_caps.size(); ++j)
        if (cur.max_exponent(static_cast<int>(j) + 1) > plan.final_caps[j])
            throw Error(ErrorKind::NoSolution, plan.spec.name + ": lifted class exceeds the Y" + std::to_string(j + 1) +
                                                   " power bound");
    res.cycles = enumerate_cycles(plan);
    return res;
}

/// Lifted class of the stratum by successive degeneration, optionally
/// starting from the lifted class of an adjacent stratum.
inline ChainResult chain_linear(const LiftedStratumSpec &spec, const LiftedStratumSpec *base = nullptr) {
    return run_chain(plan_chain(spec, base));
}

inline ChainResult chain_for_type(const TypeId &t, int n, LabelMode mode = LabelMode::Auto) {
    if (n < min_dimension(t))
        throw Error(ErrorKind::OutOfValidity, t.name() + " needs n >= " + std::to_string(min_dimension(t)));
    return chain_linear(covariant_conditions(representative_diagram(t, n), mode));
}

// ---------------------------------------------------------------------------
// Explicit routes for the cusp and the tacnode
// ---------------------------------------------------------------------------

/// Lifted cusp class built by the coordinate-plane recursion: after the n
/// components f^{(2)}(y)_i the residual over {z_n = ... = z_j = 0} is
/// X^{n+1-j} (Q+Y)^{j-1} minus the next one, plus the nodal piece over x = y.
inline ClassPoly cusp_lifted_explicit(int n) {
    if (n < 2)
        throw Error(ErrorKind::OutOfValidity, "the cusp needs n >= 2");
    const RingSpec ring = ring_q(n, 1, 2 * n + 3, 2);
    const ClassPoly Q = ClassPoly::top(ring), X = ClassPoly::X(ring), Y = ClassPoly::Y(ring, 1);
    const ClassPoly node = pow(Q + X, n + 1);
    ClassPoly coord(ring);
    for (int j = n; j >= 1; --j)
        coord = pow(X, j) * pow(Q + Y, n - j) - coord;

    CycleOfJump plane;
    plane.coordinates = {n};
    plane.points = {0};
    CycleOfJump diag;
    for (int i = 0; i <= n; ++i)
        diag.coordinates.push_back(i);
    diag.points = {0, 1};
    std::vector<ResidualSpec> res{{plane, 1, node * coord}, {diag, 1, node * diagonal_class(ring, {0, 1})}};
    return degenerate_step(node, pow(Q + Y, n), res);
}

/// Lifted tacnode class: the cusp class times f^{(3)}(y,y,y) minus the piece
/// over x = y, taken with multiplicity 3.
inline ClassPoly tacnode_lifted_explicit(int n) {
    ClassPoly cusp = cusp_lifted_explicit(n);
    RingSpec ring = cusp.spec();
    ring.f_cap = 2 * n + 4;
    cusp = widen(cusp, ring);
    CovariantCondition cubic;
    cubic.order = 3;
    cubic.contractions[1] = 3;
    CycleOfJump diag;
    for (int i = 0; i <= n; ++i)
        diag.coordinates.push_back(i);
    diag.points = {0, 1};
    const int mult = intersection_multiplicity(2, 3, 3);
    return degenerate_step(cusp, condition_class(cubic, ring), {{diag, mult, residual_over_diagonal(cusp, 1, 1)}});
}

// ---------------------------------------------------------------------------
// Recipes: lifted classes obtained by dividing out a known factor
// ---------------------------------------------------------------------------

struct RecipeTerm {
    std::string lift;
    mpq_class mult = 1;
    LabelMode labels = LabelMode::Auto;
    int min_n = 0;
};

struct RecipeResidual {
    std::vector<int> points; // labels y_i dependent with x
    mpq_class mult = 1;
    std::optional<std::string> cls; // formula text, or solved for
};

struct DegenerationRecipe {
    std::string name;
    int num_y = 0;
    std::vector<int> source_vars;
    std::map<int, std::string> source_caps;
    CovariantCondition divisor;
    std::vector<int> divisor_span;
    std::vector<RecipeTerm> rhs;
    std::vector<RecipeResidual> residuals;
    std::map<int, std::string> gysin;
};

struct RecipeResult {
    ClassPoly lifted;
    ClassPoly minimal;
    DPoly degree;
    int kernel_dim = 0;
};

namespace detail {

inline int parse_label(const std::string &s) {
    if (s == "x" || s == "X")
        return 0;
    if (s.size() >= 2 && (s[0] == 'y' || s[0] == 'Y')) {
        try {
            return std::stoi(s.substr(1));
        } catch (const std::exception &) {
        }
    }
    throw Error(ErrorKind::ParseError, "bad point label '" + s + "'");
}

inline int eval_in_n(const std::string &expr, int n) {
    return static_cast<int>(to_long(formula::eval_number(expr, {{"n", n}})));
}

} // namespace detail

inline DegenerationRecipe recipe_from_json(const nlohmann::json &j) {
    try {
        DegenerationRecipe r;
        r.name = j.at("name").get<std::string>();
        r.num_y = static_cast<int>(j.at("points").size()) - 1;
        const auto &src = j.at("source");
        for (const auto &v : src.at("vars"))
            r.source_vars.push_back(detail::parse_label(v.get<std::string>()));
        const nlohmann::json caps = src.value("caps", nlohmann::json::object());
        for (const auto &[k, v] : caps.items())
            r.source_caps[detail::parse_label(k)] = v.get<std::string>();
        const auto &dv = j.at("divisor");
        const auto &cond = dv.at("condition");
        r.divisor.order = cond.at("order").get<int>();
        r.divisor.free_indices = cond.at("free_indices").get<int>();
        for (const auto &[k, v] : cond.at("contractions").items())
            r.divisor.contractions[detail::parse_label(k)] = v.get<int>();
        for (const auto &v : dv.at("span"))
            r.divisor_span.push_back(detail::parse_label(v.get<std::string>()));
        for (const auto &t : j.at("rhs")) {
            RecipeTerm term;
            term.lift = t.at("type").get<std::string>();
            term.mult = parse_rational(t.at("mult").dump());
            if (term.mult <= 0)
                throw Error(ErrorKind::InvalidArgument, "recipe multiplicities must be positive");
            term.min_n = t.value("min_n", 0);
            const std::string mode = t.value("labels", std::string("auto"));
            term.labels = mode == "extended" ? LabelMode::Extended : mode == "plain" ? LabelMode::Plain : LabelMode::Auto;
            r.rhs.push_back(term);
        }
        for (const auto &t : j.at("residuals")) {
            RecipeResidual res;
            const auto &cyc = t.at("cycle");
            if (!(cyc.at("I").is_string() && cyc.at("I").get<std::string>() == "all"))
                throw Error(ErrorKind::Unsupported, "recipe residuals must lie over full diagonals (I = \"all\")");
            for (const auto &v : cyc.at("J")) {
                const int label = detail::parse_label(v.get<std::string>());
                if (label > 0)
                    res.points.push_back(label);
            }
            res.mult = parse_rational(t.at("mult").dump());
            if (res.mult <= 0)
                throw Error(ErrorKind::InvalidArgument, "recipe multiplicities must be positive");
            const std::string cls = t.at("class").get<std::string>();
            if (cls != "solve")
                res.cls = cls;
            r.residuals.push_back(res);
        }
        for (const auto &[k, v] : j.at("result").at("gysin").items())
            r.gysin[detail::parse_label(k)] = v.get<std::string>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("recipe: ") + e.what());
    }
}

inline DegenerationRecipe load_recipe(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::InvalidArgument, "cannot open recipe " + path);
    try {
        return recipe_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorKind::ParseError, std::string("recipe: ") + e.what());
    }
}

/// Lifted class of the stratum of P8 points carrying a marked direction y1
/// in their kernel with f^{(3)}(y1,y1,y1) = 0, pushed forward along y3.
inline ClassPoly p8_cubic_lift(int n) {
    if (n < 3)
        throw Error(ErrorKind::OutOfValidity, "the marked P8 stratum needs n >= 3");
    ChainResult c3 = chain_for_type(TypeId::corank(3), n, LabelMode::Extended);
    RingSpec ring = c3.lifted.spec();
    ring.f_cap += 1;
    ClassPoly base = widen(c3.lifted, ring);
    CovariantCondition cubic;
    cubic.order = 3;
    cubic.contractions[1] = 3;
    ClassPoly product = base * condition_class(cubic, ring);
    SolveConstraints cons;
    cons.caps.assign(ring.slots(), -1);
    cons.caps[1] = n - 2;
    cons.caps[2] = n - 3;
    cons.caps[3] = n - 3;
    auto unknowns = detail::residual_unknowns(ring, {1}, product.degree());
    ClassPoly lifted = consistency_solve(product, unknowns, cons).cls;
    return gysin_extract(lifted, {{3, n - 3}});
}

inline ClassPoly named_lift(const RecipeTerm &term, int n) {
    if (term.lift == "P8'")
        return p8_cubic_lift(n);
    return chain_for_type(parse_type(term.lift), n, term.labels).lifted;
}

/// Divides the known right-hand side by the divisor's main term. Every
/// residual class must be known.
inline ClassPoly invert_division(const ClassPoly &rhs, const ClassPoly &divisor) { return divide_exact(rhs, divisor); }

/// Runs a recipe in dimension n: A * M = sum mult * [rhs] + sum mult * h * R,
/// solving for A (and any residual marked "solve") by consistency, or by
/// exact division when every residual is given.
inline RecipeResult run_recipe(const DegenerationRecipe &recipe, int n) {
    std::vector<std::pair<RecipeTerm, ClassPoly>> lifts;
    int total = 0;
    for (const auto &t : recipe.rhs) {
        if (n < t.min_n)
            continue;
        ClassPoly c = named_lift(t, n);
        if (c.spec().num_y > recipe.num_y)
            throw Error(ErrorKind::SpecMismatch, "lift " + t.lift + " has more points than the recipe");
        total = std::max(total, c.degree());
        lifts.emplace_back(t, c);
    }
    const RingSpec ring = ring_q(n, recipe.num_y, total + 2, 2);
    ClassPoly base(ring);
    for (const auto &[t, c] : lifts) {
        if (c.spec().k != 2)
            throw Error(ErrorKind::SpecMismatch, "lift " + t.lift + " is not over Q = (d-2)X + F");
        std::vector<int> map(c.spec().num_y + 1);
        for (int s = 0; s <= c.spec().num_y; ++s)
            map[s] = s;
        RingSpec mid = c.spec();
        mid.f_cap = ring.f_cap;
        base += embed(widen(c, mid), ring, map) * t.mult;
    }

    const int rank = ring.n + 1 - 1 - static_cast<int>(recipe.divisor_span.size());
    const ClassPoly M = detail::main_term(ring, condition_class(recipe.divisor, ring), recipe.divisor_span, rank);

    std::vector<Unknown> unknowns;
    bool all_known = true;
    for (const auto &res : recipe.residuals) {
        std::vector<int> pts{0};
        pts.insert(pts.end(), res.points.begin(), res.points.end());
        const ClassPoly h = diagonal_class(ring, pts);
        if (res.cls) {
            base += h * formula::eval_class(*res.cls, ring, {{"n", n}}) * res.mult;
            continue;
        }
        all_known = false;
        Unknown u;
        u.name = "R" + std::to_string(pts.size());
        u.multiplier = h * (-res.mult);
        u.degree = total - h.degree();
        for (int s = 0; s < ring.top(); ++s)
            u.vars.push_back(s);
        unknowns.push_back(u);
    }

    // Points the source class does not involve are pushed forward trivially.
    std::vector<std::pair<int, int>> which;
    for (int s = 1; s <= recipe.num_y; ++s) {
        auto it = recipe.gysin.find(s);
        if (it != recipe.gysin.end())
            which.emplace_back(s, detail::eval_in_n(it->second, n));
        else if (std::find(recipe.source_vars.begin(), recipe.source_vars.end(), s) == recipe.source_vars.end())
            which.emplace_back(s, 0);
        else
            throw Error(ErrorKind::InvalidArgument, "recipe does not say how to push forward y" + std::to_string(s));
    }

    RecipeResult out;
    if (all_known) {
        out.lifted = invert_division(base, M);
    } else {
        Unknown a;
        a.name = recipe.name;
        a.multiplier = M;
        a.degree = total - M.degree();
        a.vars = recipe.source_vars;
        a.caps.assign(ring.slots(), -1);
        for (const auto &[slot, e] : recipe.source_caps)
            a.caps[slot] = detail::eval_in_n(e, n);
        a.view = [which](const ClassPoly &u) { return gysin_extract(u, which); };
        unknowns.insert(unknowns.begin(), a);
        SolveConstraints cons;
        cons.vanish_all = true;
        SolveResult sr = consistency_solve(base, unknowns, cons);
        out.lifted = sr.unknowns.front();
        out.kernel_dim = sr.kernel_dim;
    }
    out.minimal = gysin_extract(out.lifted, which);
    out.degree = stratum_degree(out.minimal, std::vector<int>(out.minimal.spec().num_y, 0));
    return out;
}

inline std::string default_recipe_path(const std::string &name) {
#ifdef STRATA_DATA_DIR
    return std::string(STRATA_DATA_DIR) + "/recipes/" + name + ".json";
#else
    return "data/recipes/" + name + ".json";
#endif
}

} // namespace strata
