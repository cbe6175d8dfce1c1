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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "strata/diagram.hpp"
#include "strata/numeric.hpp"
#include "strata/types.hpp"

using namespace strata;

namespace {

std::vector<mpq_class> q(std::initializer_list<mpq_class> v) { return v; }

ErrorKind kind_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST(BuildDiagramTest, CuspHasOneFacet) {
    auto d = build_diagram(2, {{3, 0}, {0, 2}});
    ASSERT_EQ(d.facets.size(), 1u);
    EXPECT_EQ(d.facets[0].intercepts, q({3, 2}));
    EXPECT_EQ(facet_report(d), "3 2\n");
}

TEST(BuildDiagramTest, TpqrHasThreePlanes) {
    auto d = build_diagram(3, {{4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {1, 1, 1}});
    EXPECT_EQ(d.facets.size(), 3u);
    for (const auto &f : d.facets) {
        EXPECT_EQ(f.points.size(), 3u);
        EXPECT_TRUE(std::find(f.points.begin(), f.points.end(), Exponent{1, 1, 1}) != f.points.end());
    }
}

TEST(BuildDiagramTest, MissingAxisIsNotCommode) {
    EXPECT_EQ(kind_of([] { build_diagram(2, {{1, 0}}); }), ErrorKind::NotCommode);
}

TEST(BuildDiagramTest, NonIntegerInterceptsStayExact) {
    auto d = representative_diagram(TypeId::D(5), 3);
    bool found = false;
    for (const auto &f : d.facets)
        if (f.intercepts == q({4, mpq_class(8, 3), 2}))
            found = true;
    EXPECT_TRUE(found);
}

TEST(PointsUnderTest, CuspDegreeTwo) {
    auto d = build_diagram(2, {{3, 0}, {0, 2}});
    // (2,0): 2/3 < 1 and (1,1): 1/3 + 1/2 < 1 lie below; (0,2) is on the diagram.
    std::vector<Exponent> expected{{1, 1}, {2, 0}};
    EXPECT_EQ(points_under(d, 2), expected);
}

TEST(PointsUnderTest, OriginIsAlwaysUnder) {
    auto d = representative_diagram(TypeId::A(3), 4);
    EXPECT_EQ(points_under(d, 0), std::vector<Exponent>{Exponent(4, 0)});
}

TEST(PointsUnderTest, OrdinaryPointCount) {
    for (int n = 1; n <= 4; ++n)
        for (int p = 1; p <= 4; ++p) {
            std::vector<Exponent> support;
            for (int i = 0; i < n; ++i) {
                Exponent e(n, 0);
                e[i] = p;
                support.push_back(e);
            }
            auto d = build_diagram(n, support);
            std::size_t total = 0;
            for (int r = 0; r < p; ++r)
                total += points_under(d, r).size();
            EXPECT_EQ(mpz_class(total), binomial(p - 1 + n, n)) << n << " " << p;
            EXPECT_TRUE(points_under(d, p).empty());
        }
}

TEST(FaceFlagTest, CorankFlag) {
    // Corank-2 threefold point in n=4: two axes at intercept 4, two at 3.
    auto d = build_diagram(4, {{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}});
    auto flag = face_flag(d.facets[0], 4);
    EXPECT_EQ(flag.spaces[0], (std::vector<int>{0, 1}));
    EXPECT_EQ(flag.spaces[1], (std::vector<int>{0, 1}));
    EXPECT_EQ(flag.spaces[2], (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(flag.homogeneous(0), (std::vector<int>{0, 1, 2}));
}

TEST(FaceFlagTest, AkFlag) {
    auto d = representative_diagram(TypeId::A(4), 3);
    auto flag = face_flag(d.facets[0], 3);
    EXPECT_EQ(flag.spaces[0], std::vector<int>{0});
    EXPECT_EQ(flag.spaces[1], (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(flag.spaces[2], (std::vector<int>{0, 1, 2}));
}

TEST(FaceFlagTest, OrdinaryFlagIsTrivial) {
    auto d = representative_diagram(TypeId::ordinary(2), 3);
    for (const auto &s : face_flag(d.facets[0], 3).spaces)
        EXPECT_EQ(s, (std::vector<int>{0, 1, 2}));
}

TEST(FaceFlagTest, Equivariance) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4;
        std::vector<Exponent> support;
        for (int i = 0; i < n; ++i) {
            Exponent e(n, 0);
            e[i] = std::uniform_int_distribution<int>(2, 6)(rng);
            support.push_back(e);
        }
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Exponent> permuted;
        for (const auto &m : support) {
            Exponent e(n, 0);
            for (int i = 0; i < n; ++i)
                e[perm[i]] = m[i];
            permuted.push_back(e);
        }
        auto a = facet_axis_spaces(build_diagram(n, support).facets[0]);
        auto b = facet_axis_spaces(build_diagram(n, permuted).facets[0]);
        for (int i = 0; i < n; ++i) {
            std::vector<int> mapped;
            for (int j : a[i])
                mapped.push_back(perm[j]);
            std::sort(mapped.begin(), mapped.end());
            EXPECT_EQ(b[perm[i]], mapped);
        }
    }
}

TEST(CollectionTest, SqhDiagramGivesItsFlag) {
    auto d = representative_diagram(TypeId::A(3), 3);
    auto c = vector_space_collection(d);
    EXPECT_TRUE(c.is_flag());
    EXPECT_EQ(c.spaces, (std::vector<std::vector<int>>{{0}, {0, 1, 2}}));
    ASSERT_EQ(c.inclusions.size(), 1u);
}

TEST(CollectionTest, TTypeExample) {
    TypeId t = parse_type("T(5,6,7)");
    auto c = vector_space_collection(representative_diagram(t, 5));
    for (auto s : std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}, {0, 1, 2, 3, 4}})
        EXPECT_TRUE(c.contains(s));
    for (const auto &s : c.spaces) {
        if (s.size() == 1)
            EXPECT_LT(s[0], 3);
        if (s.size() < 5)
            EXPECT_LE(s.size(), 3u);
    }
    EXPECT_FALSE(c.is_flag());
}

TEST(CollectionTest, OrdinaryPointHasOnlyWholeSpace) {
    auto c = vector_space_collection(representative_diagram(TypeId::ordinary(3), 3));
    EXPECT_EQ(c.spaces, (std::vector<std::vector<int>>{{0, 1, 2}}));
}

TEST(LinearityTest, KnownClassification) {
    EXPECT_TRUE(is_linear_type(representative_diagram(TypeId::A(3), 3)));
    EXPECT_FALSE(is_linear_type(representative_diagram(TypeId::A(4), 3)));
    EXPECT_TRUE(is_linear_type(representative_diagram(TypeId::ordinary(3), 3)));
    EXPECT_TRUE(is_linear_type(representative_diagram(TypeId::D(5), 3)));
    EXPECT_TRUE(is_linear_type(representative_diagram(TypeId::E(6), 3)));
    EXPECT_TRUE(is_linear_type(representative_diagram(TypeId::D(6), 2)));
    EXPECT_FALSE(is_linear_type(representative_diagram(TypeId::D(6), 3)));
}

TEST(LinearityTest, DeterminacyBoundImpliesLinear) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        std::vector<Exponent> support;
        for (int i = 0; i < n; ++i) {
            Exponent e(n, 0);
            e[i] = std::uniform_int_distribution<int>(2, 7)(rng);
            support.push_back(e);
        }
        for (int extra = 0; extra < 2; ++extra) {
            Exponent e(n);
            for (auto &v : e)
                v = std::uniform_int_distribution<int>(0, 3)(rng);
            if (std::accumulate(e.begin(), e.end(), 0) > 0)
                support.push_back(e);
        }
        auto d = build_diagram(n, support);
        for (const auto &f : d.facets)
            for (const auto &m : d.support)
                EXPECT_GE(f.value(m), 1);
        auto [p, k] = multiplicity_and_determinacy(d);
        if (d.facets.size() == 1 && k <= 2 * p)
            EXPECT_TRUE(is_linear_type(d)) << facet_report(d);
        std::vector<Exponent> under;
        for (int r = 0; r <= k; ++r)
            for (const auto &m : points_under(d, r)) {
                under.push_back(m);
                for (int i = 0; i < n; ++i) {
                    if (m[i] == 0)
                        continue;
                    Exponent smaller = m;
                    --smaller[i];
                    auto lower = points_under(d, r - 1);
                    EXPECT_TRUE(std::find(lower.begin(), lower.end(), smaller) != lower.end());
                }
            }
        for (const auto &m : under) {
            bool on_or_above = std::all_of(d.facets.begin(), d.facets.end(),
                                           [&](const Facet &f) { return f.value(m) >= 1; });
            EXPECT_FALSE(on_or_above);
        }
    }
}

TEST(StableExtensionTest, CuspFromOneVariable) {
    auto d = build_diagram(1, {{3}});
    auto e = stable_extension(d, 1);
    ASSERT_EQ(e.facets.size(), 1u);
    EXPECT_EQ(e.facets[0].intercepts, q({3, 2}));
    EXPECT_EQ(stable_extension(d, 0).support, d.support);
}

TEST(StableExtensionTest, CollectionGainsAugmentedSpaces) {
    auto d = build_diagram(2, {{4, 0}, {1, 2}, {0, 3}});
    auto base = vector_space_collection(d);
    auto ext = vector_space_collection(stable_extension(d, 2));
    for (const auto &s : base.spaces)
        EXPECT_TRUE(ext.contains(s));
    EXPECT_TRUE(ext.contains({0, 1, 2, 3}));
}

TEST(MonomialCompareTest, Examples) {
    EXPECT_TRUE(monomial_compare({1, 0}, {0, 2}) < 0);
    EXPECT_TRUE(monomial_compare({2, 0}, {1, 1}) > 0);
    EXPECT_TRUE(monomial_compare({1, 1}, {1, 1}) == 0);
}

TEST(MonomialCompareTest, TotalOrder) {
    std::mt19937 rng(3);
    auto rand_exp = [&] {
        Exponent e(3);
        for (auto &v : e)
            v = std::uniform_int_distribution<int>(0, 3)(rng);
        return e;
    };
    for (int i = 0; i < 500; ++i) {
        auto a = rand_exp(), b = rand_exp(), c = rand_exp();
        auto ab = monomial_compare(a, b), ba = monomial_compare(b, a);
        EXPECT_EQ(ab < 0, ba > 0);
        EXPECT_EQ(ab == 0, a == b);
        if (ab < 0 && monomial_compare(b, c) < 0)
            EXPECT_TRUE(monomial_compare(a, c) < 0);
    }
}

TEST(MultiplicityTest, Examples) {
    EXPECT_EQ(multiplicity_and_determinacy(representative_diagram(TypeId::A(3), 3)), std::make_pair(2, 4));
    EXPECT_EQ(multiplicity_and_determinacy(build_diagram(3, {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}})), std::make_pair(3, 3));
    EXPECT_EQ(multiplicity_and_determinacy(representative_diagram(TypeId::D(5), 3)), std::make_pair(2, 4));
}

TEST(DiagramJsonTest, RoundTrip) {
    auto j = nlohmann::json::parse(R"({"n": 2, "support": [[3,0],[0,2]], "name": "A2"})");
    auto d = diagram_from_json(j);
    EXPECT_EQ(d.name, "A2");
    auto out = diagram_to_json(d);
    EXPECT_EQ(out["facets"][0][0], "3");
    EXPECT_EQ(kind_of([] { diagram_from_json(nlohmann::json::parse(R"({"support": []})")); }), ErrorKind::ParseError);
}

TEST(TypeIdTest, ParseNames) {
    EXPECT_EQ(parse_type("A3"), TypeId::A(3));
    EXPECT_EQ(parse_type("discriminant"), TypeId::A(1));
    EXPECT_EQ(parse_type("ordinary(2)"), TypeId::ordinary(2));
    EXPECT_EQ(parse_type("corank:3"), TypeId::corank(3));
    auto r = parse_type("reducible(1x1,1x1|2)");
    EXPECT_EQ(r.factors.size(), 2u);
    EXPECT_EQ(r.aut, 2);
    EXPECT_EQ(parse_type(r.name()), r);
    EXPECT_EQ(kind_of([] { parse_type("Z7"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { representative_support(TypeId::of(TypeId::Family::P8), 2); }), ErrorKind::OutOfValidity);
}
