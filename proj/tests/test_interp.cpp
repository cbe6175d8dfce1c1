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

#include <algorithm>
#include <random>

#include "strata/closedforms.hpp"
#include "strata/interp.hpp"

using namespace strata;

namespace {

using Samples = std::vector<std::pair<mpq_class, mpq_class>>;

Samples evaluate(const DPoly &p, const std::vector<int> &points) {
    Samples s;
    for (int x : points)
        s.emplace_back(x, p.eval(x));
    return s;
}

} // namespace

TEST(InterpolateTest, ThreePointsGiveXSquaredPlusOne) {
    EXPECT_EQ(interpolate_exact({{0, 1}, {1, 2}, {2, 5}}, 2), DPoly::parse("d^2+1"));
}

TEST(InterpolateTest, ConstantAndSinglePoint) {
    EXPECT_EQ(interpolate_exact({{3, 7}, {4, 7}, {9, 7}}, 2), DPoly(7));
    EXPECT_EQ(interpolate_exact({{5, mpq_class(2, 3)}}, 0), DPoly(mpq_class(2, 3)));
}

TEST(InterpolateTest, CuspDegreesOfCurves) {
    DPoly cusp = (DPoly::d() - DPoly(1)) * (DPoly::d() - DPoly(2)) * mpq_class(12);
    Samples s;
    for (int d = 3; d <= 7; ++d)
        s.emplace_back(d, closed_form_degree(TypeId::A(2), 2).eval(d));
    EXPECT_EQ(interpolate_exact(s, 2), cusp);
}

TEST(InterpolateTest, Errors) {
    try {
        interpolate_exact({{0, 1}, {1, 2}, {2, 5}, {3, 11}}, 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentSamples);
        EXPECT_EQ(e.detail(), 3);
    }
    try {
        interpolate_exact({{0, 1}, {1, 2}}, 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientSamples);
    }
    try {
        interpolate_exact({{0, 1}, {0, 1}, {1, 3}}, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(InterpolateTest, RandomRoundTripsAndReordering) {
    std::mt19937 rng(7);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int i = 0; i < 100; ++i) {
        int deg = uni(0, 6);
        std::vector<mpq_class> c(deg + 1);
        for (auto &q : c)
            q = mpq_class(uni(-50, 50), uni(1, 6));
        DPoly p(c);
        std::vector<int> pts;
        for (int x = -3; pts.size() < static_cast<std::size_t>(deg + 3); ++x)
            pts.push_back(x * 2 + 1);
        Samples s = evaluate(p, pts);
        EXPECT_EQ(interpolate_exact(s, deg), p);
        EXPECT_EQ(interpolate_exact(s, deg + 2), p);
        std::shuffle(s.begin(), s.end(), rng);
        EXPECT_EQ(interpolate_exact(s, deg), p);
    }
}

TEST(SweepTest, ReproducesCuspLines) {
    SweepOptions opt;
    opt.type = "A2";
    opt.n_lo = 2;
    opt.n_hi = 4;
    opt.d_lo = 3;
    opt.d_hi = 8;
    auto eval = [](int n, int d) { return closed_form_degree(TypeId::A(2), n).eval(d); };
    SweepReport rep = sweep(eval, opt);
    ASSERT_EQ(rep.rows.size(), 3u);
    for (const auto &r : rep.rows) {
        EXPECT_EQ(r.poly, closed_form_degree(TypeId::A(2), r.n));
        EXPECT_EQ(static_cast<int>(r.checks.size()), 6 - (r.n + 1));
        for (const auto &c : r.checks)
            EXPECT_TRUE(c.ok());
    }
    auto j = rep.to_json();
    EXPECT_EQ(j[0]["poly_in_d"], "12*d^2-36*d+24");
    EXPECT_EQ(j[0]["n"], 2);
    EXPECT_EQ(j[0]["checks"].size(), 3u);
    EXPECT_EQ(j[0]["checks"][0]["d"], 6);
    EXPECT_EQ(j[0]["checks"][0]["ok"], true);
}

TEST(SweepTest, ParallelMatchesSequential) {
    SweepOptions opt;
    opt.type = "A3";
    opt.n_lo = 2;
    opt.n_hi = 3;
    auto eval = [](int n, int d) { return closed_form_degree(TypeId::A(3), n).eval(d); };
    SweepReport a = sweep(eval, opt);
    opt.parallel = true;
    SweepReport b = sweep(eval, opt);
    EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(SweepTest, TopCoefficientsAcrossN) {
    // [A2] = 3 C(n+2,3) (d-1)^{n-1}(d-2): top coefficient n(n+1)(n+2)/2.
    SweepOptions opt;
    opt.type = "A2";
    opt.n_lo = 1;
    opt.n_hi = 6;
    opt.d_hi = 12;
    opt.n_degree_bound = 4;
    auto eval = [](int n, int d) { return closed_form_degree(TypeId::A(2), n).eval(d); };
    SweepReport rep = sweep(eval, opt);
    ASSERT_EQ(rep.top_coefficients_in_n.size(), 2u);
    EXPECT_EQ(poly_str(rep.top_coefficients_in_n[0], 'n'), "1/2*n^3+3/2*n^2+n");
}

TEST(SweepTest, SinglePointConstant) {
    SweepOptions opt;
    opt.type = "const";
    opt.n_lo = opt.n_hi = 1;
    opt.d_lo = opt.d_hi = 4;
    opt.degree_bound = [](int) { return 0; };
    SweepReport rep = sweep([](int, int) { return mpq_class(5); }, opt);
    EXPECT_EQ(rep.rows[0].poly, DPoly(5));
}

TEST(SweepTest, CorruptedSampleIsNamed) {
    SweepOptions opt;
    opt.type = "A2";
    opt.n_lo = 2;
    opt.n_hi = 3;
    auto eval = [](int n, int d) {
        mpq_class v = closed_form_degree(TypeId::A(2), n).eval(d);
        return n == 3 && d == 8 ? v + 1 : v;
    };
    try {
        sweep(eval, opt);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentSamples);
        EXPECT_EQ(e.detail(), 8);
        EXPECT_NE(std::string(e.what()).find("n=3, d=8"), std::string::npos);
    }
}

TEST(SweepTest, EmptyRangesAndTooFewSamples) {
    SweepOptions opt;
    opt.n_lo = 3;
    opt.n_hi = 2;
    auto eval = [](int, int) { return mpq_class(0); };
    EXPECT_THROW(sweep(eval, opt), Error);
    opt.n_lo = opt.n_hi = 4;
    opt.d_lo = 3;
    opt.d_hi = 5;
    try {
        sweep(eval, opt);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientSamples);
    }
}
