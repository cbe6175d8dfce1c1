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
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "strata/dpoly.hpp"
#include "strata/error.hpp"

namespace strata {

struct SampleCheck {
    mpq_class point;
    mpq_class expected; // the sampled value
    mpq_class actual;   // the fitted polynomial at the point
    bool ok() const { return expected == actual; }
};

struct Fit {
    DPoly poly;
    std::vector<SampleCheck> checks; // one per surplus sample
    bool consistent() const {
        return std::all_of(checks.begin(), checks.end(), [](const SampleCheck &c) { return c.ok(); });
    }
};

/// Fits the first degree_bound+1 samples exactly and evaluates the fit at
/// every surplus sample. Does not throw on a failed check.
inline Fit fit_exact(const std::vector<std::pair<mpq_class, mpq_class>> &samples, int degree_bound) {
    if (degree_bound < 0)
        throw Error(ErrorKind::InvalidArgument, "degree bound must be >= 0");
    if (static_cast<int>(samples.size()) < degree_bound + 1)
        throw Error(ErrorKind::InsufficientSamples, std::to_string(samples.size()) + " samples for degree bound " +
                                                        std::to_string(degree_bound));
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (samples[i].first == samples[j].first)
                throw Error(ErrorKind::InvalidArgument, "duplicate sample point " + samples[i].first.get_str());
    std::vector<std::pair<mpq_class, mpq_class>> head(samples.begin(), samples.begin() + degree_bound + 1);
    Fit fit{DPoly::interpolate(head), {}};
    for (std::size_t i = degree_bound + 1; i < samples.size(); ++i)
        fit.checks.push_back({samples[i].first, samples[i].second, fit.poly.eval(samples[i].first)});
    return fit;
}

/// The unique polynomial of degree <= degree_bound through the samples;
/// surplus samples must fit it (InconsistentSamples, detail = the point).
inline DPoly interpolate_exact(const std::vector<std::pair<mpq_class, mpq_class>> &samples, int degree_bound) {
    Fit fit = fit_exact(samples, degree_bound);
    for (const auto &c : fit.checks)
        if (!c.ok())
            throw Error(ErrorKind::InconsistentSamples,
                        "sample at " + c.point.get_str() + " is " + c.expected.get_str() + ", the fit gives " +
                            c.actual.get_str(),
                        is_integer(c.point) && c.point.get_num().fits_slong_p() ? c.point.get_num().get_si() : 0);
    return fit.poly;
}

/// Text of a polynomial with the variable renamed (DPoly prints "d").
inline std::string poly_str(const DPoly &p, char var) {
    std::string s = p.str();
    std::replace(s.begin(), s.end(), 'd', var);
    return s;
}

struct SweepRow {
    int n = 0;
    DPoly poly;
    std::vector<SampleCheck> checks;
};

struct SweepOptions {
    std::string type;
    int n_lo = 2, n_hi = 2;
    int d_lo = 3, d_hi = 8;
    /// Degree bound in d for a given n; defaults to n.
    std::function<int(int)> degree_bound;
    /// When set, the coefficients of d^n, d^{n-1}, ... are fitted across n
    /// with this degree bound.
    std::optional<int> n_degree_bound;
    bool parallel = false;
};

struct SweepReport {
    std::string type;
    std::vector<SweepRow> rows;
    std::vector<DPoly> top_coefficients_in_n; // j-th entry: coefficient of d^{n-j} as a polynomial in n

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const auto &r : rows) {
            nlohmann::ordered_json checks = nlohmann::ordered_json::array();
            for (const auto &c : r.checks) {
                nlohmann::ordered_json cj;
                cj["d"] = to_long(c.point);
                cj["ok"] = c.ok();
                checks.push_back(cj);
            }
            nlohmann::ordered_json row;
            row["type"] = type;
            row["n"] = r.n;
            row["poly_in_d"] = r.poly.str();
            row["checks"] = checks;
            out.push_back(row);
        }
        return out;
    }
};

using SweepEvaluator = std::function<mpq_class(int n, int d)>;

/// Evaluates at every (n, d) in the ranges, fits a polynomial in d per n and
/// checks every surplus sample. Throws InconsistentSamples naming the
/// offending (n, d) (detail = d).
inline SweepReport sweep(const SweepEvaluator &evaluator, const SweepOptions &opt) {
    if (opt.n_lo > opt.n_hi || opt.d_lo > opt.d_hi)
        throw Error(ErrorKind::InvalidArgument, "sweep ranges must be non-empty");
    SweepReport rep;
    rep.type = opt.type;
    for (int n = opt.n_lo; n <= opt.n_hi; ++n) {
        const int bound = opt.degree_bound ? opt.degree_bound(n) : n;
        std::vector<std::pair<mpq_class, mpq_class>> samples;
        if (opt.parallel) {
            std::vector<std::future<mpq_class>> jobs;
            for (int d = opt.d_lo; d <= opt.d_hi; ++d)
                jobs.push_back(std::async(std::launch::async, evaluator, n, d));
            int d = opt.d_lo;
            for (auto &j : jobs)
                samples.emplace_back(d++, j.get());
        } else {
            for (int d = opt.d_lo; d <= opt.d_hi; ++d)
                samples.emplace_back(d, evaluator(n, d));
        }
        Fit fit = fit_exact(samples, bound);
        for (const auto &c : fit.checks)
            if (!c.ok())
                throw Error(ErrorKind::InconsistentSamples,
                            opt.type + ": sample (n=" + std::to_string(n) + ", d=" + c.point.get_str() + ") is " +
                                c.expected.get_str() + ", the fit gives " + c.actual.get_str(),
                            to_long(c.point));
        rep.rows.push_back({n, fit.poly, fit.checks});
    }
    if (opt.n_degree_bound) {
        const int depth = opt.n_lo;
        for (int j = 0; j <= depth; ++j) {
            std::vector<std::pair<mpq_class, mpq_class>> pts;
            for (const auto &r : rep.rows)
                pts.emplace_back(r.n, r.poly.coeff(r.n - j));
            try {
                rep.top_coefficients_in_n.push_back(interpolate_exact(pts, *opt.n_degree_bound));
            } catch (const Error &e) {
                throw Error(e.kind(), opt.type + ": coefficient of d^(n-" + std::to_string(j) + ") across n: " +
                                          e.what(),
                            e.detail());
            }
        }
    }
    return rep;
}

} // namespace strata
