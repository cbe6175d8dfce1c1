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

#include <map>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace strata {

/// Incremental exact Gauss-Jordan elimination over the rationals. The pivot
/// rows are kept fully reduced, so a particular solution and a kernel basis
/// can be read off at any time.
class SparseLinearSystem {
  public:
    using Row = std::map<int, mpq_class>;

    explicit SparseLinearSystem(int ncols) : ncols_(ncols), occurs_(ncols) {}

    int columns() const { return ncols_; }
    int rank() const { return static_cast<int>(pivots_.size()); }
    bool consistent() const { return consistent_; }

    /// Adds the equation sum_c row[c] * x_c = rhs; returns consistent().
    bool add(Row row, mpq_class rhs) {
        if (!consistent_)
            return false;
        std::vector<int> hits;
        for (const auto &[c, v] : row)
            if (pivots_.count(c))
                hits.push_back(c);
        for (int c : hits) {
            auto it = row.find(c);
            if (it == row.end())
                continue;
            mpq_class f = it->second;
            const auto &[prow, prhs] = pivots_.at(c);
            for (const auto &[cc, v] : prow)
                axpy(row, cc, -f * v);
            rhs -= f * prhs;
        }
        if (row.empty()) {
            if (rhs != 0)
                consistent_ = false;
            return consistent_;
        }
        const int pc = row.begin()->first;
        const mpq_class inv = 1 / row.begin()->second;
        for (auto &[c, v] : row)
            v *= inv;
        rhs *= inv;
        std::vector<int> users(occurs_[pc].begin(), occurs_[pc].end());
        for (int other : users) {
            auto &[orow, orhs] = pivots_.at(other);
            mpq_class g = orow.at(pc);
            for (const auto &[cc, v] : row) {
                bool present_before = orow.count(cc) > 0;
                axpy(orow, cc, -g * v);
                bool present_after = orow.count(cc) > 0;
                if (present_before && !present_after)
                    occurs_[cc].erase(other);
                else if (!present_before && present_after)
                    occurs_[cc].insert(other);
            }
            orhs -= g * rhs;
        }
        for (const auto &[c, v] : row)
            occurs_[c].insert(pc);
        pivots_.emplace(pc, std::make_pair(std::move(row), std::move(rhs)));
        return true;
    }

    /// Particular solution with all free variables set to zero.
    std::vector<mpq_class> solution() const {
        std::vector<mpq_class> x(ncols_, mpq_class(0));
        for (const auto &[c, pr] : pivots_)
            x[c] = pr.second;
        return x;
    }

    /// One kernel vector per free column.
    std::vector<Row> kernel() const {
        std::vector<Row> out;
        for (int f = 0; f < ncols_; ++f) {
            if (pivots_.count(f))
                continue;
            Row v;
            v[f] = 1;
            for (int p : occurs_[f])
                if (p != f)
                    v[p] = -pivots_.at(p).first.at(f);
            out.push_back(std::move(v));
        }
        return out;
    }

  private:
    static void axpy(Row &row, int c, const mpq_class &delta) {
        if (delta == 0)
            return;
        auto [it, inserted] = row.try_emplace(c, delta);
        if (!inserted) {
            it->second += delta;
            if (it->second == 0)
                row.erase(it);
        }
    }

    int ncols_;
    std::unordered_map<int, std::pair<Row, mpq_class>> pivots_;
    std::vector<std::set<int>> occurs_;
    bool consistent_ = true;
};

} // namespace strata
