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

#include <string>
#include <string_view>
#include <vector>

#include "strata/error.hpp"

namespace strata {

inline mpz_class binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n)
        return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class factorial(long n) {
    if (n < 0)
        throw Error(ErrorKind::InvalidArgument, "factorial of a negative number");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline mpz_class multinomial(const std::vector<long> &parts) {
    mpz_class r = 1;
    long total = 0;
    for (long p : parts) {
        total += p;
        r *= binomial(total, p);
    }
    return r;
}

inline bool is_integer(const mpq_class &q) { return q.get_den() == 1; }

inline long to_long(const mpq_class &q) {
    if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw Error(ErrorKind::InvalidArgument, "value " + q.get_str() + " is not a machine integer");
    return q.get_num().get_si();
}

/// Parses "a", "-a" or "a/b" into a canonical rational.
inline mpq_class parse_rational(std::string_view text) {
    std::string s(text);
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw Error(ErrorKind::ParseError, "not a rational number: '" + s + "'");
    q.canonicalize();
    return q;
}

} // namespace strata
