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
// Runs the engine on every type it handles in P^3 and compares the result
// with the closed-form table.

#include <strata/closedforms.hpp>
#include <strata/engine.hpp>
#include <strata/interp.hpp>

#include <iostream>

int main() {
    using namespace strata;
    const int n = 3;
    int mismatches = 0;
    for (const char *name : {"A1", "A2", "A3", "A4", "D4", "D5", "E6", "X9", "P8"}) {
        const TypeId t = parse_type(name);
        EngineResult r = compute_engine(t, n);
        const bool cls = same_class(r.minimal, closed_form_class(t, n));
        const bool deg = r.degree == closed_form_degree(t, n);
        mismatches += !(cls && deg);
        std::cout << name << " (" << r.route << "): class " << (cls ? "agrees" : "differs") << ", degree "
                  << (deg ? "agrees" : "differs") << "  " << poly_str(r.degree, 'd') << '\n';
    }
    std::cout << mismatches << " type(s) differ from the table\n";
    return 0;
}
