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
// Degrees of the cusp and tacnode strata of plane curves and surfaces.

#include <strata/closedforms.hpp>
#include <strata/engine.hpp>
#include <strata/interp.hpp>
#include <strata/serialize.hpp>

#include <iostream>

int main() {
    using namespace strata;
    for (const char *name : {"A2", "A3"})
        for (int n = 2; n <= 3; ++n) {
            EngineResult r = compute_engine(parse_type(name), n);
            std::cout << name << " in P^" << n << ": degree " << poly_str(r.degree, 'd') << ", at d=4: "
                      << r.degree.eval(4).get_str() << '\n';
            std::cout << "  minimal class: " << to_text(r.minimal) << '\n';
        }
    return 0;
}
