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
// From a Newton diagram to the class of its lifted stratum: z1^4 + z1 z2^2 + z2^3 (D5).

#include <strata/conditions.hpp>
#include <strata/degen.hpp>
#include <strata/interp.hpp>
#include <strata/serialize.hpp>

#include <iostream>

int main() {
    using namespace strata;
    NewtonDiagram d = build_diagram(2, {{4, 0}, {1, 2}, {0, 3}}, "D5");
    std::cout << "diagram: " << diagram_to_json(d).dump() << '\n';
    LiftedStratumSpec spec = covariant_conditions(d);
    std::cout << "conditions: " << conditions_report(spec).dump() << '\n';
    ChainResult r = chain_linear(spec);
    for (const auto &s : r.stages)
        std::cout << "  " << s.description << ", " << s.columns << " unknown coefficient(s)\n";
    std::cout << "lifted class: " << to_text(r.lifted) << '\n';
    std::cout << "degree: " << poly_str(r.degree(), 'd') << '\n';
    return 0;
}
