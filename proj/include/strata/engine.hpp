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

#include <strata/closedforms.hpp>
#include <strata/degen.hpp>

#include <string>

namespace strata {

/// The engine's answer for one type in one dimension: the lifted class on
/// Aux x P^N, its Gysin image (the minimal class) and the stratum degree.
struct EngineResult {
    std::string route; // "chain" or "recipe"
    ClassPoly lifted;
    ClassPoly minimal;
    DPoly degree;
};

/// Dispatches a type to the engine route that handles it: the A4 stratum
/// through its degeneration recipe, every linear type through the chain.
inline EngineResult compute_engine(const TypeId &t, int n) {
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
    if (t.family == TypeId::Family::A && t.index == 4) {
        if (n < min_dimension(t))
            throw Error(ErrorKind::OutOfValidity, t.name() + " needs n >= " + std::to_string(min_dimension(t)));
        RecipeResult r = run_recipe(load_recipe(default_recipe_path("a4")), n);
        return {"recipe", r.lifted, r.minimal, r.degree};
    }
    ChainResult c = chain_for_type(t, n);
    return {"chain", c.lifted, c.minimal(), c.degree()};
}

/// The offset k of the Q-basis used for a type, i.e. its determinacy
/// bound; falls back to 2 for types without a commode representative.
inline int basis_offset(const TypeId &t, int n) {
    try {
        return plan_chain(covariant_conditions(representative_diagram(t, n))).k;
    } catch (const Error &) {
        return 2;
    }
}

} // namespace strata
