#pragma once

// Shared helpers for the test suite: short parse/render aliases and seeded
// random generators for property-style checks.

#include <random>
#include <string>
#include <vector>

#include "residua/bmform.hpp"
#include "residua/expr.hpp"
#include "residua/polynomial.hpp"

namespace testsupport {

using namespace residua;

inline MultiPoly P(const std::string& text, int nvars) { return parse_poly(text, nvars); }

inline GaussianRational random_scalar(std::mt19937& rng, int height = 8) {
    std::uniform_int_distribution<int> d(-height, height);
    return {Rational(d(rng)), Rational(d(rng))};
}

inline Monomial random_monomial(std::mt19937& rng, int nvars, int maxdeg) {
    Monomial m(nvars);
    std::uniform_int_distribution<int> d(0, maxdeg);
    int budget = d(rng);
    for (int v = 0; v < nvars && budget > 0; ++v) {
        std::uniform_int_distribution<int> part(0, budget);
        int e = part(rng);
        m.e[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(e);
        budget -= e;
    }
    return m;
}

inline MultiPoly random_poly(std::mt19937& rng, int nvars, int maxdeg = 4, int nterms = 5,
                             int height = 8) {
    MultiPoly p(nvars);
    for (int t = 0; t < nterms; ++t) p.add_term(random_monomial(rng, nvars, maxdeg), random_scalar(rng, height));
    return p;
}

inline AntiForm random_form(std::mt19937& rng, const FormContext& ctx, int nterms = 3,
                            int max_denom_pow = 2) {
    std::uniform_int_distribution<int> dmask(0, (1 << ctx.n) - 1);
    std::uniform_int_distribution<int> kmask(0, (1 << ctx.p) - 1);
    std::uniform_int_distribution<int> dpow(0, max_denom_pow);
    AntiForm a{ctx.n, ctx.p, {}};
    for (int t = 0; t < nterms; ++t) {
        FormTerm term;
        term.num = random_poly(rng, 2 * ctx.n, 3, 3, 4);
        term.denom_pow = dpow(rng);
        term.dbar = static_cast<std::uint32_t>(dmask(rng));
        term.wedge = static_cast<std::uint32_t>(kmask(rng));
        if (!term.num.is_zero()) a.terms.push_back(std::move(term));
    }
    return a;
}

}  // namespace testsupport
