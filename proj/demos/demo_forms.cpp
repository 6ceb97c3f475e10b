// Prints the explicit Koszul-case forms for f = (z^2, w^2): sigma, v, the
// class representative v_p, and the residue it computes, cross-checked by a
// sphere integral.

#include <iostream>

#include "residua/residua.hpp"

using namespace residua;

int main() {
    std::vector<MultiPoly> f{parse_poly("z^2", 2), parse_poly("w^2", 2)};
    FormContext ctx = FormContext::make(f);

    AntiForm s = sigma(ctx);
    std::cout << "sigma      = " << render_form(ctx, s) << "\n";
    AntiForm v = build_v(ctx);
    std::cout << "v          = " << render_form(ctx, v) << "\n";
    std::cout << "nabla v    = " << render_form(ctx, nabla(ctx, v)) << "\n";
    AntiForm vp = top_component(v);
    std::cout << "v_p        = " << render_form(ctx, vp) << "\n";
    std::cout << "dbar(v_p)  = " << render_form(ctx, dbar(ctx, vp)) << "\n";
    if (auto c = vp_constant(ctx))
        std::cout << "v_p equals " << c->str() << " times the closed-form representative\n";

    MultiPoly h = parse_poly("z*w", 2);
    GaussianRational exact = transform_residue(f, h);
    Complex q = sphere_bm_residue(f, h, 1.0);
    std::cout << "\nRes(zw dz) = " << exact.str() << " exactly; sphere integral gives " << q.real()
              << " + " << q.imag() << "i\n";
    return 0;
}
