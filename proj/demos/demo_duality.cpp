// Walk-through: the ideal <z^2, zw, w^2> is Cohen-Macaulay but not a complete
// intersection. We resolve it, build the residue pairing against the
// dominating CI (z^2, w^2), correct by the colon ideal, and recover ideal
// membership from residues alone.

#include <iostream>

#include "residua/residua.hpp"

using namespace residua;

int main() {
    std::vector<MultiPoly> gens{parse_poly("z^2", 2), parse_poly("z*w", 2), parse_poly("w^2", 2)};
    GroebnerBasis gb = buchberger(gens);

    std::cout << "ideal J = <z^2, zw, w^2>\n\nminimal free resolution:\n";
    FreeComplex res = free_resolution(gens);
    std::cout << "  ranks:";
    for (int r : res.ranks) std::cout << " " << r;
    std::cout << "\n  length " << res.length() << " = codim -> Cohen-Macaulay: "
              << (cohen_macaulay_check(res) ? "yes" : "no") << "\n\n";

    DualityHarness harness(gb);
    std::cout << "dominating CI inside J:";
    for (const auto& g : harness.functional().ci) std::cout << " " << render_poly(g);
    std::cout << "\ncolon ideal (g : J) generated by:";
    for (const auto& h : harness.colon_generators()) std::cout << " " << render_poly(h);
    std::cout << "\n\n";

    for (const char* text : {"z", "w", "z^2", "z*w", "z^2 + w^2", "z + z*w"}) {
        MultiPoly phi = parse_poly(text, 2);
        bool by_residue = harness.member_residue(phi);
        bool by_groebner = harness.member_groebner(phi);
        std::cout << "  phi = " << text << ": residue test says "
                  << (by_residue ? "member" : "not a member") << ", Groebner says "
                  << (by_groebner ? "member" : "not a member")
                  << (by_residue == by_groebner ? "  [agree]" : "  [DISAGREE]") << "\n";
    }
    return 0;
}
