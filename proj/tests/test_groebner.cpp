#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "residua/groebner.hpp"
#include "support.hpp"

using namespace residua;
using testsupport::P;
using testsupport::random_poly;

namespace {

GroebnerBasis gb_of(std::initializer_list<const char*> gens, int nvars,
                    OrderKind kind = OrderKind::grevlex) {
    std::vector<MultiPoly> v;
    for (const char* g : gens) v.push_back(P(g, nvars));
    return buchberger(std::move(v), kind);
}

void check_cofactor_identity(const GroebnerBasis& gb) {
    for (std::size_t k = 0; k < gb.basis().size(); ++k) {
        MultiPoly sum(gb.nvars());
        for (std::size_t j = 0; j < gb.generators().size(); ++j)
            sum += gb.cofactors()[k][j] * gb.generators()[j];
        CHECK(sum == gb.basis()[k]);
    }
}

void check_buchberger_criterion(const GroebnerBasis& gb) {
    const auto& b = gb.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            Term ti = leading_term(b[i], gb.order()), tj = leading_term(b[j], gb.order());
            Monomial l = Monomial::lcm(ti.mono, tj.mono);
            MultiPoly s = b[i].times_term(l.div(ti.mono), GaussianRational(1) / ti.coeff) -
                          b[j].times_term(l.div(tj.mono), GaussianRational(1) / tj.coeff);
            if (!s.is_zero()) CHECK(gb.normal_form(s).is_zero());
        }
}

}  // namespace

TEST_CASE("monomial ideals are their own basis") {
    auto gb = gb_of({"z^2", "z*w", "w^2"}, 2);
    CHECK(gb.basis().size() == 3);
    for (const auto& b : gb.basis()) CHECK(b.term_count() == 1);
    check_cofactor_identity(gb);
}

TEST_CASE("<z - w, w> reduces to <z, w>") {
    auto gb = gb_of({"z - w", "w"}, 2);
    REQUIRE(gb.basis().size() == 2);
    CHECK(gb.is_member(P("z", 2)));
    CHECK(gb.is_member(P("w", 2)));
    check_cofactor_identity(gb);
}

TEST_CASE("cusp pair: S-polynomials reduce to zero, cofactors hold") {
    auto gb = gb_of({"z^2 - w^3", "w^2 - z^3"}, 2);
    check_buchberger_criterion(gb);
    check_cofactor_identity(gb);
    // idempotence: recomputing from the reduced basis returns it unchanged
    auto gb2 = buchberger(gb.basis(), OrderKind::grevlex);
    CHECK(gb2.basis() == gb.basis());
}

TEST_CASE("normal form examples and properties") {
    auto gb = gb_of({"z^2", "z*w", "w^2"}, 2);
    CHECK(gb.normal_form(P("z^3", 2)).is_zero());
    CHECK(gb.normal_form(P("z + z*w", 2)) == P("z", 2));
    std::mt19937 rng(4001);
    for (int it = 0; it < 30; ++it) {
        MultiPoly p = random_poly(rng, 2);
        MultiPoly nf = gb.normal_form(p);
        CHECK(gb.normal_form(nf) == nf);  // idempotence
        // linearity
        MultiPoly q = random_poly(rng, 2);
        GaussianRational a = testsupport::random_scalar(rng), b = testsupport::random_scalar(rng);
        CHECK(gb.normal_form(a * p + b * q) == a * gb.normal_form(p) + b * gb.normal_form(q));
        // membership is a normal-form question
        CHECK(gb.is_member(p) == gb.normal_form(p).is_zero());
        CHECK(gb.is_member(p - gb.normal_form(p)));
    }
}

TEST_CASE("membership examples") {
    auto gb = gb_of({"z^2", "z*w", "w^2"}, 2);
    CHECK(gb.is_member(P("z^2", 2)));
    CHECK_FALSE(gb.is_member(P("z", 2)));
    std::mt19937 rng(4002);
    for (int it = 0; it < 20; ++it) {
        MultiPoly member(2);
        for (const auto& g : gb.generators()) member += random_poly(rng, 2, 3, 3) * g;
        CHECK(gb.is_member(member));
    }
}

TEST_CASE("extended membership produces exact cofactors") {
    auto gb = gb_of({"z^2", "z*w", "w^2"}, 2);
    auto psi = gb.extended_member(P("z^3", 2));
    REQUIRE(psi.has_value());
    MultiPoly sum(2);
    for (std::size_t j = 0; j < psi->size(); ++j) sum += (*psi)[j] * gb.generators()[j];
    CHECK(sum == P("z^3", 2));
    CHECK_FALSE(gb.extended_member(P("z", 2)).has_value());

    std::mt19937 rng(4003);
    for (int it = 0; it < 20; ++it) {
        MultiPoly member(2);
        for (const auto& g : gb.generators()) member += random_poly(rng, 2, 2, 2) * g;
        auto lift = gb.extended_member(member);
        REQUIRE(lift.has_value());
        MultiPoly s(2);
        for (std::size_t j = 0; j < lift->size(); ++j) s += (*lift)[j] * gb.generators()[j];
        CHECK(s == member);
    }
}

TEST_CASE("quotient bases") {
    auto qb = gb_of({"z^2", "z*w", "w^2"}, 2).quotient_basis();
    REQUIRE(qb.has_value());
    CHECK(qb->dim == 3);
    CHECK(qb->monomials == std::vector<Monomial>{Monomial{0, 0}, Monomial{1, 0}, Monomial{0, 1}});

    auto qb2 = gb_of({"z^2", "w^3"}, 2).quotient_basis();
    REQUIRE(qb2.has_value());
    CHECK(qb2->dim == 6);

    CHECK_FALSE(gb_of({"z*w"}, 2).quotient_basis().has_value());
}

TEST_CASE("quotient basis is divisor-closed") {
    auto gb = gb_of({"z^2 - w^3", "w^2 - z^3"}, 2);
    auto qb = gb.quotient_basis();
    REQUIRE(qb.has_value());
    CHECK(qb->dim == 9);
    for (const auto& m : qb->monomials)
        for (int v = 0; v < 2; ++v) {
            if (m.e[static_cast<std::size_t>(v)] == 0) continue;
            Monomial d = m;
            --d.e[static_cast<std::size_t>(v)];
            CHECK(std::find(qb->monomials.begin(), qb->monomials.end(), d) != qb->monomials.end());
        }
}

TEST_CASE("primary-at-origin detection") {
    CHECK(is_primary_at_origin(gb_of({"z^2", "z*w", "w^2"}, 2)));
    CHECK_FALSE(is_primary_at_origin(gb_of({"z*(z - 1)"}, 1)));
    CHECK(is_primary_at_origin(gb_of({"z - w", "w^2"}, 2)));
    // finite variety with points off the origin is not primary
    CHECK_FALSE(is_primary_at_origin(gb_of({"z^2 - w^3", "w^2 - z^3"}, 2)));
}

TEST_CASE("localization at the origin") {
    auto li = localize_at_origin(gb_of({"z^2 - w^3", "w^2 - z^3"}, 2));
    CHECK(li.multiplicity == 4);
    CHECK_FALSE(li.primary);
    CHECK(li.contains(P("z^2", 2)));   // z^2 = (f1 + w f2)/(1 - zw) locally
    CHECK(li.contains(P("w^2", 2)));
    CHECK_FALSE(li.contains(P("z*w", 2)));
    CHECK(li.std_monomials.size() == 4);

    auto lp = localize_at_origin(gb_of({"z^2", "w^2"}, 2));
    CHECK(lp.primary);
    CHECK(lp.multiplicity == 4);

    CHECK_THROWS_AS(localize_at_origin(gb_of({"z*w"}, 2)), std::invalid_argument);
    CHECK_THROWS_AS(localize_at_origin(gb_of({"z - 1"}, 1)), std::invalid_argument);
}

TEST_CASE("colon ideals") {
    auto g = gb_of({"z^2", "w^2"}, 2);
    auto j = gb_of({"z^2", "z*w", "w^2"}, 2);
    auto colon = colon_ideal(g, j);
    // (g : J) is the maximal ideal <z, w>
    CHECK(colon.is_member(P("z", 2)));
    CHECK(colon.is_member(P("w", 2)));
    CHECK_FALSE(colon.is_member(P("1", 2)));

    auto self = colon_ideal(g, g);
    CHECK(self.is_member(P("1", 2)));

    auto one = gb_of({"1"}, 2);
    auto back = colon_ideal(g, one);
    CHECK(back.is_member(P("z^2", 2)));
    CHECK(back.is_member(P("w^2", 2)));
    CHECK_FALSE(back.is_member(P("z*w", 2)));

    // precondition: g must sit inside J
    CHECK_THROWS_AS(colon_ideal(j, g), std::invalid_argument);
}

TEST_CASE("lex order eliminates the leading variable") {
    // lex basis of an elimination-style system keeps a t-free element
    auto gb = gb_of({"z - w^2", "z*w - 1"}, 2, OrderKind::lex);
    bool has_w_only = false;
    for (const auto& b : gb.basis()) {
        bool no_z = true;
        for (const auto& [m, c] : b.terms())
            if (m.e[0] != 0) no_z = false;
        if (no_z && !b.is_zero()) has_w_only = true;
    }
    CHECK(has_w_only);
}
