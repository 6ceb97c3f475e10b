#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "residua/resolution.hpp"
#include "support.hpp"

using namespace residua;
using testsupport::P;

namespace {

std::vector<MultiPoly> gens2(std::initializer_list<const char*> gs) {
    std::vector<MultiPoly> v;
    for (const char* g : gs) v.push_back(P(g, 2));
    return v;
}

std::vector<PolyVec> matrix_columns(const PolyMatrix& m, int nvars) {
    return detail::columns_of(m, nvars);
}

// equality of column sets up to order and sign
bool same_columns_up_to_sign(const PolyMatrix& a, std::vector<PolyVec> expected, int nvars) {
    auto cols = matrix_columns(a, nvars);
    if (cols.size() != expected.size()) return false;
    for (const auto& c : cols) {
        auto match = std::find_if(expected.begin(), expected.end(), [&](const PolyVec& e) {
            bool plus = true, minus = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!(c[i] == e[i])) plus = false;
                if (!(c[i] == -e[i])) minus = false;
            }
            return plus || minus;
        });
        if (match == expected.end()) return false;
        expected.erase(match);
    }
    return true;
}

}  // namespace

TEST_CASE("Koszul ranks are binomial and composition is zero") {
    for (int p = 1; p <= 4; ++p) {
        std::vector<MultiPoly> f;
        for (int j = 0; j < p; ++j) f.push_back(MultiPoly::variable(p, j) * MultiPoly::variable(p, j));
        FreeComplex c = koszul_complex(f);
        REQUIRE(static_cast<int>(c.ranks.size()) == p + 1);
        int binom = 1;
        for (int k = 0; k <= p; ++k) {
            CHECK(c.ranks[static_cast<std::size_t>(k)] == binom);
            binom = binom * (p - k) / (k + 1);
        }
        CHECK(verify_complex(c));
        int alt = 0, sign = 1;
        for (int r : c.ranks) {
            alt += sign * r;
            sign = -sign;
        }
        CHECK(alt == 0);
    }
}

TEST_CASE("Koszul p=2 map shapes and signs") {
    auto f = gens2({"z^2", "w^2"});
    FreeComplex c = koszul_complex(f);
    REQUIRE(c.ranks == std::vector<int>{1, 2, 1});
    CHECK(c.maps[0][0][0] == P("z^2", 2));
    CHECK(c.maps[0][0][1] == P("w^2", 2));
    // delta(e_12) = f_1 e_2 - f_2 e_1 in the ascending-set basis
    CHECK(c.maps[1][0][0] == P("-w^2", 2));
    CHECK(c.maps[1][1][0] == P("z^2", 2));
    CHECK(verify_complex(c));
}

TEST_CASE("Koszul p=1 and p=3") {
    FreeComplex c1 = koszul_complex(std::vector<MultiPoly>{P("z", 1)});
    CHECK(c1.ranks == std::vector<int>{1, 1});
    CHECK(c1.maps[0][0][0] == P("z", 1));

    std::vector<MultiPoly> f3{parse_poly("z1", 3), parse_poly("z2", 3), parse_poly("z3", 3)};
    FreeComplex c3 = koszul_complex(f3);
    CHECK(c3.ranks == std::vector<int>{1, 3, 3, 1});
    CHECK(verify_complex(c3));
}

TEST_CASE("minimal free resolution of the fat point") {
    FreeComplex c = free_resolution(gens2({"z^2", "z*w", "w^2"}));
    CHECK(c.ranks == std::vector<int>{1, 3, 2});
    CHECK(c.length() == 2);
    CHECK(verify_complex(c));
    CHECK(cohen_macaulay_check(c));
    // Hilbert-Burch shape [[w,0],[-z,w],[0,-z]] up to column order and sign
    std::vector<PolyVec> expected{{P("w", 2), P("-z", 2), P("0", 2)},
                                  {P("0", 2), P("w", 2), P("-z", 2)}};
    CHECK(same_columns_up_to_sign(c.maps[1], expected, 2));
}

TEST_CASE("complete intersections resolve with Koszul ranks") {
    FreeComplex c = free_resolution(gens2({"z^2", "w^3"}));
    CHECK(c.ranks == std::vector<int>{1, 2, 1});
    CHECK(cohen_macaulay_check(c));

    FreeComplex cusp = free_resolution(gens2({"z^2 - w^3", "w^2 - z^3"}));
    CHECK(cusp.ranks == std::vector<int>{1, 2, 1});
    CHECK(verify_complex(cusp));

    FreeComplex line = free_resolution(std::vector<MultiPoly>{P("z", 1)});
    CHECK(line.ranks == std::vector<int>{1, 1});
    CHECK(line.maps[0][0][0] == P("z", 1));
}

TEST_CASE("three variables: full length resolution") {
    std::vector<MultiPoly> f{parse_poly("z1^2", 3), parse_poly("z2^2", 3), parse_poly("z3^2", 3),
                             parse_poly("z1*z2", 3)};
    FreeComplex c = free_resolution(f);
    CHECK(verify_complex(c));
    CHECK(c.length() == 3);
    CHECK(cohen_macaulay_check(c));
    CHECK(pointwise_exactness_check(c, {}, 5));
}

TEST_CASE("minimize removes a padded identity block") {
    FreeComplex c = free_resolution(gens2({"z^2", "z*w", "w^2"}));
    // pad: E_1' = E_1 + O, E_2' = E_2 + O with an identity block
    FreeComplex padded = c;
    padded.ranks[1] += 1;
    padded.ranks[2] += 1;
    padded.maps[0][0].push_back(P("0", 2));
    for (auto& row : padded.maps[1]) row.push_back(P("0", 2));
    std::vector<MultiPoly> newrow(padded.maps[1][0].size(), P("0", 2));
    newrow.back() = P("1", 2);
    padded.maps[1].push_back(newrow);
    REQUIRE(verify_complex(padded));
    FreeComplex m = minimize(padded);
    CHECK(m.ranks == std::vector<int>{1, 3, 2});
    CHECK(verify_complex(m));
    // idempotence
    FreeComplex m2 = minimize(m);
    CHECK(m2.ranks == m.ranks);
}

TEST_CASE("minimize prunes a redundant last-map column") {
    FreeComplex c = free_resolution(gens2({"z^2", "z*w", "w^2"}));
    FreeComplex padded = c;
    // extra syzygy generator (w^2, 0, -z^2) = w*(w,-z,0) + z*(0,w,-z)
    padded.ranks[2] += 1;
    auto cols = detail::columns_of(padded.maps[1], 2);
    PolyVec extra{P("w^2", 2), P("0", 2), P("-z^2", 2)};
    for (std::size_t i = 0; i < 3; ++i) padded.maps[1][i].push_back(extra[i]);
    REQUIRE(verify_complex(padded));
    FreeComplex m = minimize(padded);
    CHECK(m.ranks == std::vector<int>{1, 3, 2});
}

TEST_CASE("minimize leaves a minimal Koszul complex unchanged") {
    FreeComplex c = koszul_complex(gens2({"z^2", "w^3"}));
    FreeComplex m = minimize(c);
    CHECK(m.ranks == c.ranks);
    CHECK(m.maps == c.maps);
}

TEST_CASE("verify_complex catches a broken sign") {
    FreeComplex c = koszul_complex(std::vector<MultiPoly>{parse_poly("z1", 3), parse_poly("z2", 3),
                                                          parse_poly("z3", 3)});
    REQUIRE(verify_complex(c));
    c.maps[1][0][0] = -c.maps[1][0][0];
    CHECK_FALSE(verify_complex(c));
}

TEST_CASE("pointwise exactness at explicit rational points") {
    FreeComplex c = free_resolution(gens2({"z^2", "z*w", "w^2"}));
    std::vector<std::vector<GaussianRational>> pts{{GaussianRational(1), GaussianRational(0)}};
    CHECK(pointwise_exactness_check(c, pts));
    // the matrices have the right ranks there
    auto m1 = evaluate_matrix(c.maps[0], pts[0]);
    auto m2 = evaluate_matrix(c.maps[1], pts[0]);
    CHECK(rank_exact(m1) == 1);
    CHECK(rank_exact(m2) == 2);

    FreeComplex k = koszul_complex(gens2({"z", "w"}));
    std::vector<std::vector<GaussianRational>> pts2{{GaussianRational(1), GaussianRational(1)}};
    CHECK(pointwise_exactness_check(k, pts2));

    std::vector<std::vector<GaussianRational>> origin{{GaussianRational(0), GaussianRational(0)}};
    CHECK_THROWS_AS(pointwise_exactness_check(c, origin), std::invalid_argument);
}

TEST_CASE("cohen-macaulay length criterion flags a short complex") {
    // Koszul complex of 2 generators regarded in 3 variables: length 2 != 3
    std::vector<MultiPoly> f{parse_poly("z1", 3), parse_poly("z2", 3)};
    FreeComplex c = koszul_complex(f);
    CHECK_FALSE(cohen_macaulay_check(c));
}
