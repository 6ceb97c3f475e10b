#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "residua/quad.hpp"
#include "residua/residue.hpp"
#include "support.hpp"

using namespace residua;
using testsupport::P;

TEST_CASE("Cauchy integrals on the unit circle") {
    // (1/2 pi i) dz / z  ->  1
    NumericForm form;
    form.nvars = 1;
    form.eval = [](std::span<const Complex> z) {
        std::vector<FormComponent> c;
        c.push_back({1u, 0u, 1.0 / (2.0 * std::numbers::pi * Complex{0.0, 1.0} * z[0])});
        return c;
    };
    auto cycle = ParametrizedCycle::torus({1.0}, {64});
    CHECK(std::abs(integrate_form(form, cycle) - Complex{1.0, 0.0}) < 1e-12);

    NumericForm form2;
    form2.nvars = 1;
    form2.eval = [](std::span<const Complex> z) {
        std::vector<FormComponent> c;
        c.push_back({1u, 0u, 1.0 / (2.0 * std::numbers::pi * Complex{0.0, 1.0} * z[0] * z[0])});
        return c;
    };
    CHECK(std::abs(integrate_form(form2, cycle)) < 1e-12);
}

TEST_CASE("constant density integrates to the product of circumferences") {
    // c * prod (zbar_j / (i |z_j|)) dz_j pulls back to c * prod r_j dtheta_j
    NumericForm form;
    form.nvars = 2;
    form.eval = [](std::span<const Complex> z) {
        Complex v = 2.5;
        for (const auto& zj : z) v *= std::conj(zj) / (Complex{0.0, 1.0} * std::abs(zj));
        std::vector<FormComponent> c;
        c.push_back({3u, 0u, v});
        return c;
    };
    auto cycle = ParametrizedCycle::torus({0.5, 2.0}, {32, 32});
    double expect = 2.5 * (2.0 * std::numbers::pi * 0.5) * (2.0 * std::numbers::pi * 2.0);
    CHECK(std::abs(integrate_form(form, cycle) - Complex{expect, 0.0}) < 1e-10);
}

TEST_CASE("torus residues match coefficient extraction") {
    std::vector<int> m22{2, 2};
    std::vector<double> r{0.5, 0.5};
    CHECK(std::abs(torus_residue(m22, P("z*w", 2), r, 24) - Complex{1.0, 0.0}) < 1e-10);
    std::vector<int> m23{2, 3};
    CHECK(std::abs(torus_residue(m23, P("z*w^2", 2), r, 24) - Complex{1.0, 0.0}) < 1e-10);
    CHECK(std::abs(torus_residue(m23, P("z^2*w", 2), r, 24)) < 1e-10);
}

TEST_CASE("epsilon independence of the torus residue") {
    std::mt19937 rng(11001);
    std::vector<int> powers{2, 3};
    for (int it = 0; it < 10; ++it) {
        MultiPoly h = testsupport::random_poly(rng, 2, 5, 6, 5);
        std::vector<double> r1{0.5, 0.5}, r2{0.3, 0.8};
        Complex a = torus_residue(powers, h, r1, 24);
        Complex b = torus_residue(powers, h, r2, 24);
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("grid refinement is converged on calibration cases") {
    std::vector<int> m{3, 2};
    std::vector<double> r{0.6, 0.9};
    MultiPoly h = P("z^2*w + 4*z^2*w^3", 2);
    Complex a = torus_residue(m, h, r, 16);
    Complex b = torus_residue(m, h, r, 32);
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("sphere calibration: identity CI gives +1 and 1/(2 pi i) in n = 1") {
    std::vector<MultiPoly> id1{P("z", 1)};
    Complex v1 = sphere_bm_residue(id1, P("1", 1), 1.0);
    CHECK(std::abs(v1 - Complex{1.0, 0.0}) < 1e-10);
    Complex kappa1 = sphere_calibration(1);
    Complex expected1 = 1.0 / (2.0 * std::numbers::pi * Complex{0.0, 1.0});
    CHECK(std::abs(kappa1 - expected1) < 1e-12);

    std::vector<MultiPoly> id2{parse_poly("z1", 2), parse_poly("z2", 2)};
    Complex v2 = sphere_bm_residue(id2, P("1", 2), 1.0);
    CHECK(std::abs(v2 - Complex{1.0, 0.0}) < 1e-10);
}

TEST_CASE("one-variable boundary integrals at 1e-10") {
    std::vector<MultiPoly> f{P("z^3", 1)};
    CHECK(std::abs(sphere_bm_residue(f, P("z^2", 1), 0.9) - Complex{1.0, 0.0}) < 1e-10);
    CHECK(std::abs(sphere_bm_residue(f, P("z", 1), 0.9)) < 1e-10);
    // matches the exact engine
    GaussianRational exact = transform_residue(f, P("z^2 + 3*z", 1));
    CHECK(std::abs(sphere_bm_residue(f, P("z^2 + 3*z", 1), 0.9) - exact.to_complex()) < 1e-10);
}

TEST_CASE("two-variable sphere residues match the exact engine") {
    std::vector<MultiPoly> f{P("z^2", 2), P("w^2", 2)};
    CHECK(std::abs(sphere_bm_residue(f, P("z*w", 2), 1.0) - Complex{1.0, 0.0}) < 1e-4);
    std::vector<MultiPoly> g{P("z - w", 2), P("w^2", 2)};
    std::mt19937 rng(11002);
    for (int it = 0; it < 4; ++it) {
        MultiPoly h = testsupport::random_poly(rng, 2, 3, 4, 3);
        GaussianRational exact = transform_residue(g, h);
        Complex q = sphere_bm_residue(g, h, 0.8);
        CHECK(std::abs(q - exact.to_complex()) <= 1e-4 * std::max(1.0, std::abs(exact.to_complex())));
    }
}

TEST_CASE("radius independence of the sphere integral") {
    std::vector<MultiPoly> f{P("z^2", 2), P("w^2", 2)};
    Complex a = sphere_bm_residue(f, P("z*w", 2), 0.7);
    Complex b = sphere_bm_residue(f, P("z*w", 2), 1.0);
    CHECK(std::abs(a - b) < 1e-6);
    std::vector<MultiPoly> id{P("z", 1)};
    Complex c = sphere_bm_residue(id, P("1", 1), 0.7);
    Complex d = sphere_bm_residue(id, P("1", 1), 1.0);
    CHECK(std::abs(c - d) < 1e-6);
}

TEST_CASE("cycle preconditions") {
    CHECK_THROWS_AS(ParametrizedCycle::torus({0.5}, {4}), std::invalid_argument);
    CHECK_THROWS_AS(ParametrizedCycle::torus({-1.0}, {16}), std::invalid_argument);
    // a cycle through a zero of the denominator is detected
    NumericForm form;
    form.nvars = 1;
    form.eval = [](std::span<const Complex> z) {
        std::vector<FormComponent> c;
        c.push_back({1u, 0u, 1.0 / (z[0] - 1.0)});
        return c;
    };
    auto cycle = ParametrizedCycle::torus({1.0}, {64});  // passes through z = 1
    CHECK_THROWS_AS(integrate_form(form, cycle), std::runtime_error);
}

TEST_CASE("results are identical for any thread count") {
    std::vector<int> m{2, 3};
    std::vector<double> r{0.5, 0.7};
    MultiPoly h = P("z*w^2 + i*z^3", 2);
    setenv("RESIDUE_THREADS", "1", 1);
    Complex a = torus_residue(m, h, r, 32);
    setenv("RESIDUE_THREADS", "4", 1);
    Complex b = torus_residue(m, h, r, 32);
    unsetenv("RESIDUE_THREADS");
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
}
