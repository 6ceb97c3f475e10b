// Command-line front end: parse ideals and germs in the shared grammar, run
// the library pipelines, and report results as text or JSON. Verdicts map to
// exit codes (0 true/success, 1 false, 2 input error) so the duality harness
// composes in shell scripts.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "residua/residua.hpp"

using nlohmann::json;
using namespace residua;

namespace {

struct Input {
    std::vector<std::string> vars;
    std::vector<MultiPoly> gens;
    std::vector<std::string> gen_texts;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& t : out) {
        auto b = t.find_first_not_of(" \t");
        auto e = t.find_last_not_of(" \t");
        t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const std::string& t) { return t.empty(); }),
              out.end());
    return out;
}

Input load_input(const std::string& vars_opt, const std::string& ideal_opt,
                 const std::string& file_opt) {
    Input in;
    std::vector<std::string> texts;
    if (!file_opt.empty()) {
        std::ifstream f(file_opt);
        if (!f) throw std::invalid_argument("cannot open ideal file: " + file_opt);
        std::string line;
        while (std::getline(f, line)) {
            auto b = line.find_first_not_of(" \t");
            if (b == std::string::npos || line[b] == '#') continue;
            if (line.compare(b, 5, "vars:") == 0) {
                in.vars = split_commas(line.substr(b + 5));
            } else {
                texts.push_back(line.substr(b));
            }
        }
    }
    if (!vars_opt.empty()) in.vars = split_commas(vars_opt);
    if (!ideal_opt.empty()) texts = split_commas(ideal_opt);
    if (in.vars.empty()) throw std::invalid_argument("no variables given (use --vars or an ideal file)");
    if (texts.empty()) throw std::invalid_argument("no generators given (use --ideal or --ideal-file)");
    for (const auto& t : texts) {
        in.gens.push_back(parse_poly(t, in.vars));
        in.gen_texts.push_back(t);
    }
    return in;
}

json rat_json(const GaussianRational& q) {
    return json{{"re", rational_str(q.re)}, {"im", rational_str(q.im)}};
}

json complex_json(const Complex& c) {
    return json{{"re", c.real()}, {"im", c.imag()}};
}

std::string mono_str(const Monomial& m, const std::vector<std::string>& vars) {
    return render_poly(MultiPoly::term(m, GaussianRational(1)), vars);
}

json matrix_json(const PolyMatrix& m, const std::vector<std::string>& vars) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& e : row) r.push_back(render_poly(e, vars));
        rows.push_back(r);
    }
    return rows;
}

void emit(const json& report, const std::string& format, const std::string& text) {
    if (format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << text;
}

MultiPoly random_poly(std::mt19937& rng, int nvars, int maxdeg, int nterms, int height) {
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int> coef(-height, height);
    MultiPoly p(nvars);
    for (int t = 0; t < nterms; ++t) {
        Monomial m(nvars);
        int budget = deg(rng);
        for (int v = 0; v < nvars && budget > 0; ++v) {
            std::uniform_int_distribution<int> part(0, budget);
            int e = part(rng);
            m.e[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(e);
            budget -= e;
        }
        p.add_term(m, GaussianRational(coef(rng), coef(rng)));
    }
    return p;
}

int cmd_gb(const Input& in, const std::string& order, const std::string& format) {
    OrderKind kind = (order == "lex") ? OrderKind::lex : OrderKind::grevlex;
    GroebnerBasis gb = buchberger(in.gens, kind);
    json report{{"command", "gb"}, {"vars", in.vars}, {"order", order}};
    report["generators"] = in.gen_texts;
    json basis = json::array();
    for (const auto& b : gb.basis()) basis.push_back(render_poly(b, in.vars));
    report["basis"] = basis;
    std::ostringstream text;
    text << "reduced Groebner basis (" << order << "):\n";
    for (const auto& b : gb.basis()) text << "  " << render_poly(b, in.vars) << "\n";
    if (auto qb = gb.quotient_basis()) {
        report["quotient_dim"] = qb->dim;
        json mons = json::array();
        for (const auto& m : qb->monomials) mons.push_back(mono_str(m, in.vars));
        report["standard_monomials"] = mons;
        bool prim = is_primary_at_origin(gb);
        report["primary_at_origin"] = prim;
        text << "quotient dimension: " << qb->dim << "\n";
        text << "standard monomials:";
        for (const auto& m : qb->monomials) text << " " << mono_str(m, in.vars);
        text << "\nprimary at origin: " << (prim ? "yes" : "no") << "\n";
    } else {
        report["quotient_dim"] = nullptr;
        text << "quotient dimension: infinite (variety is positive-dimensional)\n";
    }
    emit(report, format, text.str());
    return 0;
}

int cmd_member(const Input& in, const std::string& germ, bool local, const std::string& format) {
    MultiPoly phi = parse_poly(germ, in.vars);
    GroebnerBasis gb = buchberger(in.gens);
    bool verdict;
    json report{{"command", "member"}, {"vars", in.vars}, {"germ", germ}, {"local", local}};
    std::ostringstream text;
    if (local) {
        LocalIdeal li = localize_at_origin(gb);
        verdict = li.contains(phi);
        report["normal_form"] = render_poly(li.normal_form(phi), in.vars);
    } else {
        verdict = gb.is_member(phi);
        report["normal_form"] = render_poly(gb.normal_form(phi), in.vars);
        if (verdict) {
            auto psi = gb.extended_member(phi);
            json cof = json::array();
            for (const auto& c : *psi) cof.push_back(render_poly(c, in.vars));
            report["cofactors"] = cof;
            text << "cofactors:";
            for (const auto& c : *psi) text << " (" << render_poly(c, in.vars) << ")";
            text << "\n";
        }
    }
    report["member"] = verdict;
    text << "member: " << (verdict ? "true" : "false") << "\n";
    emit(report, format, text.str());
    return verdict ? 0 : 1;
}

int cmd_resolve(const Input& in, const std::string& format) {
    FreeComplex c = free_resolution(in.gens);
    bool ok = verify_complex(c);
    bool cm = cohen_macaulay_check(c);
    bool pw = pointwise_exactness_check(c, {}, 5);
    json report{{"command", "resolve"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["ranks"] = c.ranks;
    report["length"] = c.length();
    report["composition_zero"] = ok;
    report["cohen_macaulay"] = cm;
    report["pointwise_exact_at_5_random_points"] = pw;
    json maps = json::array();
    for (const auto& m : c.maps) maps.push_back(matrix_json(m, in.vars));
    report["maps"] = maps;
    std::ostringstream text;
    text << "minimal free resolution, ranks:";
    for (int r : c.ranks) text << " " << r;
    text << "\nlength " << c.length() << " (codim " << c.nvars << "), Cohen-Macaulay: "
         << (cm ? "yes" : "no") << "\n";
    for (std::size_t k = 0; k < c.maps.size(); ++k) {
        text << "f^" << (k + 1) << ":\n";
        for (const auto& row : c.maps[k]) {
            text << "  [";
            for (std::size_t j = 0; j < row.size(); ++j)
                text << (j ? ", " : " ") << render_poly(row[j], in.vars);
            text << " ]\n";
        }
    }
    text << "composition zero: " << (ok ? "yes" : "no")
         << ", pointwise exactness at 5 random points: " << (pw ? "yes" : "no") << "\n";
    emit(report, format, text.str());
    return (ok && cm && pw) ? 0 : 1;
}

int cmd_koszul(const Input& in, const std::string& format) {
    FreeComplex c = koszul_complex(in.gens);
    bool ok = verify_complex(c);
    json report{{"command", "koszul"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["ranks"] = c.ranks;
    report["composition_zero"] = ok;
    json maps = json::array();
    for (const auto& m : c.maps) maps.push_back(matrix_json(m, in.vars));
    report["maps"] = maps;
    std::ostringstream text;
    text << "Koszul complex ranks:";
    for (int r : c.ranks) text << " " << r;
    text << "\ncomposition zero: " << (ok ? "yes" : "no") << "\n";
    emit(report, format, text.str());
    return ok ? 0 : 1;
}

int cmd_residue(const Input& in, const std::string& germ, double radius, int grid,
                bool no_quad, const std::string& format) {
    int n = static_cast<int>(in.vars.size());
    if (static_cast<int>(in.gens.size()) != n)
        throw std::invalid_argument("residue: need exactly nvars generators (a complete intersection)");
    MultiPoly h = parse_poly(germ, in.vars);
    GaussianRational exact = transform_residue(in.gens, h);
    json report{{"command", "residue"}, {"vars", in.vars}, {"generators", in.gen_texts},
                {"germ", germ}};
    report["exact"] = rat_json(exact);
    std::ostringstream text;
    text << "Res_f(" << germ << " dz) = " << exact.str() << "\n";
    double tol = (n == 1) ? 1e-10 : 1e-4;
    if (!no_quad && n <= 2) {
        Complex q = sphere_bm_residue(in.gens, h, radius, grid, grid + grid / 2);
        Complex kappa = sphere_calibration(n, grid, grid + grid / 2);
        double err = std::abs(q - exact.to_complex());
        report["quadrature"] = complex_json(q);
        report["abs_error"] = err;
        report["tolerance"] = tol;
        report["calibration"] = {{"constant", complex_json(kappa)},
                                 {"convention", "identity CI integrates to +1"}};
        text << "quadrature (sphere r=" << radius << "): " << q.real();
        if (std::abs(q.imag()) > 1e-15) text << (q.imag() < 0 ? "" : "+") << q.imag() << "i";
        text << "  |err| = " << err << " (tol " << tol << ")\n";
        emit(report, format, text.str());
        return err <= tol * std::max(1.0, std::abs(exact.to_complex())) ? 0 : 1;
    }
    emit(report, format, text.str());
    return 0;
}

int cmd_pairing(const Input& in, const std::string& format) {
    GroebnerBasis gb = buchberger(in.gens);
    ResidueFunctional rf = residue_pairing(gb);
    json report{{"command", "pairing"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["ci_tuple"] = json::array();
    for (const auto& g : rf.ci) report["ci_tuple"].push_back(render_poly(g, in.vars));
    report["powers"] = rf.engine.powers;
    report["local_multiplicity"] = rf.local.multiplicity;
    report["degree_bound"] = rf.degree_bound;
    json table = json::array();
    std::ostringstream text;
    text << "residue pairing table (nonzero entries, |alpha| < " << rf.degree_bound << "):\n";
    for (const auto& [mono, value] : rf.pairing) {
        if (value.is_zero()) continue;
        table.push_back({{"monomial", mono_str(mono, in.vars)}, {"value", rat_json(value)}});
        text << "  Res(" << mono_str(mono, in.vars) << " dz) = " << value.str() << "\n";
    }
    report["pairing"] = table;
    emit(report, format, text.str());
    return 0;
}

int cmd_duality(const Input& in, int degree, int randoms, unsigned seed, const std::string& format) {
    GroebnerBasis gb = buchberger(in.gens);
    DualityHarness harness(gb);
    if (degree < 0) degree = harness.functional().local.multiplicity;
    int nv = gb.nvars();

    std::vector<MultiPoly> tests;
    std::vector<std::string> labels;
    for (int d = 0; d <= degree; ++d)
        for (auto& m : detail::degree_monomials(nv, static_cast<std::uint32_t>(d))) {
            labels.push_back(render_poly(m, in.vars));
            tests.push_back(std::move(m));
        }
    std::size_t mono_count = tests.size();
    std::mt19937 rng(seed);
    for (int r = 0; r < randoms; ++r) {
        MultiPoly p = random_poly(rng, nv, 5, 6, 6);
        if (r % 3 == 0) {
            // mix in guaranteed members: random combinations of the generators
            MultiPoly comb(nv);
            for (const auto& g : in.gens) comb += random_poly(rng, nv, 2, 3, 3) * g;
            p = comb;
        }
        labels.push_back("random#" + std::to_string(r));
        tests.push_back(std::move(p));
    }

    std::size_t agree = 0;
    json mismatches = json::array();
    for (std::size_t i = 0; i < tests.size(); ++i) {
        bool a = harness.member_residue(tests[i]);
        bool b = harness.member_groebner(tests[i]);
        if (a == b)
            ++agree;
        else
            mismatches.push_back({{"test", labels[i]}, {"residue", a}, {"groebner", b}});
    }
    bool verdict = mismatches.empty();
    json report{{"command", "duality-check"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["degree"] = degree;
    report["monomials_tested"] = mono_count;
    report["randoms_tested"] = tests.size() - mono_count;
    report["agreements"] = agree;
    report["mismatches"] = mismatches;
    report["all_agree"] = verdict;
    report["local_multiplicity"] = harness.functional().local.multiplicity;
    report["colon_generators"] = json::array();
    for (const auto& h : harness.colon_generators())
        report["colon_generators"].push_back(render_poly(h, in.vars));
    std::ostringstream text;
    text << "duality check: residue annihilator vs Groebner membership\n"
         << "  " << mono_count << " monomials of degree <= " << degree << ", "
         << (tests.size() - mono_count) << " random polynomials\n"
         << "  agreement: " << agree << "/" << tests.size() << "\n"
         << "  verdict: " << (verdict ? "AGREE" : "MISMATCH") << "\n";
    emit(report, format, text.str());
    return verdict ? 0 : 1;
}

int cmd_bm_verify(const Input& in, const std::string& extra_germ, double radius, int grid,
                  const std::string& format) {
    int n = static_cast<int>(in.vars.size());
    if (static_cast<int>(in.gens.size()) != n)
        throw std::invalid_argument("bm-verify: need exactly nvars generators");
    if (n > 2) throw std::invalid_argument("bm-verify: quadrature implemented for n <= 2");
    GroebnerBasis gb = buchberger(in.gens);
    LocalIdeal li = localize_at_origin(gb);
    CiResidue engine = ci_residue_engine(li);
    double tol = (n == 1) ? 1e-10 : 1e-4;

    std::vector<std::pair<std::string, MultiPoly>> germs;
    for (const auto& m : li.std_monomials)
        germs.emplace_back(mono_str(m, in.vars), MultiPoly::term(m, GaussianRational(1)));
    if (!extra_germ.empty()) germs.emplace_back(extra_germ, parse_poly(extra_germ, in.vars));

    json rows = json::array();
    std::ostringstream text;
    bool all_ok = true;
    text << "Bochner-Martinelli cross-check (sphere r=" << radius << ", tol " << tol << "):\n";
    for (const auto& [label, h] : germs) {
        GaussianRational exact = engine.residue(h);
        Complex q = sphere_bm_residue(in.gens, h, radius, grid, grid + grid / 2);
        double err = std::abs(q - exact.to_complex()) / std::max(1.0, std::abs(exact.to_complex()));
        bool ok = err <= tol;
        all_ok = all_ok && ok;
        rows.push_back({{"germ", label},
                        {"exact", rat_json(exact)},
                        {"quadrature", complex_json(q)},
                        {"rel_error", err},
                        {"ok", ok}});
        text << "  h = " << label << ": exact " << exact.str() << ", quad " << q.real() << "  |err| "
             << err << (ok ? "  ok" : "  FAIL") << "\n";
    }
    Complex kappa = sphere_calibration(n, grid, grid + grid / 2);
    json report{{"command", "bm-verify"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["radius"] = radius;
    report["tolerance"] = tol;
    report["results"] = rows;
    report["all_ok"] = all_ok;
    report["calibration"] = {{"constant", complex_json(kappa)},
                             {"convention", "identity CI integrates to +1"}};
    text << "verdict: " << (all_ok ? "OK" : "FAIL") << "\n";
    emit(report, format, text.str());
    return all_ok ? 0 : 1;
}

int cmd_vp_check(const Input& in, const std::string& format) {
    FormContext ctx = FormContext::make(in.gens);
    AntiForm s = sigma(ctx);
    bool delta_sigma_one = equal(ctx, delta_f(ctx, s), ctx.one());
    AntiForm ds = dbar(ctx, s);
    AntiForm power = ctx.one();
    for (int k = 0; k < ctx.p; ++k) power = cap(ctx, power, ds);
    bool ds_power_zero = is_zero(ctx, power);
    AntiForm v = build_v(ctx);
    bool nabla_v_one = equal(ctx, nabla(ctx, v), ctx.one());
    AntiForm vp = top_component(v);
    bool dbar_vp_zero = is_zero(ctx, dbar(ctx, vp));
    auto c = vp_constant(ctx);

    bool ok = delta_sigma_one && ds_power_zero && nabla_v_one && dbar_vp_zero && c.has_value();
    json report{{"command", "vp-check"}, {"vars", in.vars}, {"generators", in.gen_texts}};
    report["delta_sigma_equals_one"] = delta_sigma_one;
    report["dbar_sigma_pth_power_zero"] = ds_power_zero;
    report["nabla_v_equals_one"] = nabla_v_one;
    report["dbar_vp_zero"] = dbar_vp_zero;
    report["vp_constant"] = c ? json(c->str()) : json(nullptr);
    report["v_p"] = render_form(ctx, vp);
    report["all_ok"] = ok;
    std::ostringstream text;
    text << "Koszul representative checks for p = " << ctx.p << ":\n"
         << "  delta_f(sigma) = 1:            " << (delta_sigma_one ? "ok" : "FAIL") << "\n"
         << "  (dbar sigma)^cap p = 0:        " << (ds_power_zero ? "ok" : "FAIL") << "\n"
         << "  nabla_f(v) = 1:                " << (nabla_v_one ? "ok" : "FAIL") << "\n"
         << "  dbar(v_p) = 0:                 " << (dbar_vp_zero ? "ok" : "FAIL") << "\n"
         << "  top(v) = c * closed form, c = " << (c ? c->str() : std::string("NONE")) << "\n"
         << "  v_p = " << render_form(ctx, vp) << "\n"
         << "verdict: " << (ok ? "OK" : "FAIL") << "\n";
    emit(report, format, text.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Grothendieck residues, free resolutions and the duality harness"};
    app.require_subcommand(1);

    std::string vars_opt, ideal_opt, file_opt, germ, format = "text", order = "grevlex";
    double radius = 1.0;
    int grid = 64, degree = -1, randoms = 25;
    unsigned seed = 20240901;
    bool local = false, no_quad = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--vars", vars_opt, "comma-separated variable names, e.g. z,w");
        sub->add_option("--ideal", ideal_opt, "comma-separated generator expressions");
        sub->add_option("--ideal-file", file_opt, "file with 'vars:' line and one generator per line");
        sub->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    };

    auto* sub_gb = app.add_subcommand("gb", "reduced Groebner basis with quotient data");
    add_common(sub_gb);
    sub_gb->add_option("--order", order, "grevlex | lex")->check(CLI::IsMember({"grevlex", "lex"}));

    auto* sub_member = app.add_subcommand("member", "ideal membership of a germ");
    add_common(sub_member);
    sub_member->add_option("--germ", germ, "polynomial to test")->required();
    sub_member->add_flag("--local", local, "membership in the localized ideal at the origin");

    auto* sub_resolve = app.add_subcommand("resolve", "minimal free resolution");
    add_common(sub_resolve);

    auto* sub_koszul = app.add_subcommand("koszul", "Koszul complex of the generator tuple");
    add_common(sub_koszul);

    auto* sub_residue = app.add_subcommand("residue", "exact residue with quadrature cross-check");
    add_common(sub_residue);
    sub_residue->add_option("--germ", germ, "numerator germ h")->required();
    sub_residue->add_option("--radius", radius, "sphere radius");
    sub_residue->add_option("--grid", grid, "quadrature grid parameter");
    sub_residue->add_flag("--no-quad", no_quad, "skip the quadrature cross-check");

    auto* sub_pairing = app.add_subcommand("pairing", "residue pairing table on monomials");
    add_common(sub_pairing);

    auto* sub_duality = app.add_subcommand("duality-check",
                                           "residue annihilator vs Groebner membership");
    add_common(sub_duality);
    sub_duality->add_option("--degree", degree, "test all monomials of total degree <= this");
    sub_duality->add_option("--random", randoms, "number of random polynomials");
    sub_duality->add_option("--seed", seed, "random seed");

    auto* sub_bm = app.add_subcommand("bm-verify", "sphere integral vs exact residue");
    add_common(sub_bm);
    sub_bm->add_option("--germ", germ, "extra germ to test");
    sub_bm->add_option("--radius", radius, "sphere radius");
    sub_bm->add_option("--grid", grid, "quadrature grid parameter");

    auto* sub_vp = app.add_subcommand("vp-check", "symbolic Koszul representative identities");
    add_common(sub_vp);

    CLI11_PARSE(app, argc, argv);

    try {
        Input in = load_input(vars_opt, ideal_opt, file_opt);
        if (sub_gb->parsed()) return cmd_gb(in, order, format);
        if (sub_member->parsed()) return cmd_member(in, germ, local, format);
        if (sub_resolve->parsed()) return cmd_resolve(in, format);
        if (sub_koszul->parsed()) return cmd_koszul(in, format);
        if (sub_residue->parsed()) return cmd_residue(in, germ, radius, grid, no_quad, format);
        if (sub_pairing->parsed()) return cmd_pairing(in, format);
        if (sub_duality->parsed()) return cmd_duality(in, degree, randoms, seed, format);
        if (sub_bm->parsed()) return cmd_bm_verify(in, germ, radius, grid, format);
        if (sub_vp->parsed()) return cmd_vp_check(in, format);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
