#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "residua/expr.hpp"
#include "residua/polynomial.hpp"

namespace residua {

// ---------------------------------------------------------------------------
// Conjugate-variable polynomials: a MultiPoly in 2n variables where the
// first n slots are z_1..z_n and the last n slots formally represent the
// conjugates. Holomorphic data embeds into the z-block; conjugation swaps
// blocks and conjugates coefficients.
// ---------------------------------------------------------------------------

inline MultiPoly embed_holomorphic(const MultiPoly& p, int n) {
    if (p.nvars() != n) throw std::invalid_argument("embed_holomorphic: variable-count mismatch");
    MultiPoly r(2 * n);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm(2 * n);
        for (int i = 0; i < n; ++i) mm.e[static_cast<std::size_t>(i)] = m.e[static_cast<std::size_t>(i)];
        r.add_term(mm, c);
    }
    return r;
}

inline MultiPoly conj_poly(const MultiPoly& p) {
    if (p.nvars() % 2 != 0) throw std::invalid_argument("conj_poly: needs 2n variables");
    int n = p.nvars() / 2;
    MultiPoly r(2 * n);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm(2 * n);
        for (int i = 0; i < n; ++i) {
            mm.e[static_cast<std::size_t>(i)] = m.e[static_cast<std::size_t>(i) + static_cast<std::size_t>(n)];
            mm.e[static_cast<std::size_t>(i) + static_cast<std::size_t>(n)] = m.e[static_cast<std::size_t>(i)];
        }
        r.add_term(mm, c.conj());
    }
    return r;
}

/// One summand num / |f|^(2N) dzbar_J (x) e_K of an E-valued (0,*) form.
/// Index sets are bitmasks (bit i = index i, ascending).
struct FormTerm {
    MultiPoly num;            // in 2n variables
    int denom_pow = 0;        // N
    std::uint32_t dbar = 0;   // subset of {0..n-1}
    std::uint32_t wedge = 0;  // subset of {0..p-1}
};

struct AntiForm {
    int n = 0;
    int p = 0;
    std::vector<FormTerm> terms;

    bool structurally_zero() const { return terms.empty(); }
};

/// Everything the operators need to know about a fixed tuple f_1..f_p of
/// holomorphic polynomials in n variables.
struct FormContext {
    int n = 0;
    int p = 0;
    std::vector<MultiPoly> f;        // embedded, 2n vars
    std::vector<MultiPoly> fbar;     // conjugates, 2n vars
    MultiPoly norm2;                 // |f|^2 = sum f_j fbar_j
    std::vector<MultiPoly> dnorm2;   // d|f|^2 / d zbar_k

    static FormContext make(std::span<const MultiPoly> tuple) {
        if (tuple.empty()) throw std::invalid_argument("FormContext: empty tuple");
        FormContext c;
        c.n = tuple[0].nvars();
        c.p = static_cast<int>(tuple.size());
        c.norm2 = MultiPoly(2 * c.n);
        for (const auto& g : tuple) {
            MultiPoly e = embed_holomorphic(g, c.n);
            MultiPoly b = conj_poly(e);
            c.norm2 += e * b;
            c.f.push_back(std::move(e));
            c.fbar.push_back(std::move(b));
        }
        for (int k = 0; k < c.n; ++k) c.dnorm2.push_back(c.norm2.derivative(c.n + k));
        return c;
    }

    AntiForm zero() const { return AntiForm{n, p, {}}; }

    AntiForm scalar(MultiPoly num2n) const {
        AntiForm a{n, p, {}};
        if (!num2n.is_zero()) a.terms.push_back({std::move(num2n), 0, 0, 0});
        return a;
    }

    AntiForm one() const { return scalar(MultiPoly::one(2 * n)); }
};

namespace formdetail {

/// Parity of sorting the concatenation A then B into ascending order;
/// -1 sign when odd, 0 when the sets collide.
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    int inversions = 0;
    for (std::uint32_t bb = b; bb; bb &= bb - 1) {
        int bit = std::countr_zero(bb);
        inversions += std::popcount(a >> (bit + 1));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

/// Sign of dzbar_k wedged from the left into dzbar_J.
inline int insert_sign(int k, std::uint32_t j) {
    int below = std::popcount(j & ((1u << k) - 1u));
    return (below % 2 == 0) ? 1 : -1;
}

}  // namespace formdetail

/// Merge like terms after bringing every (dbar, wedge) group to its maximal
/// denominator power. The normalized form is the canonical representative.
inline AntiForm normalize(const FormContext& ctx, const AntiForm& a) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> max_pow;
    for (const auto& t : a.terms) {
        auto key = std::make_pair(t.dbar, t.wedge);
        auto it = max_pow.find(key);
        if (it == max_pow.end())
            max_pow.emplace(key, t.denom_pow);
        else
            it->second = std::max(it->second, t.denom_pow);
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, MultiPoly> sums;
    for (const auto& t : a.terms) {
        auto key = std::make_pair(t.dbar, t.wedge);
        MultiPoly num = t.num;
        for (int k = t.denom_pow; k < max_pow[key]; ++k) num = num * ctx.norm2;
        auto it = sums.find(key);
        if (it == sums.end())
            sums.emplace(key, std::move(num));
        else
            it->second += num;
    }
    AntiForm r{a.n, a.p, {}};
    for (auto& [key, num] : sums) {
        if (num.is_zero()) continue;
        r.terms.push_back({std::move(num), max_pow[key], key.first, key.second});
    }
    return r;
}

inline bool is_zero(const FormContext& ctx, const AntiForm& a) {
    return normalize(ctx, a).terms.empty();
}

inline AntiForm add(const FormContext& ctx, AntiForm a, const AntiForm& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return normalize(ctx, a);
}

inline AntiForm negate(AntiForm a) {
    for (auto& t : a.terms) t.num = -t.num;
    return a;
}

inline AntiForm sub(const FormContext& ctx, AntiForm a, const AntiForm& b) {
    return add(ctx, std::move(a), negate(b));
}

inline bool equal(const FormContext& ctx, const AntiForm& a, const AntiForm& b) {
    return is_zero(ctx, sub(ctx, a, b));
}

inline AntiForm scalar_multiple(const FormContext& ctx, const MultiPoly& s2n, AntiForm a) {
    for (auto& t : a.terms) t.num = t.num * s2n;
    return normalize(ctx, a);
}

/// The product dzbar_I (x) e_J cap dzbar_K (x) e_L: dzbar's and e's are all
/// odd and mutually anticommute, so on top of the two merge signs the
/// crossing of e_J past dzbar_K contributes (-1)^(|J|*|K|). This is the
/// convention under which delta_f, dbar and nabla_f are all antiderivations
/// and the whole identity battery (nabla v = 1, nabla^2 = 0, ...) holds.
inline AntiForm cap(const FormContext& ctx, const AntiForm& a, const AntiForm& b) {
    if (a.n != b.n || a.p != b.p) throw std::invalid_argument("cap: mismatched contexts");
    AntiForm r{a.n, a.p, {}};
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            int sd = formdetail::merge_sign(ta.dbar, tb.dbar);
            if (sd == 0) continue;
            int sk = formdetail::merge_sign(ta.wedge, tb.wedge);
            if (sk == 0) continue;
            int cross = (std::popcount(ta.wedge) * std::popcount(tb.dbar)) % 2 == 0 ? 1 : -1;
            FormTerm t;
            t.num = ta.num * tb.num;
            if (sd * sk * cross < 0) t.num = -t.num;
            t.denom_pow = ta.denom_pow + tb.denom_pow;
            t.dbar = ta.dbar | tb.dbar;
            t.wedge = ta.wedge | tb.wedge;
            r.terms.push_back(std::move(t));
        }
    }
    return normalize(ctx, r);
}

/// dbar acts on the conjugate variables and on |f|^(-2N) by the quotient
/// rule, wedging dzbar_k from the left.
inline AntiForm dbar(const FormContext& ctx, const AntiForm& a) {
    AntiForm r{a.n, a.p, {}};
    for (const auto& t : a.terms) {
        for (int k = 0; k < ctx.n; ++k) {
            if (t.dbar & (1u << k)) continue;
            MultiPoly dnum = t.num.derivative(ctx.n + k);
            FormTerm nt;
            if (t.denom_pow == 0) {
                if (dnum.is_zero()) continue;
                nt.num = std::move(dnum);
                nt.denom_pow = 0;
            } else {
                MultiPoly num = dnum * ctx.norm2 -
                                GaussianRational(static_cast<long>(t.denom_pow)) * t.num *
                                    ctx.dnorm2[static_cast<std::size_t>(k)];
                if (num.is_zero()) continue;
                nt.num = std::move(num);
                nt.denom_pow = t.denom_pow + 1;
            }
            if (formdetail::insert_sign(k, t.dbar) < 0) nt.num = -nt.num;
            nt.dbar = t.dbar | (1u << k);
            nt.wedge = t.wedge;
            r.terms.push_back(std::move(nt));
        }
    }
    return normalize(ctx, r);
}

/// Interior contraction with sum f_j e_j, signs (-1)^(j+1) over the set bits
/// in ascending order.
inline AntiForm delta_f(const FormContext& ctx, const AntiForm& a) {
    AntiForm r{a.n, a.p, {}};
    for (const auto& t : a.terms) {
        int pos = 0;
        for (std::uint32_t w = t.wedge; w; w &= w - 1, ++pos) {
            int j = std::countr_zero(w);
            FormTerm nt;
            nt.num = t.num * ctx.f[static_cast<std::size_t>(j)];
            if (pos % 2 == 1) nt.num = -nt.num;
            nt.denom_pow = t.denom_pow;
            nt.dbar = t.dbar;
            nt.wedge = t.wedge & ~(1u << j);
            r.terms.push_back(std::move(nt));
        }
    }
    return normalize(ctx, r);
}

/// nabla_f = f - dbar with f interpreted as (-1)^q delta_f on antiholomorphic
/// degree q.
inline AntiForm nabla(const FormContext& ctx, const AntiForm& a) {
    AntiForm signed_part{a.n, a.p, {}};
    for (const auto& t : a.terms) {
        AntiForm single{a.n, a.p, {t}};
        AntiForm d = delta_f(ctx, single);
        if (std::popcount(t.dbar) % 2 == 1) d = negate(std::move(d));
        signed_part.terms.insert(signed_part.terms.end(), d.terms.begin(), d.terms.end());
    }
    return sub(ctx, std::move(signed_part), dbar(ctx, a));
}

/// sigma = sum fbar_j (x) e_j / |f|^2.
inline AntiForm sigma(const FormContext& ctx) {
    AntiForm s{ctx.n, ctx.p, {}};
    for (int j = 0; j < ctx.p; ++j)
        s.terms.push_back({ctx.fbar[static_cast<std::size_t>(j)], 1, 0, 1u << j});
    return s;
}

/// v = sigma cap (1 + dbar sigma + (dbar sigma)^2 + ... + (dbar sigma)^(p-1)).
inline AntiForm build_v(const FormContext& ctx) {
    AntiForm s = sigma(ctx);
    AntiForm ds = dbar(ctx, s);
    AntiForm series = ctx.one();
    AntiForm power = ctx.one();
    for (int k = 1; k <= ctx.p - 1; ++k) {
        power = cap(ctx, power, ds);
        series = add(ctx, std::move(series), power);
    }
    return cap(ctx, s, series);
}

/// Restriction to the top Koszul degree p.
inline AntiForm top_component(const AntiForm& a) {
    AntiForm r{a.n, a.p, {}};
    for (const auto& t : a.terms)
        if (std::popcount(t.wedge) == a.p) r.terms.push_back(t);
    return r;
}

/// The closed-form representative
///   p! sum_j (-1)^(j-1) fbar_j dfbar_1 ^ ... ^ dfbar_j-hat ^ ... ^ dfbar_p
///     (x) e_1 ^ ... ^ e_p / |f|^(2p).
inline AntiForm closed_form_vp(const FormContext& ctx) {
    std::vector<AntiForm> dfb;
    for (int l = 0; l < ctx.p; ++l) {
        AntiForm d{ctx.n, ctx.p, {}};
        for (int k = 0; k < ctx.n; ++k) {
            MultiPoly c = ctx.fbar[static_cast<std::size_t>(l)].derivative(ctx.n + k);
            if (!c.is_zero()) d.terms.push_back({std::move(c), 0, 1u << k, 0});
        }
        dfb.push_back(std::move(d));
    }
    GaussianRational factorial(1);
    for (int k = 2; k <= ctx.p; ++k) factorial *= GaussianRational(static_cast<long>(k));
    std::uint32_t full = (ctx.p >= 32) ? ~0u : ((1u << ctx.p) - 1u);

    AntiForm total{ctx.n, ctx.p, {}};
    for (int j = 0; j < ctx.p; ++j) {
        AntiForm wedge = ctx.one();
        for (int l = 0; l < ctx.p; ++l)
            if (l != j) wedge = cap(ctx, wedge, dfb[static_cast<std::size_t>(l)]);
        GaussianRational c = factorial;
        if (j % 2 == 1) c = -c;
        AntiForm head{ctx.n, ctx.p, {}};
        head.terms.push_back({ctx.fbar[static_cast<std::size_t>(j)] * c, ctx.p, 0, full});
        total = add(ctx, std::move(total), cap(ctx, head, wedge));
    }
    return total;
}

/// omega^phi = phi * top_component(build_v): the representative of the
/// residue class attached to the germ phi.
inline AntiForm omega_phi(const FormContext& ctx, const MultiPoly& phi) {
    return scalar_multiple(ctx, embed_holomorphic(phi, ctx.n), top_component(build_v(ctx)));
}

/// Exactness witness for phi = sum psi_j f_j: with v' = sum psi_j (x) e_j,
/// nabla(-(v cap v')) = phi v - v', so the top component eta = (v cap v')_p
/// satisfies dbar(eta) = phi v_p - v'_p (the v' term only survives at p = 1).
/// Returns eta; omega_exact_check verifies the identity exactly.
inline AntiForm omega_exactness_witness(const FormContext& ctx, std::span<const MultiPoly> psi) {
    if (static_cast<int>(psi.size()) != ctx.p)
        throw std::invalid_argument("omega_exactness_witness: need one cofactor per generator");
    AntiForm vprime{ctx.n, ctx.p, {}};
    for (int j = 0; j < ctx.p; ++j) {
        MultiPoly c = embed_holomorphic(psi[static_cast<std::size_t>(j)], ctx.n);
        if (!c.is_zero()) vprime.terms.push_back({std::move(c), 0, 0, 1u << j});
    }
    return top_component(cap(ctx, build_v(ctx), vprime));
}

inline bool omega_exact_check(const FormContext& ctx, const MultiPoly& phi,
                              std::span<const MultiPoly> psi) {
    AntiForm eta = omega_exactness_witness(ctx, psi);
    AntiForm vprime{ctx.n, ctx.p, {}};
    for (int j = 0; j < ctx.p; ++j) {
        MultiPoly c = embed_holomorphic(psi[static_cast<std::size_t>(j)], ctx.n);
        if (!c.is_zero()) vprime.terms.push_back({std::move(c), 0, 0, 1u << j});
    }
    AntiForm rhs = sub(ctx, omega_phi(ctx, phi), top_component(vprime));
    return equal(ctx, dbar(ctx, eta), rhs);
}

/// top_component(build_v) = c * closed_form_vp when the two agree up to one
/// constant; returns that constant.
inline std::optional<GaussianRational> vp_constant(const FormContext& ctx) {
    AntiForm top = normalize(ctx, top_component(build_v(ctx)));
    AntiForm closed = normalize(ctx, closed_form_vp(ctx));
    if (closed.terms.empty()) return std::nullopt;
    // Compare one matching numerator coefficient, then verify globally.
    for (const auto& tc : closed.terms) {
        for (const auto& tt : top.terms) {
            if (tt.dbar != tc.dbar || tt.wedge != tc.wedge) continue;
            MultiPoly a = tt.num, b = tc.num;
            for (int k = tt.denom_pow; k < tc.denom_pow; ++k) a = a * ctx.norm2;
            for (int k = tc.denom_pow; k < tt.denom_pow; ++k) b = b * ctx.norm2;
            if (b.is_zero()) continue;
            const auto& [mono, coeff] = *b.terms().begin();
            GaussianRational ca = a.coefficient(mono);
            if (ca.is_zero()) continue;
            GaussianRational c = ca / coeff;
            AntiForm scaled = closed;
            for (auto& t : scaled.terms) t.num *= c;
            if (equal(ctx, top, scaled)) return c;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

/// Canonical text rendering: terms sorted by Koszul mask, dbar mask and
/// denominator power, with explicit |f|^(2N) denominators.
inline std::string render_form(const FormContext& ctx, const AntiForm& a_in,
                               std::span<const std::string> zn = {}) {
    AntiForm a = normalize(ctx, a_in);
    if (a.terms.empty()) return "0";
    std::vector<std::string> names;
    if (zn.empty()) {
        auto base = default_var_names(ctx.n);
        names = base;
        for (auto& s : base) names.push_back(s + "b");
    } else {
        names.assign(zn.begin(), zn.end());
    }
    std::sort(a.terms.begin(), a.terms.end(), [](const FormTerm& x, const FormTerm& y) {
        if (std::popcount(x.wedge) != std::popcount(y.wedge))
            return std::popcount(x.wedge) < std::popcount(y.wedge);
        if (x.wedge != y.wedge) return x.wedge < y.wedge;
        if (std::popcount(x.dbar) != std::popcount(y.dbar))
            return std::popcount(x.dbar) < std::popcount(y.dbar);
        if (x.dbar != y.dbar) return x.dbar < y.dbar;
        return x.denom_pow < y.denom_pow;
    });
    auto mask_str = [](std::uint32_t m) {
        std::string s = "{";
        bool first = true;
        for (std::uint32_t w = m; w; w &= w - 1) {
            if (!first) s += ",";
            s += std::to_string(std::countr_zero(w) + 1);
            first = false;
        }
        return s + "}";
    };
    std::string out;
    for (const auto& t : a.terms) {
        if (!out.empty()) out += "  +  ";
        out += "(" + render_poly(t.num, names) + ")";
        if (t.denom_pow > 0) out += "/|f|^" + std::to_string(2 * t.denom_pow);
        if (t.dbar) out += " dzb" + mask_str(t.dbar);
        if (t.wedge) out += " e" + mask_str(t.wedge);
    }
    return out;
}

}  // namespace residua
