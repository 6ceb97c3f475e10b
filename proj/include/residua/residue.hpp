#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "residua/groebner.hpp"

namespace residua {

/// Residue of h dz against the monomial complete intersection z_i^{m_i}:
/// the torus integral collapses to one Taylor coefficient.
inline GaussianRational monomial_residue(std::span<const int> powers, const MultiPoly& h) {
    if (static_cast<int>(powers.size()) != h.nvars())
        throw std::invalid_argument("monomial_residue: power count must match variable count");
    Monomial target(h.nvars());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] < 1) throw std::invalid_argument("monomial_residue: powers must be >= 1");
        target.e[i] = static_cast<std::uint32_t>(powers[i] - 1);
    }
    return h.coefficient(target);
}

/// Witness that each coordinate power z_i^{m_i} lies in the ideal:
/// z_i^{powers[i]} = sum_j cof[i][j] * generators[j] + tail_i, where tail_i
/// is zero when the ideal is m-primary and otherwise has order >= trunc_order
/// (obtained by extended membership in J + m^T). Either way the identity is
/// exact and re-verified on construction.
struct DominatingPowers {
    std::vector<int> powers;
    std::vector<std::vector<MultiPoly>> cof;
    std::vector<MultiPoly> tails;
    bool truncated = false;
    int trunc_order = 0;
};

inline DominatingPowers find_dominating_powers(const LocalIdeal& li, int extra = 0) {
    const int nv = li.ideal.nvars();
    DominatingPowers dp;
    for (int v = 0; v < nv; ++v) {
        int m = 0;
        for (int k = 1; k <= li.nilpotency; ++k) {
            MultiPoly p = MultiPoly::term(Monomial::power_of(nv, v, static_cast<std::uint32_t>(k)),
                                          GaussianRational(1));
            if (li.contains(p)) {
                m = k;
                break;
            }
        }
        if (m == 0)
            throw std::logic_error(
                "find_dominating_powers: no coordinate power is a member; localization is broken");
        dp.powers.push_back(m + extra);
    }

    const std::size_t ngen = li.ideal.generators().size();
    auto power_poly = [&](int v) {
        return MultiPoly::term(
            Monomial::power_of(nv, v, static_cast<std::uint32_t>(dp.powers[static_cast<std::size_t>(v)])),
            GaussianRational(1));
    };

    if (li.primary) {
        for (int v = 0; v < nv; ++v) {
            auto psi = li.ideal.extended_member(power_poly(v));
            if (!psi) throw std::logic_error("find_dominating_powers: membership lift failed");
            dp.cof.push_back(std::move(*psi));
            dp.tails.push_back(MultiPoly::zero(nv));
        }
        return dp;
    }

    // Locally dominated case: work modulo m^T with T past every degree the
    // residue extraction can reach, so the tail never contributes.
    int sum = 0, maxp = 0;
    for (int m : dp.powers) {
        sum += m;
        maxp = std::max(maxp, m);
    }
    dp.truncated = true;
    dp.trunc_order = sum + maxp - nv + 1;

    std::vector<MultiPoly> gens = li.ideal.generators();
    for (auto& mono : detail::degree_monomials(nv, static_cast<std::uint32_t>(dp.trunc_order)))
        gens.push_back(std::move(mono));
    GroebnerBasis ext = GroebnerBasis::compute(std::move(gens), li.ideal.order());

    for (int v = 0; v < nv; ++v) {
        auto psi = ext.extended_member(power_poly(v));
        if (!psi)
            throw std::logic_error("find_dominating_powers: power not in J + m^T; localization is broken");
        std::vector<MultiPoly> row(psi->begin(), psi->begin() + static_cast<std::ptrdiff_t>(ngen));
        MultiPoly tail = power_poly(v);
        for (std::size_t j = 0; j < ngen; ++j) tail -= row[j] * li.ideal.generators()[j];
        if (!tail.is_zero() && tail.order() < dp.trunc_order)
            throw std::logic_error("find_dominating_powers: tail order below truncation degree");
        dp.cof.push_back(std::move(row));
        dp.tails.push_back(std::move(tail));
    }
    return dp;
}

inline DominatingPowers find_dominating_powers(const GroebnerBasis& gb, int extra = 0) {
    return find_dominating_powers(localize_at_origin(gb), extra);
}

namespace detail {
inline MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& a, int nvars) {
    std::size_t n = a.size();
    if (n == 0) return MultiPoly::one(nvars);
    if (n == 1) return a[0][0];
    MultiPoly det(nvars);
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<MultiPoly>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<MultiPoly> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(std::move(row));
        }
        MultiPoly term = a[0][j] * poly_det(minor, nvars);
        if (j % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}
}  // namespace detail

/// Exact residue evaluator for one complete intersection: the transformation
/// law turns Res_f(h dz) into a coefficient of h * det(A) at z^{powers - 1}.
/// For the locally dominated tuple itself the multiplier is 1. The choice of
/// truncation degree in find_dominating_powers guarantees no correction term
/// of the geometric expansion of 1/(z^m - tail) can reach the extracted
/// coefficient, so this single extraction is exact in both cases.
struct CiResidue {
    std::vector<int> powers;
    MultiPoly multiplier;

    GaussianRational residue(const MultiPoly& h) const {
        Monomial target(h.nvars());
        for (std::size_t i = 0; i < powers.size(); ++i)
            target.e[i] = static_cast<std::uint32_t>(powers[i] - 1);
        return (h * multiplier).coefficient(target);
    }
};

/// Residue engine for a CI tuple f_1..f_n (n = nvars) with the origin an
/// isolated zero. `extra` bumps every dominating power, for the
/// transformation-consistency check.
inline CiResidue ci_residue_engine(const LocalIdeal& li, int extra = 0) {
    int nv = li.ideal.nvars();
    if (static_cast<int>(li.ideal.generators().size()) != nv)
        throw std::invalid_argument("ci_residue_engine: generator count must equal nvars");
    DominatingPowers dp = find_dominating_powers(li, extra);
    return CiResidue{dp.powers, detail::poly_det(dp.cof, nv)};
}

/// Res_f(h dz) for a complete intersection f, exactly.
inline GaussianRational transform_residue(std::span<const MultiPoly> f, const MultiPoly& h,
                                          OrderKind kind = OrderKind::grevlex) {
    if (f.empty() || static_cast<int>(f.size()) != f[0].nvars())
        throw std::invalid_argument("transform_residue: need exactly nvars generators");
    LocalIdeal li = localize_at_origin(buchberger(std::vector<MultiPoly>(f.begin(), f.end()), kind));
    return ci_residue_engine(li).residue(h);
}

/// The residue functional tabulated on monomials. For a CI ideal the table
/// is Res_f itself; otherwise it is Res_g for the dominating-power CI
/// g_i = sum_j A_ij f_j inside J, and the colon correction happens in the
/// duality harness.
struct ResidueFunctional {
    LocalIdeal local;
    std::vector<MultiPoly> ci;               ///< tuple the residue is taken against
    CiResidue engine;
    bool ci_ideal = false;                   ///< generators themselves form the CI
    int degree_bound = 0;                    ///< table covers |alpha| < degree_bound
    std::map<Monomial, GaussianRational> pairing;

    GaussianRational residue(const MultiPoly& h) const { return engine.residue(h); }
};

inline ResidueFunctional residue_pairing(const GroebnerBasis& gb) {
    ResidueFunctional rf;
    rf.local = localize_at_origin(gb);
    int nv = gb.nvars();
    rf.ci_ideal = static_cast<int>(gb.generators().size()) == nv;
    if (rf.ci_ideal) {
        rf.ci = gb.generators();
        rf.engine = ci_residue_engine(rf.local);
    } else {
        DominatingPowers dp = find_dominating_powers(rf.local);
        for (int v = 0; v < nv; ++v) {
            MultiPoly g(nv);
            for (std::size_t j = 0; j < dp.cof[static_cast<std::size_t>(v)].size(); ++j)
                g += dp.cof[static_cast<std::size_t>(v)][j] * gb.generators()[j];
            rf.ci.push_back(std::move(g));
        }
        rf.engine = CiResidue{dp.powers, MultiPoly::one(nv)};
    }
    rf.degree_bound = 2 * rf.local.multiplicity;
    std::vector<MultiPoly> mono_buf;
    for (int d = 0; d < rf.degree_bound; ++d)
        for (auto& m : detail::degree_monomials(nv, static_cast<std::uint32_t>(d))) {
            Monomial mono = m.terms().begin()->first;
            rf.pairing.emplace(mono, rf.engine.residue(m));
        }
    return rf;
}

/// Theorem-style annihilator test in the CI case: phi annihilates Res_f iff
/// Res_f(phi * z^alpha) vanishes for every standard monomial alpha of the
/// local quotient (those span O_0/J, and Res_f kills J * O_0).
inline bool annihilator_test_ci(const ResidueFunctional& rf, const MultiPoly& phi) {
    if (!rf.ci_ideal)
        throw std::invalid_argument("annihilator_test_ci: functional was not built from a CI ideal");
    for (const auto& alpha : rf.local.std_monomials) {
        MultiPoly test = phi.times_term(alpha, GaussianRational(1));
        if (!rf.residue(test).is_zero()) return false;
    }
    return true;
}

/// Duality harness: decides phi in J*O_0 through residues only, via the
/// classical CI reduction. g is the CI inside J (the generators themselves
/// when they already form one, else the dominating-power combinations);
/// phi is a member iff Res_g(phi * h * z^beta) = 0 for every generator h of
/// (g : J) and every monomial z^beta spanning the local quotient by g.
class DualityHarness {
public:
    explicit DualityHarness(const GroebnerBasis& gb) : rf_(residue_pairing(gb)) {
        int nv = gb.nvars();
        if (rf_.ci_ideal) {
            betas_ = rf_.local.std_monomials;
        } else {
            Monomial box(nv);
            fill_box(0, box);
        }
        GroebnerBasis g_basis = buchberger(rf_.ci, gb.order().kind);
        GroebnerBasis colon = colon_ideal(g_basis, gb);
        colon_gens_ = colon.basis();
    }

    const ResidueFunctional& functional() const { return rf_; }
    const std::vector<MultiPoly>& colon_generators() const { return colon_gens_; }
    const std::vector<Monomial>& test_monomials() const { return betas_; }

    /// Membership decided by residues alone.
    bool member_residue(const MultiPoly& phi) const {
        for (const auto& h : colon_gens_) {
            MultiPoly ph = phi * h;
            for (const auto& beta : betas_) {
                if (!rf_.residue(ph.times_term(beta, GaussianRational(1))).is_zero()) return false;
            }
        }
        return true;
    }

    /// The independent oracle: normal-form membership in the localized ideal.
    bool member_groebner(const MultiPoly& phi) const { return rf_.local.contains(phi); }

private:
    void fill_box(std::size_t v, Monomial& m) {
        if (v == m.e.size()) {
            betas_.push_back(m);
            return;
        }
        for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(rf_.engine.powers[v]); ++k) {
            m.e[v] = k;
            fill_box(v + 1, m);
        }
        m.e[v] = 0;
    }

    ResidueFunctional rf_;
    std::vector<MultiPoly> colon_gens_;
    std::vector<Monomial> betas_;
};

/// One-shot form of the harness.
inline bool duality_membership(const GroebnerBasis& gb, const MultiPoly& phi) {
    return DualityHarness(gb).member_residue(phi);
}

}  // namespace residua
