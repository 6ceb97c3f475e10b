#pragma once

#include <algorithm>
#include <cassert>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "residua/polynomial.hpp"

namespace residua {

enum class OrderKind { grevlex, lex };

/// Global monomial order: graded reverse lexicographic (default) or plain
/// lexicographic with variable 0 highest. Both are multiplicative with 1
/// smallest, so Buchberger terminates and elimination works under lex.
struct MonomialOrder {
    OrderKind kind = OrderKind::grevlex;
    int nvars = 0;

    bool less(const Monomial& a, const Monomial& b) const {
        if (kind == OrderKind::grevlex) {
            unsigned da = a.degree(), db = b.degree();
            if (da != db) return da < db;
            for (std::size_t i = a.e.size(); i-- > 0;) {
                if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
            }
            return false;
        }
        for (std::size_t i = 0; i < a.e.size(); ++i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        return false;
    }

    bool greater(const Monomial& a, const Monomial& b) const { return less(b, a); }
};

struct Term {
    Monomial mono;
    GaussianRational coeff;
};

/// Leading term w.r.t. the order; polynomial must be nonzero.
inline Term leading_term(const MultiPoly& p, const MonomialOrder& ord) {
    if (p.is_zero()) throw std::invalid_argument("leading_term of zero polynomial");
    const std::pair<const Monomial, GaussianRational>* best = nullptr;
    for (const auto& t : p.terms())
        if (!best || ord.less(best->first, t.first)) best = &t;
    return {best->first, best->second};
}

struct DivisionResult {
    std::vector<MultiPoly> quotients;
    MultiPoly remainder;
};

/// Multivariate division: p = sum(quotients[i] * divisors[i]) + remainder,
/// no remainder term divisible by any divisor's leading monomial. Reduction
/// always uses the first divisor (in stored order) whose leading monomial
/// divides, so the result is deterministic.
inline DivisionResult divide(const MultiPoly& p, std::span<const MultiPoly> divisors,
                             const MonomialOrder& ord) {
    DivisionResult res;
    res.quotients.assign(divisors.size(), MultiPoly(p.nvars()));
    res.remainder = MultiPoly(p.nvars());
    std::vector<Term> lts;
    lts.reserve(divisors.size());
    for (const auto& d : divisors) {
        if (d.is_zero()) throw std::invalid_argument("divide: zero divisor");
        lts.push_back(leading_term(d, ord));
    }
    MultiPoly h = p;
    while (!h.is_zero()) {
        Term lt = leading_term(h, ord);
        bool reduced = false;
        for (std::size_t i = 0; i < divisors.size(); ++i) {
            if (!lts[i].mono.divides(lt.mono)) continue;
            Monomial m = lt.mono.div(lts[i].mono);
            GaussianRational c = lt.coeff / lts[i].coeff;
            res.quotients[i].add_term(m, c);
            h -= divisors[i].times_term(m, c);
            reduced = true;
            break;
        }
        if (!reduced) {
            res.remainder.add_term(lt.mono, lt.coeff);
            MultiPoly t = MultiPoly::term(lt.mono, lt.coeff);
            h -= t;
        }
    }
    return res;
}

/// Finite monomial basis of the quotient ring: the standard monomials
/// (those outside the leading-term ideal).
struct QuotientBasis {
    std::vector<Monomial> monomials;
    int dim = 0;
};

/// Reduced Groebner basis of an ideal, with a cofactor matrix expressing
/// every basis element exactly in the original generators:
///   basis[k] = sum_j cofactors[k][j] * generators[j].
class GroebnerBasis {
public:
    static GroebnerBasis compute(std::vector<MultiPoly> gens, MonomialOrder ord) {
        if (gens.empty()) throw std::invalid_argument("buchberger: no generators");
        int nv = gens[0].nvars();
        for (const auto& g : gens)
            if (g.nvars() != nv) throw std::invalid_argument("buchberger: variable-count mismatch");
        ord.nvars = nv;

        GroebnerBasis gb;
        gb.gens_ = std::move(gens);
        gb.order_ = ord;
        gb.run_buchberger();
        gb.reduce_basis();
        return gb;
    }

    const std::vector<MultiPoly>& generators() const { return gens_; }
    const std::vector<MultiPoly>& basis() const { return basis_; }
    const std::vector<std::vector<MultiPoly>>& cofactors() const { return cof_; }
    const MonomialOrder& order() const { return order_; }
    int nvars() const { return order_.nvars; }

    MultiPoly normal_form(const MultiPoly& p) const {
        if (p.nvars() != nvars()) throw std::invalid_argument("normal_form: variable-count mismatch");
        return divide(p, basis_, order_).remainder;
    }

    bool is_member(const MultiPoly& p) const { return normal_form(p).is_zero(); }

    /// On success, psi with p = sum psi[j] * generators()[j], exactly.
    std::optional<std::vector<MultiPoly>> extended_member(const MultiPoly& p) const {
        if (p.nvars() != nvars())
            throw std::invalid_argument("extended_member: variable-count mismatch");
        DivisionResult d = divide(p, basis_, order_);
        if (!d.remainder.is_zero()) return std::nullopt;
        std::vector<MultiPoly> psi(gens_.size(), MultiPoly(nvars()));
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            if (d.quotients[k].is_zero()) continue;
            for (std::size_t j = 0; j < gens_.size(); ++j)
                psi[j] += d.quotients[k] * cof_[k][j];
        }
        // The identity is cheap to re-verify and every caller relies on it.
        MultiPoly check(nvars());
        for (std::size_t j = 0; j < gens_.size(); ++j) check += psi[j] * gens_[j];
        if (!(check == p)) throw std::logic_error("extended_member: cofactor identity failed");
        return psi;
    }

    std::vector<Monomial> leading_monomials() const {
        std::vector<Monomial> lms;
        lms.reserve(basis_.size());
        for (const auto& b : basis_) lms.push_back(leading_term(b, order_).mono);
        return lms;
    }

    /// nullopt when the quotient is infinite-dimensional, i.e. some variable
    /// has no pure power inside the leading-term ideal.
    std::optional<QuotientBasis> quotient_basis() const {
        auto lms = leading_monomials();
        int nv = nvars();
        std::vector<std::uint32_t> bound(static_cast<std::size_t>(nv), 0);
        for (int v = 0; v < nv; ++v) {
            std::uint32_t best = 0;
            for (const auto& m : lms) {
                bool pure = m.e[static_cast<std::size_t>(v)] > 0;
                for (int u = 0; u < nv && pure; ++u)
                    if (u != v && m.e[static_cast<std::size_t>(u)] > 0) pure = false;
                if (pure) {
                    auto exp = m.e[static_cast<std::size_t>(v)];
                    if (best == 0 || exp < best) best = exp;
                }
            }
            if (best == 0) return std::nullopt;  // no pure power of variable v
            bound[static_cast<std::size_t>(v)] = best;
        }
        QuotientBasis qb;
        Monomial m(nv);
        enumerate_box(bound, 0, m, lms, qb.monomials);
        std::sort(qb.monomials.begin(), qb.monomials.end(), [](const Monomial& a, const Monomial& b) {
            if (a.degree() != b.degree()) return a.degree() < b.degree();
            return b < a;  // z before w within a degree
        });
        qb.dim = static_cast<int>(qb.monomials.size());
        return qb;
    }

    /// Name of the first variable with no pure power in LT(J); diagnostic for
    /// non-zero-dimensional rejections.
    std::optional<int> variable_without_pure_power() const {
        auto lms = leading_monomials();
        int nv = nvars();
        for (int v = 0; v < nv; ++v) {
            bool found = false;
            for (const auto& m : lms) {
                bool pure = m.e[static_cast<std::size_t>(v)] > 0;
                for (int u = 0; u < nv && pure; ++u)
                    if (u != v && m.e[static_cast<std::size_t>(u)] > 0) pure = false;
                if (pure) found = true;
            }
            if (!found) return v;
        }
        return std::nullopt;
    }

private:
    struct Entry {
        MultiPoly p;
        std::vector<MultiPoly> cof;
    };

    void make_monic(Entry& e) const {
        GaussianRational lc = leading_term(e.p, order_).coeff;
        if (lc.is_one()) return;
        GaussianRational inv = GaussianRational(1) / lc;
        e.p *= inv;
        for (auto& c : e.cof) c *= inv;
    }

    void run_buchberger() {
        int nv = nvars();
        std::vector<Entry> work;
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j].is_zero()) continue;
            Entry e{gens_[j], std::vector<MultiPoly>(gens_.size(), MultiPoly(nv))};
            e.cof[j] = MultiPoly::one(nv);
            make_monic(e);
            work.push_back(std::move(e));
        }
        if (work.empty()) throw std::invalid_argument("buchberger: all generators are zero");

        auto lm = [&](std::size_t i) { return leading_term(work[i].p, order_).mono; };

        std::set<std::pair<std::size_t, std::size_t>> pending, done;
        auto push_pairs = [&](std::size_t upto) {
            for (std::size_t i = 0; i < upto; ++i) pending.insert({i, upto});
        };
        for (std::size_t j = 1; j < work.size(); ++j) push_pairs(j);

        while (!pending.empty()) {
            // Normal selection: smallest lcm degree first.
            auto best = pending.begin();
            unsigned best_deg = Monomial::lcm(lm(best->first), lm(best->second)).degree();
            for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
                unsigned d = Monomial::lcm(lm(it->first), lm(it->second)).degree();
                if (d < best_deg) {
                    best = it;
                    best_deg = d;
                }
            }
            auto [i, j] = *best;
            pending.erase(best);
            done.insert({i, j});

            Monomial lmi = lm(i), lmj = lm(j);
            if (lmi.coprime_with(lmj)) continue;  // Buchberger's first criterion
            Monomial l = Monomial::lcm(lmi, lmj);
            // Chain criterion: some k with LM_k | lcm and both mixed pairs done.
            bool skip = false;
            for (std::size_t k = 0; k < work.size() && !skip; ++k) {
                if (k == i || k == j) continue;
                if (!lm(k).divides(l)) continue;
                auto pik = std::minmax(i, k), pjk = std::minmax(j, k);
                if (done.count({pik.first, pik.second}) && done.count({pjk.first, pjk.second}))
                    skip = true;
            }
            if (skip) continue;

            Monomial mi = l.div(lmi), mj = l.div(lmj);
            Entry s;
            s.p = work[i].p.times_term(mi, GaussianRational(1)) -
                  work[j].p.times_term(mj, GaussianRational(1));
            s.cof.assign(gens_.size(), MultiPoly(nv));
            for (std::size_t g = 0; g < gens_.size(); ++g)
                s.cof[g] = work[i].cof[g].times_term(mi, GaussianRational(1)) -
                           work[j].cof[g].times_term(mj, GaussianRational(1));
            if (s.p.is_zero()) continue;

            std::vector<MultiPoly> polys;
            polys.reserve(work.size());
            for (const auto& w : work) polys.push_back(w.p);
            DivisionResult dr = divide(s.p, polys, order_);
            if (dr.remainder.is_zero()) continue;
            for (std::size_t k = 0; k < work.size(); ++k) {
                if (dr.quotients[k].is_zero()) continue;
                for (std::size_t g = 0; g < gens_.size(); ++g)
                    s.cof[g] -= dr.quotients[k] * work[k].cof[g];
            }
            s.p = std::move(dr.remainder);
            make_monic(s);
            work.push_back(std::move(s));
            push_pairs(work.size() - 1);
        }
        work_ = std::move(work);
    }

    void reduce_basis() {
        // Drop entries whose leading monomial is divisible by another's.
        std::stable_sort(work_.begin(), work_.end(), [&](const Entry& a, const Entry& b) {
            return order_.less(leading_term(a.p, order_).mono, leading_term(b.p, order_).mono);
        });
        std::vector<Entry> kept;
        std::vector<Monomial> kept_lm;
        for (auto& e : work_) {
            Monomial m = leading_term(e.p, order_).mono;
            bool redundant = false;
            for (const auto& k : kept_lm)
                if (k.divides(m)) {
                    redundant = true;
                    break;
                }
            if (!redundant) {
                kept_lm.push_back(m);
                kept.push_back(std::move(e));
            }
        }
        // Tail-reduce each element modulo the others.
        for (std::size_t i = 0; i < kept.size(); ++i) {
            std::vector<MultiPoly> others;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < kept.size(); ++j)
                if (j != i) {
                    others.push_back(kept[j].p);
                    idx.push_back(j);
                }
            if (others.empty()) break;
            DivisionResult dr = divide(kept[i].p, others, order_);
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (dr.quotients[k].is_zero()) continue;
                for (std::size_t g = 0; g < gens_.size(); ++g)
                    kept[i].cof[g] -= dr.quotients[k] * kept[idx[k]].cof[g];
            }
            kept[i].p = std::move(dr.remainder);
        }
        // Deterministic presentation: leading monomials descending.
        std::stable_sort(kept.begin(), kept.end(), [&](const Entry& a, const Entry& b) {
            return order_.greater(leading_term(a.p, order_).mono, leading_term(b.p, order_).mono);
        });
        basis_.clear();
        cof_.clear();
        for (auto& e : kept) {
            basis_.push_back(std::move(e.p));
            cof_.push_back(std::move(e.cof));
        }
        work_.clear();
    }

    static void enumerate_box(const std::vector<std::uint32_t>& bound, std::size_t v, Monomial& m,
                              const std::vector<Monomial>& lms, std::vector<Monomial>& out) {
        if (v == bound.size()) {
            for (const auto& l : lms)
                if (l.divides(m)) return;
            out.push_back(m);
            return;
        }
        for (std::uint32_t k = 0; k < bound[v]; ++k) {
            m.e[v] = k;
            enumerate_box(bound, v + 1, m, lms, out);
        }
        m.e[v] = 0;
    }

    std::vector<MultiPoly> gens_;
    std::vector<MultiPoly> basis_;
    std::vector<std::vector<MultiPoly>> cof_;
    MonomialOrder order_;
    std::vector<Entry> work_;
};

inline GroebnerBasis buchberger(std::vector<MultiPoly> gens,
                                OrderKind kind = OrderKind::grevlex) {
    MonomialOrder ord{kind, gens.empty() ? 0 : gens[0].nvars()};
    return GroebnerBasis::compute(std::move(gens), ord);
}

inline MultiPoly normal_form(const MultiPoly& p, const GroebnerBasis& gb) {
    return gb.normal_form(p);
}

inline bool is_member(const MultiPoly& p, const GroebnerBasis& gb) { return gb.is_member(p); }

/// V(J) = {0} check in the sense of the quotient: every coordinate is
/// nilpotent modulo J, tested as NF(z_i^D) = 0 with D the quotient dimension.
inline bool is_primary_at_origin(const GroebnerBasis& gb) {
    auto qb = gb.quotient_basis();
    if (!qb) return false;
    auto d = static_cast<std::uint32_t>(qb->dim);
    for (int v = 0; v < gb.nvars(); ++v) {
        MultiPoly power = MultiPoly::term(Monomial::power_of(gb.nvars(), v, d), GaussianRational(1));
        if (!gb.is_member(power)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Elimination helpers: colon ideals and intersections via an auxiliary
// variable t in front, ordered out by lex.
// ---------------------------------------------------------------------------

namespace detail {

inline MultiPoly shift_in_front(const MultiPoly& p) {
    MultiPoly r(p.nvars() + 1);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm(p.nvars() + 1);
        for (int i = 0; i < p.nvars(); ++i) mm.e[static_cast<std::size_t>(i) + 1] = m.e[static_cast<std::size_t>(i)];
        r.add_term(mm, c);
    }
    return r;
}

inline std::optional<MultiPoly> strip_front_var(const MultiPoly& p) {
    MultiPoly r(p.nvars() - 1);
    for (const auto& [m, c] : p.terms()) {
        if (m.e[0] != 0) return std::nullopt;
        Monomial mm(p.nvars() - 1);
        for (int i = 1; i < p.nvars(); ++i) mm.e[static_cast<std::size_t>(i) - 1] = m.e[static_cast<std::size_t>(i)];
        r.add_term(mm, c);
    }
    return r;
}

}  // namespace detail

/// Generators of the intersection of two ideals, by eliminating t from
/// t*A + (1-t)*B under lex with t highest.
inline std::vector<MultiPoly> intersect_ideals(std::span<const MultiPoly> a,
                                               std::span<const MultiPoly> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("intersect_ideals: empty input");
    int nv = a[0].nvars();
    MultiPoly t = MultiPoly::variable(nv + 1, 0);
    MultiPoly one_minus_t = MultiPoly::one(nv + 1) - t;
    std::vector<MultiPoly> gens;
    for (const auto& p : a) gens.push_back(t * detail::shift_in_front(p));
    for (const auto& p : b) gens.push_back(one_minus_t * detail::shift_in_front(p));
    GroebnerBasis gb = buchberger(std::move(gens), OrderKind::lex);
    std::vector<MultiPoly> out;
    for (const auto& g : gb.basis())
        if (auto s = detail::strip_front_var(g)) out.push_back(std::move(*s));
    if (out.empty()) out.push_back(MultiPoly::zero(nv));
    return out;
}

/// Exact division p / f; throws when f does not divide p.
inline MultiPoly divide_exact(const MultiPoly& p, const MultiPoly& f) {
    if (p.is_zero()) return MultiPoly::zero(p.nvars());
    MonomialOrder ord{OrderKind::grevlex, p.nvars()};
    std::vector<MultiPoly> divs{f};
    DivisionResult dr = divide(p, divs, ord);
    if (!dr.remainder.is_zero()) throw std::invalid_argument("divide_exact: not divisible");
    return dr.quotients[0];
}

/// Generators of (g : f) = (g n <f>) / f.
inline std::vector<MultiPoly> colon_by_element(std::span<const MultiPoly> g, const MultiPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("colon_by_element: zero divisor");
    std::vector<MultiPoly> fs{f};
    std::vector<MultiPoly> inter = intersect_ideals(g, fs);
    std::vector<MultiPoly> out;
    for (const auto& p : inter)
        if (!p.is_zero()) out.push_back(divide_exact(p, f));
    if (out.empty()) out.push_back(MultiPoly::zero(f.nvars()));
    return out;
}

/// Reduced basis of (g : J) = {h : h*J within g}, computed as the
/// intersection of the single-generator colons. Requires g within J.
inline GroebnerBasis colon_ideal(const GroebnerBasis& g, const GroebnerBasis& j) {
    if (g.nvars() != j.nvars()) throw std::invalid_argument("colon_ideal: variable-count mismatch");
    for (const auto& gen : g.generators())
        if (!j.is_member(gen))
            throw std::invalid_argument("colon_ideal: a generator of g lies outside J");
    std::vector<MultiPoly> acc;
    bool first = true;
    for (const auto& f : j.generators()) {
        if (f.is_zero()) continue;
        std::vector<MultiPoly> c = colon_by_element(g.generators(), f);
        if (first) {
            acc = std::move(c);
            first = false;
        } else {
            acc = intersect_ideals(acc, c);
        }
    }
    if (first) throw std::invalid_argument("colon_ideal: J has no nonzero generator");
    return buchberger(std::move(acc), g.order().kind);
}

// ---------------------------------------------------------------------------
// Localization at the origin. For an ideal with finite variety, J + m^N
// stabilizes (by dimension) exactly when m^N lies inside J locally; the
// stabilized ideal is the m-primary component of J at 0 and computes
// membership in J*O_0 with global Groebner bases only.
// ---------------------------------------------------------------------------

struct LocalIdeal {
    GroebnerBasis ideal;               ///< GB of the original polynomial ideal J
    GroebnerBasis local;               ///< GB of J + m^N at stabilization
    int multiplicity = 0;              ///< dim of the local quotient O_0 / J*O_0
    int nilpotency = 0;                ///< N with m^N inside J*O_0
    bool primary = false;              ///< J was already m-primary
    std::vector<Monomial> std_monomials;  ///< monomial basis of the local quotient

    bool contains(const MultiPoly& p) const { return local.is_member(p); }
    MultiPoly normal_form(const MultiPoly& p) const { return local.normal_form(p); }
};

namespace detail {
inline std::vector<MultiPoly> degree_monomials(int nvars, std::uint32_t deg) {
    std::vector<MultiPoly> out;
    Monomial m(nvars);
    auto rec = [&](auto&& self, int v, std::uint32_t left) -> void {
        if (v == nvars - 1) {
            m.e[static_cast<std::size_t>(v)] = left;
            out.push_back(MultiPoly::term(m, GaussianRational(1)));
            m.e[static_cast<std::size_t>(v)] = 0;
            return;
        }
        for (std::uint32_t k = 0; k <= left; ++k) {
            m.e[static_cast<std::size_t>(v)] = k;
            self(self, v + 1, left - k);
        }
        m.e[static_cast<std::size_t>(v)] = 0;
    };
    rec(rec, 0, deg);
    return out;
}
}  // namespace detail

/// Localize a finite-variety ideal at the origin. Throws when the variety is
/// not finite (with the offending variable) or when no generator vanishes
/// at 0 (then 0 is not a zero of the ideal).
inline LocalIdeal localize_at_origin(GroebnerBasis gb) {
    auto qb = gb.quotient_basis();
    if (!qb) {
        auto v = gb.variable_without_pure_power();
        throw std::invalid_argument(
            "localize_at_origin: variety is not finite (no pure power of variable " +
            std::to_string(v ? *v + 1 : 0) + " in the leading-term ideal)");
    }
    for (const auto& g : gb.generators())
        if (!g.constant_term().is_zero())
            throw std::invalid_argument("localize_at_origin: a generator does not vanish at 0");

    int nv = gb.nvars();
    int global_dim = qb->dim;
    int prev_dim = -1;
    for (int n = 1; n <= global_dim + 1; ++n) {
        std::vector<MultiPoly> gens = gb.generators();
        for (auto& m : detail::degree_monomials(nv, static_cast<std::uint32_t>(n)))
            gens.push_back(std::move(m));
        GroebnerBasis loc = GroebnerBasis::compute(std::move(gens), gb.order());
        auto lqb = loc.quotient_basis();
        assert(lqb);  // contains m^n, always zero-dimensional
        int dim = lqb->dim;
        if (dim == prev_dim) {
            LocalIdeal result;
            result.multiplicity = dim;
            result.nilpotency = n - 1;
            result.primary = (dim == global_dim);
            result.std_monomials = std::move(lqb->monomials);
            result.local = std::move(loc);
            result.ideal = std::move(gb);
            if (result.multiplicity == 0)
                throw std::invalid_argument("localize_at_origin: the origin is not a zero of the ideal");
            return result;
        }
        prev_dim = dim;
    }
    throw std::logic_error("localize_at_origin: dimension failed to stabilize");
}

}  // namespace residua
