#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "residua/groebner.hpp"

namespace residua {

/// Element of a free module O^r: one polynomial per component.
using PolyVec = std::vector<MultiPoly>;

namespace modgb {

inline bool vec_is_zero(const PolyVec& v) {
    return std::all_of(v.begin(), v.end(), [](const MultiPoly& p) { return p.is_zero(); });
}

inline PolyVec vec_zero(std::size_t rank, int nvars) {
    return PolyVec(rank, MultiPoly(nvars));
}

inline PolyVec& vec_sub(PolyVec& a, const PolyVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline PolyVec vec_times_term(const PolyVec& v, const Monomial& m, const GaussianRational& c) {
    PolyVec r;
    r.reserve(v.size());
    for (const auto& p : v) r.push_back(p.times_term(m, c));
    return r;
}

inline PolyVec& vec_scale(PolyVec& v, const GaussianRational& c) {
    for (auto& p : v) p *= c;
    return v;
}

struct ModTerm {
    std::size_t comp = 0;
    Monomial mono;
    GaussianRational coeff;
};

/// Position-over-term: lower component index wins, ties broken by the base
/// monomial order.
struct ModuleOrder {
    MonomialOrder base;

    bool less(std::size_t ca, const Monomial& ma, std::size_t cb, const Monomial& mb) const {
        if (ca != cb) return ca > cb;
        return base.less(ma, mb);
    }
};

inline std::optional<ModTerm> leading_term(const PolyVec& v, const ModuleOrder& ord) {
    std::optional<ModTerm> best;
    for (std::size_t c = 0; c < v.size(); ++c) {
        for (const auto& [m, coef] : v[c].terms()) {
            if (!best || ord.less(best->comp, best->mono, c, m)) best = ModTerm{c, m, coef};
        }
    }
    return best;
}

struct VecDivision {
    std::vector<MultiPoly> quotients;
    PolyVec remainder;
};

/// Module analogue of multivariate division; divisor leading terms must sit
/// in the same component to reduce.
inline VecDivision divide_vec(const PolyVec& v, std::span<const PolyVec> divisors,
                              const ModuleOrder& ord, int nvars) {
    VecDivision res;
    res.quotients.assign(divisors.size(), MultiPoly(nvars));
    res.remainder = vec_zero(v.size(), nvars);
    std::vector<ModTerm> lts;
    lts.reserve(divisors.size());
    for (const auto& d : divisors) {
        auto lt = leading_term(d, ord);
        if (!lt) throw std::invalid_argument("divide_vec: zero divisor");
        lts.push_back(std::move(*lt));
    }
    PolyVec h = v;
    while (auto lt = leading_term(h, ord)) {
        bool reduced = false;
        for (std::size_t i = 0; i < divisors.size(); ++i) {
            if (lts[i].comp != lt->comp || !lts[i].mono.divides(lt->mono)) continue;
            Monomial m = lt->mono.div(lts[i].mono);
            GaussianRational c = lt->coeff / lts[i].coeff;
            res.quotients[i].add_term(m, c);
            vec_sub(h, vec_times_term(divisors[i], m, c));
            reduced = true;
            break;
        }
        if (!reduced) {
            res.remainder[lt->comp].add_term(lt->mono, lt->coeff);
            h[lt->comp].add_term(lt->mono, -lt->coeff);
        }
    }
    return res;
}

/// Reduced Groebner basis of the submodule generated by `gens`, with
/// cofactors over the input generators (basis[k] = sum cof[k][j]*gens[j]).
class ModuleGB {
public:
    static ModuleGB compute(std::vector<PolyVec> gens, MonomialOrder base, int nvars) {
        ModuleGB g;
        g.nvars_ = nvars;
        g.ord_ = ModuleOrder{base};
        g.gens_ = std::move(gens);
        g.run();
        return g;
    }

    const std::vector<PolyVec>& basis() const { return basis_; }
    const std::vector<std::vector<MultiPoly>>& cofactors() const { return cof_; }
    const ModuleOrder& order() const { return ord_; }
    int nvars() const { return nvars_; }

    bool contains(const PolyVec& v) const {
        if (basis_.empty()) return vec_is_zero(v);
        return vec_is_zero(divide_vec(v, basis_, ord_, nvars_).remainder);
    }

private:
    struct Entry {
        PolyVec p;
        std::vector<MultiPoly> cof;
    };

    void make_monic(Entry& e) const {
        auto lt = leading_term(e.p, ord_);
        if (!lt || lt->coeff.is_one()) return;
        GaussianRational inv = GaussianRational(1) / lt->coeff;
        vec_scale(e.p, inv);
        for (auto& c : e.cof) c *= inv;
    }

    void run() {
        std::vector<Entry> work;
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (vec_is_zero(gens_[j])) continue;
            Entry e{gens_[j], std::vector<MultiPoly>(gens_.size(), MultiPoly(nvars_))};
            e.cof[j] = MultiPoly::one(nvars_);
            make_monic(e);
            work.push_back(std::move(e));
        }
        auto lt = [&](std::size_t i) { return *leading_term(work[i].p, ord_); };

        std::vector<std::pair<std::size_t, std::size_t>> pending;
        for (std::size_t j = 0; j < work.size(); ++j)
            for (std::size_t i = 0; i < j; ++i) pending.push_back({i, j});

        while (!pending.empty()) {
            // Smallest lcm degree first keeps intermediate growth down.
            std::size_t pick = 0;
            unsigned best = ~0u;
            for (std::size_t q = 0; q < pending.size(); ++q) {
                auto [i, j] = pending[q];
                if (lt(i).comp != lt(j).comp) continue;
                unsigned d = Monomial::lcm(lt(i).mono, lt(j).mono).degree();
                if (d < best) {
                    best = d;
                    pick = q;
                }
            }
            // Purge pairs with mismatched components as we go.
            std::vector<std::pair<std::size_t, std::size_t>> keep;
            std::optional<std::pair<std::size_t, std::size_t>> chosen;
            for (std::size_t q = 0; q < pending.size(); ++q) {
                auto [i, j] = pending[q];
                if (lt(i).comp != lt(j).comp) continue;
                if (q == pick && !chosen)
                    chosen = pending[q];
                else
                    keep.push_back(pending[q]);
            }
            pending = std::move(keep);
            if (!chosen) break;
            auto [i, j] = *chosen;

            ModTerm li = lt(i), lj = lt(j);
            Monomial l = Monomial::lcm(li.mono, lj.mono);
            Monomial mi = l.div(li.mono), mj = l.div(lj.mono);
            Entry s;
            s.p = vec_times_term(work[i].p, mi, GaussianRational(1));
            vec_sub(s.p, vec_times_term(work[j].p, mj, GaussianRational(1)));
            s.cof.assign(gens_.size(), MultiPoly(nvars_));
            for (std::size_t g = 0; g < gens_.size(); ++g)
                s.cof[g] = work[i].cof[g].times_term(mi, GaussianRational(1)) -
                           work[j].cof[g].times_term(mj, GaussianRational(1));
            if (vec_is_zero(s.p)) continue;

            std::vector<PolyVec> polys;
            polys.reserve(work.size());
            for (const auto& w : work) polys.push_back(w.p);
            VecDivision dr = divide_vec(s.p, polys, ord_, nvars_);
            if (vec_is_zero(dr.remainder)) continue;
            for (std::size_t k = 0; k < work.size(); ++k) {
                if (dr.quotients[k].is_zero()) continue;
                for (std::size_t g = 0; g < gens_.size(); ++g)
                    s.cof[g] -= dr.quotients[k] * work[k].cof[g];
            }
            s.p = std::move(dr.remainder);
            make_monic(s);
            work.push_back(std::move(s));
            for (std::size_t q = 0; q + 1 < work.size(); ++q) pending.push_back({q, work.size() - 1});
        }

        // Reduce: drop dominated leading terms, then tail-reduce.
        std::stable_sort(work.begin(), work.end(), [&](const Entry& a, const Entry& b) {
            auto la = *leading_term(a.p, ord_), lb = *leading_term(b.p, ord_);
            return ord_.less(la.comp, la.mono, lb.comp, lb.mono);
        });
        std::vector<Entry> kept;
        for (auto& e : work) {
            auto le = *leading_term(e.p, ord_);
            bool redundant = false;
            for (const auto& k : kept) {
                auto lk = *leading_term(k.p, ord_);
                if (lk.comp == le.comp && lk.mono.divides(le.mono)) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) kept.push_back(std::move(e));
        }
        for (std::size_t a = 0; a < kept.size(); ++a) {
            std::vector<PolyVec> others;
            std::vector<std::size_t> idx;
            for (std::size_t b = 0; b < kept.size(); ++b)
                if (b != a) {
                    others.push_back(kept[b].p);
                    idx.push_back(b);
                }
            if (others.empty()) break;
            VecDivision dr = divide_vec(kept[a].p, others, ord_, nvars_);
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (dr.quotients[k].is_zero()) continue;
                for (std::size_t g = 0; g < gens_.size(); ++g)
                    kept[a].cof[g] -= dr.quotients[k] * kept[idx[k]].cof[g];
            }
            kept[a].p = std::move(dr.remainder);
        }
        std::stable_sort(kept.begin(), kept.end(), [&](const Entry& a, const Entry& b) {
            auto la = *leading_term(a.p, ord_), lb = *leading_term(b.p, ord_);
            return ord_.less(lb.comp, lb.mono, la.comp, la.mono);
        });
        for (auto& e : kept) {
            basis_.push_back(std::move(e.p));
            cof_.push_back(std::move(e.cof));
        }
    }

    int nvars_ = 0;
    ModuleOrder ord_;
    std::vector<PolyVec> gens_;
    std::vector<PolyVec> basis_;
    std::vector<std::vector<MultiPoly>> cof_;
};

/// Does v lie in the submodule generated by gens?
inline bool module_contains(const PolyVec& v, std::span<const PolyVec> gens, int nvars,
                            MonomialOrder base = {}) {
    if (vec_is_zero(v)) return true;
    std::vector<PolyVec> nonzero;
    for (const auto& g : gens)
        if (!vec_is_zero(g)) nonzero.push_back(g);
    if (nonzero.empty()) return false;
    base.nvars = nvars;
    return ModuleGB::compute(std::move(nonzero), base, nvars).contains(v);
}

}  // namespace modgb

/// Generating set of the syzygy module {v : sum v_j * gens_j = 0} of a list
/// of module elements (rank-1 vectors give ideal syzygies). Schreyer's
/// construction on a reduced module GB, transferred back to the input
/// generators and pruned to an irredundant set by module membership.
inline std::vector<PolyVec> syzygies_of(std::span<const PolyVec> gens, int nvars,
                                        MonomialOrder base = {}) {
    using namespace modgb;
    if (gens.empty()) return {};
    base.nvars = nvars;
    const std::size_t m = gens.size();

    std::vector<PolyVec> nonzero;
    std::vector<std::size_t> back;
    for (std::size_t j = 0; j < m; ++j) {
        if (!vec_is_zero(gens[j])) {
            nonzero.push_back(gens[j]);
            back.push_back(j);
        }
    }

    std::vector<PolyVec> result;
    auto add_candidate = [&](PolyVec cand) {
        if (!vec_is_zero(cand)) result.push_back(std::move(cand));
    };

    // A zero generator contributes the trivial syzygy e_j.
    for (std::size_t j = 0; j < m; ++j) {
        if (vec_is_zero(gens[j])) {
            PolyVec e = vec_zero(m, nvars);
            e[j] = MultiPoly::one(nvars);
            add_candidate(std::move(e));
        }
    }

    if (!nonzero.empty()) {
        ModuleGB gb = ModuleGB::compute(nonzero, base, nvars);
        const auto& basis = gb.basis();
        const auto& C = gb.cofactors();  // basis[k] = sum C[k][j] * nonzero[j]
        const std::size_t nb = basis.size();
        const auto& ord = gb.order();

        // D: each input generator expressed over the basis.
        std::vector<std::vector<MultiPoly>> D(nonzero.size());
        for (std::size_t i = 0; i < nonzero.size(); ++i) {
            VecDivision dr = divide_vec(nonzero[i], basis, ord, nvars);
            if (!vec_is_zero(dr.remainder))
                throw std::logic_error("syzygies_of: generator not reduced to zero by its own GB");
            D[i] = std::move(dr.quotients);
        }

        auto transfer = [&](const std::vector<MultiPoly>& s) {
            PolyVec out = vec_zero(m, nvars);
            for (std::size_t k = 0; k < nb; ++k) {
                if (s[k].is_zero()) continue;
                for (std::size_t j = 0; j < nonzero.size(); ++j) out[back[j]] += s[k] * C[k][j];
            }
            return out;
        };

        // Schreyer syzygies of the basis, one per same-component pair.
        for (std::size_t i = 0; i < nb; ++i) {
            auto li = *leading_term(basis[i], ord);
            for (std::size_t j = i + 1; j < nb; ++j) {
                auto lj = *leading_term(basis[j], ord);
                if (li.comp != lj.comp) continue;
                Monomial l = Monomial::lcm(li.mono, lj.mono);
                Monomial mi = l.div(li.mono), mj = l.div(lj.mono);
                PolyVec s = vec_times_term(basis[i], mi, GaussianRational(1));
                vec_sub(s, vec_times_term(basis[j], mj, GaussianRational(1)));
                VecDivision dr = divide_vec(s, basis, ord, nvars);
                if (!vec_is_zero(dr.remainder))
                    throw std::logic_error("syzygies_of: S-vector did not reduce to zero");
                std::vector<MultiPoly> syz(nb, MultiPoly(nvars));
                syz[i].add_term(mi, GaussianRational(1));
                syz[j].add_term(mj, GaussianRational(-1));
                for (std::size_t k = 0; k < nb; ++k) syz[k] -= dr.quotients[k];
                add_candidate(transfer(syz));
            }
        }

        // Rows of I - D*C vanish on the generators as well.
        for (std::size_t i = 0; i < nonzero.size(); ++i) {
            PolyVec row = vec_zero(m, nvars);
            row[back[i]] = MultiPoly::one(nvars);
            for (std::size_t k = 0; k < nb; ++k) {
                if (D[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < nonzero.size(); ++j) row[back[j]] -= D[i][k] * C[k][j];
            }
            add_candidate(std::move(row));
        }
    }

    // Every candidate must annihilate the generator row exactly.
    const std::size_t rank = gens[0].size();
    for (const auto& v : result) {
        PolyVec sum = vec_zero(rank, nvars);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < rank; ++r) sum[r] += v[j] * gens[j][r];
        if (!vec_is_zero(sum)) throw std::logic_error("syzygies_of: candidate is not a syzygy");
    }

    // Prune to an irredundant generating set, dropping large vectors first.
    auto vec_degree = [](const PolyVec& v) {
        int d = -1;
        for (const auto& p : v) d = std::max(d, p.total_degree());
        return d;
    };
    std::stable_sort(result.begin(), result.end(), [&](const PolyVec& a, const PolyVec& b) {
        return vec_degree(a) < vec_degree(b);
    });
    for (std::size_t i = result.size(); i-- > 0;) {
        std::vector<PolyVec> others;
        for (std::size_t j = 0; j < result.size(); ++j)
            if (j != i) others.push_back(result[j]);
        if (modgb::module_contains(result[i], others, nvars, base))
            result.erase(result.begin() + static_cast<std::ptrdiff_t>(i));
    }

    // Monic leading coefficients for a deterministic presentation.
    modgb::ModuleOrder mo{base};
    for (auto& v : result) {
        auto lt = modgb::leading_term(v, mo);
        if (lt && !lt->coeff.is_one()) modgb::vec_scale(v, GaussianRational(1) / lt->coeff);
    }
    return result;
}

/// Syzygies of a list of polynomials (the rank-1 case).
inline std::vector<PolyVec> syzygies(std::span<const MultiPoly> gens,
                                     OrderKind kind = OrderKind::grevlex) {
    if (gens.empty()) return {};
    int nv = gens[0].nvars();
    for (const auto& g : gens)
        if (g.nvars() != nv) throw std::invalid_argument("syzygies: variable-count mismatch");
    std::vector<PolyVec> vecs;
    vecs.reserve(gens.size());
    for (const auto& g : gens) vecs.push_back(PolyVec{g});
    return syzygies_of(vecs, nv, MonomialOrder{kind, nv});
}

}  // namespace residua
