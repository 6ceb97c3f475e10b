#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "residua/syzygies.hpp"

namespace residua {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;  // rows of entries

/// Complex of free modules 0 -> O^{r_p} -> ... -> O^{r_1} -> O^{r_0} with
/// polynomial matrices f^k (maps[k-1], shape r_{k-1} x r_k) composing to zero.
struct FreeComplex {
    int nvars = 0;
    std::vector<int> ranks;          // r_0 .. r_p
    std::vector<PolyMatrix> maps;    // maps[k] is f^{k+1}

    int length() const { return static_cast<int>(ranks.size()) - 1; }

    const PolyMatrix& map(int k) const { return maps.at(static_cast<std::size_t>(k) - 1); }
};

namespace detail {

inline PolyMatrix zero_matrix(int rows, int cols, int nvars) {
    return PolyMatrix(static_cast<std::size_t>(rows),
                      std::vector<MultiPoly>(static_cast<std::size_t>(cols), MultiPoly(nvars)));
}

inline PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b, int nvars) {
    std::size_t rows = a.size();
    std::size_t inner = rows ? a[0].size() : 0;
    std::size_t cols = b.empty() ? 0 : b[0].size();
    if (inner != b.size()) throw std::invalid_argument("mat_mul: shape mismatch");
    PolyMatrix r = zero_matrix(static_cast<int>(rows), static_cast<int>(cols), nvars);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                if (b[k][j].is_zero()) continue;
                r[i][j] += a[i][k] * b[k][j];
            }
        }
    return r;
}

inline bool mat_is_zero(const PolyMatrix& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

inline std::vector<PolyVec> columns_of(const PolyMatrix& m, int nvars) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    std::vector<PolyVec> out(cols, modgb::vec_zero(rows, nvars));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[j][i] = m[i][j];
    return out;
}

inline void ascending_subsets(int p, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < p; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace detail

inline bool verify_complex(const FreeComplex& c) {
    if (c.ranks.size() != c.maps.size() + 1) return false;
    for (std::size_t k = 0; k < c.maps.size(); ++k) {
        const auto& m = c.maps[k];
        if (static_cast<int>(m.size()) != c.ranks[k]) return false;
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != c.ranks[k + 1]) return false;
    }
    for (std::size_t k = 0; k + 1 < c.maps.size(); ++k)
        if (!detail::mat_is_zero(detail::mat_mul(c.maps[k], c.maps[k + 1], c.nvars))) return false;
    return true;
}

/// Koszul complex of f_1..f_p: ranks binomial(p,k), basis of Lambda^k the
/// ascending index sets in lexicographic order, differential the contraction
/// by sum f_j e_j with signs (-1)^{j+1}.
inline FreeComplex koszul_complex(std::span<const MultiPoly> f) {
    if (f.empty()) throw std::invalid_argument("koszul_complex: empty generator list");
    int nv = f[0].nvars();
    for (const auto& g : f)
        if (g.nvars() != nv) throw std::invalid_argument("koszul_complex: variable-count mismatch");
    int p = static_cast<int>(f.size());

    std::vector<std::vector<std::vector<int>>> bases(static_cast<std::size_t>(p) + 1);
    for (int k = 0; k <= p; ++k) detail::ascending_subsets(p, k, bases[static_cast<std::size_t>(k)]);

    FreeComplex c;
    c.nvars = nv;
    for (int k = 0; k <= p; ++k) c.ranks.push_back(static_cast<int>(bases[static_cast<std::size_t>(k)].size()));
    for (int k = 1; k <= p; ++k) {
        const auto& src = bases[static_cast<std::size_t>(k)];
        const auto& dst = bases[static_cast<std::size_t>(k) - 1];
        auto find_dst = [&](const std::vector<int>& s) {
            for (std::size_t i = 0; i < dst.size(); ++i)
                if (dst[i] == s) return i;
            throw std::logic_error("koszul_complex: missing basis subset");
        };
        PolyMatrix m = detail::zero_matrix(c.ranks[static_cast<std::size_t>(k) - 1],
                                           c.ranks[static_cast<std::size_t>(k)], nv);
        for (std::size_t col = 0; col < src.size(); ++col) {
            const auto& subset = src[col];
            for (std::size_t t = 0; t < subset.size(); ++t) {
                std::vector<int> rest;
                for (std::size_t u = 0; u < subset.size(); ++u)
                    if (u != t) rest.push_back(subset[u]);
                std::size_t row = find_dst(rest);
                MultiPoly entry = f[static_cast<std::size_t>(subset[t])];
                if (t % 2 == 1) entry = -entry;
                m[row][col] += entry;
            }
        }
        c.maps.push_back(std::move(m));
    }
    return c;
}

/// Cancel trivial summands: a pivot entry that is a nonzero constant gets its
/// row and column cleared by exact elementary operations (compensated in the
/// adjacent maps), then both basis vectors are dropped. Afterwards redundant
/// columns of the last map are pruned by module membership. An invertible
/// entry with higher-order terms has no polynomial inverse; none of the
/// constructions here produce one, and minimize throws if it ever sees one.
inline FreeComplex minimize(FreeComplex c) {
    auto find_constant_pivot = [&](std::size_t& mk, std::size_t& pi, std::size_t& pj) {
        for (mk = 1; mk < c.maps.size(); ++mk) {  // maps[mk] = f^{mk+1}, so k >= 2
            const auto& m = c.maps[mk];
            for (pi = 0; pi < m.size(); ++pi)
                for (pj = 0; pj < m[pi].size(); ++pj)
                    if (!m[pi][pj].is_zero() && m[pi][pj].is_constant()) return true;
        }
        return false;
    };

    std::size_t mk = 0, pi = 0, pj = 0;
    while (find_constant_pivot(mk, pi, pj)) {
        PolyMatrix& A = c.maps[mk];
        GaussianRational u = A[pi][pj].constant_term();
        GaussianRational inv = GaussianRational(1) / u;
        std::size_t rows = A.size(), cols = A[0].size();

        // Clear row pi by column operations; compensate in f^{k+1}.
        for (std::size_t j = 0; j < cols; ++j) {
            if (j == pj || A[pi][j].is_zero()) continue;
            MultiPoly s = A[pi][j] * inv;
            for (std::size_t i = 0; i < rows; ++i) A[i][j] -= s * A[i][pj];
            if (mk + 1 < c.maps.size()) {
                auto& nxt = c.maps[mk + 1];
                for (std::size_t q = 0; q < nxt[pj].size(); ++q) nxt[pj][q] += s * nxt[j][q];
            }
        }
        // Clear column pj by row operations; compensate in f^{k-1}.
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pi || A[i][pj].is_zero()) continue;
            MultiPoly t = A[i][pj] * inv;
            for (std::size_t j = 0; j < cols; ++j) A[i][j] -= t * A[pi][j];
            auto& prv = c.maps[mk - 1];
            for (std::size_t q = 0; q < prv.size(); ++q) prv[q][pi] += t * prv[q][i];
        }

        // The cleared row/column of the neighbours must already vanish.
        if (mk + 1 < c.maps.size())
            for (const auto& e : c.maps[mk + 1][pj])
                if (!e.is_zero()) throw std::logic_error("minimize: nonzero row survived cancellation");
        for (const auto& row : c.maps[mk - 1])
            if (!row[pi].is_zero()) throw std::logic_error("minimize: nonzero column survived cancellation");

        // Drop source basis vector pj and target basis vector pi.
        for (auto& row : A) row.erase(row.begin() + static_cast<std::ptrdiff_t>(pj));
        A.erase(A.begin() + static_cast<std::ptrdiff_t>(pi));
        if (mk + 1 < c.maps.size())
            c.maps[mk + 1].erase(c.maps[mk + 1].begin() + static_cast<std::ptrdiff_t>(pj));
        for (auto& row : c.maps[mk - 1]) row.erase(row.begin() + static_cast<std::ptrdiff_t>(pi));
        c.ranks[mk] -= 1;
        c.ranks[mk + 1] -= 1;
        while (!c.ranks.empty() && c.ranks.back() == 0) {
            c.ranks.pop_back();
            c.maps.pop_back();
        }
    }

    // Prune redundant columns of the last map.
    bool changed = !c.maps.empty();
    while (changed) {
        changed = false;
        PolyMatrix& last = c.maps.back();
        auto cols = detail::columns_of(last, c.nvars);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            std::vector<PolyVec> others;
            for (std::size_t q = 0; q < cols.size(); ++q)
                if (q != j) others.push_back(cols[q]);
            if (modgb::module_contains(cols[j], others, c.nvars)) {
                for (auto& row : last) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
                c.ranks.back() -= 1;
                changed = true;
                break;
            }
        }
        if (c.ranks.back() == 0) {
            c.ranks.pop_back();
            c.maps.pop_back();
            changed = !c.maps.empty();
        }
    }

    for (std::size_t k = 1; k < c.maps.size(); ++k)
        for (const auto& row : c.maps[k])
            for (const auto& e : row)
                if (!e.constant_term().is_zero() && !e.is_constant())
                    throw std::logic_error(
                        "minimize: unit entry with higher-order terms cannot be cancelled exactly");
    return c;
}

/// Free resolution of O/<gens> by iterated syzygies, minimized. Terminates in
/// at most nvars steps for an ideal with finite quotient; more than nvars+1
/// syzygy steps means a bug upstream and raises.
inline FreeComplex free_resolution(std::span<const MultiPoly> gens,
                                   OrderKind kind = OrderKind::grevlex) {
    if (gens.empty()) throw std::invalid_argument("free_resolution: empty generator list");
    int nv = gens[0].nvars();

    FreeComplex c;
    c.nvars = nv;
    c.ranks = {1, static_cast<int>(gens.size())};
    PolyMatrix f1(1);
    for (const auto& g : gens) f1[0].push_back(g);
    c.maps.push_back(std::move(f1));

    MonomialOrder base{kind, nv};
    while (true) {
        if (static_cast<int>(c.maps.size()) > nv + 1)
            throw std::logic_error("free_resolution: did not terminate within nvars+1 steps");
        auto cols = detail::columns_of(c.maps.back(), nv);
        auto syz = syzygies_of(cols, nv, base);
        if (syz.empty()) break;
        PolyMatrix next = detail::zero_matrix(c.ranks.back(), static_cast<int>(syz.size()), nv);
        for (std::size_t j = 0; j < syz.size(); ++j)
            for (std::size_t i = 0; i < syz[j].size(); ++i) next[i][j] = syz[j][i];
        c.maps.push_back(std::move(next));
        c.ranks.push_back(static_cast<int>(syz.size()));
    }
    return minimize(std::move(c));
}

/// Exact rank of a matrix over Q(i) by Gaussian elimination.
inline int rank_exact(std::vector<std::vector<GaussianRational>> m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[row]);
        GaussianRational inv = GaussianRational(1) / m[row][col];
        for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            GaussianRational f = m[i][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<GaussianRational>> evaluate_matrix(
    const PolyMatrix& m, std::span<const GaussianRational> point) {
    std::vector<std::vector<GaussianRational>> r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto& e : m[i]) r[i].push_back(e.eval_exact(point));
    return r;
}

/// Scalar-exactness surrogate at rational points off Z: rank f^1(z) = 1 and
/// rank f^k(z) + rank f^{k+1}(z) = r_k for 0 < k < p. Points where every
/// generator vanishes lie on Z and are rejected. `trials` extra random small
/// rational points are drawn on top of the supplied ones.
inline bool pointwise_exactness_check(const FreeComplex& c,
                                      std::span<const std::vector<GaussianRational>> points,
                                      int trials = 0, unsigned seed = 20240915) {
    std::vector<std::vector<GaussianRational>> all(points.begin(), points.end());
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    while (static_cast<int>(all.size()) < static_cast<int>(points.size()) + trials) {
        std::vector<GaussianRational> pt;
        for (int v = 0; v < c.nvars; ++v)
            pt.emplace_back(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        bool off_z = false;
        for (const auto& g : c.maps[0][0])
            if (!g.eval_exact(pt).is_zero()) off_z = true;
        if (off_z) all.push_back(std::move(pt));
    }

    int p = c.length();
    for (const auto& pt : all) {
        if (static_cast<int>(pt.size()) != c.nvars)
            throw std::invalid_argument("pointwise_exactness_check: bad point dimension");
        std::vector<int> rk;
        for (const auto& m : c.maps) rk.push_back(rank_exact(evaluate_matrix(m, pt)));
        if (rk[0] == 0)
            throw std::invalid_argument("pointwise_exactness_check: point lies on Z");
        if (rk[0] != 1) return false;
        for (int k = 1; k < p; ++k)
            if (rk[static_cast<std::size_t>(k) - 1] + rk[static_cast<std::size_t>(k)] !=
                c.ranks[static_cast<std::size_t>(k)])
                return false;
    }
    return true;
}

/// Auslander-Buchsbaum at the desk: an m-primary ideal is Cohen-Macaulay
/// exactly when its minimal resolution has length = nvars (= codim).
inline bool cohen_macaulay_check(const FreeComplex& c) { return c.length() == c.nvars; }

}  // namespace residua
