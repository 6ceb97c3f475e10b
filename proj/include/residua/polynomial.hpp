#pragma once

#include <complex>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "residua/monomial.hpp"
#include "residua/rational.hpp"

namespace residua {

/// Sparse multivariate polynomial over Q(i). Terms map monomials to nonzero
/// coefficients; anything that would store a zero prunes it instead, so
/// equality is structural. Values are immutable in practice: every operation
/// returns a fresh polynomial.
class MultiPoly {
public:
    using TermMap = std::map<Monomial, GaussianRational>;

    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(int nvars) : nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("MultiPoly: negative variable count");
    }

    static MultiPoly zero(int nvars) { return MultiPoly(nvars); }

    static MultiPoly constant(int nvars, GaussianRational c) {
        MultiPoly p(nvars);
        if (!c.is_zero()) p.terms_.emplace(Monomial(nvars), std::move(c));
        return p;
    }

    static MultiPoly one(int nvars) { return constant(nvars, GaussianRational(1)); }

    static MultiPoly variable(int nvars, int var) {
        return term(Monomial::power_of(nvars, var, 1), GaussianRational(1));
    }

    static MultiPoly term(Monomial m, GaussianRational c) {
        MultiPoly p(m.nvars());
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
    }

    GaussianRational constant_term() const { return coefficient(Monomial(nvars_)); }

    GaussianRational coefficient(const Monomial& m) const {
        if (m.nvars() != nvars_) throw std::invalid_argument("coefficient: variable-count mismatch");
        auto it = terms_.find(m);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    /// Max total degree of a term; -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
        return d;
    }

    /// Min total degree of a term (the order of vanishing at 0); INT_MAX for 0.
    int order() const {
        int d = std::numeric_limits<int>::max();
        for (const auto& [m, c] : terms_) d = std::min(d, static_cast<int>(m.degree()));
        return d;
    }

    void add_term(const Monomial& m, const GaussianRational& c) {
        if (m.nvars() != nvars_) throw std::invalid_argument("add_term: variable-count mismatch");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    MultiPoly& operator*=(const GaussianRational& s) {
        if (s.is_zero()) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const GaussianRational& s) { return a *= s; }
    friend MultiPoly operator*(const GaussianRational& s, MultiPoly a) { return a *= s; }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same(b);
        MultiPoly r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }

    /// Multiply by a single term; cheaper than building a one-term polynomial.
    MultiPoly times_term(const Monomial& m, const GaussianRational& c) const {
        MultiPoly r(nvars_);
        if (c.is_zero()) return r;
        for (const auto& [mm, cc] : terms_) r.terms_.emplace(mm * m, cc * c);
        return r;
    }

    MultiPoly pow(unsigned k) const {
        MultiPoly r = one(nvars_);
        MultiPoly base = *this;
        while (k > 0) {
            if (k & 1u) r = r * base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

    /// Formal partial derivative in the given variable.
    MultiPoly derivative(int var) const {
        if (var < 0 || var >= nvars_) throw std::invalid_argument("derivative: variable out of range");
        MultiPoly r(nvars_);
        auto v = static_cast<std::size_t>(var);
        for (const auto& [m, c] : terms_) {
            if (m.e[v] == 0) continue;
            Monomial mm = m;
            GaussianRational cc = c * GaussianRational(Rational(mm.e[v]));
            --mm.e[v];
            r.terms_.emplace(std::move(mm), std::move(cc));
        }
        return r;
    }

    /// Numeric evaluation, recursive Horner over the variables; the exact
    /// coefficients turn into doubles only at the leaves.
    std::complex<double> eval(std::span<const std::complex<double>> point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("eval: point length does not match variable count");
        std::vector<const std::pair<const Monomial, GaussianRational>*> ts;
        ts.reserve(terms_.size());
        for (const auto& t : terms_) ts.push_back(&t);
        return eval_rec(ts, 0, ts.size(), 0, point);
    }

    /// Exact evaluation at a Q(i) point (used for pointwise rank checks).
    GaussianRational eval_exact(std::span<const GaussianRational> point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("eval_exact: point length does not match variable count");
        GaussianRational total;
        for (const auto& [m, c] : terms_) {
            GaussianRational v = c;
            for (int i = 0; i < nvars_; ++i)
                for (std::uint32_t k = 0; k < m.e[static_cast<std::size_t>(i)]; ++k)
                    v *= point[static_cast<std::size_t>(i)];
            total += v;
        }
        return total;
    }

    /// Substitute each variable by the given polynomial.
    MultiPoly substitute(std::span<const MultiPoly> images) const {
        if (static_cast<int>(images.size()) != nvars_)
            throw std::invalid_argument("substitute: image count mismatch");
        int out_vars = images.empty() ? 0 : images[0].nvars();
        MultiPoly r(out_vars);
        for (const auto& [m, c] : terms_) {
            MultiPoly t = MultiPoly::constant(out_vars, c);
            for (int i = 0; i < nvars_; ++i)
                if (m.e[static_cast<std::size_t>(i)] > 0)
                    t = t * images[static_cast<std::size_t>(i)].pow(m.e[static_cast<std::size_t>(i)]);
            r += t;
        }
        return r;
    }

private:
    void check_same(const MultiPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("MultiPoly: variable-count mismatch");
    }

    // Map keys are sorted lexicographically on the exponent vector, so terms
    // sharing a leading exponent are contiguous; this gives Horner for free.
    std::complex<double> eval_rec(
        const std::vector<const std::pair<const Monomial, GaussianRational>*>& ts,
        std::size_t lo, std::size_t hi, int var,
        std::span<const std::complex<double>> point) const {
        if (lo == hi) return {0.0, 0.0};
        if (var == nvars_) return ts[lo]->second.to_complex();
        auto v = static_cast<std::size_t>(var);
        // Collect (exponent, value-of-rest) groups in descending exponent order.
        std::vector<std::pair<std::uint32_t, std::complex<double>>> groups;
        std::size_t i = lo;
        while (i < hi) {
            std::uint32_t exp = ts[i]->first.e[v];
            std::size_t j = i;
            while (j < hi && ts[j]->first.e[v] == exp) ++j;
            groups.emplace_back(exp, eval_rec(ts, i, j, var + 1, point));
            i = j;
        }
        std::complex<double> acc{0.0, 0.0};
        std::uint32_t prev = 0;
        for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
            for (std::uint32_t k = it->first; k < prev; ++k) acc *= point[v];
            prev = it->first;
            acc += it->second;
        }
        for (std::uint32_t k = 0; k < prev; ++k) acc *= point[v];
        return acc;
    }

    int nvars_;
    TermMap terms_;
};

}  // namespace residua
