#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace residua {

/// Exponent vector of fixed length nvars. The structural ordering (plain
/// lexicographic on the exponent vector) is only used as a map key; term
/// orders live in groebner.hpp.
struct Monomial {
    std::vector<std::uint32_t> e;

    Monomial() = default;
    explicit Monomial(int nvars) : e(static_cast<std::size_t>(nvars), 0) {}
    Monomial(std::initializer_list<std::uint32_t> exps) : e(exps) {}
    explicit Monomial(std::vector<std::uint32_t> exps) : e(std::move(exps)) {}

    int nvars() const { return static_cast<int>(e.size()); }

    unsigned degree() const {
        return std::accumulate(e.begin(), e.end(), 0u);
    }

    bool is_unit() const {
        return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }

    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }

    /// this / o; requires o.divides(*this).
    Monomial div(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (o.e[i] > r.e[i]) throw std::invalid_argument("Monomial::div: not divisible");
            r.e[i] -= o.e[i];
        }
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = std::max(r.e[i], b.e[i]);
        return r;
    }

    static Monomial power_of(int nvars, int var, std::uint32_t k) {
        Monomial m(nvars);
        m.e[static_cast<std::size_t>(var)] = k;
        return m;
    }

    bool coprime_with(const Monomial& o) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0 && o.e[i] > 0) return false;
        return true;
    }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

}  // namespace residua
