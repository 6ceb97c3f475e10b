#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <ostream>
#include <string>

namespace residua {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& q) {
    return q.str();
}

/// Exact element of Q(i), the coefficient field for every polynomial in the
/// library. cpp_rational keeps fractions reduced with positive denominators,
/// so equality is structural.
struct GaussianRational {
    Rational re{};
    Rational im{};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(long r, long i) : re(r), im(i) {}

    static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    /// re^2 + im^2, the (rational) squared modulus.
    Rational norm() const { return re * re + im * im; }

    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
        Rational n = o.norm();
        Rational r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = std::move(r);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    std::complex<double> to_complex() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }

    /// Human-readable "a/b + c/d*i" with zero parts elided.
    std::string str() const {
        if (im == 0) return rational_str(re);
        std::string imag;
        if (im == 1)
            imag = "i";
        else if (im == -1)
            imag = "-i";
        else
            imag = rational_str(im) + "*i";
        if (re == 0) return imag;
        if (im > 0) return rational_str(re) + "+" + imag;
        return rational_str(re) + "-" + (im == -1 ? std::string("i") : rational_str(-im) + "*i");
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& q) {
        return os << q.str();
    }
};

}  // namespace residua
