#pragma once

#include <cctype>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "residua/polynomial.hpp"

namespace residua {

/// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

/// Recursive-descent parser for the shared polynomial grammar:
/// variables z1..zN (declared names are also accepted, e.g. z,w for N=2),
/// integers, rationals a/b, the imaginary unit i, operators + - * / ^ and
/// parentheses. '/' requires a nonzero constant divisor.
class PolyParser {
public:
    PolyParser(std::string_view text, std::vector<std::string> var_names)
        : text_(text), names_(std::move(var_names)) {}

    MultiPoly parse() {
        MultiPoly p = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    int nvars() const { return static_cast<int>(names_.size()); }

    MultiPoly parse_expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (take() == '-');
        MultiPoly p = parse_term();
        if (neg) p = -p;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            take();
            MultiPoly q = parse_term();
            if (c == '+')
                p += q;
            else
                p -= q;
        }
        return p;
    }

    MultiPoly parse_term() {
        MultiPoly p = parse_factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') break;
            std::size_t at = pos_;
            take();
            MultiPoly q = parse_factor();
            if (c == '*') {
                p = p * q;
            } else {
                if (!q.is_constant() || q.is_zero())
                    throw ParseError("division requires a nonzero constant divisor", at);
                p = p * (GaussianRational(1) / q.constant_term());
            }
        }
        return p;
    }

    MultiPoly parse_factor() {
        MultiPoly base = parse_base();
        skip_ws();
        while (peek() == '^') {
            std::size_t at = pos_;
            take();
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("exponent must be a nonnegative integer", at + 1);
            unsigned long k = std::stoul(std::string(read_digits()));
            base = base.pow(static_cast<unsigned>(k));
            skip_ws();
        }
        return base;
    }

    MultiPoly parse_base() {
        skip_ws();
        char c = peek();
        std::size_t at = pos_;
        if (c == '(') {
            take();
            MultiPoly p = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            take();
            return p;
        }
        if (c == '-') {  // unary minus inside a product, e.g. 2*-3
            take();
            return -parse_base();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer n{std::string(read_digits())};
            return MultiPoly::constant(nvars(), GaussianRational(Rational(n)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string_view name = read_ident();
            if (name == "i") return MultiPoly::constant(nvars(), GaussianRational::unit_i());
            if (auto v = lookup_var(name)) return MultiPoly::variable(nvars(), *v);
            throw ParseError("unknown variable '" + std::string(name) + "'", at);
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
        return MultiPoly(nvars());  // unreachable
    }

    std::optional<int> lookup_var(std::string_view name) const {
        for (std::size_t k = 0; k < names_.size(); ++k)
            if (names_[k] == name) return static_cast<int>(k);
        // z1..zN aliases are always accepted unless shadowed by a declared name.
        if (name.size() >= 2 && name[0] == 'z') {
            bool digits = true;
            for (char ch : name.substr(1))
                if (!std::isdigit(static_cast<unsigned char>(ch))) digits = false;
            if (digits) {
                int idx = std::stoi(std::string(name.substr(1))) - 1;
                if (idx >= 0 && idx < nvars()) return idx;
            }
        }
        return std::nullopt;
    }

    std::string_view read_digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string_view read_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    std::string_view text_;
    std::vector<std::string> names_;
    std::size_t pos_ = 0;
};

inline std::vector<std::string> default_var_names(int nvars) {
    if (nvars == 1) return {"z"};
    if (nvars == 2) return {"z", "w"};
    std::vector<std::string> names;
    for (int k = 1; k <= nvars; ++k) names.push_back("z" + std::to_string(k));
    return names;
}

inline MultiPoly parse_poly(std::string_view text, std::vector<std::string> var_names) {
    return PolyParser(text, std::move(var_names)).parse();
}

inline MultiPoly parse_poly(std::string_view text, int nvars) {
    return parse_poly(text, default_var_names(nvars));
}

namespace detail {
inline std::string coeff_str(const GaussianRational& c) {
    if (c.im == 0) return rational_str(c.re);
    if (c.re == 0) {
        if (c.im == 1) return "i";
        if (c.im == -1) return "-i";
        return rational_str(c.im) + "*i";
    }
    std::string s = "(" + rational_str(c.re);
    if (c.im > 0)
        s += "+" + (c.im == 1 ? std::string("i") : rational_str(c.im) + "*i");
    else
        s += "-" + (c.im == -1 ? std::string("i") : rational_str(-c.im) + "*i");
    return s + ")";
}
}  // namespace detail

/// Canonical renderer: terms sorted by total degree (descending) then by
/// exponent vector; parse(render(p)) == p exactly.
inline std::string render_poly(const MultiPoly& p, std::span<const std::string> var_names) {
    if (p.is_zero()) return "0";
    if (static_cast<int>(var_names.size()) != p.nvars())
        throw std::invalid_argument("render_poly: name count mismatch");
    std::vector<const std::pair<const Monomial, GaussianRational>*> ts;
    for (const auto& t : p.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](const auto* a, const auto* b) {
        unsigned da = a->first.degree(), db = b->first.degree();
        if (da != db) return da > db;
        return a->first > b->first;
    });
    std::string out;
    for (const auto* t : ts) {
        const auto& [m, c] = *t;
        std::string mono;
        for (int v = 0; v < p.nvars(); ++v) {
            auto exp = m.e[static_cast<std::size_t>(v)];
            if (exp == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += var_names[static_cast<std::size_t>(v)];
            if (exp > 1) mono += "^" + std::to_string(exp);
        }
        // Pull the sign out for real / purely imaginary coefficients.
        GaussianRational cc = c;
        bool negative = false;
        if ((cc.im == 0 && cc.re < 0) || (cc.re == 0 && cc.im < 0)) {
            negative = true;
            cc = -cc;
        }
        std::string body;
        if (mono.empty())
            body = detail::coeff_str(cc);
        else if (cc.is_one())
            body = mono;
        else
            body = detail::coeff_str(cc) + "*" + mono;
        if (out.empty())
            out = negative ? "-" + body : body;
        else
            out += (negative ? " - " : " + ") + body;
    }
    return out;
}

inline std::string render_poly(const MultiPoly& p) {
    return render_poly(p, default_var_names(p.nvars()));
}

}  // namespace residua
