#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace convspec {

// Complex number with exact rational real and imaginary parts.
// All measure coefficients and certificate values live in this field,
// so equality checks in certificates are exact, never tolerance-based.
struct ComplexRational {
    mpq_class re;
    mpq_class im;

    ComplexRational() : re(0), im(0) {}
    ComplexRational(long r) : re(r), im(0) {}
    ComplexRational(const mpq_class& r) : re(r), im(0) {}
    ComplexRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }

    ComplexRational conj() const { return {re, -im}; }

    // |z|^2, always an exact rational.
    mpq_class squared_modulus() const { return re * re + im * im; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) {
        a += b;
        return a;
    }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) {
        a -= b;
        return a;
    }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        if (b.is_zero()) throw std::domain_error("ComplexRational: division by zero");
        mpq_class d = b.squared_modulus();
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) {
        return !(a == b);
    }

    double re_double() const { return re.get_d(); }
    double im_double() const { return im.get_d(); }
};

// sqrt(q) as an exact rational when q is a square in Q, nullopt otherwise.
// Used by the exact L1-norm path: |z| is rational iff |z|^2 is a rational square.
inline std::optional<mpq_class> exact_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpq_class c = q;
    c.canonicalize();
    const mpz_class& num = c.get_num();
    const mpz_class& den = c.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(rn, rd);
}

// |z| when the modulus is an exact rational, nullopt otherwise.
inline std::optional<mpq_class> exact_modulus(const ComplexRational& z) {
    return exact_sqrt(z.squared_modulus());
}

// Parses "p", "-p", or "p/q" (q > 0 after canonicalization). Rejects anything else.
inline mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    bool digits = false, slash = false;
    for (; i < s.size(); ++i) {
        if (s[i] >= '0' && s[i] <= '9') {
            digits = true;
        } else if (s[i] == '/' && !slash && digits) {
            slash = true;
            digits = false;
        } else {
            throw std::invalid_argument("rational: bad character in '" + s + "'");
        }
    }
    if (!digits) throw std::invalid_argument("rational: malformed '" + s + "'");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("rational: malformed '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("rational: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
inline std::string format_rational(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace convspec
