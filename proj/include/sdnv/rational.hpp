/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sdnv {

/// Exact arbitrary-precision rational, always kept in canonical form
/// (positive denominator, numerator and denominator coprime), so equality
/// is structural.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}
    Rational(int v) : q_(v) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Exact value of a decimal literal: optional sign, digits, optional
    /// fractional part ("-1.25" -> -5/4). Throws ParseError with the offending
    /// position.
    static Rational from_decimal(std::string_view text);

    /// Accepts either a decimal literal or "p/q".
    static Rational parse(std::string_view text);

    /// "p/q", or "p" when q == 1.
    std::string str() const;

    /// Terminating decimal rendering; only valid when the denominator is a
    /// product of 2s and 5s.
    std::string decimal_str() const;
    bool has_terminating_decimal() const;

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    /// Largest integer <= this.
    mpz_class floor() const;

    Rational abs() const { return Rational(::abs(q_)); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    std::size_t hash() const;

private:
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Rational extended with a symbolic infinitesimal: standard + infinitesimal*delta,
/// where delta is positive and smaller than any positive rational. Ordered
/// lexicographically.
struct DeltaRational {
    Rational standard;
    Rational infinitesimal;

    DeltaRational() = default;
    DeltaRational(Rational s, Rational d = Rational()) : standard(std::move(s)), infinitesimal(std::move(d)) {}

    DeltaRational& operator+=(const DeltaRational& o)
    {
        standard += o.standard;
        infinitesimal += o.infinitesimal;
        return *this;
    }
    DeltaRational& operator-=(const DeltaRational& o)
    {
        standard -= o.standard;
        infinitesimal -= o.infinitesimal;
        return *this;
    }
    DeltaRational& operator*=(const Rational& c)
    {
        standard *= c;
        infinitesimal *= c;
        return *this;
    }
    friend DeltaRational operator+(DeltaRational a, const DeltaRational& b) { return a += b; }
    friend DeltaRational operator-(DeltaRational a, const DeltaRational& b) { return a -= b; }
    friend DeltaRational operator*(DeltaRational a, const Rational& c) { return a *= c; }
    friend DeltaRational operator*(const Rational& c, DeltaRational a) { return a *= c; }
    friend DeltaRational operator/(DeltaRational a, const Rational& c)
    {
        a.standard /= c;
        a.infinitesimal /= c;
        return a;
    }

    friend bool operator==(const DeltaRational&, const DeltaRational&) = default;
    friend std::strong_ordering operator<=>(const DeltaRational& a, const DeltaRational& b)
    {
        if (auto c = a.standard <=> b.standard; c != 0)
            return c;
        return a.infinitesimal <=> b.infinitesimal;
    }

    /// Value for a concrete choice of delta.
    Rational at(const Rational& delta) const { return standard + infinitesimal * delta; }

    std::string str() const;
};

} // namespace sdnv

template <>
struct std::hash<sdnv::Rational> {
    std::size_t operator()(const sdnv::Rational& r) const noexcept { return r.hash(); }
};
