/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/rational.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <ostream>

#include "sdnv/errors.hpp"

namespace sdnv {

namespace {

[[noreturn]] void bad_char(std::string_view text, std::size_t pos, const char* what)
{
    throw ParseError("invalid rational literal \"" + std::string(text) + "\" at position "
                     + std::to_string(pos) + ": " + what);
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

} // namespace

Rational::Rational(long num, long den)
    : q_(num, den)
{
    if (den == 0)
        throw InvariantError("rational with zero denominator");
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw InvariantError("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::from_decimal(std::string_view text)
{
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    std::size_t int_digits = 0;
    while (pos < text.size() && is_digit(text[pos])) {
        digits += text[pos++];
        ++int_digits;
    }
    std::size_t frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && is_digit(text[pos])) {
            digits += text[pos++];
            ++frac_digits;
        }
    }
    if (pos < text.size())
        bad_char(text, pos, "unexpected character");
    if (int_digits == 0 && frac_digits == 0)
        bad_char(text, pos, "expected digits");

    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
    mpq_class q(num, den);
    q.canonicalize();
    if (negative)
        q = -q;
    return Rational(q);
}

Rational Rational::parse(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return from_decimal(text);
    Rational num = from_decimal(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (den_text.empty() || !std::all_of(den_text.begin(), den_text.end(), is_digit))
        bad_char(text, slash + 1, "denominator must be a non-negative integer");
    if (!num.is_integer())
        bad_char(text, 0, "numerator must be an integer");
    mpz_class den(std::string(den_text), 10);
    if (den == 0)
        bad_char(text, slash + 1, "zero denominator");
    mpq_class q(num.numerator(), den);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const
{
    if (is_integer())
        return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

bool Rational::has_terminating_decimal() const
{
    mpz_class d = q_.get_den();
    while (mpz_divisible_ui_p(d.get_mpz_t(), 2))
        d /= 2;
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5))
        d /= 5;
    return d == 1;
}

std::string Rational::decimal_str() const
{
    if (!has_terminating_decimal())
        throw InvariantError("rational " + str() + " has no terminating decimal expansion");
    if (is_integer())
        return q_.get_num().get_str();
    // Scale by 10^n until integral.
    mpz_class scaled_num = ::abs(q_.get_num());
    mpz_class den = q_.get_den();
    std::size_t places = 0;
    mpz_class pow10 = 1;
    while (true) {
        ++places;
        pow10 *= 10;
        if (mpz_divisible_p(mpz_class(scaled_num * pow10).get_mpz_t(), den.get_mpz_t()))
            break;
    }
    mpz_class digits = scaled_num * pow10 / den;
    std::string s = digits.get_str();
    if (s.size() <= places)
        s.insert(0, places - s.size() + 1, '0');
    s.insert(s.size() - places, ".");
    return (sign() < 0 ? "-" : "") + s;
}

mpz_class Rational::floor() const
{
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

std::size_t Rational::hash() const
{
    std::size_t h = std::hash<std::string>{}(q_.get_num().get_str(16));
    std::size_t g = std::hash<std::string>{}(q_.get_den().get_str(16));
    return h ^ (g + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::string DeltaRational::str() const
{
    if (infinitesimal.is_zero())
        return standard.str();
    return "(" + standard.str() + ", " + infinitesimal.str() + "d)";
}

} // namespace sdnv
