/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/linear_expr.hpp"

#include <charconv>

#include "sdnv/errors.hpp"

namespace sdnv {

std::string VarId::name() const
{
    switch (kind) {
    case Kind::Input:
        return "x_" + std::to_string(index);
    case Kind::PreHidden:
        return "_h_" + std::to_string(layer) + "_" + std::to_string(index);
    case Kind::Hidden:
        return "h_" + std::to_string(layer) + "_" + std::to_string(index);
    case Kind::Output:
        return "y_" + std::to_string(index);
    }
    return {};
}

namespace {

bool parse_uint(std::string_view s, std::uint32_t& out)
{
    if (s.empty())
        return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_pair(std::string_view s, std::uint32_t& a, std::uint32_t& b)
{
    auto us = s.find('_');
    return us != std::string_view::npos && parse_uint(s.substr(0, us), a) && parse_uint(s.substr(us + 1), b);
}

} // namespace

std::optional<VarId> VarId::parse(std::string_view text)
{
    std::uint32_t a = 0, b = 0;
    if (text.starts_with("x_") && parse_uint(text.substr(2), a))
        return input(a);
    if (text.starts_with("y_") && parse_uint(text.substr(2), a))
        return output(a);
    if (text.starts_with("_h_") && parse_pair(text.substr(3), a, b))
        return pre_hidden(a, b);
    if (text.starts_with("h_") && parse_pair(text.substr(2), a, b))
        return hidden(a, b);
    return std::nullopt;
}

LinearExpr LinearExpr::var(VarId v, Rational coeff)
{
    LinearExpr e;
    e.add_term(v, coeff);
    return e;
}

Rational LinearExpr::coeff(const VarId& v) const
{
    auto it = terms_.find(v);
    return it == terms_.end() ? Rational() : it->second;
}

LinearExpr& LinearExpr::add_term(const VarId& v, const Rational& coeff)
{
    if (coeff.is_zero())
        return *this;
    auto [it, inserted] = terms_.try_emplace(v, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero())
            terms_.erase(it);
    }
    return *this;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& o)
{
    for (const auto& [v, c] : o.terms_)
        add_term(v, c);
    constant_ += o.constant_;
    return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& o)
{
    for (const auto& [v, c] : o.terms_)
        add_term(v, -c);
    constant_ -= o.constant_;
    return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& c)
{
    if (c.is_zero()) {
        terms_.clear();
        constant_ = Rational();
        return *this;
    }
    for (auto& [v, coeff] : terms_)
        coeff *= c;
    constant_ *= c;
    return *this;
}

LinearExpr LinearExpr::operator-() const { return *this * Rational(-1); }

LinearExpr LinearExpr::substitute(const VarId& v, const LinearExpr& by) const
{
    auto it = terms_.find(v);
    if (it == terms_.end())
        return *this;
    Rational c = it->second;
    LinearExpr out = *this;
    out.terms_.erase(v);
    out += by * c;
    return out;
}

Rational LinearExpr::eval(const Assignment& assignment) const
{
    Rational sum = constant_;
    for (const auto& [v, c] : terms_) {
        auto it = assignment.find(v);
        if (it == assignment.end())
            throw UnboundVariableError("unbound variable " + v.name());
        sum += c * it->second;
    }
    return sum;
}

std::string LinearExpr::str() const
{
    std::string out;
    for (const auto& [v, c] : terms_) {
        if (!out.empty())
            out += " + ";
        out += c.str() + "*" + v.name();
    }
    if (!out.empty())
        out += " + ";
    out += constant_.str();
    return out;
}

} // namespace sdnv
