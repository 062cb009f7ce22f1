/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sdnv/rational.hpp"

namespace sdnv {

/// Names a real-valued variable of a compiled network. Hidden layers are
/// numbered from 1; layer 0 is the input.
struct VarId {
    enum class Kind : std::uint8_t { Input, PreHidden, Hidden, Output };

    Kind kind = Kind::Input;
    std::uint32_t layer = 0; // unused for Input/Output
    std::uint32_t index = 0;

    static VarId input(std::uint32_t i) { return {Kind::Input, 0, i}; }
    static VarId pre_hidden(std::uint32_t layer, std::uint32_t j) { return {Kind::PreHidden, layer, j}; }
    static VarId hidden(std::uint32_t layer, std::uint32_t j) { return {Kind::Hidden, layer, j}; }
    static VarId output(std::uint32_t i) { return {Kind::Output, 0, i}; }

    /// x_{i}, _h_{layer}_{j}, h_{layer}_{j}, y_{i}
    std::string name() const;

    /// Inverse of name(); nullopt for anything else.
    static std::optional<VarId> parse(std::string_view text);

    friend bool operator==(const VarId&, const VarId&) = default;
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

using Assignment = std::map<VarId, Rational>;

/// Affine form sum(coeff * var) + constant. Zero coefficients are never stored.
class LinearExpr {
public:
    using Terms = std::map<VarId, Rational>;

    LinearExpr() = default;
    explicit LinearExpr(Rational constant) : constant_(std::move(constant)) {}
    static LinearExpr var(VarId v, Rational coeff = Rational(1));

    const Terms& terms() const { return terms_; }
    const Rational& constant() const { return constant_; }
    bool is_constant() const { return terms_.empty(); }

    Rational coeff(const VarId& v) const;

    /// Adds coeff * v, dropping the entry if it cancels.
    LinearExpr& add_term(const VarId& v, const Rational& coeff);
    LinearExpr& add_constant(const Rational& c)
    {
        constant_ += c;
        return *this;
    }

    LinearExpr& operator+=(const LinearExpr& o);
    LinearExpr& operator-=(const LinearExpr& o);
    LinearExpr& operator*=(const Rational& c);
    LinearExpr operator-() const;

    friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
    friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
    friend LinearExpr operator*(LinearExpr a, const Rational& c) { return a *= c; }
    friend LinearExpr operator*(const Rational& c, LinearExpr a) { return a *= c; }

    /// Replaces v by `by` (no-op when v does not occur).
    LinearExpr substitute(const VarId& v, const LinearExpr& by) const;

    /// Exact evaluation; throws UnboundVariableError naming the missing variable.
    Rational eval(const Assignment& assignment) const;

    /// "c*name + c*name + k", terms in canonical variable order.
    std::string str() const;

    friend bool operator==(const LinearExpr&, const LinearExpr&) = default;

private:
    Terms terms_;
    Rational constant_;
};

inline Rational eval_expr(const LinearExpr& expr, const Assignment& assignment)
{
    return expr.eval(assignment);
}

} // namespace sdnv
