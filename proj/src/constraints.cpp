/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/constraints.hpp"

#include "sdnv/errors.hpp"
#include "sdnv/patterns.hpp"

namespace sdnv {

const char* relation_symbol(Relation rel)
{
    switch (rel) {
    case Relation::Eq: return "=";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
    case Relation::Le: return "<=";
    case Relation::Lt: return "<";
    }
    return "?";
}

bool is_strict(Relation rel) { return rel == Relation::Gt || rel == Relation::Lt; }

bool Atom::holds(const Assignment& assignment) const
{
    int s = lhs.eval(assignment).sign();
    switch (rel) {
    case Relation::Eq: return s == 0;
    case Relation::Ge: return s >= 0;
    case Relation::Gt: return s > 0;
    case Relation::Le: return s <= 0;
    case Relation::Lt: return s < 0;
    }
    return false;
}

Atom Atom::negated() const
{
    switch (rel) {
    case Relation::Ge: return {lhs, Relation::Lt};
    case Relation::Gt: return {lhs, Relation::Le};
    case Relation::Le: return {lhs, Relation::Gt};
    case Relation::Lt: return {lhs, Relation::Ge};
    case Relation::Eq: break;
    }
    throw InvariantError("equality atom has no single-atom negation: " + str());
}

std::string Atom::str() const { return lhs.str() + " " + relation_symbol(rel) + " 0"; }

void ConstraintSystem::note_vars(const Atom& atom)
{
    for (const auto& [v, c] : atom.lhs.terms())
        variables_.insert(v);
}

void ConstraintSystem::add(Atom atom)
{
    note_vars(atom);
    conjuncts_.push_back(std::move(atom));
}

void ConstraintSystem::add_clause(Clause clause)
{
    for (const auto& a : clause)
        note_vars(a);
    clauses_.push_back(std::move(clause));
}

void ConstraintSystem::append(const ConstraintSystem& other)
{
    conjuncts_.insert(conjuncts_.end(), other.conjuncts_.begin(), other.conjuncts_.end());
    clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
    variables_.insert(other.variables_.begin(), other.variables_.end());
}

std::string ConstraintSystem::dump() const
{
    std::string out = "vars:";
    for (const auto& v : variables_)
        out += " " + v.name();
    out += "\n";
    for (const auto& a : conjuncts_)
        out += a.str() + "\n";
    for (const auto& c : clauses_) {
        out += "or:";
        for (std::size_t i = 0; i < c.size(); ++i)
            out += (i == 0 ? " " : " | ") + c[i].str();
        out += "\n";
    }
    return out;
}

ConstraintSystem conjoin(std::initializer_list<const ConstraintSystem*> systems)
{
    ConstraintSystem out;
    for (const auto* s : systems)
        out.append(*s);
    return out;
}

ConstraintSystem conjoin(const std::vector<ConstraintSystem>& systems)
{
    ConstraintSystem out;
    for (const auto& s : systems)
        out.append(s);
    return out;
}

namespace {

std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

void require_valid(const SdnModel& model, const ActivationPattern& pattern)
{
    if (!is_valid(pattern, model))
        throw InvariantError("invalid activation pattern " + pattern.str());
}

// Variable holding h_{layer} component j; layer 0 is the input.
VarId activation_var(std::size_t layer, std::size_t j)
{
    return layer == 0 ? VarId::input(u32(j)) : VarId::hidden(u32(layer), u32(j));
}

} // namespace

ConstraintSystem input_constraints(const SdnModel& model)
{
    ConstraintSystem s;
    for (std::size_t i = 0; i < model.input_dim(); ++i) {
        VarId x = VarId::input(u32(i));
        s.add({LinearExpr::var(x), Relation::Ge});
        s.add({LinearExpr::var(x).add_constant(Rational(-1)), Relation::Le});
    }
    return s;
}

ConstraintSystem ap_constraints(const SdnModel& model, const ActivationPattern& pattern)
{
    require_valid(model, pattern);
    ConstraintSystem s;
    const std::size_t k = model.group_size();
    for (std::size_t i = 1; i <= model.hidden_layer_count(); ++i) {
        const auto& door = pattern.layers[i - 1];
        const std::size_t groups = model.group_count(i);
        if (door.act != groups) {
            for (std::size_t j = door.act * k; j < (door.act + 1) * k; ++j)
                s.add({LinearExpr::var(VarId::pre_hidden(u32(i), u32(j))), Relation::Gt});
        }
        if (door.ina != groups) {
            for (std::size_t j = door.ina * k; j < (door.ina + 1) * k; ++j)
                s.add({LinearExpr::var(VarId::pre_hidden(u32(i), u32(j))), Relation::Lt});
        }
    }
    return s;
}

ConstraintSystem forward_constraints(const SdnModel& model, const ActivationPattern& pattern)
{
    require_valid(model, pattern);
    ConstraintSystem s;
    const std::size_t k = model.group_size();

    auto affine_def = [&](VarId target, std::size_t layer_index, std::size_t row) {
        const AffineLayer& layer = model.layer(layer_index);
        LinearExpr e = LinearExpr::var(target);
        for (std::size_t c = 0; c < layer.cols; ++c)
            e.add_term(activation_var(layer_index - 1, c), -layer.weight(row, c));
        e.add_constant(-layer.bias[row]);
        s.add({std::move(e), Relation::Eq});
    };

    for (std::size_t i = 1; i <= model.hidden_layer_count(); ++i) {
        for (std::size_t j = 0; j < model.width(i); ++j)
            affine_def(VarId::pre_hidden(u32(i), u32(j)), i, j);
        const auto& door = pattern.layers[i - 1];
        for (std::size_t j = 0; j < model.width(i); ++j) {
            const std::size_t g = j / k;
            VarId h = VarId::hidden(u32(i), u32(j));
            VarId pre = VarId::pre_hidden(u32(i), u32(j));
            LinearExpr e = LinearExpr::var(h);
            if (g == door.act)
                e.add_term(pre, -model.alpha());
            else if (g != door.ina)
                e.add_term(pre, Rational(-1));
            s.add({std::move(e), Relation::Eq});
        }
    }
    const std::size_t out_layer = model.layer_count();
    for (std::size_t j = 0; j < model.class_count(); ++j)
        affine_def(VarId::output(u32(j)), out_layer, j);
    return s;
}

ConstraintSystem boundary_constraints(const SdnModel& model, std::size_t target, std::size_t boundary,
                                      const Rational& epsilon)
{
    const std::size_t classes = model.class_count();
    if (target == boundary)
        throw InvariantError("target and boundary class must differ (both " + std::to_string(target) + ")");
    if (target >= classes || boundary >= classes)
        throw ShapeError("class pair (" + std::to_string(target) + ", " + std::to_string(boundary)
                         + ") out of range for " + std::to_string(classes) + " classes");
    if (epsilon.sign() < 0)
        throw InvariantError("boundary epsilon must be non-negative");
    ConstraintSystem s;
    VarId yi = VarId::output(u32(target));
    LinearExpr eq = LinearExpr::var(yi);
    eq.add_term(VarId::output(u32(boundary)), Rational(-1));
    eq.add_constant(epsilon);
    s.add({std::move(eq), Relation::Eq});
    for (std::size_t c = 0; c < classes; ++c) {
        if (c == target || c == boundary)
            continue;
        LinearExpr ge = LinearExpr::var(yi);
        ge.add_term(VarId::output(u32(c)), Rational(-1));
        s.add({std::move(ge), Relation::Ge});
    }
    return s;
}

ConstraintSystem meaningful_constraints(const std::vector<Rational>& prototype, const Rational& radius, bool strict)
{
    if (radius.sign() <= 0)
        throw InvariantError("meaningful radius must be positive, got " + radius.str());
    const Relation rel = strict ? Relation::Lt : Relation::Le;
    ConstraintSystem s;
    for (std::size_t t = 0; t < prototype.size(); ++t) {
        VarId x = VarId::input(u32(t));
        // x_t - P_t - r < 0
        s.add({LinearExpr::var(x).add_constant(-prototype[t] - radius), rel});
        // P_t - x_t - r < 0
        s.add({LinearExpr::var(x, Rational(-1)).add_constant(prototype[t] - radius), rel});
    }
    return s;
}

Clause negate_region(const ConstraintSystem& ap_system)
{
    if (!ap_system.clauses().empty())
        throw InvariantError("cannot negate a system that already contains clauses");
    Clause c;
    c.reserve(ap_system.conjuncts().size());
    for (const auto& a : ap_system.conjuncts())
        c.push_back(a.negated());
    return c;
}

} // namespace sdnv
