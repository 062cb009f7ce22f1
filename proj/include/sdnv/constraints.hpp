/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "sdnv/activation_pattern.hpp"
#include "sdnv/linear_expr.hpp"
#include "sdnv/sdn_model.hpp"

namespace sdnv {

enum class Relation : std::uint8_t { Eq, Ge, Gt, Le, Lt };

const char* relation_symbol(Relation rel);
bool is_strict(Relation rel);

/// `lhs rel 0`.
struct Atom {
    LinearExpr lhs;
    Relation rel = Relation::Eq;

    bool holds(const Assignment& assignment) const;
    /// Exact logical negation; equalities have no single-atom negation and throw.
    Atom negated() const;
    std::string str() const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// "At least one literal holds." An empty clause is unsatisfiable.
using Clause = std::vector<Atom>;

/// Conjunction of atoms and of disjunctive clauses over linear real arithmetic.
class ConstraintSystem {
public:
    void add(Atom atom);
    void add_clause(Clause clause);
    void append(const ConstraintSystem& other);

    const std::vector<Atom>& conjuncts() const { return conjuncts_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const std::set<VarId>& variables() const { return variables_; }

    /// Deterministic dump: variables, then one atom per line, then clauses.
    std::string dump() const;

private:
    void note_vars(const Atom& atom);

    std::vector<Atom> conjuncts_;
    std::vector<Clause> clauses_;
    std::set<VarId> variables_;
};

ConstraintSystem conjoin(std::initializer_list<const ConstraintSystem*> systems);
ConstraintSystem conjoin(const std::vector<ConstraintSystem>& systems);

/// 0 <= x_i <= 1 for every input.
ConstraintSystem input_constraints(const SdnModel& model);

/// Strict sign conditions of the pattern's active and inactive doors.
ConstraintSystem ap_constraints(const SdnModel& model, const ActivationPattern& pattern);

/// Pre-activation definitions, door equalities and output equalities of the
/// pattern's affine piece.
ConstraintSystem forward_constraints(const SdnModel& model, const ActivationPattern& pattern);

/// y_target = y_boundary - epsilon, and y_target >= y_k for every other class.
ConstraintSystem boundary_constraints(const SdnModel& model, std::size_t target, std::size_t boundary,
                                      const Rational& epsilon = Rational());

/// l_inf box of radius r around the prototype; strict by default.
ConstraintSystem meaningful_constraints(const std::vector<Rational>& prototype, const Rational& radius,
                                        bool strict = true);

/// Negation of a conjunction of atoms as a single clause (De Morgan).
Clause negate_region(const ConstraintSystem& ap_system);

} // namespace sdnv
