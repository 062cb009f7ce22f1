/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include <algorithm>
#include <map>
#include <optional>

#include "sdnv/errors.hpp"
#include "sdnv/simplex.hpp"
#include "sdnv/solver.hpp"

namespace sdnv {

namespace {

using Clock = std::chrono::steady_clock;

struct TimeoutReached {};

/// Variables defined by conjunct equalities, in elimination order.
struct Elimination {
    std::vector<std::pair<VarId, LinearExpr>> defs;

    LinearExpr apply(LinearExpr e) const
    {
        for (const auto& [v, by] : defs)
            e = e.substitute(v, by);
        return e;
    }
};

/// Bound-form literal: column `col` rel `value`.
struct BoundLit {
    std::size_t col = 0;
    Relation rel = Relation::Eq;
    Rational value;
};

enum class Truth { True, False, Open };

class CaseSplitter {
public:
    CaseSplitter(const ConstraintSystem& system, const SolverConfig& config, Clock::time_point deadline)
        : config_(config)
        , deadline_(deadline)
    {
        build(system);
    }

    SolveStatus run()
    {
        if (trivially_unsat_)
            return SolveStatus::Unsat;
        return search() ? SolveStatus::Sat : SolveStatus::Unsat;
    }

    Assignment model(const ConstraintSystem& system) const;
    SolverStats stats() const
    {
        SolverStats s = stats_;
        s.pivots = simplex_ ? simplex_->pivots() : 0;
        s.eliminated = elim_.defs.size();
        return s;
    }

private:
    void build(const ConstraintSystem& system);
    /// Maps an atom (already substituted) to bound form, or a constant truth value.
    std::pair<Truth, BoundLit> to_bound(const Atom& atom);
    bool assert_lit(const BoundLit& lit);
    bool satisfied(const BoundLit& lit) const;
    static std::optional<BoundLit> negate(const BoundLit& lit);
    bool search();
    bool feasible();

    const SolverConfig& config_;
    Clock::time_point deadline_;
    Elimination elim_;
    std::map<VarId, std::size_t> column_of_;
    std::vector<VarId> structural_;
    std::map<Simplex::Terms, std::size_t> slack_of_;
    std::optional<Simplex> simplex_;
    std::vector<BoundLit> permanent_;
    std::vector<std::vector<BoundLit>> clauses_;
    bool trivially_unsat_ = false;
    SolverStats stats_;
};

void CaseSplitter::build(const ConstraintSystem& system)
{
    std::vector<Atom> rest;
    for (const auto& atom : system.conjuncts()) {
        if (atom.rel != Relation::Eq || !config_.presolve) {
            rest.push_back(atom);
            continue;
        }
        LinearExpr e = elim_.apply(atom.lhs);
        if (e.is_constant()) {
            if (!e.constant().is_zero())
                trivially_unsat_ = true;
            continue;
        }
        // Solve for the greatest variable in canonical order.
        auto it = std::prev(e.terms().end());
        VarId v = it->first;
        Rational c = it->second;
        LinearExpr def = e;
        def.add_term(v, -c);
        def *= -(Rational(1) / c);
        elim_.defs.emplace_back(v, std::move(def));
    }

    std::map<VarId, bool> eliminated;
    for (const auto& [v, d] : elim_.defs)
        eliminated[v] = true;
    for (const auto& v : system.variables()) {
        if (!eliminated.contains(v)) {
            column_of_.emplace(v, structural_.size());
            structural_.push_back(v);
        }
    }
    simplex_.emplace(structural_.size());

    for (const auto& atom : rest) {
        Atom a{elim_.apply(atom.lhs), atom.rel};
        auto [truth, lit] = to_bound(a);
        if (truth == Truth::False)
            trivially_unsat_ = true;
        else if (truth == Truth::Open)
            permanent_.push_back(lit);
    }
    for (const auto& clause : system.clauses()) {
        std::vector<BoundLit> lits;
        bool satisfied_const = false;
        for (const auto& atom : clause) {
            Atom a{elim_.apply(atom.lhs), atom.rel};
            auto [truth, lit] = to_bound(a);
            if (truth == Truth::True)
                satisfied_const = true;
            else if (truth == Truth::Open)
                lits.push_back(lit);
        }
        if (satisfied_const)
            continue;
        if (lits.empty())
            trivially_unsat_ = true;
        clauses_.push_back(std::move(lits));
    }
    for (const auto& lit : permanent_) {
        if (!assert_lit(lit)) {
            trivially_unsat_ = true;
            break;
        }
    }
}

std::pair<Truth, BoundLit> CaseSplitter::to_bound(const Atom& atom)
{
    const LinearExpr& e = atom.lhs;
    if (e.is_constant()) {
        bool ok = Atom{e, atom.rel}.holds({});
        return {ok ? Truth::True : Truth::False, {}};
    }
    Simplex::Terms terms;
    for (const auto& [v, c] : e.terms())
        terms.emplace_back(column_of_.at(v), c);
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    // Normalize to a leading coefficient of 1 so opposite-signed forms share a slack.
    const Rational lead = terms.front().second;
    for (auto& t : terms)
        t.second /= lead;
    Rational bound = -(e.constant() / lead);
    Relation rel = atom.rel;
    if (lead.sign() < 0) {
        switch (rel) {
        case Relation::Ge: rel = Relation::Le; break;
        case Relation::Gt: rel = Relation::Lt; break;
        case Relation::Le: rel = Relation::Ge; break;
        case Relation::Lt: rel = Relation::Gt; break;
        case Relation::Eq: break;
        }
    }

    std::size_t col;
    if (terms.size() == 1) {
        col = terms.front().first;
    } else if (auto it = slack_of_.find(terms); it != slack_of_.end()) {
        col = it->second;
    } else {
        col = simplex_->row(terms);
        slack_of_.emplace(std::move(terms), col);
    }
    return {Truth::Open, {col, rel, std::move(bound)}};
}

bool CaseSplitter::assert_lit(const BoundLit& lit)
{
    Simplex& s = *simplex_;
    switch (lit.rel) {
    case Relation::Ge: return s.assert_lower(lit.col, DeltaRational(lit.value));
    case Relation::Gt: return s.assert_lower(lit.col, DeltaRational(lit.value, Rational(1)));
    case Relation::Le: return s.assert_upper(lit.col, DeltaRational(lit.value));
    case Relation::Lt: return s.assert_upper(lit.col, DeltaRational(lit.value, Rational(-1)));
    case Relation::Eq:
        return s.assert_lower(lit.col, DeltaRational(lit.value)) && s.assert_upper(lit.col, DeltaRational(lit.value));
    }
    return false;
}

bool CaseSplitter::satisfied(const BoundLit& lit) const
{
    const DeltaRational& v = simplex_->value(lit.col);
    switch (lit.rel) {
    case Relation::Ge: return v >= DeltaRational(lit.value);
    case Relation::Gt: return v >= DeltaRational(lit.value, Rational(1));
    case Relation::Le: return v <= DeltaRational(lit.value);
    case Relation::Lt: return v <= DeltaRational(lit.value, Rational(-1));
    case Relation::Eq: return v == DeltaRational(lit.value);
    }
    return false;
}

std::optional<BoundLit> CaseSplitter::negate(const BoundLit& lit)
{
    BoundLit n = lit;
    switch (lit.rel) {
    case Relation::Ge: n.rel = Relation::Lt; break;
    case Relation::Gt: n.rel = Relation::Le; break;
    case Relation::Le: n.rel = Relation::Gt; break;
    case Relation::Lt: n.rel = Relation::Ge; break;
    case Relation::Eq: return std::nullopt;
    }
    return n;
}

bool CaseSplitter::feasible()
{
    switch (simplex_->check(deadline_)) {
    case Simplex::Outcome::Feasible: return true;
    case Simplex::Outcome::Infeasible: ++stats_.conflicts; return false;
    case Simplex::Outcome::Timeout: throw TimeoutReached{};
    }
    return false;
}

// Depth-first case split. The first clause (insertion order) that the current
// model violates is branched on, literals left to right; once a literal's
// subtree fails, its negation is asserted for the remaining siblings.
bool CaseSplitter::search()
{
    if (!feasible())
        return false;
    const std::vector<BoundLit>* open = nullptr;
    for (const auto& clause : clauses_) {
        if (std::none_of(clause.begin(), clause.end(), [&](const BoundLit& l) { return satisfied(l); })) {
            open = &clause;
            break;
        }
    }
    if (!open)
        return true;

    for (const auto& lit : *open) {
        const std::size_t mark = simplex_->checkpoint();
        ++stats_.branches;
        if (assert_lit(lit) && search())
            return true;
        simplex_->restore(mark);
        if (auto neg = negate(lit)) {
            if (!assert_lit(*neg))
                return false;
        }
    }
    return false;
}

Assignment CaseSplitter::model(const ConstraintSystem& system) const
{
    // Pick delta small enough for every asserted bound and for one satisfied
    // literal of each clause.
    Rational delta = simplex_->concrete_delta();
    for (const auto& clause : clauses_) {
        for (const auto& lit : clause) {
            if (!satisfied(lit))
                continue;
            const DeltaRational& v = simplex_->value(lit.col);
            switch (lit.rel) {
            case Relation::Ge: Simplex::tighten_delta(delta, DeltaRational(lit.value), v); break;
            case Relation::Gt: Simplex::tighten_delta(delta, DeltaRational(lit.value, Rational(1)), v); break;
            case Relation::Le: Simplex::tighten_delta(delta, v, DeltaRational(lit.value)); break;
            case Relation::Lt: Simplex::tighten_delta(delta, v, DeltaRational(lit.value, Rational(-1))); break;
            case Relation::Eq: break;
            }
            break;
        }
    }

    Assignment a;
    for (std::size_t c = 0; c < structural_.size(); ++c)
        a.emplace(structural_[c], simplex_->value(c).at(delta));
    for (auto it = elim_.defs.rbegin(); it != elim_.defs.rend(); ++it)
        a.emplace(it->first, it->second.eval(a));
    for (const auto& v : system.variables())
        a.try_emplace(v, Rational());
    return a;
}

} // namespace

SolveResult solve_builtin(const ConstraintSystem& system, const SolverConfig& config)
{
    const auto start = Clock::now();
    SolveResult result;
    result.backend = backend_name(Backend::Builtin);
    CaseSplitter splitter(system, config, start + config.timeout);
    try {
        result.status = splitter.run();
    } catch (const TimeoutReached&) {
        result.status = SolveStatus::Unknown;
        result.diagnostic = "timeout after " + std::to_string(config.timeout.count()) + " ms";
    }
    if (result.status == SolveStatus::Sat) {
        result.assignment = splitter.model(system);
        if (!check_assignment(system, result.assignment))
            throw InvariantError("builtin solver produced a witness that fails exact checking");
    }
    result.stats = splitter.stats();
    result.elapsed = Clock::now() - start;
    return result;
}

} // namespace sdnv
