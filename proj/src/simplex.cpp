/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/simplex.hpp"

#include <algorithm>

#include "sdnv/errors.hpp"

namespace sdnv {

namespace {

// out = a + c * b over sorted sparse vectors.
Simplex::Terms axpy(const Simplex::Terms& a, const Rational& c, const Simplex::Terms& b)
{
    Simplex::Terms out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, c * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + c * b[j].second;
            if (!v.is_zero())
                out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

Simplex::Simplex(std::size_t structural)
    : row_of_(structural, -1)
    , value_(structural)
    , lower_(structural)
    , upper_(structural)
{
}

const Rational* Simplex::find_coeff(const Terms& terms, std::size_t col)
{
    auto it = std::lower_bound(terms.begin(), terms.end(), col,
                               [](const auto& t, std::size_t c) { return t.first < c; });
    return it != terms.end() && it->first == col ? &it->second : nullptr;
}

std::size_t Simplex::row(const Terms& terms)
{
    const std::size_t slack = value_.size();
    // Express the new row over the current nonbasic columns.
    Terms expanded;
    DeltaRational v;
    for (const auto& [col, c] : terms) {
        if (col >= row_of_.size() || col >= slack)
            throw InvariantError("simplex row references unknown column");
        if (row_of_[col] >= 0) {
            expanded = axpy(expanded, c, rows_[static_cast<std::size_t>(row_of_[col])].terms);
        } else {
            expanded = axpy(expanded, c, Terms{{col, Rational(1)}});
        }
        v += value_[col] * c;
    }
    row_of_.push_back(static_cast<std::ptrdiff_t>(rows_.size()));
    rows_.push_back({slack, std::move(expanded)});
    value_.push_back(std::move(v));
    lower_.emplace_back();
    upper_.emplace_back();
    return slack;
}

bool Simplex::assert_lower(std::size_t col, const DeltaRational& bound)
{
    if (lower_[col] && bound <= *lower_[col])
        return true;
    if (upper_[col] && bound > *upper_[col])
        return false;
    trail_.push_back({col, lower_[col], upper_[col]});
    lower_[col] = bound;
    if (row_of_[col] < 0 && value_[col] < bound)
        update_nonbasic(col, bound);
    return true;
}

bool Simplex::assert_upper(std::size_t col, const DeltaRational& bound)
{
    if (upper_[col] && bound >= *upper_[col])
        return true;
    if (lower_[col] && bound < *lower_[col])
        return false;
    trail_.push_back({col, lower_[col], upper_[col]});
    upper_[col] = bound;
    if (row_of_[col] < 0 && value_[col] > bound)
        update_nonbasic(col, bound);
    return true;
}

void Simplex::restore(std::size_t mark)
{
    while (trail_.size() > mark) {
        auto& e = trail_.back();
        lower_[e.col] = std::move(e.lower);
        upper_[e.col] = std::move(e.upper);
        trail_.pop_back();
    }
}

void Simplex::update_nonbasic(std::size_t col, const DeltaRational& v)
{
    DeltaRational diff = v - value_[col];
    for (auto& r : rows_) {
        if (const Rational* a = find_coeff(r.terms, col))
            value_[r.basic] += diff * *a;
    }
    value_[col] = v;
}

void Simplex::pivot_and_update(std::size_t row_index, std::size_t entering, const DeltaRational& target)
{
    Row& r = rows_[row_index];
    const Rational a = *find_coeff(r.terms, entering);
    DeltaRational theta = (target - value_[r.basic]) / a;
    value_[r.basic] = target;
    value_[entering] += theta;
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        if (s == row_index)
            continue;
        if (const Rational* c = find_coeff(rows_[s].terms, entering))
            value_[rows_[s].basic] += theta * *c;
    }
    pivot(row_index, entering);
}

void Simplex::pivot(std::size_t row_index, std::size_t entering)
{
    ++pivots_;
    Row& r = rows_[row_index];
    const std::size_t leaving = r.basic;
    const Rational a = *find_coeff(r.terms, entering);

    // entering = (1/a) leaving - sum_{t != entering} (a_t / a) x_t
    Terms solved;
    solved.reserve(r.terms.size());
    const Rational inv = Rational(1) / a;
    bool placed = false;
    for (const auto& [col, c] : r.terms) {
        if (!placed && leaving < col) {
            solved.emplace_back(leaving, inv);
            placed = true;
        }
        if (col == entering)
            continue;
        solved.emplace_back(col, -(c * inv));
    }
    if (!placed)
        solved.emplace_back(leaving, inv);
    std::sort(solved.begin(), solved.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    for (std::size_t s = 0; s < rows_.size(); ++s) {
        if (s == row_index)
            continue;
        Terms& t = rows_[s].terms;
        const Rational* c = find_coeff(t, entering);
        if (!c)
            continue;
        Rational coeff = *c;
        Terms without;
        without.reserve(t.size());
        for (auto& e : t) {
            if (e.first != entering)
                without.push_back(std::move(e));
        }
        t = axpy(without, coeff, solved);
    }
    r.basic = entering;
    r.terms = std::move(solved);
    row_of_[entering] = static_cast<std::ptrdiff_t>(row_index);
    row_of_[leaving] = -1;
}

Simplex::Outcome Simplex::check(std::optional<Clock::time_point> deadline)
{
    while (true) {
        if (deadline && Clock::now() > *deadline)
            return Outcome::Timeout;

        // Bland: smallest basic column violating a bound.
        std::ptrdiff_t violating_row = -1;
        std::size_t best_col = 0;
        bool below = false;
        for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
            const std::size_t b = rows_[ri].basic;
            const bool lo = lower_[b] && value_[b] < *lower_[b];
            const bool hi = upper_[b] && value_[b] > *upper_[b];
            if ((lo || hi) && (violating_row < 0 || b < best_col)) {
                violating_row = static_cast<std::ptrdiff_t>(ri);
                best_col = b;
                below = lo;
            }
        }
        if (violating_row < 0)
            return Outcome::Feasible;

        const Row& r = rows_[static_cast<std::size_t>(violating_row)];
        std::optional<std::size_t> entering;
        for (const auto& [col, a] : r.terms) {
            const bool can_increase = !upper_[col] || value_[col] < *upper_[col];
            const bool can_decrease = !lower_[col] || value_[col] > *lower_[col];
            const bool ok = below ? (a.sign() > 0 ? can_increase : can_decrease)
                                  : (a.sign() > 0 ? can_decrease : can_increase);
            if (ok) {
                entering = col; // terms are sorted, so this is the smallest
                break;
            }
        }
        if (!entering)
            return Outcome::Infeasible;
        pivot_and_update(static_cast<std::size_t>(violating_row), *entering,
                         below ? *lower_[best_col] : *upper_[best_col]);
    }
}

void Simplex::tighten_delta(Rational& delta, const DeltaRational& lo, const DeltaRational& hi)
{
    if (lo.standard < hi.standard && lo.infinitesimal > hi.infinitesimal) {
        Rational limit = (hi.standard - lo.standard) / (lo.infinitesimal - hi.infinitesimal);
        if (limit < delta)
            delta = limit;
    }
}

Rational Simplex::concrete_delta(Rational cap) const
{
    Rational delta = std::move(cap);
    for (std::size_t c = 0; c < value_.size(); ++c) {
        if (lower_[c])
            tighten_delta(delta, *lower_[c], value_[c]);
        if (upper_[c])
            tighten_delta(delta, value_[c], *upper_[c]);
    }
    return delta;
}

} // namespace sdnv
