/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sdnv/rational.hpp"

namespace sdnv {

/// Bounded general simplex over delta-rationals (Dutertre/de Moura style).
///
/// Columns 0..structural-1 are problem variables; every call to row() adds a
/// slack column defined as a linear form over the structural columns. Bounds
/// are asserted incrementally and retracted by restoring a checkpoint; the
/// current assignment stays consistent across retraction, so no re-solve from
/// scratch is needed after backtracking. Pivoting follows Bland's rule, which
/// guarantees termination.
class Simplex {
public:
    using Terms = std::vector<std::pair<std::size_t, Rational>>;
    using Clock = std::chrono::steady_clock;

    enum class Outcome { Feasible, Infeasible, Timeout };

    explicit Simplex(std::size_t structural);

    std::size_t column_count() const { return value_.size(); }

    /// Slack column equal to sum(coeff * column); terms must be sorted by
    /// column and reference structural columns only.
    std::size_t row(const Terms& terms);

    /// False (and no state change) when the bound contradicts the opposite bound.
    bool assert_lower(std::size_t col, const DeltaRational& bound);
    bool assert_upper(std::size_t col, const DeltaRational& bound);

    std::size_t checkpoint() const { return trail_.size(); }
    void restore(std::size_t mark);

    Outcome check(std::optional<Clock::time_point> deadline = std::nullopt);

    const DeltaRational& value(std::size_t col) const { return value_[col]; }
    const std::optional<DeltaRational>& lower(std::size_t col) const { return lower_[col]; }
    const std::optional<DeltaRational>& upper(std::size_t col) const { return upper_[col]; }

    /// Largest delta <= `cap` such that every asserted bound holds over plain
    /// rationals once delta is substituted.
    Rational concrete_delta(Rational cap = Rational(1)) const;

    /// Shrinks `delta` so that lo <= hi stays true after substitution, given
    /// lo <= hi as delta-rationals.
    static void tighten_delta(Rational& delta, const DeltaRational& lo, const DeltaRational& hi);

    std::uint64_t pivots() const { return pivots_; }

private:
    struct Row {
        std::size_t basic;
        Terms terms; // over nonbasic columns, sorted
    };
    struct TrailEntry {
        std::size_t col;
        std::optional<DeltaRational> lower;
        std::optional<DeltaRational> upper;
    };

    static const Rational* find_coeff(const Terms& terms, std::size_t col);
    void update_nonbasic(std::size_t col, const DeltaRational& v);
    void pivot_and_update(std::size_t row_index, std::size_t entering, const DeltaRational& target);
    void pivot(std::size_t row_index, std::size_t entering);

    std::vector<Row> rows_;
    std::vector<std::ptrdiff_t> row_of_; // -1 for nonbasic columns
    std::vector<DeltaRational> value_;
    std::vector<std::optional<DeltaRational>> lower_;
    std::vector<std::optional<DeltaRational>> upper_;
    std::vector<TrailEntry> trail_;
    std::uint64_t pivots_ = 0;
};

} // namespace sdnv
