/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "sdnv/activation_pattern.hpp"
#include "sdnv/sdn_model.hpp"

namespace sdnv {

/// Groups per hidden layer (l_1, ..., l_{m-1}).
std::vector<std::size_t> group_counts(const SdnModel& model);

/// A layer's pair is valid iff act != ina, or both are the sentinel.
bool is_valid(const DoorPair& pair, std::size_t groups);
/// Throws ShapeError if the pattern does not have one pair per hidden layer or
/// an index exceeds the sentinel.
bool is_valid(const ActivationPattern& pattern, const SdnModel& model);

/// Valid (act, ina) pairs of a layer with `groups` doors, in canonical order.
std::vector<DoorPair> layer_pairs(std::size_t groups);

/// Streams every valid pattern exactly once in canonical (lexicographic)
/// order. The all-sentinel pattern is always the last one. Memory is O(layers).
class PatternEnumerator {
public:
    explicit PatternEnumerator(std::vector<std::size_t> groups);
    explicit PatternEnumerator(const SdnModel& model) : PatternEnumerator(group_counts(model)) {}

    std::optional<ActivationPattern> next();

    /// Total number of patterns this enumerator yields.
    mpz_class size() const;

    /// Pattern at position `index` of the canonical order; supports
    /// partitioning the stream into contiguous ranges.
    ActivationPattern at(mpz_class index) const;

private:
    std::vector<std::vector<DoorPair>> pairs_;
    std::vector<std::size_t> digits_;
    bool done_ = false;
};

std::vector<ActivationPattern> enumerate_patterns(const SdnModel& model);

/// prod (l_i^2 + l_i + 1): the exact number of valid patterns.
mpz_class count_patterns(const SdnModel& model);
mpz_class count_patterns(const std::vector<std::size_t>& groups);

/// prod (l_i + 1)^2: the per-layer (n_i/k + 1)^2 upper bound.
mpz_class pattern_bound(const std::vector<std::size_t>& groups);

} // namespace sdnv
