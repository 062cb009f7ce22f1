/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdnv {

/// Door indices of one hidden layer. A value equal to the layer's group
/// count is the "door absent" sentinel.
struct DoorPair {
    std::uint32_t act = 0;
    std::uint32_t ina = 0;

    friend bool operator==(const DoorPair&, const DoorPair&) = default;
    friend auto operator<=>(const DoorPair&, const DoorPair&) = default;
};

/// One (Act, Ina) pair per hidden layer, shallow layers first. The derived
/// ordering is lexicographic over the flattened (act, ina, act, ina, ...) sequence.
struct ActivationPattern {
    std::vector<DoorPair> layers;

    /// "A{act}I{ina}" per layer joined by '/', e.g. "A0I1/A2I2".
    std::string str() const;
    static ActivationPattern parse(std::string_view text);

    friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;
    friend auto operator<=>(const ActivationPattern&, const ActivationPattern&) = default;
};

} // namespace sdnv
