/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdnv/activation_pattern.hpp"
#include "sdnv/linear_expr.hpp"
#include "sdnv/rational.hpp"

namespace sdnv {

/// Affine map of one layer; weights are row-major, rows() x cols().
struct AffineLayer {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> weights;
    std::vector<Rational> bias;

    const Rational& weight(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }
};

/// Sliding Door Network. sizes = (d, n_1, ..., n_{m-1}, K); layers[i-1] maps
/// layer i-1 to layer i. Sliding door activation applies to hidden layers
/// 1..m-1 only; the output layer is affine.
class SdnModel {
public:
    SdnModel(std::vector<std::size_t> sizes, std::vector<AffineLayer> layers, std::size_t group_size,
             Rational alpha);

    std::size_t layer_count() const { return layers_.size(); }
    std::size_t hidden_layer_count() const { return layers_.size() - 1; }
    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t class_count() const { return sizes_.back(); }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    std::size_t width(std::size_t layer) const { return sizes_[layer]; }
    /// Number of doors l_i = n_i / k of hidden layer i (1-based); also the sentinel value.
    std::size_t group_count(std::size_t hidden_layer) const { return sizes_[hidden_layer] / group_size_; }
    std::size_t group_size() const { return group_size_; }
    const Rational& alpha() const { return alpha_; }
    /// Affine map into layer i (1-based).
    const AffineLayer& layer(std::size_t i) const { return layers_[i - 1]; }
    const std::vector<AffineLayer>& layers() const { return layers_; }

private:
    std::vector<std::size_t> sizes_;
    std::vector<AffineLayer> layers_;
    std::size_t group_size_;
    Rational alpha_;
};

struct ForwardTrace {
    std::vector<Rational> input;
    std::vector<std::vector<Rational>> pre_activations; // per hidden layer
    std::vector<std::vector<Rational>> activations;     // per hidden layer
    std::vector<Rational> output;
    ActivationPattern pattern;
    /// Some group inspected during door selection contains an exact zero.
    bool degenerate = false;
};

ForwardTrace forward(const SdnModel& model, std::span<const Rational> x);

/// Argmax of the output, lowest index on ties.
std::size_t argmax(std::span<const Rational> output);
std::size_t predict(const SdnModel& model, std::span<const Rational> x);

inline ActivationPattern extract_pattern(const ForwardTrace& trace) { return trace.pattern; }

/// Full variable assignment {x, _h, h, y} realized by a trace.
Assignment trace_assignment(const ForwardTrace& trace);

/// Forward pass over many inputs. The OpenMP kernel and its serial reference
/// return identical traces.
std::vector<ForwardTrace> forward_batch(const SdnModel& model, std::span<const std::vector<Rational>> inputs);
std::vector<ForwardTrace> forward_batch_serial(const SdnModel& model,
                                               std::span<const std::vector<Rational>> inputs);

} // namespace sdnv
