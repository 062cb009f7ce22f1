/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/sdn_model.hpp"

#include <string>

#include "sdnv/errors.hpp"

namespace sdnv {

SdnModel::SdnModel(std::vector<std::size_t> sizes, std::vector<AffineLayer> layers, std::size_t group_size,
                   Rational alpha)
    : sizes_(std::move(sizes))
    , layers_(std::move(layers))
    , group_size_(group_size)
    , alpha_(std::move(alpha))
{
    if (sizes_.size() < 2)
        throw ShapeError("model needs at least an input and an output layer");
    if (layers_.size() != sizes_.size() - 1)
        throw ShapeError("expected " + std::to_string(sizes_.size() - 1) + " affine layers, got "
                         + std::to_string(layers_.size()));
    if (group_size_ == 0)
        throw InvariantError("group size k must be positive");
    if (alpha_ <= Rational(1))
        throw InvariantError("alpha must exceed 1, got " + alpha_.str());
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] == 0)
            throw ShapeError("layer " + std::to_string(i) + " has zero width");
    }
    for (std::size_t i = 1; i + 1 < sizes_.size(); ++i) {
        if (sizes_[i] % group_size_ != 0)
            throw InvariantError("group size k=" + std::to_string(group_size_) + " does not divide n_"
                                 + std::to_string(i) + "=" + std::to_string(sizes_[i]));
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& l = layers_[i];
        const std::string where = "layer " + std::to_string(i + 1);
        if (l.rows != sizes_[i + 1] || l.cols != sizes_[i])
            throw ShapeError(where + ": weight matrix is " + std::to_string(l.rows) + "x" + std::to_string(l.cols)
                             + ", expected " + std::to_string(sizes_[i + 1]) + "x" + std::to_string(sizes_[i]));
        if (l.weights.size() != l.rows * l.cols)
            throw ShapeError(where + ": weight storage size mismatch");
        if (l.bias.size() != l.rows)
            throw ShapeError(where + ": bias has " + std::to_string(l.bias.size()) + " entries, expected "
                             + std::to_string(l.rows));
    }
}

namespace {

std::vector<Rational> affine(const AffineLayer& layer, std::span<const Rational> in)
{
    std::vector<Rational> out(layer.rows);
    for (std::size_t r = 0; r < layer.rows; ++r) {
        Rational acc = layer.bias[r];
        for (std::size_t c = 0; c < layer.cols; ++c) {
            const Rational& w = layer.weight(r, c);
            if (!w.is_zero() && !in[c].is_zero())
                acc += w * in[c];
        }
        out[r] = std::move(acc);
    }
    return out;
}

struct GroupScan {
    std::uint32_t door;
    std::uint32_t inspected; // groups [0, inspected) were looked at
};

// First group whose members all have the wanted sign.
GroupScan find_door(std::span<const Rational> pre, std::size_t k, std::size_t groups, int wanted)
{
    for (std::size_t g = 0; g < groups; ++g) {
        bool all = true;
        for (std::size_t j = g * k; j < (g + 1) * k; ++j) {
            if (pre[j].sign() != wanted) {
                all = false;
                break;
            }
        }
        if (all)
            return {static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(g + 1)};
    }
    return {static_cast<std::uint32_t>(groups), static_cast<std::uint32_t>(groups)};
}

} // namespace

ForwardTrace forward(const SdnModel& model, std::span<const Rational> x)
{
    if (x.size() != model.input_dim())
        throw ShapeError("input has " + std::to_string(x.size()) + " components, model expects "
                         + std::to_string(model.input_dim()));
    ForwardTrace t;
    t.input.assign(x.begin(), x.end());
    const std::size_t k = model.group_size();

    std::vector<Rational> h(x.begin(), x.end());
    for (std::size_t i = 1; i <= model.hidden_layer_count(); ++i) {
        std::vector<Rational> pre = affine(model.layer(i), h);
        const std::size_t groups = model.group_count(i);
        GroupScan act = find_door(pre, k, groups, +1);
        GroupScan ina = find_door(pre, k, groups, -1);

        std::size_t inspected = std::max(act.inspected, ina.inspected);
        for (std::size_t j = 0; j < inspected * k && !t.degenerate; ++j)
            t.degenerate = pre[j].is_zero();

        std::vector<Rational> out = pre;
        if (act.door < groups) {
            for (std::size_t j = act.door * k; j < (act.door + 1) * k; ++j)
                out[j] = pre[j] * model.alpha();
        }
        if (ina.door < groups) {
            for (std::size_t j = ina.door * k; j < (ina.door + 1) * k; ++j)
                out[j] = Rational();
        }
        t.pattern.layers.push_back({act.door, ina.door});
        t.pre_activations.push_back(std::move(pre));
        t.activations.push_back(out);
        h = std::move(out);
    }
    t.output = affine(model.layer(model.layer_count()), h);
    return t;
}

std::size_t argmax(std::span<const Rational> output)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (output[i] > output[best])
            best = i;
    }
    return best;
}

std::size_t predict(const SdnModel& model, std::span<const Rational> x) { return argmax(forward(model, x).output); }

Assignment trace_assignment(const ForwardTrace& trace)
{
    Assignment a;
    for (std::size_t i = 0; i < trace.input.size(); ++i)
        a.emplace(VarId::input(static_cast<std::uint32_t>(i)), trace.input[i]);
    for (std::size_t l = 0; l < trace.pre_activations.size(); ++l) {
        auto layer = static_cast<std::uint32_t>(l + 1);
        for (std::size_t j = 0; j < trace.pre_activations[l].size(); ++j) {
            auto jj = static_cast<std::uint32_t>(j);
            a.emplace(VarId::pre_hidden(layer, jj), trace.pre_activations[l][j]);
            a.emplace(VarId::hidden(layer, jj), trace.activations[l][j]);
        }
    }
    for (std::size_t i = 0; i < trace.output.size(); ++i)
        a.emplace(VarId::output(static_cast<std::uint32_t>(i)), trace.output[i]);
    return a;
}

std::vector<ForwardTrace> forward_batch_serial(const SdnModel& model, std::span<const std::vector<Rational>> inputs)
{
    std::vector<ForwardTrace> out;
    out.reserve(inputs.size());
    for (const auto& x : inputs)
        out.push_back(forward(model, x));
    return out;
}

std::vector<ForwardTrace> forward_batch(const SdnModel& model, std::span<const std::vector<Rational>> inputs)
{
    for (const auto& x : inputs) {
        if (x.size() != model.input_dim())
            throw ShapeError("batch input has " + std::to_string(x.size()) + " components, model expects "
                             + std::to_string(model.input_dim()));
    }
    std::vector<ForwardTrace> out(inputs.size());
    const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = forward(model, inputs[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace sdnv
