/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/patterns.hpp"

#include <string>

#include "sdnv/errors.hpp"

namespace sdnv {

std::vector<std::size_t> group_counts(const SdnModel& model)
{
    std::vector<std::size_t> g;
    for (std::size_t i = 1; i <= model.hidden_layer_count(); ++i)
        g.push_back(model.group_count(i));
    return g;
}

bool is_valid(const DoorPair& pair, std::size_t groups)
{
    return pair.act != pair.ina || pair.act == groups;
}

bool is_valid(const ActivationPattern& pattern, const SdnModel& model)
{
    if (pattern.layers.size() != model.hidden_layer_count())
        throw ShapeError("pattern has " + std::to_string(pattern.layers.size()) + " layers, model has "
                         + std::to_string(model.hidden_layer_count()) + " hidden layers");
    for (std::size_t i = 0; i < pattern.layers.size(); ++i) {
        const std::size_t groups = model.group_count(i + 1);
        const auto& p = pattern.layers[i];
        if (p.act > groups || p.ina > groups)
            throw ShapeError("pattern layer " + std::to_string(i + 1) + " index exceeds sentinel "
                             + std::to_string(groups));
        if (!is_valid(p, groups))
            return false;
    }
    return true;
}

std::vector<DoorPair> layer_pairs(std::size_t groups)
{
    std::vector<DoorPair> out;
    out.reserve(groups * groups + groups + 1);
    for (std::size_t a = 0; a <= groups; ++a) {
        for (std::size_t b = 0; b <= groups; ++b) {
            DoorPair p{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
            if (is_valid(p, groups))
                out.push_back(p);
        }
    }
    return out;
}

PatternEnumerator::PatternEnumerator(std::vector<std::size_t> groups)
    : digits_(groups.size(), 0)
{
    for (std::size_t g : groups)
        pairs_.push_back(layer_pairs(g));
}

std::optional<ActivationPattern> PatternEnumerator::next()
{
    if (done_)
        return std::nullopt;
    ActivationPattern p;
    p.layers.reserve(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i)
        p.layers.push_back(pairs_[i][digits_[i]]);

    // Odometer with the deepest layer varying fastest.
    std::size_t i = pairs_.size();
    while (i > 0) {
        --i;
        if (++digits_[i] < pairs_[i].size())
            return p;
        digits_[i] = 0;
    }
    done_ = true;
    return p;
}

mpz_class PatternEnumerator::size() const
{
    mpz_class n = 1;
    for (const auto& v : pairs_)
        n *= static_cast<unsigned long>(v.size());
    return n;
}

ActivationPattern PatternEnumerator::at(mpz_class index) const
{
    if (index < 0 || index >= size())
        throw ShapeError("pattern index " + index.get_str() + " out of range");
    ActivationPattern p;
    p.layers.resize(pairs_.size());
    for (std::size_t i = pairs_.size(); i > 0; --i) {
        const auto radix = static_cast<unsigned long>(pairs_[i - 1].size());
        mpz_class digit = index % radix;
        index /= radix;
        p.layers[i - 1] = pairs_[i - 1][digit.get_ui()];
    }
    return p;
}

std::vector<ActivationPattern> enumerate_patterns(const SdnModel& model)
{
    std::vector<ActivationPattern> out;
    PatternEnumerator e(model);
    while (auto p = e.next())
        out.push_back(std::move(*p));
    return out;
}

mpz_class count_patterns(const std::vector<std::size_t>& groups)
{
    mpz_class n = 1;
    for (std::size_t l : groups)
        n *= static_cast<unsigned long>(l * l + l + 1);
    return n;
}

mpz_class count_patterns(const SdnModel& model) { return count_patterns(group_counts(model)); }

mpz_class pattern_bound(const std::vector<std::size_t>& groups)
{
    mpz_class n = 1;
    for (std::size_t l : groups)
        n *= static_cast<unsigned long>((l + 1) * (l + 1));
    return n;
}

} // namespace sdnv
