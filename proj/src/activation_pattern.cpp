/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/activation_pattern.hpp"

#include <charconv>

#include "sdnv/errors.hpp"

namespace sdnv {

std::string ActivationPattern::str() const
{
    std::string out;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (i > 0)
            out += '/';
        out += 'A' + std::to_string(layers[i].act) + 'I' + std::to_string(layers[i].ina);
    }
    return out;
}

ActivationPattern ActivationPattern::parse(std::string_view text)
{
    ActivationPattern p;
    std::size_t pos = 0;
    auto fail = [&](const char* what) {
        throw ParseError("invalid pattern \"" + std::string(text) + "\" at position " + std::to_string(pos)
                         + ": " + what);
    };
    auto number = [&]() {
        std::uint32_t v = 0;
        auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc())
            fail("expected door index");
        pos = static_cast<std::size_t>(end - text.data());
        return v;
    };
    while (true) {
        if (pos >= text.size() || text[pos] != 'A')
            fail("expected 'A'");
        ++pos;
        DoorPair d;
        d.act = number();
        if (pos >= text.size() || text[pos] != 'I')
            fail("expected 'I'");
        ++pos;
        d.ina = number();
        p.layers.push_back(d);
        if (pos == text.size())
            break;
        if (text[pos] != '/')
            fail("expected '/'");
        ++pos;
    }
    return p;
}

} // namespace sdnv
