// Shared fixtures for the test binaries.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdnv/rational.hpp"
#include "sdnv/sdn_model.hpp"
#include "sdnv/solver.hpp"

namespace sdnv::test {

inline Rational Q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> Qs(std::initializer_list<const char*> texts)
{
    std::vector<Rational> out;
    for (const char* t : texts)
        out.push_back(Q(t));
    return out;
}

inline AffineLayer affine(std::size_t rows, std::size_t cols, std::initializer_list<long> weights,
                          std::initializer_list<long> bias)
{
    AffineLayer l;
    l.rows = rows;
    l.cols = cols;
    for (long w : weights)
        l.weights.emplace_back(w);
    for (long b : bias)
        l.bias.emplace_back(b);
    return l;
}

// d=2, one hidden layer of 4 in doors of 2, alpha=2, K=2.
inline SdnModel t1_model()
{
    return SdnModel({2, 4, 2},
                    {affine(4, 2, {1, 0, 0, 1, -1, 0, 0, -1}, {0, 0, 0, 0}), affine(2, 4, {1, 1, 0, 0, 0, 0, 1, 1}, {0, 0})},
                    2, Rational(2));
}

// Small rationals p/q with |p| <= 4*q, q in 1..4.
inline Rational small_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> den(1, 4);
    long q = den(rng);
    std::uniform_int_distribution<long> num(-4 * q, 4 * q);
    return Rational(num(rng), q);
}

inline SdnModel random_model(std::mt19937_64& rng, const std::vector<std::size_t>& sizes, std::size_t k,
                             Rational alpha = Rational(2))
{
    std::vector<AffineLayer> layers;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        AffineLayer l;
        l.rows = sizes[i];
        l.cols = sizes[i - 1];
        for (std::size_t t = 0; t < l.rows * l.cols; ++t)
            l.weights.push_back(small_rational(rng));
        for (std::size_t t = 0; t < l.rows; ++t)
            l.bias.push_back(small_rational(rng) * Rational(1, 2));
        layers.push_back(std::move(l));
    }
    return SdnModel(sizes, std::move(layers), k, std::move(alpha));
}

// A point of [0,1]^d with denominators up to `den`.
inline std::vector<Rational> random_input(std::mt19937_64& rng, std::size_t d, long den = 97)
{
    std::uniform_int_distribution<long> q(1, den);
    std::vector<Rational> x;
    for (std::size_t i = 0; i < d; ++i) {
        long b = q(rng);
        std::uniform_int_distribution<long> p(0, b);
        x.emplace_back(p(rng), b);
    }
    return x;
}

inline std::optional<std::string> z3_path()
{
    std::string p = SDNV_Z3_PATH;
    if (p.empty() || p.find("NOTFOUND") != std::string::npos)
        return std::nullopt;
    return p;
}

inline SolverConfig z3_config(std::chrono::milliseconds timeout = std::chrono::milliseconds(30000))
{
    SolverConfig c;
    c.backend = Backend::External;
    c.external_command = {z3_path().value_or("z3"), "-in"};
    c.timeout = timeout;
    return c;
}

inline std::string data_path(const std::string& name) { return std::string(SDNV_TEST_DATA) + "/" + name; }

} // namespace sdnv::test
