/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/prototypes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "sdnv/errors.hpp"

namespace sdnv {

std::string Provenance::str() const
{
    switch (kind) {
    case Kind::External: return "external";
    case Kind::ClassMean: return "class_mean";
    case Kind::KMeans: return "kmeans:" + std::to_string(cluster) + "/" + std::to_string(clusters);
    }
    return "?";
}

Provenance Provenance::parse(const std::string& text)
{
    if (text == "external")
        return {};
    if (text == "class_mean")
        return {Kind::ClassMean, 0, 0};
    if (text.starts_with("kmeans:")) {
        auto slash = text.find('/');
        try {
            if (slash != std::string::npos) {
                std::size_t used = 0;
                std::size_t cluster = std::stoul(text.substr(7, slash - 7), &used);
                std::size_t used2 = 0;
                std::size_t clusters = std::stoul(text.substr(slash + 1), &used2);
                if (used == slash - 7 && used2 == text.size() - slash - 1 && cluster < clusters)
                    return {Kind::KMeans, cluster, clusters};
            }
        } catch (const std::exception&) {
        }
    }
    throw ParseError("invalid prototype provenance \"" + text + "\"");
}

Prototype class_mean_prototype(std::span<const Point> samples, std::size_t class_id)
{
    if (samples.empty())
        throw InvariantError("class " + std::to_string(class_id) + " has no samples");
    const std::size_t d = samples.front().size();
    std::vector<Rational> sum(d);
    for (const auto& s : samples) {
        if (s.size() != d)
            throw ShapeError("samples of class " + std::to_string(class_id) + " differ in dimension");
        for (std::size_t t = 0; t < d; ++t)
            sum[t] += s[t];
    }
    const Rational n(static_cast<long>(samples.size()));
    for (auto& v : sum) {
        v /= n;
        v = std::clamp(v, Rational(0), Rational(1));
    }
    return {class_id, std::move(sum), {Provenance::Kind::ClassMean, 0, 0}};
}

Rational squared_distance(const Point& a, const Point& b)
{
    Rational s;
    for (std::size_t t = 0; t < a.size(); ++t) {
        Rational diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

std::vector<std::size_t> assign_nearest_serial(std::span<const Point> points, std::span<const Point> centroids)
{
    std::vector<std::size_t> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        Rational best = squared_distance(points[p], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            Rational dist = squared_distance(points[p], centroids[c]);
            if (dist < best) {
                best = std::move(dist);
                out[p] = c;
            }
        }
    }
    return out;
}

namespace {

using i128 = __int128;

// Points scaled by the common denominator D of all coordinates, so that all
// distance comparisons are exact integer arithmetic.
struct Lattice {
    std::size_t dim = 0;
    mpz_class scale; // D
    std::vector<std::int64_t> coords; // row-major
    std::int64_t max_abs = 0;

    const std::int64_t* row(std::size_t i) const { return coords.data() + i * dim; }
};

// Centroid = sums / (count * D).
struct LatticeCentroid {
    std::vector<std::int64_t> sums;
    std::int64_t count = 1;
};

mpz_class to_mpz(i128 v)
{
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class lo(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

std::optional<Lattice> try_lattice(std::span<const Point> points, std::span<const Point> extra, std::size_t max_count)
{
    Lattice l;
    l.dim = points.empty() ? 0 : points.front().size();
    l.scale = 1;
    auto visit = [&](auto&& f) {
        for (const auto& p : points)
            f(p);
        for (const auto& p : extra)
            f(p);
    };
    visit([&](const Point& p) {
        if (p.size() != l.dim)
            throw ShapeError("points differ in dimension");
        for (const auto& v : p)
            mpz_lcm(l.scale.get_mpz_t(), l.scale.get_mpz_t(), v.denominator().get_mpz_t());
    });
    const mpz_class limit = mpz_class(1) << 62;
    if (l.scale >= limit)
        return std::nullopt;
    bool fits = true;
    visit([&](const Point& p) {
        for (const auto& v : p) {
            mpz_class scaled = v.numerator() * (l.scale / v.denominator());
            if (abs(scaled) >= limit) {
                fits = false;
                return;
            }
            auto s = static_cast<std::int64_t>(scaled.get_si());
            l.coords.push_back(s);
            l.max_abs = std::max(l.max_abs, s < 0 ? -s : s);
        }
    });
    if (!fits)
        return std::nullopt;
    // |n*P - S| <= 2 N M per dimension, squared, summed over d, then scaled by
    // another count^2 when two distances are compared.
    const long double n = static_cast<long double>(std::max<std::size_t>(max_count, 1));
    const long double m = static_cast<long double>(std::max<std::int64_t>(l.max_abs, 1));
    const long double bound = 4.0L * static_cast<long double>(std::max<std::size_t>(l.dim, 1)) * n * n * n * n * m * m;
    if (bound >= std::ldexp(1.0L, 125) || n * m >= std::ldexp(1.0L, 62))
        return std::nullopt;
    return l;
}

// ||count * P - sums||^2; the true squared distance is this / (count^2 D^2).
i128 scaled_distance(const std::int64_t* p, const LatticeCentroid& c, std::size_t dim)
{
    i128 s = 0;
    for (std::size_t t = 0; t < dim; ++t) {
        i128 diff = static_cast<i128>(c.count) * p[t] - c.sums[t];
        s += diff * diff;
    }
    return s;
}

// a/na^2 < b/nb^2
bool closer(i128 a, std::int64_t na, i128 b, std::int64_t nb)
{
    return a * (static_cast<i128>(nb) * nb) < b * (static_cast<i128>(na) * na);
}

std::size_t nearest(const std::int64_t* p, const std::vector<LatticeCentroid>& cs, std::size_t dim)
{
    std::size_t best = 0;
    i128 best_d = scaled_distance(p, cs[0], dim);
    for (std::size_t c = 1; c < cs.size(); ++c) {
        i128 d = scaled_distance(p, cs[c], dim);
        if (closer(d, cs[c].count, best_d, cs[best].count)) {
            best = c;
            best_d = d;
        }
    }
    return best;
}

std::vector<std::size_t> assign_lattice(const Lattice& l, std::size_t n, const std::vector<LatticeCentroid>& cs)
{
    std::vector<std::size_t> out(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = nearest(l.row(static_cast<std::size_t>(i)), cs, l.dim);
    return out;
}

LatticeCentroid centroid_at(const Lattice& l, std::size_t i)
{
    return {std::vector<std::int64_t>(l.row(i), l.row(i) + l.dim), 1};
}

Point to_point(const Lattice& l, const LatticeCentroid& c)
{
    Point p(l.dim);
    for (std::size_t t = 0; t < l.dim; ++t) {
        mpq_class q(mpz_class(static_cast<long>(c.sums[t])), l.scale * c.count);
        p[t] = Rational(q);
    }
    return p;
}

std::size_t nearest_rational(const Point& p, std::span<const Point> centroids)
{
    std::size_t best = 0;
    Rational best_d = squared_distance(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        Rational d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best = c;
            best_d = std::move(d);
        }
    }
    return best;
}

// k-means++ draw: the first unchosen point whose cumulative weight exceeds
// u/2^53 of the total. Exact and invariant under scaling every weight, so the
// lattice and rational paths pick the same points.
template <class Weight>
std::size_t draw_weighted(const std::vector<Weight>& weight, const std::vector<bool>& chosen, std::uint64_t u)
{
    const std::size_t n = weight.size();
    mpq_class total = 0;
    for (std::size_t p = 0; p < n; ++p)
        if (!chosen[p])
            total += weight[p];
    if (total == 0)
        return static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    const mpq_class threshold = total * mpq_class(mpz_class(static_cast<unsigned long>(u)), mpz_class(1) << 53);
    mpq_class running = 0;
    std::size_t last = n;
    for (std::size_t p = 0; p < n; ++p) {
        if (chosen[p] || weight[p] == 0)
            continue;
        running += weight[p];
        last = p;
        if (running > threshold)
            return p;
    }
    return last;
}

std::uint64_t draw_u53(std::mt19937_64& gen) { return gen() >> 11; }

} // namespace

std::vector<std::size_t> assign_nearest(std::span<const Point> points, std::span<const Point> centroids)
{
    if (centroids.empty())
        throw InvariantError("no centroids");
    if (auto l = try_lattice(points, centroids, 1)) {
        std::vector<LatticeCentroid> cs;
        for (std::size_t c = 0; c < centroids.size(); ++c)
            cs.push_back(centroid_at(*l, points.size() + c));
        return assign_lattice(*l, points.size(), cs);
    }
    std::vector<std::size_t> out(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = nearest_rational(points[static_cast<std::size_t>(i)], centroids);
    return out;
}

namespace {

void check_kmeans_args(std::span<const Point> points, std::size_t clusters)
{
    if (clusters == 0)
        throw InvariantError("k-means needs at least one cluster");
    if (clusters > points.size())
        throw InvariantError("k-means with " + std::to_string(clusters) + " clusters but only "
                             + std::to_string(points.size()) + " points");
    for (const auto& p : points)
        if (p.size() != points.front().size())
            throw ShapeError("points differ in dimension");
}

} // namespace

ClusteringResult kmeans(std::span<const Point> points, std::size_t clusters, std::uint64_t seed,
                        std::size_t max_iters)
{
    check_kmeans_args(points, clusters);
    const std::size_t n = points.size();
    std::optional<Lattice> lattice = try_lattice(points, {}, n);
    if (!lattice)
        return kmeans_serial(points, clusters, seed, max_iters);
    const Lattice& l = *lattice;
    const std::size_t dim = l.dim;

    std::mt19937_64 gen(seed);
    std::vector<LatticeCentroid> cs;
    std::vector<bool> chosen(n, false);
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
    cs.push_back(centroid_at(l, first));
    chosen[first] = true;
    std::vector<mpz_class> weight(n);
    for (std::size_t p = 0; p < n; ++p)
        weight[p] = to_mpz(scaled_distance(l.row(p), cs[0], dim));
    while (cs.size() < clusters) {
        std::size_t pick = draw_weighted(weight, chosen, draw_u53(gen));
        chosen[pick] = true;
        cs.push_back(centroid_at(l, pick));
        for (std::size_t p = 0; p < n; ++p) {
            mpz_class w = to_mpz(scaled_distance(l.row(p), cs.back(), dim));
            if (w < weight[p])
                weight[p] = w;
        }
    }

    ClusteringResult result;
    std::vector<std::size_t> assign = assign_lattice(l, n, cs);
    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        std::vector<LatticeCentroid> next(clusters, LatticeCentroid{std::vector<std::int64_t>(dim, 0), 0});
        for (std::size_t p = 0; p < n; ++p) {
            auto& c = next[assign[p]];
            const std::int64_t* row = l.row(p);
            for (std::size_t t = 0; t < dim; ++t)
                c.sums[t] += row[t];
            ++c.count;
        }
        std::vector<bool> used(n, false);
        for (std::size_t c = 0; c < clusters; ++c) {
            if (next[c].count > 0)
                continue;
            // Empty cluster: take the point farthest from its own centroid.
            std::size_t far = n;
            i128 far_d = 0;
            std::int64_t far_n = 1;
            for (std::size_t p = 0; p < n; ++p) {
                const auto& own = next[assign[p]];
                if (used[p] || own.count == 0)
                    continue;
                i128 d = scaled_distance(l.row(p), own, dim);
                if (far == n || closer(far_d, far_n, d, own.count)) {
                    far = p;
                    far_d = d;
                    far_n = own.count;
                }
            }
            if (far == n)
                far = 0;
            used[far] = true;
            next[c] = centroid_at(l, far);
        }
        cs = std::move(next);

        // SSE = sum ||count P - S||^2 / (count^2 D^2) per cluster.
        std::vector<i128> per_cluster(clusters, 0);
        for (std::size_t p = 0; p < n; ++p)
            per_cluster[assign[p]] += scaled_distance(l.row(p), cs[assign[p]], dim);
        mpq_class sse = 0;
        for (std::size_t c = 0; c < clusters; ++c) {
            mpz_class den = l.scale * cs[c].count;
            sse += mpq_class(to_mpz(per_cluster[c]), den * den);
        }
        sse.canonicalize();
        result.sse_history.emplace_back(sse);
        result.iterations = iter;

        std::vector<std::size_t> fresh = assign_lattice(l, n, cs);
        const bool stable = fresh == assign;
        assign = std::move(fresh);
        if (stable) {
            result.converged = true;
            break;
        }
    }
    for (const auto& c : cs)
        result.centroids.push_back(to_point(l, c));
    result.assignment = std::move(assign);
    return result;
}

ClusteringResult kmeans_serial(std::span<const Point> points, std::size_t clusters, std::uint64_t seed,
                               std::size_t max_iters)
{
    check_kmeans_args(points, clusters);
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();

    std::mt19937_64 gen(seed);
    std::vector<Point> cs;
    std::vector<bool> chosen(n, false);
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
    cs.push_back(points[first]);
    chosen[first] = true;
    std::vector<mpq_class> weight(n);
    for (std::size_t p = 0; p < n; ++p)
        weight[p] = squared_distance(points[p], cs[0]).raw();
    while (cs.size() < clusters) {
        std::size_t pick = draw_weighted(weight, chosen, draw_u53(gen));
        chosen[pick] = true;
        cs.push_back(points[pick]);
        for (std::size_t p = 0; p < n; ++p) {
            mpq_class w = squared_distance(points[p], cs.back()).raw();
            if (w < weight[p])
                weight[p] = w;
        }
    }

    ClusteringResult result;
    std::vector<std::size_t> assign = assign_nearest_serial(points, cs);
    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        std::vector<Point> next(clusters, Point(dim));
        std::vector<std::size_t> count(clusters, 0);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t t = 0; t < dim; ++t)
                next[assign[p]][t] += points[p][t];
            ++count[assign[p]];
        }
        for (std::size_t c = 0; c < clusters; ++c)
            if (count[c] > 0)
                for (auto& v : next[c])
                    v /= Rational(static_cast<long>(count[c]));
        std::vector<bool> used(n, false);
        for (std::size_t c = 0; c < clusters; ++c) {
            if (count[c] > 0)
                continue;
            std::size_t far = n;
            Rational far_d;
            for (std::size_t p = 0; p < n; ++p) {
                if (used[p] || count[assign[p]] == 0)
                    continue;
                Rational d = squared_distance(points[p], next[assign[p]]);
                if (far == n || far_d < d) {
                    far = p;
                    far_d = std::move(d);
                }
            }
            if (far == n)
                far = 0;
            used[far] = true;
            next[c] = points[far];
            count[c] = 1;
        }
        cs = std::move(next);

        Rational sse;
        for (std::size_t p = 0; p < n; ++p)
            sse += squared_distance(points[p], cs[assign[p]]);
        result.sse_history.push_back(sse);
        result.iterations = iter;

        std::vector<std::size_t> fresh = assign_nearest_serial(points, cs);
        const bool stable = fresh == assign;
        assign = std::move(fresh);
        if (stable) {
            result.converged = true;
            break;
        }
    }
    result.centroids = std::move(cs);
    result.assignment = std::move(assign);
    return result;
}

std::vector<Prototype> cluster_prototypes(const std::vector<std::vector<Point>>& samples_by_class,
                                          std::size_t clusters, std::uint64_t seed, std::size_t max_iters)
{
    std::vector<Prototype> out;
    for (std::size_t cls = 0; cls < samples_by_class.size(); ++cls) {
        const auto& samples = samples_by_class[cls];
        if (samples.empty())
            throw InvariantError("class " + std::to_string(cls) + " has no samples");
        ClusteringResult r = kmeans(samples, clusters, seed + cls, max_iters);
        for (std::size_t c = 0; c < clusters; ++c) {
            Point v = r.centroids[c];
            for (auto& x : v)
                x = std::clamp(x, Rational(0), Rational(1));
            out.push_back({cls, std::move(v), {Provenance::Kind::KMeans, c, clusters}});
        }
    }
    return out;
}

} // namespace sdnv
