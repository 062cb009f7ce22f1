/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdnv/rational.hpp"

namespace sdnv {

struct Provenance {
    enum class Kind { External, ClassMean, KMeans };
    Kind kind = Kind::External;
    std::size_t cluster = 0;
    std::size_t clusters = 0;

    /// "external", "class_mean" or "kmeans:<cluster>/<K>".
    std::string str() const;
    static Provenance parse(const std::string& text);

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Prototype {
    std::size_t class_id = 0;
    std::vector<Rational> values; // every component in [0, 1]
    Provenance provenance;

    friend bool operator==(const Prototype&, const Prototype&) = default;
};

using Point = std::vector<Rational>;

struct ClusteringResult {
    std::vector<Point> centroids;
    std::vector<std::size_t> assignment;
    std::size_t iterations = 0;
    bool converged = false;
    /// Within-cluster sum of squared distances after each update step.
    std::vector<Rational> sse_history;
};

/// Componentwise exact mean, clamped to [0, 1].
Prototype class_mean_prototype(std::span<const Point> samples, std::size_t class_id);

/// Lloyd's algorithm with exact arithmetic. Initial centroids are distinct
/// sample points drawn with k-means++ weighting from a seeded generator; an
/// empty cluster is re-seeded with the point farthest from its centroid.
ClusteringResult kmeans(std::span<const Point> points, std::size_t clusters, std::uint64_t seed,
                        std::size_t max_iters = 100);
/// Same algorithm on plain rationals. Reference for tests and the fallback
/// when coordinates do not fit a common 62-bit integer lattice.
ClusteringResult kmeans_serial(std::span<const Point> points, std::size_t clusters, std::uint64_t seed,
                               std::size_t max_iters = 100);

/// Nearest-centroid assignment (squared Euclidean, ties to the lowest index).
/// OpenMP kernel and serial reference; both exact.
std::vector<std::size_t> assign_nearest(std::span<const Point> points, std::span<const Point> centroids);
std::vector<std::size_t> assign_nearest_serial(std::span<const Point> points, std::span<const Point> centroids);

Rational squared_distance(const Point& a, const Point& b);

/// K prototypes per class, ordered by (class, cluster).
std::vector<Prototype> cluster_prototypes(const std::vector<std::vector<Point>>& samples_by_class,
                                          std::size_t clusters, std::uint64_t seed, std::size_t max_iters = 100);

} // namespace sdnv
