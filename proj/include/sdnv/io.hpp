/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnv/prototypes.hpp"
#include "sdnv/sdn_model.hpp"
#include "sdnv/search.hpp"

namespace sdnv {

/// Persisted form of an SdnModel. Numbers are kept as the literal strings of
/// the document (decimal or "p/q"), so load/save round-trips byte for byte.
struct ModelDocument {
    struct Layer {
        std::vector<std::vector<std::string>> weights; // rows x cols
        std::vector<std::string> bias;
        friend bool operator==(const Layer&, const Layer&) = default;
    };

    int schema_version = 1;
    std::vector<std::size_t> sizes;
    std::size_t group_size = 1;
    std::string alpha;
    std::vector<Layer> layers;

    /// Validates shapes, divisibility, alpha > 1 and every literal; errors
    /// name the offending location.
    SdnModel to_model() const;
    static ModelDocument from_model(const SdnModel& model);

    std::string render() const;
    static ModelDocument parse(std::string_view json_text);

    friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

SdnModel load_model(const std::filesystem::path& path);
void save_model(const ModelDocument& doc, const std::filesystem::path& path);

/// Decimal rendering when the value terminates, "p/q" otherwise.
std::string rational_literal(const Rational& r);

struct DatasetSlice {
    std::vector<Point> images; // pixel p -> p/255
    std::vector<std::uint8_t> labels;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string source;
};

/// Plain (uncompressed) IDX image and label files, first `limit` records.
DatasetSlice load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                      std::size_t limit = std::numeric_limits<std::size_t>::max());
DatasetSlice parse_idx(std::string_view image_bytes, std::string_view label_bytes,
                       std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Binary PGM (P5, maxval 255), one byte per pixel = round-half-up(v * 255).
std::string encode_pgm(std::span<const Rational> pixels, std::size_t width, std::size_t height);
void write_pgm(std::span<const Rational> pixels, std::size_t width, std::size_t height,
               const std::filesystem::path& path);

/// One line per prototype: "<class> <provenance> <v_0> ... <v_{d-1}>".
std::string render_prototypes(const std::vector<Prototype>& prototypes);
std::vector<Prototype> parse_prototypes(std::string_view text);
std::vector<Prototype> load_prototypes(const std::filesystem::path& path);
void save_prototypes(const std::vector<Prototype>& prototypes, const std::filesystem::path& path);

/// Witness document with the full assignment, so it can be re-checked without a solver.
std::string render_witness(const BoundaryWitness& witness);
BoundaryWitness parse_witness(std::string_view json_text);
BoundaryWitness load_witness(const std::filesystem::path& path);
void save_witness(const BoundaryWitness& witness, const std::filesystem::path& path);

/// Structured per-run summary: counts per status and wall time per pattern.
std::string render_report_summary(const std::vector<SearchReport>& reports);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace sdnv
