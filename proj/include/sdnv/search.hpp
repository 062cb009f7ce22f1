/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdnv/constraints.hpp"
#include "sdnv/prototypes.hpp"
#include "sdnv/sdn_model.hpp"
#include "sdnv/solver.hpp"

namespace sdnv {

struct SearchConfig {
    std::size_t target = 0;
    /// nullopt selects the adjacent-class protocol (j = i+1 mod K, then fallbacks).
    std::optional<std::size_t> boundary;
    Rational epsilon;
    Rational radius{1, 5};
    std::size_t max_witnesses = std::numeric_limits<std::size_t>::max();
    std::size_t pattern_limit = std::numeric_limits<std::size_t>::max();
    SolverConfig solver;
    bool meaningful_enabled = true;
    bool strict_meaningful = true;
    /// Append every processed pattern to the checked regions, including
    /// timed-out ones.
    bool checked_includes_unknown = false;
    /// Solve batches of patterns concurrently against a snapshot of the checked
    /// regions taken when the batch is dispatched.
    bool parallel = false;
    std::size_t batch_size = 0; // 0: OpenMP thread count
};

struct MeaningfulRegion {
    std::vector<Rational> prototype;
    Rational radius;
    bool strict = true;
};

struct BoundaryWitness {
    std::vector<Rational> input;
    std::size_t target = 0;
    std::size_t boundary = 0;
    ActivationPattern pattern;
    std::size_t pattern_position = 0;
    Rational epsilon;
    std::string backend;
    Assignment assignment; // x, _h, h, y
    std::optional<MeaningfulRegion> meaningful;
};

struct WitnessCheck {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Re-verifies a witness with exact arithmetic: input domain, forward
/// re-execution against every stored intermediate, the boundary equation,
/// the max condition and the meaningful box.
WitnessCheck check_witness(const SdnModel& model, const BoundaryWitness& witness);

enum class PatternStatus { Sat, Unsat, Unknown, Error, Rejected };
const char* pattern_status_name(PatternStatus s);

struct PatternOutcome {
    std::size_t position = 0;
    ActivationPattern pattern;
    PatternStatus status = PatternStatus::Unknown;
    std::chrono::nanoseconds elapsed{0};
    std::chrono::nanoseconds emit_time{0};
    SolverStats stats;
    std::string diagnostic;
};

struct SearchReport {
    std::size_t target = 0;
    std::size_t boundary = 0;
    Rational epsilon;
    std::string backend;
    std::optional<std::size_t> prototype_index;
    std::vector<PatternOutcome> outcomes;
    /// Patterns whose regions were added to the checked set, in order.
    std::vector<ActivationPattern> checked;
    std::chrono::nanoseconds wall{0};

    std::size_t count(PatternStatus s) const;
};

struct SearchRun {
    std::vector<BoundaryWitness> witnesses;
    SearchReport report;
};

/// Region sweep for one (target, boundary) pair: every valid pattern in
/// canonical order gets a fresh solve of input, boundary, meaningful,
/// not-yet-checked, region and forward constraints.
SearchRun find_solutions(const SdnModel& model, const std::optional<Prototype>& prototype,
                         const SearchConfig& config);

/// Same pipeline with the relaxed boundary y_i = y_j - epsilon.
SearchRun relax_and_search(const SdnModel& model, const std::optional<Prototype>& prototype,
                           const SearchConfig& config);

/// Order in which boundary classes are tried for a target under the adjacent
/// protocol: (i+1) mod K first, then the rest increasing.
std::vector<std::size_t> boundary_candidates(std::size_t target, std::size_t classes);

struct TargetRun {
    std::size_t target = 0;
    std::vector<std::size_t> pairs_attempted; // boundary classes, in order
    std::vector<SearchRun> runs;              // one per (boundary, prototype)

    std::vector<BoundaryWitness> witnesses() const;
};

/// Runs the target against config.boundary, or the adjacent protocol when it
/// is unset, stopping at the first boundary class that yields a witness.
/// With meaningful regions enabled, every prototype of the target class is
/// searched.
TargetRun find_for_target(const SdnModel& model, const std::vector<Prototype>& prototypes,
                          const SearchConfig& config);

std::map<std::size_t, TargetRun> find_all_classes(const SdnModel& model, const std::vector<Prototype>& prototypes,
                                                  const SearchConfig& config);

/// Line-oriented log of a run.
std::string render_report_log(const SearchReport& report);

} // namespace sdnv
