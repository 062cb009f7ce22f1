/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdnv/constraints.hpp"

namespace sdnv {

enum class SolveStatus { Sat, Unsat, Unknown };
enum class Backend { Builtin, External };

const char* status_name(SolveStatus s);
const char* backend_name(Backend b);

struct SolverStats {
    std::uint64_t pivots = 0;
    std::uint64_t branches = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t eliminated = 0; // variables removed by equality presolve
};

struct SolverConfig {
    Backend backend = Backend::Builtin;
    /// Command line of the external solver; the document is piped to stdin
    /// unless an argument equals "{}", which is replaced by a file path.
    std::vector<std::string> external_command{"z3", "-in"};
    std::chrono::milliseconds timeout{30000};
    /// Emitted as (set-option ...) lines, e.g. ":produce-models true".
    std::vector<std::string> preamble_options;
    /// Builtin only: eliminate variables defined by conjunct equalities before simplex.
    bool presolve = true;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    Assignment assignment; // bound for every system variable iff Sat
    std::string backend;
    std::chrono::nanoseconds elapsed{0};
    SolverStats stats;
    std::string diagnostic;
};

/// Throws ProtocolError when an external solver answers with unparseable
/// output; process failures and timeouts yield Unknown.
SolveResult solve(const ConstraintSystem& system, const SolverConfig& config);

SolveResult solve_builtin(const ConstraintSystem& system, const SolverConfig& config);
SolveResult solve_external(const ConstraintSystem& system, const SolverConfig& config);

/// Every conjunct holds and every clause has a true literal, exactly.
bool check_assignment(const ConstraintSystem& system, const Assignment& assignment);

/// Deterministic SMT-LIB2 (QF_LRA) document for the system.
std::string emit_smtlib(const ConstraintSystem& system, std::span<const std::string> options = {});

/// SMT-LIB2 numeral, (/ p q) or (- t) rendering of a rational.
std::string smt_rational(const Rational& r);

/// Interprets check-sat / get-value output; throws ProtocolError naming the
/// offending fragment.
SolveResult parse_smt_response(std::string_view text);

/// True when the configured external solver can be executed.
bool external_solver_available(const SolverConfig& config);

} // namespace sdnv
