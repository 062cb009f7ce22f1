/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace sdnv {

struct ProcessResult {
    bool started = false;
    bool timed_out = false;
    int exit_code = -1; // -1 when killed by a signal
    std::string out;
    std::string err;
};

/// Runs argv[0] (PATH lookup) feeding `input` on stdin; the child is killed
/// when the timeout expires.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout);

} // namespace sdnv
