/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#pragma once

#include <stdexcept>
#include <string>

namespace sdnv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (decimals, documents, s-expressions).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Dimension or layout mismatch between a model and its arguments.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A domain invariant was violated (alpha <= 1, k does not divide n_i, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

class UnboundVariableError : public Error {
public:
    using Error::Error;
};

/// An external solver produced output we cannot interpret.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sdnv
