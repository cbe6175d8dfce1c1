/*
 * Copyright 2026 The strata authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace strata {

enum class ErrorKind {
    InvalidArgument,
    ParseError,
    ExponentOutOfRange,
    SpecMismatch,
    UnknownVariable,
    FCapExceeded,
    BadDivisor,
    NotDivisible,
    NotCommode,
    NotLinear,
    Unsupported,
    TooManyPoints,
    OutOfRange,
    NonIntegral,
    NoSolution,
    NonUnique,
    OutOfValidity,
    UnknownConstant,
    InconsistentSamples,
    InsufficientSamples,
    CorruptCache,
    CorruptData,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::FCapExceeded: return "FCapExceeded";
    case ErrorKind::BadDivisor: return "BadDivisor";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::NotCommode: return "NotCommode";
    case ErrorKind::NotLinear: return "NotLinear";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::TooManyPoints: return "TooManyPoints";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NonUnique: return "NonUnique";
    case ErrorKind::OutOfValidity: return "OutOfValidity";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::InconsistentSamples: return "InconsistentSamples";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::CorruptCache: return "CorruptCache";
    case ErrorKind::CorruptData: return "CorruptData";
    }
    return "Unknown";
}

/// Every failure raised by the library. `detail` carries a kind-specific
/// integer (the kernel dimension for NonUnique, the offending sample point
/// for InconsistentSamples).
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message, long detail = 0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(detail) {}

    ErrorKind kind() const { return kind_; }
    long detail() const { return detail_; }

  private:
    ErrorKind kind_;
    long detail_;
};

} // namespace strata
