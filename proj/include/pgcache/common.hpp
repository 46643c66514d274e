/*
 * Copyright 2026 The pgcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace pgcache {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class ErrorCode {
  NotPrimePower,
  DimensionMismatch,
  OutOfRange,
  InvalidParameters,
  InstanceTooLarge,
  UnknownVertex,
  InternalInconsistency,
  InvalidInput,
  ParseError,
  SizeMismatch,
  InvalidDemand,
  DecodeFailure,
  NotRegular,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InvalidDemand: return "InvalidDemand";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::NotRegular: return "NotRegular";
  }
  return "Unknown";
}

/// Renders a rational as a fixed-point decimal with `digits` places (round half up).
std::string to_decimal(const Rational& value, int digits);

/// Exact string form "n" or "n/d".
std::string to_exact(const Rational& value);

/// Parses "12", "0.25", "-3.5" or "7/9" exactly. Throws InvalidInput.
Rational parse_rational(std::string_view text);

}  // namespace pgcache
