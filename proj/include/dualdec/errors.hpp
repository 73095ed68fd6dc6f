/**************************************************************************
 * errors.hpp
 *
 * Copyright 2026 the dualdec authors
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
 **************************************************************************/

#pragma once

#include <stdexcept>
#include <string>

namespace dualdec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotPrimeError : Error {
    using Error::Error;
};
struct ReduciblePolynomialError : Error {
    using Error::Error;
};
struct UnsupportedSizeError : Error {
    using Error::Error;
};
struct ZeroScalarError : Error {
    using Error::Error;
};
struct FieldMismatchError : Error {
    using Error::Error;
};
struct DivisionByZeroError : Error {
    using Error::Error;
};
struct NoConstantTermError : Error {
    using Error::Error;
};
struct SearchExhaustedError : Error {
    using Error::Error;
};
struct UnsupportedCodeError : Error {
    using Error::Error;
};
struct TooManyStatesError : Error {
    using Error::Error;
};
struct LengthMismatchError : Error {
    using Error::Error;
};
struct AllZeroMassError : Error {
    using Error::Error;
};
struct NotTerminatedError : Error {
    using Error::Error;
};
struct NonBinaryExtensionError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace dualdec
