// Copyright 2026 The qdisco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qdisco {

/// Base of every domain error raised by the library. The CLI maps these to
/// exit code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
   public:
    using Error::Error;
};

/// An input exceeds a hard size guard (brute-force enumeration, statevector width, ...).
class CapacityError : public Error {
   public:
    using Error::Error;
};

class InvalidSizeError : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

/// A document parsed but violates its schema. `field()` names the offending key path.
class SchemaError : public Error {
   public:
    SchemaError(std::string field, const std::string& what)
        : Error("schema violation at '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

   private:
    std::string field_;
};

class PlacementError : public Error {
   public:
    using Error::Error;
};

class NoRegionError : public Error {
   public:
    using Error::Error;
};

class InfeasibleError : public Error {
   public:
    using Error::Error;
};

class RangeError : public Error {
   public:
    using Error::Error;
};

}  // namespace qdisco
