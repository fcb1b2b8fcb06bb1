// Copyright 2026 The finres Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace finres {

/// Thrown when a caller passes arguments outside an operation's domain.
class RejectedInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a measurement outcome has (numerically) zero probability, so
/// the post-measurement state is undefined.
class DegenerateOutcome : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Internal invariant broken, e.g. an expectation value with an imaginary part.
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace finres
