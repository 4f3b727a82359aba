/*
   Copyright 2026 The v2xsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace v2x {

/// A numeric argument or configuration value is outside its valid domain.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scene contains a malformed building footprint.
class InvalidScene : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two distinct nodes share a position, so no link geometry exists.
class DegenerateLink : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that should have come from the same snapshot do not agree.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A plot-data request is missing one or more (scenario, cw, density) cells.
class IncompleteSweep : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace v2x
