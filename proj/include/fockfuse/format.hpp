// Copyright 2026 The fockfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace fockfuse {

/// printf("%.*g") with `digits` significant digits; "-0" is printed as "0".
std::string format_sig(double value, int digits);

/// `value` rounded to `digits` significant digits, so that shortest
/// round-trip printing never shows more than that.
double round_sig(double value, int digits);

/// Shortest text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Fixed-point with `decimals` digits after the point, for aligned tables.
std::string format_fixed(double value, int decimals);

}  // namespace fockfuse
