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

#include "fockfuse/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fockfuse {

std::string format_sig(double value, int digits) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  std::string out(buf);
  if (out == "-0") out = "0";
  return out;
}

double round_sig(double value, int digits) {
  if (!std::isfinite(value)) return value;
  double r = std::strtod(format_sig(value, digits).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_shortest(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
  return out;
}

}  // namespace fockfuse
