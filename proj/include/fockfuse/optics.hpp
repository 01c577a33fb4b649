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
#include <variant>

#include "fockfuse/fock.hpp"

namespace fockfuse {

/// Half-wave plate with fast axis at `theta_deg` from H. Jones matrix
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
struct Hwp {
  ModeId mode;
  double theta_deg = 0.0;
  bool operator==(const Hwp&) const = default;
};

/// Polarizing beam splitter: transmits H, reflects V, no reflection phase.
/// H(in1)->H(out1), V(in1)->V(out2), H(in2)->H(out2), V(in2)->V(out1).
struct Pbs {
  ModeId in1, in2, out1, out2;
  bool operator==(const Pbs&) const = default;
};

/// Splits `src` by polarization into two fresh spatial modes.
struct Unfold {
  ModeId src, out_h, out_v;
  bool operator==(const Unfold&) const = default;
};

/// Inverse of Unfold: H from `in_h` and V from `in_v` recombine into `out`.
struct Merge {
  ModeId in_h, in_v, out;
  bool operator==(const Merge&) const = default;
};

struct Relabel {
  ModeId from, to;
  bool operator==(const Relabel&) const = default;
};

/// H <-> V on one mode.
struct SigmaX {
  ModeId mode;
  bool operator==(const SigmaX&) const = default;
};

/// V -> -V on one mode.
struct SignFlipV {
  ModeId mode;
  bool operator==(const SignFlipV&) const = default;
};

using OpticalElement = std::variant<Hwp, Pbs, Unfold, Merge, Relabel, SigmaX, SignFlipV>;

/// Raised when an element cannot act on the given state, e.g. unfolding
/// into an occupied mode.
class ElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PureState apply_hwp(const PureState& state, const ModeId& mode, double theta_deg);
PureState apply_pbs(const PureState& state, const ModeId& in1, const ModeId& in2,
                    const ModeId& out1, const ModeId& out2);
PureState apply_unfold(const PureState& state, const ModeId& src, const ModeId& out_h,
                       const ModeId& out_v);
PureState apply_merge(const PureState& state, const ModeId& in_h, const ModeId& in_v,
                      const ModeId& out);
PureState apply_relabel(const PureState& state, const ModeId& from, const ModeId& to);
PureState apply_sigma_x(const PureState& state, const ModeId& mode);
PureState apply_sign_flip_v(const PureState& state, const ModeId& mode);

PureState apply_element(const PureState& state, const OpticalElement& element);

/// Spatial modes read by the element.
std::vector<ModeId> input_modes(const OpticalElement& element);
/// Spatial modes written by the element.
std::vector<ModeId> output_modes(const OpticalElement& element);

/// One-line circuit-DSL form, e.g. "hwp a 22.5".
std::string to_dsl(const OpticalElement& element);

}  // namespace fockfuse
