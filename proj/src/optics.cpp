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

#include "fockfuse/optics.hpp"

#include <cmath>
#include <numbers>

#include "fockfuse/detail/overloaded.hpp"
#include "fockfuse/format.hpp"

namespace fockfuse {
namespace {

// cos/sin of an angle in degrees, exact at multiples of 90 degrees.
std::pair<double, double> cos_sin_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0) r += 360.0;
  if (r == 0.0) return {1.0, 0.0};
  if (r == 90.0) return {0.0, 1.0};
  if (r == 180.0) return {-1.0, 0.0};
  if (r == 270.0) return {0.0, -1.0};
  double rad = r * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

ModeImage single(const ModeId& mode, Polarization pol, Complex coef = 1.0) {
  return ModeImage{{ModeKey{mode, pol, DistTag::None}, coef}};
}

void require_vacant(const PureState& state, const ModeId& mode, const char* what) {
  for (const auto& [basis, amp] : state.terms()) {
    if (basis.mode_count(mode) > 0) {
      throw ElementError(std::string(what) + ": mode '" + mode.str() + "' is already occupied");
    }
  }
}

}  // namespace

PureState apply_hwp(const PureState& state, const ModeId& mode, double theta_deg) {
  auto [c, s] = cos_sin_deg(2.0 * theta_deg);
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != mode) return std::nullopt;
    if (key.pol == Polarization::H) {
      return ModeImage{{ModeKey{mode, Polarization::H}, c}, {ModeKey{mode, Polarization::V}, s}};
    }
    return ModeImage{{ModeKey{mode, Polarization::H}, s}, {ModeKey{mode, Polarization::V}, -c}};
  });
}

PureState apply_pbs(const PureState& state, const ModeId& in1, const ModeId& in2,
                    const ModeId& out1, const ModeId& out2) {
  if (in1 == in2) throw ElementError("pbs: input modes must differ");
  if (out1 == out2) throw ElementError("pbs: output modes must differ");
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode == in1) {
      return key.pol == Polarization::H ? single(out1, Polarization::H)
                                        : single(out2, Polarization::V);
    }
    if (key.mode == in2) {
      return key.pol == Polarization::H ? single(out2, Polarization::H)
                                        : single(out1, Polarization::V);
    }
    return std::nullopt;
  });
}

PureState apply_unfold(const PureState& state, const ModeId& src, const ModeId& out_h,
                       const ModeId& out_v) {
  if (out_h == out_v || out_h == src || out_v == src) {
    throw ElementError("unfold: source and both outputs must be distinct modes");
  }
  require_vacant(state, out_h, "unfold");
  require_vacant(state, out_v, "unfold");
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != src) return std::nullopt;
    return key.pol == Polarization::H ? single(out_h, Polarization::H)
                                      : single(out_v, Polarization::V);
  });
}

PureState apply_merge(const PureState& state, const ModeId& in_h, const ModeId& in_v,
                      const ModeId& out) {
  if (in_h == in_v) throw ElementError("merge: input modes must differ");
  for (const auto& [basis, amp] : state.terms()) {
    if (basis.mode_count(in_h, Polarization::V) > 0 ||
        basis.mode_count(in_v, Polarization::H) > 0) {
      throw ElementError("merge: '" + in_h.str() + "' must carry only H and '" + in_v.str() +
                         "' only V");
    }
    if (out != in_h && out != in_v && basis.mode_count(out) > 0) {
      throw ElementError("merge: mode '" + out.str() + "' is already occupied");
    }
  }
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != in_h && key.mode != in_v) return std::nullopt;
    return single(out, key.pol);
  });
}

PureState apply_relabel(const PureState& state, const ModeId& from, const ModeId& to) {
  if (from == to) return state;
  require_vacant(state, to, "relabel");
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != from) return std::nullopt;
    return single(to, key.pol);
  });
}

PureState apply_sigma_x(const PureState& state, const ModeId& mode) {
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != mode) return std::nullopt;
    return single(mode, flip(key.pol));
  });
}

PureState apply_sign_flip_v(const PureState& state, const ModeId& mode) {
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    if (key.mode != mode || key.pol != Polarization::V) return std::nullopt;
    return single(mode, Polarization::V, -1.0);
  });
}

using detail::Overloaded;

PureState apply_element(const PureState& state, const OpticalElement& element) {
  return std::visit(
      Overloaded{
          [&](const Hwp& e) { return apply_hwp(state, e.mode, e.theta_deg); },
          [&](const Pbs& e) { return apply_pbs(state, e.in1, e.in2, e.out1, e.out2); },
          [&](const Unfold& e) { return apply_unfold(state, e.src, e.out_h, e.out_v); },
          [&](const Merge& e) { return apply_merge(state, e.in_h, e.in_v, e.out); },
          [&](const Relabel& e) { return apply_relabel(state, e.from, e.to); },
          [&](const SigmaX& e) { return apply_sigma_x(state, e.mode); },
          [&](const SignFlipV& e) { return apply_sign_flip_v(state, e.mode); },
      },
      element);
}

std::vector<ModeId> input_modes(const OpticalElement& element) {
  return std::visit(Overloaded{
                        [](const Hwp& e) { return std::vector<ModeId>{e.mode}; },
                        [](const Pbs& e) { return std::vector<ModeId>{e.in1, e.in2}; },
                        [](const Unfold& e) { return std::vector<ModeId>{e.src}; },
                        [](const Merge& e) { return std::vector<ModeId>{e.in_h, e.in_v}; },
                        [](const Relabel& e) { return std::vector<ModeId>{e.from}; },
                        [](const SigmaX& e) { return std::vector<ModeId>{e.mode}; },
                        [](const SignFlipV& e) { return std::vector<ModeId>{e.mode}; },
                    },
                    element);
}

std::vector<ModeId> output_modes(const OpticalElement& element) {
  return std::visit(Overloaded{
                        [](const Hwp& e) { return std::vector<ModeId>{e.mode}; },
                        [](const Pbs& e) { return std::vector<ModeId>{e.out1, e.out2}; },
                        [](const Unfold& e) { return std::vector<ModeId>{e.out_h, e.out_v}; },
                        [](const Merge& e) { return std::vector<ModeId>{e.out}; },
                        [](const Relabel& e) { return std::vector<ModeId>{e.to}; },
                        [](const SigmaX& e) { return std::vector<ModeId>{e.mode}; },
                        [](const SignFlipV& e) { return std::vector<ModeId>{e.mode}; },
                    },
                    element);
}

std::string to_dsl(const OpticalElement& element) {
  return std::visit(
      Overloaded{
          [](const Hwp& e) { return "hwp " + e.mode.str() + " " + format_shortest(e.theta_deg); },
          [](const Pbs& e) {
            return "pbs " + e.in1.str() + " " + e.in2.str() + " " + e.out1.str() + " " +
                   e.out2.str();
          },
          [](const Unfold& e) {
            return "unfold " + e.src.str() + " " + e.out_h.str() + " " + e.out_v.str();
          },
          [](const Merge& e) {
            return "merge " + e.in_h.str() + " " + e.in_v.str() + " " + e.out.str();
          },
          [](const Relabel& e) { return "relabel " + e.from.str() + " " + e.to.str(); },
          [](const SigmaX& e) { return "sigmax " + e.mode.str(); },
          [](const SignFlipV& e) { return "signflipv " + e.mode.str(); },
      },
      element);
}

}  // namespace fockfuse
