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

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fockfuse/fock.hpp"
#include "fockfuse/optics.hpp"

namespace fockfuse {

/// Polarization qubit a0|H> + a1|V>, normalized.
class QubitState {
 public:
  QubitState() = default;
  /// Throws std::invalid_argument unless |a0|^2 + |a1|^2 = 1 within 1e-12.
  QubitState(Complex a0, Complex a1);
  /// Rescales to unit norm; throws on the zero vector.
  static QubitState normalized(Complex a0, Complex a1);

  Complex a0() const { return a0_; }
  Complex a1() const { return a1_; }
  Complex operator[](int i) const { return i == 0 ? a0_ : a1_; }

 private:
  Complex a0_{1.0, 0.0};
  Complex a1_{};
};

/// Four-level state; for the fused photon the basis is
/// (H_t1, V_t1, H_t2, V_t2).
class QuditState4 {
 public:
  QuditState4() = default;
  /// Throws std::invalid_argument unless the vector has unit norm within 1e-12.
  explicit QuditState4(std::array<Complex, 4> amps);
  static QuditState4 normalized(std::array<Complex, 4> amps);
  /// Index 2*i + j carries first[i] * second[j].
  static QuditState4 product(const QubitState& first, const QubitState& second);

  const std::array<Complex, 4>& amps() const { return amps_; }
  Complex operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }

 private:
  std::array<Complex, 4> amps_{Complex{1.0, 0.0}, {}, {}, {}};
};

/// |<x|y>|^2 for unit vectors.
double fidelity(const QuditState4& x, const QuditState4& y);

struct PhotonInput {
  ModeId mode;
  Polarization pol = Polarization::H;
  DistTag tag = DistTag::None;
  bool operator==(const PhotonInput&) const = default;
};

/// One photon whose polarization qubit is supplied at run time.
struct QubitSlot {
  ModeId mode;
  std::string slot;
  bool operator==(const QubitSlot&) const = default;
};

/// One photon spread over two spatial modes, amplitudes
/// (H_mode1, V_mode1, H_mode2, V_mode2) supplied at run time.
struct QuditSlot {
  ModeId mode1, mode2;
  std::string slot;
  bool operator==(const QuditSlot&) const = default;
};

using CircuitInput = std::variant<PhotonInput, QubitSlot, QuditSlot>;

/// Two qubit slots filled with one (possibly entangled) joint state.
/// Amplitude index 2*i + j pairs logical value i of `first` with j of `second`.
struct JointQubits {
  std::string first, second;
  QuditState4 amps;
};

struct SlotValues {
  std::map<std::string, QubitState> qubits;
  std::map<std::string, QuditState4> qudits;
  std::vector<JointQubits> joints;
};

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered optical layout: input injections, elements and detection patterns.
class Circuit {
 public:
  Circuit& declare_mode(const ModeId& mode);
  Circuit& add_input(CircuitInput input);
  Circuit& add_element(OpticalElement element);
  Circuit& add_pattern(DetectionPattern pattern);

  const std::vector<ModeId>& declared_modes() const { return modes_; }
  const std::vector<CircuitInput>& inputs() const { return inputs_; }
  const std::vector<OpticalElement>& elements() const { return elements_; }
  const std::vector<DetectionPattern>& patterns() const { return patterns_; }

  /// Modes alive after the last element, in order of first appearance.
  std::vector<ModeId> output_modes() const;

  /// Throws CircuitError on undeclared modes, non-fresh unfold targets,
  /// re-use of retired modes or patterns on non-output modes.
  void validate() const;

  /// Input state for the given slot values (fixed photons included).
  PureState prepare(const SlotValues& values, int photon_cap = kDefaultPhotonCap) const;

  bool operator==(const Circuit&) const = default;

 private:
  std::vector<ModeId> modes_;
  std::vector<CircuitInput> inputs_;
  std::vector<OpticalElement> elements_;
  std::vector<DetectionPattern> patterns_;
};

/// Tracks which modes are live while walking a circuit. Shared by the
/// builder-side validator and the parser so both report the same errors.
class ModeTracker {
 public:
  /// Returns an error message, or an empty string on success.
  std::string declare(const ModeId& mode);
  std::string use(const ModeId& mode) const;
  std::string apply(const OpticalElement& element);

  bool live(const ModeId& mode) const;
  const std::vector<ModeId>& live_modes() const { return live_; }

 private:
  std::string produce_fresh(const ModeId& mode);
  void retire(const ModeId& mode);

  std::vector<ModeId> live_;
  std::vector<ModeId> seen_;
  std::map<ModeId, std::string> retired_;
};

/// Positioned DSL error; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string reason);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  int column_;
  std::string reason_;
};

Circuit parse_circuit(std::string_view text);
Circuit load_circuit(const std::string& path);
/// Canonical DSL text; parse_circuit(to_dsl(c)) == c.
std::string to_dsl(const Circuit& circuit);

/// Applies elements [begin, end) in order.
PureState evolve(const Circuit& circuit, const PureState& state, std::size_t begin = 0,
                 std::size_t end = std::numeric_limits<std::size_t>::max());

/// Evolves the input and projects it on every detection pattern in order.
std::vector<ConditionalOutcome> run_circuit(const Circuit& circuit, const PureState& input);
std::vector<MixedOutcome> run_circuit(const Circuit& circuit, const MixedState& input);

// ---------------------------------------------------------------------------
// Fusion apparatus

/// Three-photon fusion layout: target qubit on `t` (slot "psi"), control on
/// `c` (slot "phi"), H ancilla on `a`. Output photon lives in t1/t2.
Circuit build_fusion_circuit();

/// Four outcomes in pattern order (a,c) = HH, HV, VH, VV.
std::vector<ConditionalOutcome> run_fusion(const QubitState& psi_t, const QubitState& phi_c);
/// Entangled two-photon input; index 2*i_t + i_c.
std::vector<ConditionalOutcome> run_fusion(const QuditState4& joint_tc);

/// sigma_x on t1 after a V ancilla, on t2 after a V control.
PureState apply_fusion_feed_forward(const ConditionalOutcome& outcome);

/// (H_t1, V_t1, H_t2, V_t2) amplitudes of the fused photon.
QuditState4 fused_qudit(const PureState& state);

// ---------------------------------------------------------------------------
// Fission apparatus

/// Input qudit on c1/c2 (slot "chi"), H photons on `t` and `a`. The control
/// photon exits on `c` or `c'`.
Circuit build_fission_circuit();

/// Four outcomes in pattern order (a, exit) = (H,c), (V,c), (H,c'), (V,c').
std::vector<ConditionalOutcome> run_fission(const QuditState4& chi);

/// Sign flip of V_t after a V ancilla; sigma_x on t and c' renamed to c when
/// the control exits on c'.
PureState apply_fission_feed_forward(const ConditionalOutcome& outcome);

/// Two-photon amplitudes over (c, t), index 2*i_c + i_t.
QuditState4 split_qubits(const PureState& state);

/// Amplitudes of the photons in `modes`, keyed by their occupation, after
/// factoring out the remaining photons. Throws if the remainder differs
/// between terms (the selected photons are entangled with the rest).
std::map<FockBasisVector, Complex> factor_modes(const PureState& state,
                                                const std::vector<ModeId>& modes);

}  // namespace fockfuse
