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
#include <vector>

#include "fockfuse/circuit.hpp"
#include "fockfuse/fock.hpp"

namespace fockfuse {

/// Dual-rail qubit: |10> (photon on `zero`) is logical 0, |01> logical 1,
/// |00> the empty qubit. Rails are single-polarization spatial modes.
struct RailQubit {
  ModeId zero, one;
  bool operator==(const RailQubit&) const = default;
};

/// Rail pair named `<name>_0`, `<name>_1`.
RailQubit rail_qubit(const std::string& name);

/// a0|10> + a1|01> on the rails of `q`, on top of `state`.
PureState load_rail_qubit(const PureState& state, const RailQubit& q, const QubitState& value);

/// CNOT in photon-number notation. Populated control and target follow the
/// usual truth table; any term with an empty control or an empty target is
/// multiplied by `eta`. Throws std::invalid_argument on overlapping rails or
/// |eta| > 1 and std::domain_error if a rail pair holds more than one photon.
PureState eta_cnot(const PureState& joint, const RailQubit& control, const RailQubit& target,
                   Complex eta = 1.0);

/// <onto| applied to the rail qubit `q`: terms with `q` empty are dropped,
/// the photon of `q` is removed from the rest. Not renormalized.
PureState project_rail_qubit(const PureState& state, const RailQubit& q, const QubitState& onto);

/// Hadamard on a rail pair: |10> -> (|10>+|01>)/sqrt2, |01> -> (|10>-|01>)/sqrt2.
PureState rail_hadamard(const PureState& state, const RailQubit& q);

/// Amplitudes of a single photon spread over `rails`, the remaining photons
/// factored out. Throws std::domain_error if the photon is entangled with them.
std::vector<Complex> rail_amplitudes(const PureState& state, const std::vector<ModeId>& rails);

/// Eta of the first and second CNOT; the protocols need them equal.
struct EtaPair {
  Complex first = 1.0;
  Complex second = 1.0;
};

struct RailOutcome {
  /// Squared norm of the heralded branch, CNOT rescalings included.
  double probability = 0.0;
  QuditState4 state;
};

struct AbstractFusion {
  RailOutcome plus;   // control erased onto |+>
  RailOutcome minus;  // control erased onto |->
};

/// Fuses psi (target) and phi (control) into the rails (t1_0, t1_1, t2_0, t2_1).
AbstractFusion abstract_fuse(const QubitState& psi, const QubitState& phi, EtaPair eta = {});
inline AbstractFusion abstract_fuse(const QubitState& psi, const QubitState& phi, Complex eta) {
  return abstract_fuse(psi, phi, EtaPair{eta, eta});
}

/// Sign flip on the logical-1 rails of t1 and t2.
QuditState4 correct_minus_branch(const QuditState4& minus);

inline constexpr int kDefaultMaxFusedQubits = 4;

struct IteratedFusion {
  /// Product of the per-erasure success probabilities.
  double probability = 0.0;
  /// Amplitudes over 2^n rails; index bits are the qubits, first qubit most
  /// significant. Normalized.
  std::vector<Complex> amps;
};

/// Fuses qubits one at a time into a single photon: every occupied rail is
/// unfolded into a fresh pair, one CNOT per pair, and the control is erased
/// onto |+>. Throws std::invalid_argument unless 1 <= n <= max_qubits.
IteratedFusion abstract_fuse_iterated(const std::vector<QubitState>& qubits, Complex eta = 1.0,
                                      int max_qubits = kDefaultMaxFusedQubits);

/// Splits a four-level photon on (c1_0, c1_1, c2_0, c2_1) onto a control `c`
/// and target `t`. The state is indexed 2*i_c + i_t; the control is logical 0
/// when it exits from c1.
RailOutcome abstract_fission(const QuditState4& qudit, EtaPair eta = {});
inline RailOutcome abstract_fission(const QuditState4& qudit, Complex eta) {
  return abstract_fission(qudit, EtaPair{eta, eta});
}

}  // namespace fockfuse
