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


#include "fockfuse/rails.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fockfuse/optics.hpp"

namespace fockfuse {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ModeKey rail(const ModeId& mode) { return ModeKey{mode, Polarization::H, DistTag::None}; }

/// 0 or 1 for a populated pair, -1 for an empty one.
int logical_value(const FockBasisVector& basis, const RailQubit& q) {
  int n0 = basis.mode_count(q.zero);
  int n1 = basis.mode_count(q.one);
  if (n0 + n1 > 1) {
    throw std::domain_error("rail pair (" + q.zero.str() + ", " + q.one.str() +
                            ") holds more than one photon");
  }
  if (n0 == 1) return 0;
  if (n1 == 1) return 1;
  return -1;
}

/// The key of the single photon sitting on `mode`.
ModeKey photon_key(const FockBasisVector& basis, const ModeId& mode) {
  for (const auto& [key, n] : basis.entries()) {
    if (key.mode == mode) return key;
  }
  throw std::logic_error("no photon on rail " + mode.str());
}

PureState single_rail_photon(const ModeId& mode) {
  return create_photon(PureState::vacuum(), rail(mode));
}

}  // namespace

RailQubit rail_qubit(const std::string& name) {
  return RailQubit{ModeId(name + "_0"), ModeId(name + "_1")};
}

PureState load_rail_qubit(const PureState& state, const RailQubit& q, const QubitState& value) {
  return create_photon(state, rail(q.zero))
      .scaled(value.a0())
      .plus(create_photon(state, rail(q.one)), value.a1());
}

PureState eta_cnot(const PureState& joint, const RailQubit& control, const RailQubit& target,
                   Complex eta) {
  if (control.zero == control.one || target.zero == target.one || control.zero == target.zero ||
      control.zero == target.one || control.one == target.zero || control.one == target.one) {
    throw std::invalid_argument("CNOT rails overlap");
  }
  if (std::abs(eta) > 1.0 + kPruneTolerance) {
    throw std::invalid_argument("|eta| must not exceed 1");
  }
  PureState::Terms out;
  for (const auto& [basis, amp] : joint.terms()) {
    int c = logical_value(basis, control);
    int t = logical_value(basis, target);
    if (c < 0 || t < 0) {
      out[basis] += eta * amp;
    } else if (c == 0) {
      out[basis] += amp;
    } else {
      const ModeId& from = t == 0 ? target.zero : target.one;
      const ModeId& to = t == 0 ? target.one : target.zero;
      ModeKey key = photon_key(basis, from);
      ModeKey moved{to, key.pol, key.tag};
      out[basis.shifted(key, -1).shifted(moved, +1)] += amp;
    }
  }
  return PureState(std::move(out));
}

PureState project_rail_qubit(const PureState& state, const RailQubit& q, const QubitState& onto) {
  PureState::Terms out;
  for (const auto& [basis, amp] : state.terms()) {
    int v = logical_value(basis, q);
    if (v < 0) continue;
    ModeKey key = photon_key(basis, v == 0 ? q.zero : q.one);
    out[basis.shifted(key, -1)] += std::conj(onto[v]) * amp;
  }
  return PureState(std::move(out));
}

PureState rail_hadamard(const PureState& state, const RailQubit& q) {
  return apply_mode_map(state, [&](const ModeKey& key) -> std::optional<ModeImage> {
    ModeKey k0{q.zero, key.pol, key.tag};
    ModeKey k1{q.one, key.pol, key.tag};
    if (key.mode == q.zero) return ModeImage{{k0, kInvSqrt2}, {k1, kInvSqrt2}};
    if (key.mode == q.one) return ModeImage{{k0, kInvSqrt2}, {k1, -kInvSqrt2}};
    return std::nullopt;
  });
}

std::vector<Complex> rail_amplitudes(const PureState& state, const std::vector<ModeId>& rails) {
  std::vector<Complex> amps(rails.size());
  for (const auto& [basis, amp] : factor_modes(state, rails)) {
    if (basis.total() != 1) {
      throw std::domain_error("expected exactly one photon on the selected rails");
    }
    const ModeId& mode = basis.entries().front().first.mode;
    for (std::size_t i = 0; i < rails.size(); ++i) {
      if (rails[i] == mode) amps[i] += amp;
    }
  }
  return amps;
}

AbstractFusion abstract_fuse(const QubitState& psi, const QubitState& phi, EtaPair eta) {
  const RailQubit t = rail_qubit("t");
  const RailQubit c = rail_qubit("c");
  const RailQubit t1 = rail_qubit("t1");
  const RailQubit t2 = rail_qubit("t2");

  PureState state = load_rail_qubit(PureState::vacuum(), t, psi);
  state = load_rail_qubit(state, c, phi);
  // Unfolding leaves each half of t as a pair whose logical-1 rail is vacuum.
  state = apply_relabel(state, t.zero, t1.zero);
  state = apply_relabel(state, t.one, t2.zero);
  state = eta_cnot(state, c, t1, eta.first);
  state = eta_cnot(state, c, t2, eta.second);

  auto erase = [&](const QubitState& onto) {
    PureState kept = project_rail_qubit(state, c, onto);
    auto amps = rail_amplitudes(kept, {t1.zero, t1.one, t2.zero, t2.one});
    return RailOutcome{kept.norm_squared(),
                       QuditState4::normalized({amps[0], amps[1], amps[2], amps[3]})};
  };
  return AbstractFusion{erase(QubitState(kInvSqrt2, kInvSqrt2)),
                        erase(QubitState(kInvSqrt2, -kInvSqrt2))};
}

QuditState4 correct_minus_branch(const QuditState4& minus) {
  return QuditState4({minus[0], -minus[1], minus[2], -minus[3]});
}

IteratedFusion abstract_fuse_iterated(const std::vector<QubitState>& qubits, Complex eta,
                                      int max_qubits) {
  const int n = static_cast<int>(qubits.size());
  if (n < 1 || n > max_qubits) {
    throw std::invalid_argument("number of fused qubits must be between 1 and " +
                                std::to_string(max_qubits));
  }
  auto register_rail = [](int stage, std::size_t k) {
    return ModeId("r" + std::to_string(stage) + "_" + std::to_string(k));
  };
  const RailQubit c = rail_qubit("c");

  PureState state = load_rail_qubit(PureState::vacuum(),
                                    RailQubit{register_rail(1, 0), register_rail(1, 1)}, qubits[0]);
  std::size_t width = 2;
  double probability = 1.0;
  for (int stage = 2; stage <= n; ++stage) {
    for (std::size_t k = 0; k < width; ++k) {
      state = apply_relabel(state, register_rail(stage - 1, k), register_rail(stage, 2 * k));
    }
    state = load_rail_qubit(state, c, qubits[static_cast<std::size_t>(stage - 1)]);
    for (std::size_t k = 0; k < width; ++k) {
      state = eta_cnot(state, c, RailQubit{register_rail(stage, 2 * k), register_rail(stage, 2 * k + 1)},
                       eta);
    }
    state = project_rail_qubit(state, c, QubitState(kInvSqrt2, kInvSqrt2));
    double p = state.norm_squared();
    if (p == 0.0) throw std::domain_error("fusion branch has zero probability");
    probability *= p;
    state = state.normalized();
    width *= 2;
  }
  std::vector<ModeId> rails;
  for (std::size_t k = 0; k < width; ++k) rails.push_back(register_rail(n, k));
  return IteratedFusion{probability, rail_amplitudes(state, rails)};
}

RailOutcome abstract_fission(const QuditState4& qudit, EtaPair eta) {
  const RailQubit c1 = rail_qubit("c1");
  const RailQubit c2 = rail_qubit("c2");
  const RailQubit t = rail_qubit("t");
  const RailQubit c = rail_qubit("c");

  PureState state;
  const std::array<ModeId, 4> in{c1.zero, c1.one, c2.zero, c2.one};
  for (std::size_t i = 0; i < 4; ++i) {
    state = state.plus(single_rail_photon(in[i]), qudit.amps()[i]);
  }
  state = create_photon(state, rail(t.zero));
  state = eta_cnot(state, c1, t, eta.first);
  state = eta_cnot(state, c2, t, eta.second);
  state = rail_hadamard(rail_hadamard(state, c1), c2);
  state = filter(state, DetectionPattern{}.require(c1.one, Empty{}).require(c2.one, Empty{}));
  state = apply_relabel(apply_relabel(state, c1.zero, c.zero), c2.zero, c.one);

  std::array<Complex, 4> amps{};
  for (int ic = 0; ic < 2; ++ic) {
    for (int it = 0; it < 2; ++it) {
      auto two = create_photon(single_rail_photon(ic == 0 ? c.zero : c.one),
                               rail(it == 0 ? t.zero : t.one));
      amps[static_cast<std::size_t>(2 * ic + it)] = inner_product(two, state);
    }
  }
  double probability = state.norm_squared();
  if (probability == 0.0) throw std::domain_error("fission branch has zero probability");
  return RailOutcome{probability, QuditState4::normalized(amps)};
}

}  // namespace fockfuse
