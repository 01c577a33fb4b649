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

#include "fockfuse/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fockfuse/detail/overloaded.hpp"

namespace fockfuse {

using detail::Overloaded;

// ---------------------------------------------------------------------------
// Qubit / qudit values

QubitState::QubitState(Complex a0, Complex a1) : a0_(a0), a1_(a1) {
  double n = std::norm(a0) + std::norm(a1);
  if (std::abs(n - 1.0) > 1e-12) {
    throw std::invalid_argument("qubit amplitudes are not normalized");
  }
}

QubitState QubitState::normalized(Complex a0, Complex a1) {
  double n = std::sqrt(std::norm(a0) + std::norm(a1));
  if (n == 0.0) throw std::invalid_argument("qubit amplitudes are all zero");
  return QubitState(a0 / n, a1 / n);
}

QuditState4::QuditState4(std::array<Complex, 4> amps) : amps_(amps) {
  double n = 0.0;
  for (const auto& a : amps_) n += std::norm(a);
  if (std::abs(n - 1.0) > 1e-12) {
    throw std::invalid_argument("qudit amplitudes are not normalized");
  }
}

QuditState4 QuditState4::normalized(std::array<Complex, 4> amps) {
  double n = 0.0;
  for (const auto& a : amps) n += std::norm(a);
  if (n == 0.0) throw std::invalid_argument("qudit amplitudes are all zero");
  n = std::sqrt(n);
  for (auto& a : amps) a /= n;
  return QuditState4(amps);
}

QuditState4 QuditState4::product(const QubitState& first, const QubitState& second) {
  return QuditState4::normalized({first[0] * second[0], first[0] * second[1],
                                  first[1] * second[0], first[1] * second[1]});
}

double fidelity(const QuditState4& x, const QuditState4& y) {
  Complex acc{};
  for (int i = 0; i < 4; ++i) acc += std::conj(x[i]) * y[i];
  return std::norm(acc);
}

// ---------------------------------------------------------------------------
// ModeTracker

namespace {

bool contains(const std::vector<ModeId>& v, const ModeId& m) {
  return std::find(v.begin(), v.end(), m) != v.end();
}

}  // namespace

bool ModeTracker::live(const ModeId& mode) const { return contains(live_, mode); }

std::string ModeTracker::declare(const ModeId& mode) {
  if (contains(seen_, mode)) return "mode '" + mode.str() + "' declared twice";
  live_.push_back(mode);
  seen_.push_back(mode);
  return {};
}

std::string ModeTracker::use(const ModeId& mode) const {
  if (auto it = retired_.find(mode); it != retired_.end()) {
    return "mode '" + mode.str() + "' " + it->second + " and cannot be reused";
  }
  if (!live(mode)) return "undeclared mode '" + mode.str() + "'";
  return {};
}

std::string ModeTracker::produce_fresh(const ModeId& mode) {
  if (contains(seen_, mode)) return "output mode '" + mode.str() + "' is not fresh";
  live_.push_back(mode);
  seen_.push_back(mode);
  return {};
}

void ModeTracker::retire(const ModeId& mode) {
  std::erase(live_, mode);
}

std::string ModeTracker::apply(const OpticalElement& element) {
  // Outputs that are not inputs must be fresh; inputs that are not outputs retire.
  auto reroute = [&](const std::vector<ModeId>& ins, const std::vector<ModeId>& outs,
                     const std::string& verb) -> std::string {
    for (const auto& in : ins) {
      if (auto e = use(in); !e.empty()) return e;
    }
    for (const auto& out : outs) {
      if (!contains(ins, out) && contains(seen_, out)) {
        return "output mode '" + out.str() + "' is not fresh";
      }
    }
    for (const auto& in : ins) {
      if (!contains(outs, in)) {
        retire(in);
        retired_[in] = verb;
      }
    }
    for (const auto& out : outs) {
      if (!contains(ins, out)) {
        if (auto e = produce_fresh(out); !e.empty()) return e;
      }
    }
    return {};
  };
  return std::visit(
      Overloaded{
          [&](const Hwp& e) { return use(e.mode); },
          [&](const SigmaX& e) { return use(e.mode); },
          [&](const SignFlipV& e) { return use(e.mode); },
          [&](const Pbs& e) -> std::string {
            if (e.in1 == e.in2) return "pbs input modes must differ";
            if (e.out1 == e.out2) return "pbs output modes must differ";
            return reroute({e.in1, e.in2}, {e.out1, e.out2}, "consumed by a pbs");
          },
          [&](const Unfold& e) -> std::string {
            if (auto err = use(e.src); !err.empty()) return err;
            if (e.out_h == e.out_v) return "unfold outputs must differ";
            for (const auto& out : {e.out_h, e.out_v}) {
              if (contains(seen_, out)) return "unfold target '" + out.str() + "' is not fresh";
            }
            return reroute({e.src}, {e.out_h, e.out_v},
                           "was unfolded into " + e.out_h.str() + "/" + e.out_v.str());
          },
          [&](const Merge& e) -> std::string {
            if (e.in_h == e.in_v) return "merge input modes must differ";
            return reroute({e.in_h, e.in_v}, {e.out}, "was merged into " + e.out.str());
          },
          [&](const Relabel& e) -> std::string {
            if (auto err = use(e.from); !err.empty()) return err;
            if (e.from == e.to) return {};
            if (contains(seen_, e.to)) return "relabel target '" + e.to.str() + "' is not fresh";
            return reroute({e.from}, {e.to}, "was relabelled to " + e.to.str());
          },
      },
      element);
}

// ---------------------------------------------------------------------------
// Circuit

Circuit& Circuit::declare_mode(const ModeId& mode) {
  modes_.push_back(mode);
  return *this;
}

Circuit& Circuit::add_input(CircuitInput input) {
  inputs_.push_back(std::move(input));
  return *this;
}

Circuit& Circuit::add_element(OpticalElement element) {
  elements_.push_back(std::move(element));
  return *this;
}

Circuit& Circuit::add_pattern(DetectionPattern pattern) {
  patterns_.push_back(std::move(pattern));
  return *this;
}

std::vector<ModeId> Circuit::output_modes() const {
  ModeTracker tracker;
  for (const auto& m : modes_) tracker.declare(m);
  for (const auto& e : elements_) tracker.apply(e);
  return tracker.live_modes();
}

void Circuit::validate() const {
  ModeTracker tracker;
  for (const auto& m : modes_) {
    if (auto err = tracker.declare(m); !err.empty()) throw CircuitError(err);
  }
  auto check_declared = [&](const ModeId& m) {
    if (!contains(modes_, m)) throw CircuitError("input on undeclared mode '" + m.str() + "'");
  };
  std::set<std::string> slots;
  for (const auto& input : inputs_) {
    std::visit(Overloaded{
                   [&](const PhotonInput& p) { check_declared(p.mode); },
                   [&](const QubitSlot& q) {
                     check_declared(q.mode);
                     if (!slots.insert(q.slot).second) {
                       throw CircuitError("slot '" + q.slot + "' used twice");
                     }
                   },
                   [&](const QuditSlot& q) {
                     check_declared(q.mode1);
                     check_declared(q.mode2);
                     if (q.mode1 == q.mode2) throw CircuitError("qudit modes must differ");
                     if (!slots.insert(q.slot).second) {
                       throw CircuitError("slot '" + q.slot + "' used twice");
                     }
                   },
               },
               input);
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (auto err = tracker.apply(elements_[i]); !err.empty()) {
      throw CircuitError("element " + std::to_string(i + 1) + " (" + to_dsl(elements_[i]) +
                         "): " + err);
    }
  }
  for (const auto& pattern : patterns_) {
    for (const auto& m : pattern.modes()) {
      if (!tracker.live(m)) {
        throw CircuitError("pattern '" + pattern.label() + "' references non-output mode '" +
                           m.str() + "'");
      }
    }
  }
}

PureState Circuit::prepare(const SlotValues& values, int photon_cap) const {
  PureState state = PureState::vacuum();
  std::set<std::string> done;
  auto qubit_mode = [&](const std::string& slot) -> ModeId {
    for (const auto& input : inputs_) {
      if (const auto* q = std::get_if<QubitSlot>(&input); q && q->slot == slot) return q->mode;
    }
    throw CircuitError("circuit has no qubit slot '" + slot + "'");
  };
  for (const auto& joint : values.joints) {
    ModeId m1 = qubit_mode(joint.first);
    ModeId m2 = qubit_mode(joint.second);
    PureState next;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Complex amp = joint.amps[2 * i + j];
        if (amp == Complex{}) continue;
        PureState term = create_photon(state, m1, i ? Polarization::V : Polarization::H,
                                       DistTag::None, photon_cap);
        term = create_photon(term, m2, j ? Polarization::V : Polarization::H, DistTag::None,
                             photon_cap);
        next = next.plus(term, amp);
      }
    }
    state = std::move(next);
    done.insert(joint.first);
    done.insert(joint.second);
  }
  for (const auto& input : inputs_) {
    state = std::visit(
        Overloaded{
            [&](const PhotonInput& p) {
              return create_photon(state, p.mode, p.pol, p.tag, photon_cap);
            },
            [&](const QubitSlot& q) {
              if (done.count(q.slot)) return state;
              auto it = values.qubits.find(q.slot);
              if (it == values.qubits.end()) {
                throw CircuitError("no value supplied for qubit slot '" + q.slot + "'");
              }
              return create_photon(state, q.mode, Polarization::H, DistTag::None, photon_cap)
                  .scaled(it->second.a0())
                  .plus(create_photon(state, q.mode, Polarization::V, DistTag::None, photon_cap),
                        it->second.a1());
            },
            [&](const QuditSlot& q) {
              auto it = values.qudits.find(q.slot);
              if (it == values.qudits.end()) {
                throw CircuitError("no value supplied for qudit slot '" + q.slot + "'");
              }
              const auto& amps = it->second;
              const ModeKey keys[4] = {{q.mode1, Polarization::H},
                                       {q.mode1, Polarization::V},
                                       {q.mode2, Polarization::H},
                                       {q.mode2, Polarization::V}};
              PureState next;
              for (int k = 0; k < 4; ++k) {
                if (amps[k] == Complex{}) continue;
                next = next.plus(create_photon(state, keys[k], photon_cap), amps[k]);
              }
              return next;
            },
        },
        input);
  }
  return state;
}

PureState evolve(const Circuit& circuit, const PureState& state, std::size_t begin,
                 std::size_t end) {
  const auto& elements = circuit.elements();
  end = std::min(end, elements.size());
  PureState out = state;
  for (std::size_t i = begin; i < end; ++i) out = apply_element(out, elements[i]);
  return out;
}

std::vector<ConditionalOutcome> run_circuit(const Circuit& circuit, const PureState& input) {
  PureState out = evolve(circuit, input);
  std::vector<ConditionalOutcome> outcomes;
  outcomes.reserve(circuit.patterns().size());
  for (const auto& pattern : circuit.patterns()) outcomes.push_back(project(out, pattern));
  return outcomes;
}

std::vector<MixedOutcome> run_circuit(const Circuit& circuit, const MixedState& input) {
  std::vector<MixedBranch> evolved;
  for (const auto& branch : input.branches()) {
    evolved.push_back(MixedBranch{branch.weight, evolve(circuit, branch.state)});
  }
  MixedState out(std::move(evolved));
  std::vector<MixedOutcome> outcomes;
  for (const auto& pattern : circuit.patterns()) outcomes.push_back(project(out, pattern));
  return outcomes;
}

std::map<FockBasisVector, Complex> factor_modes(const PureState& state,
                                                const std::vector<ModeId>& modes) {
  std::map<FockBasisVector, Complex> out;
  std::optional<FockBasisVector> spectator;
  for (const auto& [basis, amp] : state.terms()) {
    std::vector<FockBasisVector::Entry> selected;
    std::vector<FockBasisVector::Entry> rest;
    for (const auto& entry : basis.entries()) {
      (contains(modes, entry.first.mode) ? selected : rest).push_back(entry);
    }
    FockBasisVector rest_basis(std::move(rest));
    if (!spectator) {
      spectator = rest_basis;
    } else if (*spectator != rest_basis) {
      throw std::domain_error("selected photons are correlated with " + to_string(rest_basis) +
                              " and " + to_string(*spectator));
    }
    out[FockBasisVector(std::move(selected))] += amp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fusion

Circuit build_fusion_circuit() {
  Circuit c;
  c.declare_mode("a").declare_mode("c").declare_mode("t");
  c.add_input(QubitSlot{"t", "psi"});
  c.add_input(QubitSlot{"c", "phi"});
  c.add_input(PhotonInput{"a", Polarization::H});
  // Copy the control onto the ancilla.
  c.add_element(Hwp{"a", 22.5});
  c.add_element(Pbs{"a", "c", "a", "c"});
  c.add_element(Hwp{"a", 22.5});
  c.add_element(Hwp{"c", 22.5});
  // Unfold the target into two zero-initialized qubits.
  c.add_element(Unfold{"t", "t1", "t2"});
  c.add_element(Hwp{"t1", 22.5});
  // The -22.5 degree plate: sigma_x followed by a Hadamard.
  c.add_element(SigmaX{"t2"});
  c.add_element(Hwp{"t2", 22.5});
  // The two CNOTs.
  c.add_element(Pbs{"a", "t1", "a", "t1"});
  c.add_element(Pbs{"c", "t2", "c", "t2"});
  for (const char* m : {"a", "c", "t1", "t2"}) c.add_element(Hwp{m, 22.5});
  for (Polarization pa : {Polarization::H, Polarization::V}) {
    for (Polarization pc : {Polarization::H, Polarization::V}) {
      DetectionPattern p;
      p.require("a", ExactlyOne{pa});
      p.require("c", ExactlyOne{pc});
      p.require_group({"t1", "t2"}, ModeRequirement::Kind::ExactlyOneAnyPol);
      c.add_pattern(std::move(p));
    }
  }
  return c;
}

std::vector<ConditionalOutcome> run_fusion(const QubitState& psi_t, const QubitState& phi_c) {
  static const Circuit circuit = build_fusion_circuit();
  SlotValues v;
  v.qubits["psi"] = psi_t;
  v.qubits["phi"] = phi_c;
  return run_circuit(circuit, circuit.prepare(v));
}

std::vector<ConditionalOutcome> run_fusion(const QuditState4& joint_tc) {
  static const Circuit circuit = build_fusion_circuit();
  SlotValues v;
  v.joints.push_back(JointQubits{"psi", "phi", joint_tc});
  return run_circuit(circuit, circuit.prepare(v));
}

namespace {

Polarization required_pol(const DetectionPattern& pattern, const ModeId& mode) {
  const ModeRequirement* r = pattern.find(mode);
  if (r == nullptr || r->kind != ModeRequirement::Kind::ExactlyOne) {
    throw std::invalid_argument("pattern '" + pattern.label() +
                                "' does not fix the polarization of mode '" + mode.str() + "'");
  }
  return r->pol;
}

QuditState4 qudit_from(const std::map<FockBasisVector, Complex>& amps,
                       const std::array<FockBasisVector, 4>& keys) {
  std::array<Complex, 4> out{};
  std::size_t matched = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (auto it = amps.find(keys[i]); it != amps.end()) {
      out[i] = it->second;
      ++matched;
    }
  }
  if (matched != amps.size()) {
    throw std::domain_error("state has components outside the four-level subspace");
  }
  return QuditState4::normalized(out);
}

FockBasisVector photon(const ModeId& mode, Polarization pol) {
  return FockBasisVector({{ModeKey{mode, pol}, 1}});
}

FockBasisVector photons(const ModeId& m1, Polarization p1, const ModeId& m2, Polarization p2) {
  return FockBasisVector({{ModeKey{m1, p1}, 1}, {ModeKey{m2, p2}, 1}});
}

}  // namespace

PureState apply_fusion_feed_forward(const ConditionalOutcome& outcome) {
  Polarization pa = required_pol(outcome.pattern, "a");
  Polarization pc = required_pol(outcome.pattern, "c");
  PureState s = outcome.state;
  if (pa == Polarization::V) s = apply_sigma_x(s, "t1");
  if (pc == Polarization::V) s = apply_sigma_x(s, "t2");
  return s;
}

QuditState4 fused_qudit(const PureState& state) {
  auto amps = factor_modes(state, {"t1", "t2"});
  return qudit_from(amps, {photon("t1", Polarization::H), photon("t1", Polarization::V),
                           photon("t2", Polarization::H), photon("t2", Polarization::V)});
}

// ---------------------------------------------------------------------------
// Fission

Circuit build_fission_circuit() {
  Circuit c;
  c.declare_mode("c1").declare_mode("c2").declare_mode("t").declare_mode("a");
  c.add_input(QuditSlot{"c1", "c2", "chi"});
  c.add_input(PhotonInput{"t", Polarization::H});
  c.add_input(PhotonInput{"a", Polarization::H});
  for (const char* m : {"a", "t", "c1", "c2"}) c.add_element(Hwp{m, 22.5});
  // CNOTs with c2 and c1 as controls.
  c.add_element(Pbs{"t", "c2", "t", "c2"});
  c.add_element(Pbs{"a", "c1", "a", "c1"});
  c.add_element(Hwp{"c1", 22.5});
  c.add_element(Hwp{"c2", 22.5});
  c.add_element(Hwp{"c2", 45.0});
  // Recombine the control paths; the logical-one ports leave through c'.
  c.add_element(Pbs{"c1", "c2", "c", "c'"});
  c.add_element(Hwp{"c'", 45.0});
  // Undo the target copy held by the ancilla.
  c.add_element(Hwp{"a", 22.5});
  c.add_element(Hwp{"t", 22.5});
  c.add_element(Pbs{"a", "t", "a", "t"});
  c.add_element(Hwp{"a", 22.5});
  for (const char* exit : {"c", "c'"}) {
    const char* other = std::string_view(exit) == "c" ? "c'" : "c";
    for (Polarization pa : {Polarization::H, Polarization::V}) {
      DetectionPattern p;
      p.require("a", ExactlyOne{pa});
      p.require("t", ExactlyOneAnyPol{});
      p.require(exit, ExactlyOneAnyPol{});
      p.require(other, Empty{});
      c.add_pattern(std::move(p));
    }
  }
  return c;
}

std::vector<ConditionalOutcome> run_fission(const QuditState4& chi) {
  static const Circuit circuit = build_fission_circuit();
  SlotValues v;
  v.qudits["chi"] = chi;
  return run_circuit(circuit, circuit.prepare(v));
}

PureState apply_fission_feed_forward(const ConditionalOutcome& outcome) {
  Polarization pa = required_pol(outcome.pattern, "a");
  const ModeRequirement* exit_c = outcome.pattern.find("c");
  const ModeRequirement* exit_cp = outcome.pattern.find("c'");
  if (exit_c == nullptr || exit_cp == nullptr) {
    throw std::invalid_argument("pattern '" + outcome.pattern.label() +
                                "' does not select an exit channel");
  }
  PureState s = outcome.state;
  if (pa == Polarization::V) s = apply_sign_flip_v(s, "t");
  if (exit_cp->kind == ModeRequirement::Kind::ExactlyOneAnyPol &&
      exit_c->kind == ModeRequirement::Kind::Empty) {
    s = apply_sigma_x(s, "t");
    s = apply_relabel(s, "c'", "c");
  } else if (exit_c->kind != ModeRequirement::Kind::ExactlyOneAnyPol) {
    throw std::invalid_argument("pattern '" + outcome.pattern.label() +
                                "' is not a fission pattern");
  }
  return s;
}

QuditState4 split_qubits(const PureState& state) {
  auto amps = factor_modes(state, {"c", "t"});
  return qudit_from(amps, {photons("c", Polarization::H, "t", Polarization::H),
                           photons("c", Polarization::H, "t", Polarization::V),
                           photons("c", Polarization::V, "t", Polarization::H),
                           photons("c", Polarization::V, "t", Polarization::V)});
}

}  // namespace fockfuse
