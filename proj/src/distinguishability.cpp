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


#include "fockfuse/distinguishability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockfuse/format.hpp"
#include "json.hpp"

namespace fockfuse {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
/// Simulated probabilities below this are rounding residue and reported as 0.
constexpr double kProbabilityFloor = 1e-15;

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

QubitState qubit(char name) {
  switch (name) {
    case 'H':
      return QubitState(1.0, 0.0);
    case 'V':
      return QubitState(0.0, 1.0);
    case '+':
      return QubitState(kInvSqrt2, kInvSqrt2);
    default:
      return QubitState(kInvSqrt2, -kInvSqrt2);
  }
}

/// Polarization `pol` spread over t1/t2 with spatial amplitudes (s1, s2).
BasisOutput output(char pol, const char* mode_label, double s1, double s2) {
  QubitState q = qubit(pol);
  return BasisOutput{std::string(1, pol) + "_" + mode_label,
                     QuditState4({s1 * q[0], s1 * q[1], s2 * q[0], s2 * q[1]})};
}

const Circuit& fusion_circuit() {
  static const Circuit circuit = build_fusion_circuit();
  return circuit;
}

PureState tagged_input(const QubitState& psi_t, const QubitState& phi_c, DistTag ancilla,
                       DistTag pair) {
  PureState a = create_photon(PureState::vacuum(), "a", Polarization::H, ancilla);
  PureState out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      PureState term = create_photon(create_photon(a, "t", static_cast<Polarization>(i), pair), "c",
                                     static_cast<Polarization>(j), pair);
      out = out.plus(term, psi_t[i] * phi_c[j]);
    }
  }
  return out;
}

}  // namespace

DistModel::DistModel(double p) : p_(p) { check_p(p); }

std::string_view to_string(BasisId basis) {
  switch (basis) {
    case BasisId::I:
      return "i";
    case BasisId::II:
      return "ii";
    case BasisId::III:
      return "iii";
    case BasisId::IV:
      return "iv";
  }
  return "?";
}

BasisId parse_basis(std::string_view text) {
  for (BasisId b : kAllBases) {
    if (text == to_string(b)) return b;
  }
  if (text == "I") return BasisId::I;
  if (text == "II") return BasisId::II;
  if (text == "III") return BasisId::III;
  if (text == "IV") return BasisId::IV;
  throw std::invalid_argument("unknown basis '" + std::string(text) + "' (expected i, ii, iii or iv)");
}

std::array<BasisInput, 4> basis_inputs(BasisId basis) {
  const char* t = "HHVV";
  const char* c = "HVHV";
  switch (basis) {
    case BasisId::I:
      break;
    case BasisId::II:
      c = "+-+-";
      break;
    case BasisId::III:
      t = "++--";
      break;
    case BasisId::IV:
      t = "++--";
      c = "+-+-";
      break;
  }
  std::array<BasisInput, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = BasisInput{std::string(1, t[i]) + "_t " + std::string(1, c[i]) + "_c", qubit(t[i]),
                        qubit(c[i])};
  }
  return out;
}

std::array<BasisOutput, 4> basis_outputs(BasisId basis) {
  const bool diagonal_pol = basis == BasisId::II || basis == BasisId::IV;
  const bool mixed_modes = basis == BasisId::III || basis == BasisId::IV;
  const char p0 = diagonal_pol ? '+' : 'H';
  const char p1 = diagonal_pol ? '-' : 'V';
  if (mixed_modes) {
    return {output(p0, "t+", kInvSqrt2, kInvSqrt2), output(p1, "t+", kInvSqrt2, kInvSqrt2),
            output(p0, "t-", kInvSqrt2, -kInvSqrt2), output(p1, "t-", kInvSqrt2, -kInvSqrt2)};
  }
  return {output(p0, "t1", 1.0, 0.0), output(p1, "t1", 1.0, 0.0), output(p0, "t2", 0.0, 1.0),
          output(p1, "t2", 0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// ProbabilityMatrix

ProbabilityMatrix::ProbabilityMatrix(Entries entries) : entries_(entries) {
  for (const auto& row : entries_) {
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("probability matrix entries must be finite and non-negative");
      }
    }
  }
}

double ProbabilityMatrix::sum() const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += row_sum(i);
  return s;
}

double ProbabilityMatrix::row_sum(int row) const {
  double s = 0.0;
  for (double v : entries_[static_cast<std::size_t>(row)]) s += v;
  return s;
}

double ProbabilityMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += (*this)(i, i);
  return s;
}

ProbabilityMatrix ProbabilityMatrix::row_normalized() const {
  Entries out = entries_;
  for (auto& row : out) {
    double s = 0.0;
    for (double v : row) s += v;
    if (s == 0.0) throw std::domain_error("cannot normalize an all-zero row");
    for (double& v : row) v /= s;
  }
  return ProbabilityMatrix(out);
}

ProbabilityMatrix ProbabilityMatrix::scaled(double factor) const {
  Entries out = entries_;
  for (auto& row : out) {
    for (double& v : row) v *= factor;
  }
  return ProbabilityMatrix(out);
}

double ProbabilityMatrix::max_abs_diff(const ProbabilityMatrix& other) const {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m = std::max(m, std::abs((*this)(i, j) - other(i, j)));
  }
  return m;
}

ProbabilityMatrix ProbabilityMatrix::identity() {
  Entries e{};
  for (std::size_t i = 0; i < 4; ++i) e[i][i] = 1.0;
  return ProbabilityMatrix(e);
}

// ---------------------------------------------------------------------------
// Model

MixedState build_input_mixture(double p, const QubitState& psi_t, const QubitState& phi_c) {
  const double r = DistModel(p).r();
  return MixedState({
      MixedBranch{r, tagged_input(psi_t, phi_c, DistTag::None, DistTag::None)},
      MixedBranch{1.0 - r, tagged_input(psi_t, phi_c, DistTag::A, DistTag::B)},
  });
}

double output_probability(const PureState& state, const QuditState4& output) {
  std::map<std::pair<FockBasisVector, DistTag>, Complex> groups;
  for (const auto& [basis, amp] : state.terms()) {
    const ModeKey* found = nullptr;
    int count = 0;
    for (const auto& [key, n] : basis.entries()) {
      if (key.mode == ModeId("t1") || key.mode == ModeId("t2")) {
        found = &key;
        count += n;
      }
    }
    if (count != 1) {
      throw std::domain_error("expected exactly one photon in t1/t2");
    }
    int index = (found->mode == ModeId("t2") ? 2 : 0) + static_cast<int>(found->pol);
    groups[{basis.shifted(*found, -1), found->tag}] += std::conj(output[index]) * amp;
  }
  double total = 0.0;
  for (const auto& [key, amp] : groups) total += std::norm(amp);
  return total;
}

ProbabilityMatrix simulate_basis_matrix(BasisId basis, double p, int branch) {
  check_p(p);
  if (branch < 0 || branch > 3) throw std::invalid_argument("fusion branch must be 0..3");
  const auto inputs = basis_inputs(basis);
  const auto outputs = basis_outputs(basis);
  ProbabilityMatrix::Entries rows{};
  for (std::size_t i = 0; i < 4; ++i) {
    MixedState input = build_input_mixture(p, inputs[i].t, inputs[i].c);
    MixedOutcome outcome =
        run_circuit(fusion_circuit(), input)[static_cast<std::size_t>(branch)];
    if (outcome.probability == 0.0) throw std::domain_error("fusion branch never fires");
    for (const auto& b : outcome.state.branches()) {
      PureState s = apply_fusion_feed_forward(ConditionalOutcome{1.0, b.state, outcome.pattern});
      for (std::size_t j = 0; j < 4; ++j) rows[i][j] += b.weight * output_probability(s, outputs[j].vector);
    }
  }
  for (auto& row : rows) {
    for (double& v : row) {
      if (v < kProbabilityFloor) v = 0.0;
    }
  }
  return ProbabilityMatrix(rows).row_normalized();
}

ProbabilityMatrix closed_form_matrix(BasisId basis, double p, MatrixReading reading) {
  check_p(p);
  const double q = 1.0 - p;
  const double off = reading == MatrixReading::Normalized ? 3.0 * q : 3.0 - p;
  switch (basis) {
    case BasisId::I: {
      const double d = 12.0 - 8.0 * p;
      const double y = (3.0 + p) / d;
      const double x = off / d;
      return ProbabilityMatrix({{{y, x, x, x}, {0, 1, 0, 0}, {0, 0, 1, 0}, {x, x, x, y}}});
    }
    case BasisId::II: {
      const double d = 9.0 - 5.0 * p;
      const double y = (3.0 + p) / d;
      const double x = off / d;
      return ProbabilityMatrix({{{y, x, 0, x}, {x, y, 0, x}, {0, x, y, x}, {0, x, x, y}}});
    }
    case BasisId::III: {
      const double d = 4.0 * (9.0 - 5.0 * p);
      const double a = (15.0 + p) / d;
      const double b = (21.0 - 5.0 * p) / d;
      const double x = 3.0 * q / d;
      const double z = 9.0 * q / d;
      return ProbabilityMatrix({{{a, x, z, z}, {x, a, z, z}, {x, x, b, z}, {x, x, z, b}}});
    }
    case BasisId::IV: {
      const double d1 = 6.0 - 2.0 * p;
      const double d2 = 12.0 - 8.0 * p;
      return ProbabilityMatrix({{{(3.0 + p) / d1, 0, 3.0 * q / d1, 0},
                                 {0, (3.0 + p) / d2, 9.0 * q / d2, 0},
                                 {0, 3.0 * q / d2, 2.0 * (3.0 - p) / d2, 3.0 * q / d2},
                                 {0, 0, 3.0 * q / d1, (3.0 + p) / d1}}});
    }
  }
  throw std::invalid_argument("unknown basis");
}

double average_fidelity(double p) {
  check_p(p);
  return (3.0 + p) / (9.0 - 5.0 * p);
}

double basis_mean_fidelity(BasisId basis, double p) {
  return simulate_basis_matrix(basis, p).trace() / 4.0;
}

double simulated_mean_fidelity(double p) {
  double s = 0.0;
  for (BasisId b : kAllBases) s += simulate_basis_matrix(b, p).trace();
  return s / 16.0;
}

double similarity(const ProbabilityMatrix& d, const ProbabilityMatrix& dp) {
  const double sd = d.sum();
  const double sdp = dp.sum();
  if (sd == 0.0 || sdp == 0.0) throw std::invalid_argument("similarity of an all-zero matrix");
  double overlap = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += d(i, j) == dp(i, j) ? d(i, j) : std::sqrt(d(i, j) * dp(i, j));
    overlap += row;
  }
  return overlap * overlap / (sd * sdp);
}

double fit_p(const ProbabilityMatrix& observed, BasisId basis, double tolerance) {
  if (observed.sum() == 0.0) throw std::invalid_argument("observed matrix is all zero");
  if (!(tolerance > 0.0)) throw std::invalid_argument("fit tolerance must be positive");
  auto score = [&](double p) { return similarity(observed, closed_form_matrix(basis, p)); };

  constexpr int kGrid = 100;
  int best_k = 0;
  double best_s = score(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    double s = score(static_cast<double>(k) / kGrid);
    if (s > best_s) {
      best_s = s;
      best_k = k;
    }
  }
  double lo = std::max(0, best_k - 1) / static_cast<double>(kGrid);
  double hi = std::min(kGrid, best_k + 1) / static_cast<double>(kGrid);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  while (hi - lo > tolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = score(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = score(x1);
    }
  }
  double best_p = 0.5 * (lo + hi);
  best_s = score(best_p);
  for (double edge : {lo, hi}) {
    if (double s = score(edge); s > best_s) {
      best_s = s;
      best_p = edge;
    }
  }
  return best_p;
}

std::string to_csv(const ProbabilityMatrix& m, BasisId basis) {
  const auto inputs = basis_inputs(basis);
  const auto outputs = basis_outputs(basis);
  std::string out = "input";
  for (const auto& o : outputs) out += "," + o.label;
  out += "\n";
  for (int i = 0; i < 4; ++i) {
    out += inputs[static_cast<std::size_t>(i)].label;
    for (int j = 0; j < 4; ++j) out += "," + format_sig(m(i, j), 12);
    out += "\n";
  }
  return out;
}

std::string to_json(const ProbabilityMatrix& m, BasisId basis, double p) {
  nlohmann::ordered_json j;
  j["basis"] = std::string(to_string(basis));
  j["p"] = round_sig(p, 12);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& in : basis_inputs(basis)) rows.push_back(in.label);
  auto cols = nlohmann::ordered_json::array();
  for (const auto& o : basis_outputs(basis)) cols.push_back(o.label);
  j["rows"] = rows;
  j["columns"] = cols;
  auto entries = nlohmann::ordered_json::array();
  for (int r = 0; r < 4; ++r) {
    auto row = nlohmann::ordered_json::array();
    for (int c = 0; c < 4; ++c) row.push_back(round_sig(m(r, c), 12));
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j.dump(2);
}

}  // namespace fockfuse
