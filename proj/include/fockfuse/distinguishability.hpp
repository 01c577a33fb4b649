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
#include <string>
#include <string_view>

#include "fockfuse/circuit.hpp"
#include "fockfuse/fock.hpp"

namespace fockfuse {

/// Source indistinguishability p and the derived three-photon fraction
/// r = 2p / (3 - p).
class DistModel {
 public:
  /// Throws std::invalid_argument unless 0 <= p <= 1.
  explicit DistModel(double p);
  double p() const { return p_; }
  double r() const { return 2.0 * p_ / (3.0 - p_); }

 private:
  double p_;
};

enum class BasisId { I, II, III, IV };

inline constexpr std::array<BasisId, 4> kAllBases{BasisId::I, BasisId::II, BasisId::III,
                                                  BasisId::IV};

/// "i", "ii", "iii", "iv".
std::string_view to_string(BasisId basis);
BasisId parse_basis(std::string_view text);

/// One row of a basis: the (target, control) input qubits.
struct BasisInput {
  std::string label;
  QubitState t;
  QubitState c;
};

/// One column of a basis: a single-photon analysis vector over
/// (H_t1, V_t1, H_t2, V_t2).
struct BasisOutput {
  std::string label;
  QuditState4 vector;
};

std::array<BasisInput, 4> basis_inputs(BasisId basis);
std::array<BasisOutput, 4> basis_outputs(BasisId basis);

class ProbabilityMatrix {
 public:
  using Entries = std::array<std::array<double, 4>, 4>;

  ProbabilityMatrix() = default;
  /// Throws std::invalid_argument on negative or non-finite entries.
  explicit ProbabilityMatrix(Entries entries);

  double operator()(int row, int col) const {
    return entries_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }
  const Entries& entries() const { return entries_; }
  double sum() const;
  double row_sum(int row) const;
  double trace() const;
  ProbabilityMatrix row_normalized() const;
  ProbabilityMatrix scaled(double factor) const;
  double max_abs_diff(const ProbabilityMatrix& other) const;

  static ProbabilityMatrix identity();

 private:
  Entries entries_{};
};

/// r |psi_ind><psi_ind| + (1 - r) |psi_d><psi_d|: in the second branch the
/// ancilla carries tag A and the target and control photons tag B.
MixedState build_input_mixture(double p, const QubitState& psi_t, const QubitState& phi_c);

/// Probability that the photon in t1/t2 is found in `output`, summed over
/// everything else in the state (tags included).
double output_probability(const PureState& state, const QuditState4& output);

/// Rows follow basis_inputs(), columns basis_outputs(). `branch` selects the
/// fusion detection pattern (0 = a=H c=H); other branches are feed-forward
/// corrected before the analysis.
ProbabilityMatrix simulate_basis_matrix(BasisId basis, double p, int branch = 0);

/// Off-diagonal convention for bases I and II. The printed form uses 3 - p,
/// whose rows do not sum to one; the normalized form uses 3(1 - p).
enum class MatrixReading { Normalized, AsPrinted };

ProbabilityMatrix closed_form_matrix(BasisId basis, double p,
                                     MatrixReading reading = MatrixReading::Normalized);

/// (3 + p) / (9 - 5p).
double average_fidelity(double p);

/// Mean of the diagonal of one simulated basis matrix.
double basis_mean_fidelity(BasisId basis, double p);

/// Mean of the 16 diagonal entries of the four simulated matrices.
double simulated_mean_fidelity(double p);

/// (sum sqrt(D D'))^2 / (sum D * sum D'). Throws std::invalid_argument if
/// either matrix sums to zero.
double similarity(const ProbabilityMatrix& d, const ProbabilityMatrix& dp);

inline constexpr double kFitTolerance = 1e-4;

/// Maximizes similarity(observed, closed_form_matrix(basis, p)) over p in
/// [0, 1]: coarse grid bracket, then golden-section search.
double fit_p(const ProbabilityMatrix& observed, BasisId basis, double tolerance = kFitTolerance);

std::string to_csv(const ProbabilityMatrix& m, BasisId basis);
/// JSON object with basis, p, labels and entries at 12 significant digits.
std::string to_json(const ProbabilityMatrix& m, BasisId basis, double p);

}  // namespace fockfuse
