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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fockfuse/circuit.hpp"
#include "fockfuse/distinguishability.hpp"
#include "fockfuse/rails.hpp"

namespace fockfuse {

/// Measured values kept for side-by-side display; never used as oracles.
struct ReferenceConstants {
  static constexpr double kMeasuredMeanFidelity = 0.750;
  static constexpr double kMeasuredMeanFidelityError = 0.013;
  static constexpr double kMeasuredSimilarity = 0.940;
  static constexpr double kMeasuredSimilarityError = 0.009;
  static constexpr double kFittedP = 0.77;
};

using Cell = std::variant<double, std::string>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Reference {
  std::string name;
  double value = 0.0;
  double uncertainty = 0.0;
  std::string description;
};

struct ExperimentReport {
  std::string name;
  /// Command-line flags that regenerate the report, in order.
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Table> tables;
  std::vector<Reference> references;
  std::vector<std::string> notes;

  /// "fockfuse <name> --flag value ..."
  std::string command() const;
};

enum class OutputFormat { Table, Csv, Json };

OutputFormat parse_format(std::string_view text);

/// Tables use 6 significant digits, CSV and JSON 12.
std::string render(const ExperimentReport& report, OutputFormat format);

// ---------------------------------------------------------------------------
// Argument parsing helpers

/// "0.5", "-i", "0.3+0.4i", "1e-3-2i".
Complex parse_complex(std::string_view text);
/// Comma-separated list of complex numbers.
std::vector<Complex> parse_amplitudes(std::string_view text);
/// Inverse of parse_amplitudes with round-trip precision.
std::string format_amplitudes(const std::vector<Complex>& amps);

QubitState parse_qubit(std::string_view text);
QuditState4 parse_qudit(std::string_view text);

/// Four rows of four numbers; an optional header line and a leading label
/// column are skipped.
ProbabilityMatrix parse_matrix_csv(std::string_view text);

/// FOCKFUSE_TOL if set (must be a positive number), otherwise kDefaultTolerance.
double tolerance_from_env();

// ---------------------------------------------------------------------------
// Reports

ExperimentReport fuse_report(const QubitState& psi, const QubitState& phi);
ExperimentReport fuse_entangled_report(const QuditState4& joint);
ExperimentReport fission_report(const QuditState4& chi);
ExperimentReport abstract_fuse_report(const QubitState& psi, const QubitState& phi, Complex eta);
ExperimentReport abstract_fission_report(const QuditState4& chi, Complex eta);
ExperimentReport basis_scan_report(BasisId basis, double p);
ExperimentReport fidelity_curve_report(double p_min, double p_max, int steps);
/// `source_args` are the flags that produced the observed matrix.
ExperimentReport fit_p_report(const ProbabilityMatrix& observed, BasisId basis,
                              const std::vector<std::pair<std::string, std::string>>& source_args);
/// Runs every detection pattern of `circuit`; with `dump_state` the
/// conditional states are included as canonical JSON.
ExperimentReport run_report(const Circuit& circuit, const SlotValues& slots,
                            const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& slot_args,
                            bool dump_state);

// ---------------------------------------------------------------------------
// Verification suite

struct VerifyOptions {
  std::uint64_t seed = 12345;
  double tolerance = kDefaultTolerance;
  /// Gives the second abstract CNOT a different eta.
  bool inject_eta_mismatch = false;
};

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_verify(const VerifyOptions& options);
ExperimentReport verify_report(const std::vector<CheckResult>& results,
                               const VerifyOptions& options);

}  // namespace fockfuse
