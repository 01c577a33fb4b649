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


#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fockfuse/experiments.hpp"
#include "fockfuse/format.hpp"
#include "fockfuse/version.hpp"

namespace {

using namespace fockfuse;

struct Common {
  std::string out;
  std::string format = "table";
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--out", common.out, "Write the report to this file instead of stdout");
  cmd->add_option("--format", common.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
}

void emit(const ExperimentReport& report, const Common& common) {
  std::string text = render(report, parse_format(common.format));
  if (common.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(common.out);
  if (!f) throw std::runtime_error("cannot write '" + common.out + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// "name=a,b" pairs for `run`; two amplitudes fill a qubit slot, four a qudit.
SlotValues parse_slots(const std::vector<std::string>& args,
                       std::vector<std::pair<std::string, std::string>>& echo) {
  SlotValues values;
  for (const auto& a : args) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("slot values look like name=a0,a1: '" + a + "'");
    }
    std::string name = a.substr(0, eq);
    auto amps = parse_amplitudes(a.substr(eq + 1));
    if (amps.size() == 2) {
      values.qubits[name] = QubitState::normalized(amps[0], amps[1]);
    } else if (amps.size() == 4) {
      values.qudits[name] = QuditState4::normalized({amps[0], amps[1], amps[2], amps[3]});
    } else {
      throw std::invalid_argument("slot '" + name + "' needs 2 or 4 amplitudes");
    }
    echo.push_back({"slot", a});
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical qubit fusion and fission simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common common;

  std::string psi = "1,0";
  std::string phi = "1,0";
  std::string entangled;
  std::string qudit = "1,0,0,0";
  std::string eta = "1";
  std::string basis = "ii";
  double p = ReferenceConstants::kFittedP;
  double p_min = 0.0;
  double p_max = 1.0;
  int steps = 21;
  std::string input_csv;
  std::string lop_path;
  std::vector<std::string> slots;
  bool dump_state = false;
  std::uint64_t seed = VerifyOptions{}.seed;
  bool inject = false;

  auto* fuse = app.add_subcommand("fuse", "Run the optical fusion apparatus");
  fuse->add_option("--psi", psi, "Target qubit amplitudes, e.g. 1,0 or 0.6,0.8i");
  fuse->add_option("--phi", phi, "Control qubit amplitudes");
  fuse->add_option("--entangled", entangled,
                   "Joint (t,c) amplitudes over HH,HV,VH,VV instead of --psi/--phi");
  add_common(fuse, common);

  auto* fission = app.add_subcommand("fission", "Run the optical fission apparatus");
  fission->add_option("--qudit", qudit, "Amplitudes over H_t1,V_t1,H_t2,V_t2");
  add_common(fission, common);

  auto* afuse = app.add_subcommand("abstract-fuse", "Dual-rail fusion with eta-CNOTs");
  afuse->add_option("--psi", psi, "Target qubit amplitudes");
  afuse->add_option("--phi", phi, "Control qubit amplitudes");
  afuse->add_option("--eta", eta, "Empty-qubit amplitude of both CNOTs");
  add_common(afuse, common);

  auto* afission = app.add_subcommand("abstract-fission", "Dual-rail fission with eta-CNOTs");
  afission->add_option("--qudit", qudit, "Four-level amplitudes");
  afission->add_option("--eta", eta, "Empty-qubit amplitude of both CNOTs");
  add_common(afission, common);

  auto* scan = app.add_subcommand("basis-scan", "Simulated and closed-form probability matrices");
  scan->add_option("--basis", basis, "i, ii, iii or iv");
  scan->add_option("--p", p, "Indistinguishability")->check(CLI::Range(0.0, 1.0));
  add_common(scan, common);

  auto* curve = app.add_subcommand("fidelity-curve", "Average fidelity against p");
  curve->add_option("--p-min", p_min)->check(CLI::Range(0.0, 1.0));
  curve->add_option("--p-max", p_max)->check(CLI::Range(0.0, 1.0));
  curve->add_option("--steps", steps)->check(CLI::PositiveNumber);
  add_common(curve, common);

  auto* fit = app.add_subcommand("fit-p", "Fit p to an observed probability matrix");
  fit->add_option("--basis", basis, "i, ii, iii or iv");
  fit->add_option("--input", input_csv, "CSV file with a 4x4 matrix");
  fit->add_option("--p", p, "Without --input, fit the closed form at this p")
      ->check(CLI::Range(0.0, 1.0));
  add_common(fit, common);

  auto* run = app.add_subcommand("run", "Run a circuit description file");
  run->add_option("file", lop_path, "Circuit file")->required();
  run->add_option("--slot", slots, "Slot value name=a0,a1 or name=a0,a1,a2,a3");
  run->add_flag("--dump-state", dump_state, "Include the conditional states");
  add_common(run, common);

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--seed", seed, "Seed of the randomized checks");
  verify->add_flag("--inject-eta-mismatch", inject,
                   "Give the two abstract CNOTs different eta values");
  add_common(verify, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fuse->parsed()) {
      if (!entangled.empty()) {
        emit(fuse_entangled_report(parse_qudit(entangled)), common);
      } else {
        emit(fuse_report(parse_qubit(psi), parse_qubit(phi)), common);
      }
    } else if (fission->parsed()) {
      emit(fission_report(parse_qudit(qudit)), common);
    } else if (afuse->parsed()) {
      emit(abstract_fuse_report(parse_qubit(psi), parse_qubit(phi), parse_complex(eta)), common);
    } else if (afission->parsed()) {
      emit(abstract_fission_report(parse_qudit(qudit), parse_complex(eta)), common);
    } else if (scan->parsed()) {
      emit(basis_scan_report(parse_basis(basis), p), common);
    } else if (curve->parsed()) {
      emit(fidelity_curve_report(p_min, p_max, steps), common);
    } else if (fit->parsed()) {
      BasisId b = parse_basis(basis);
      if (!input_csv.empty()) {
        emit(fit_p_report(parse_matrix_csv(read_file(input_csv)), b, {{"input", input_csv}}),
             common);
      } else {
        emit(fit_p_report(closed_form_matrix(b, p), b, {{"p", format_shortest(p)}}), common);
      }
    } else if (run->parsed()) {
      Circuit circuit = load_circuit(lop_path);
      std::vector<std::pair<std::string, std::string>> echo;
      SlotValues values = parse_slots(slots, echo);
      emit(run_report(circuit, values, lop_path, echo, dump_state), common);
    } else if (verify->parsed()) {
      VerifyOptions options;
      options.seed = seed;
      options.tolerance = tolerance_from_env();
      options.inject_eta_mismatch = inject;
      auto start = std::chrono::steady_clock::now();
      auto results = run_verify(options);
      double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(verify_report(results, options), common);
      std::cerr << "verify finished in " << seconds << " s\n";
      for (const auto& r : results) {
        if (!r.passed) return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
