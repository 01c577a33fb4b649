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


#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "fockfuse/experiments.hpp"
#include "fockfuse/format.hpp"
#include "fockfuse/version.hpp"
#include "json.hpp"

namespace fockfuse {

namespace {

using Json = nlohmann::ordered_json;

double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Magnitudes below this are floating-point residue and print as zero.
constexpr double kDisplayFloor = 1e-14;

double snap(double v) { return std::abs(v) < kDisplayFloor ? 0.0 : v; }

std::string cell_text(const Cell& cell, int digits) {
  if (const double* v = std::get_if<double>(&cell)) return format_sig(snap(*v), digits);
  return std::get<std::string>(cell);
}

Json cell_json(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return round_sig(snap(*v), 12);
  return std::get<std::string>(cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "# " << report.name << "\n";
  out << "command: " << report.command() << "\n";
  out << "version: " << kVersion << "\n";
  for (const auto& table : report.tables) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.columns);
    for (const auto& row : table.rows) {
      std::vector<std::string> text;
      for (const auto& c : row) text.push_back(cell_text(c, 6));
      cells.push_back(std::move(text));
    }
    std::vector<std::size_t> width(table.columns.size(), 0);
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    }
    out << "\n" << table.title << "\n";
    for (const auto& row : cells) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::string field = row[i];
        if (i + 1 < row.size()) field.resize(std::max(field.size(), width[i]), ' ');
        line += field;
        if (i + 1 < row.size()) line += "  ";
      }
      out << "  " << line << "\n";
    }
  }
  if (!report.references.empty()) {
    out << "\nreferences\n";
    for (const auto& r : report.references) {
      out << "  " << r.name << " = " << format_sig(r.value, 6);
      if (r.uncertainty > 0.0) out << " +/- " << format_sig(r.uncertainty, 6);
      out << "  (" << r.description << ")\n";
    }
  }
  if (!report.notes.empty()) {
    out << "\nnotes\n";
    for (const auto& n : report.notes) out << "  - " << n << "\n";
  }
  return out.str();
}

std::string render_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "# report," << csv_field(report.name) << "\n";
  out << "# command," << csv_field(report.command()) << "\n";
  out << "# version," << kVersion << "\n";
  for (const auto& table : report.tables) {
    out << "# table," << csv_field(table.title) << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << csv_field(table.columns[i]);
    }
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << csv_field(cell_text(row[i], 12));
      }
      out << "\n";
    }
  }
  for (const auto& r : report.references) {
    out << "# reference," << csv_field(r.name) << "," << format_sig(r.value, 12) << ","
        << format_sig(r.uncertainty, 12) << "\n";
  }
  for (const auto& n : report.notes) out << "# note," << csv_field(n) << "\n";
  return out.str();
}

std::string render_json(const ExperimentReport& report) {
  Json j;
  j["report"] = report.name;
  j["version"] = std::string(kVersion);
  j["command"] = report.command();
  Json params = Json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  j["parameters"] = params;
  Json tables = Json::array();
  for (const auto& table : report.tables) {
    Json t;
    t["title"] = table.title;
    t["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json r = Json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      rows.push_back(r);
    }
    t["rows"] = rows;
    tables.push_back(t);
  }
  j["tables"] = tables;
  Json refs = Json::array();
  for (const auto& r : report.references) {
    refs.push_back(Json{{"name", r.name},
                        {"value", round_sig(r.value, 12)},
                        {"uncertainty", round_sig(r.uncertainty, 12)},
                        {"description", r.description}});
  }
  j["references"] = refs;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

const char* const kQuditLabels[4] = {"H_t1", "V_t1", "H_t2", "V_t2"};
const char* const kSplitLabels[4] = {"H_c H_t", "H_c V_t", "V_c H_t", "V_c V_t"};

Table amplitude_table(const std::string& title, const QuditState4& q,
                      const char* const labels[4]) {
  Table t{title, {"basis", "re", "im", "probability"}, {}};
  for (int i = 0; i < 4; ++i) {
    t.rows.push_back({std::string(labels[i]), q[i].real(), q[i].imag(), std::norm(q[i])});
  }
  return t;
}

std::vector<Complex> to_vector(const QuditState4& q) {
  return {q.amps().begin(), q.amps().end()};
}

Table matrix_table(const std::string& title, const ProbabilityMatrix& m, BasisId basis) {
  Table t{title, {"input"}, {}};
  for (const auto& o : basis_outputs(basis)) t.columns.push_back(o.label);
  t.columns.push_back("row sum");
  const auto inputs = basis_inputs(basis);
  for (int i = 0; i < 4; ++i) {
    std::vector<Cell> row{inputs[static_cast<std::size_t>(i)].label};
    for (int j = 0; j < 4; ++j) row.emplace_back(m(i, j));
    row.emplace_back(m.row_sum(i));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Reference fidelity_reference() {
  return Reference{"measured_mean_fidelity", ReferenceConstants::kMeasuredMeanFidelity,
                   ReferenceConstants::kMeasuredMeanFidelityError,
                   "measured average fusion fidelity over the 16 test inputs"};
}

Reference similarity_reference() {
  return Reference{"measured_similarity", ReferenceConstants::kMeasuredSimilarity,
                   ReferenceConstants::kMeasuredSimilarityError,
                   "measured similarity between observed and ideal matrices"};
}

Reference fitted_p_reference() {
  return Reference{"fitted_p", ReferenceConstants::kFittedP, 0.0,
                   "indistinguishability fitted to the measured basis-ii matrix"};
}

}  // namespace

// ---------------------------------------------------------------------------
// Rendering

std::string ExperimentReport::command() const {
  std::string out = "fockfuse " + name;
  for (const auto& [k, v] : parameters) {
    if (k.empty()) {
      out += " " + v;
    } else if (v.empty()) {
      out += " --" + k;
    } else {
      out += " --" + k + " " + v;
    }
  }
  return out;
}

OutputFormat parse_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(text) +
                              "' (expected table, csv or json)");
}

std::string render(const ExperimentReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table:
      return render_table(report);
    case OutputFormat::Csv:
      return render_csv(report);
    case OutputFormat::Json:
      return render_json(report);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parsing

Complex parse_complex(std::string_view text) {
  std::string compact;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
  }
  std::string_view s = compact;
  if (s.empty()) throw std::invalid_argument("empty amplitude");
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s), 0.0};
  s.remove_suffix(1);
  std::size_t split_at = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_part = [](std::string_view im) {
    if (im.empty() || im == "+") return 1.0;
    if (im == "-") return -1.0;
    return parse_double(im);
  };
  if (split_at == std::string_view::npos) return {0.0, imag_part(s)};
  return {parse_double(s.substr(0, split_at)), imag_part(s.substr(split_at))};
}

std::vector<Complex> parse_amplitudes(std::string_view text) {
  std::vector<Complex> out;
  for (auto part : split(text, ',')) {
    try {
      out.push_back(parse_complex(part));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("malformed amplitude '" + std::string(trim(part)) + "' in '" +
                                  std::string(text) + "'");
    }
  }
  return out;
}

std::string format_amplitudes(const std::vector<Complex>& amps) {
  std::string out;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i) out += ',';
    const Complex a = amps[i];
    if (a.imag() == 0.0) {
      out += format_shortest(a.real());
    } else if (a.real() == 0.0) {
      out += format_shortest(a.imag()) + "i";
    } else {
      out += format_shortest(a.real());
      out += a.imag() < 0.0 ? "-" : "+";
      out += format_shortest(std::abs(a.imag())) + "i";
    }
  }
  return out;
}

QubitState parse_qubit(std::string_view text) {
  auto amps = parse_amplitudes(text);
  if (amps.size() != 2) {
    throw std::invalid_argument("a qubit needs 2 amplitudes, got " + std::to_string(amps.size()));
  }
  return QubitState::normalized(amps[0], amps[1]);
}

QuditState4 parse_qudit(std::string_view text) {
  auto amps = parse_amplitudes(text);
  if (amps.size() != 4) {
    throw std::invalid_argument("a four-level state needs 4 amplitudes, got " +
                                std::to_string(amps.size()));
  }
  return QuditState4::normalized({amps[0], amps[1], amps[2], amps[3]});
}

ProbabilityMatrix parse_matrix_csv(std::string_view text) {
  ProbabilityMatrix::Entries entries{};
  std::size_t row = 0;
  for (auto raw : split(text, '\n')) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, ',');
    std::vector<double> values;
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) {
      try {
        values.push_back(parse_double(trim(fields[i])));
      } catch (const std::invalid_argument&) {
        // A leading label column is allowed.
        numeric = i == 0;
      }
    }
    if (!numeric || values.size() < 4) {
      if (row == 0) continue;  // header line
      throw std::invalid_argument("matrix row needs 4 numbers: '" + std::string(line) + "'");
    }
    for (std::size_t j = 0; j < 4; ++j) entries[row][j] = values[j];
    if (++row == 4) break;
  }
  if (row != 4) throw std::invalid_argument("matrix needs 4 rows, got " + std::to_string(row));
  return ProbabilityMatrix(entries);
}

double tolerance_from_env() {
  const char* env = std::getenv("FOCKFUSE_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTolerance;
  double tol = parse_double(trim(env));
  if (!(tol > 0.0)) throw std::invalid_argument("FOCKFUSE_TOL must be positive");
  return tol;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

ExperimentReport fusion_branches(ExperimentReport report, const std::vector<ConditionalOutcome>& outs,
                                 const QuditState4& target) {
  Table branches{"detection branches",
                 {"pattern", "probability", "fidelity before correction", "fidelity after correction"},
                 {}};
  double total = 0.0;
  for (const auto& o : outs) {
    total += o.probability;
    branches.rows.push_back({o.pattern.label(), o.probability,
                             fidelity(fused_qudit(o.state), target),
                             fidelity(fused_qudit(apply_fusion_feed_forward(o)), target)});
  }
  branches.rows.push_back({std::string("total"), total, std::string(""), std::string("")});
  report.tables.push_back(std::move(branches));
  report.tables.push_back(
      amplitude_table("fused photon (a=H c=H branch)", fused_qudit(outs.front().state), kQuditLabels));
  report.tables.push_back(amplitude_table("target", target, kQuditLabels));
  return report;
}

}  // namespace

ExperimentReport fuse_report(const QubitState& psi, const QubitState& phi) {
  ExperimentReport r;
  r.name = "fuse";
  r.parameters = {{"psi", format_amplitudes({psi.a0(), psi.a1()})},
                  {"phi", format_amplitudes({phi.a0(), phi.a1()})}};
  return fusion_branches(std::move(r), run_fusion(psi, phi), QuditState4::product(psi, phi));
}

ExperimentReport fuse_entangled_report(const QuditState4& joint) {
  ExperimentReport r;
  r.name = "fuse";
  r.parameters = {{"entangled", format_amplitudes(to_vector(joint))}};
  r.notes.push_back("input amplitudes are indexed 2*i_t + i_c over (H_t H_c, H_t V_c, V_t H_c, V_t V_c)");
  return fusion_branches(std::move(r), run_fusion(joint), joint);
}

ExperimentReport fission_report(const QuditState4& chi) {
  ExperimentReport r;
  r.name = "fission";
  r.parameters = {{"qudit", format_amplitudes(to_vector(chi))}};
  auto outs = run_fission(chi);
  Table branches{"detection branches",
                 {"pattern", "probability", "fidelity before correction", "fidelity after correction"},
                 {}};
  double total = 0.0;
  for (const auto& o : outs) {
    total += o.probability;
    // Uncorrected c' branches carry the control on c', so only the
    // corrected state is compared for them.
    Cell before = std::string("-");
    if (o.pattern.find("c") && o.pattern.find("c")->kind != ModeRequirement::Kind::Empty) {
      before = fidelity(split_qubits(o.state), chi);
    }
    branches.rows.push_back({o.pattern.label(), o.probability, before,
                             fidelity(split_qubits(apply_fission_feed_forward(o)), chi)});
  }
  branches.rows.push_back({std::string("total"), total, std::string(""), std::string("")});
  r.tables.push_back(std::move(branches));
  r.tables.push_back(amplitude_table("split photons (a=H, exit c)", split_qubits(outs.front().state),
                                     kSplitLabels));
  r.notes.push_back("output amplitudes are indexed 2*i_c + i_t");
  return r;
}

ExperimentReport abstract_fuse_report(const QubitState& psi, const QubitState& phi, Complex eta) {
  ExperimentReport r;
  r.name = "abstract-fuse";
  r.parameters = {{"psi", format_amplitudes({psi.a0(), psi.a1()})},
                  {"phi", format_amplitudes({phi.a0(), phi.a1()})},
                  {"eta", format_amplitudes({eta})}};
  AbstractFusion f = abstract_fuse(psi, phi, eta);
  QuditState4 target = QuditState4::product(psi, phi);
  QuditState4 corrected = correct_minus_branch(f.minus.state);
  r.tables.push_back(Table{"erasure branches",
                           {"branch", "probability", "fidelity"},
                           {{std::string("plus"), f.plus.probability, fidelity(f.plus.state, target)},
                            {std::string("minus (corrected)"), f.minus.probability,
                             fidelity(corrected, target)}}});
  r.tables.push_back(amplitude_table("plus branch", f.plus.state, kQuditLabels));
  r.tables.push_back(amplitude_table("minus branch", f.minus.state, kQuditLabels));
  return r;
}

ExperimentReport abstract_fission_report(const QuditState4& chi, Complex eta) {
  ExperimentReport r;
  r.name = "abstract-fission";
  r.parameters = {{"qudit", format_amplitudes(to_vector(chi))}, {"eta", format_amplitudes({eta})}};
  RailOutcome f = abstract_fission(chi, eta);
  r.tables.push_back(Table{"success branch",
                           {"probability", "fidelity"},
                           {{f.probability, fidelity(f.state, chi)}}});
  r.tables.push_back(amplitude_table("split photons", f.state, kSplitLabels));
  r.notes.push_back("output amplitudes are indexed 2*i_c + i_t");
  return r;
}

ExperimentReport basis_scan_report(BasisId basis, double p) {
  ExperimentReport r;
  r.name = "basis-scan";
  r.parameters = {{"basis", std::string(to_string(basis))}, {"p", format_shortest(p)}};
  ProbabilityMatrix sim = simulate_basis_matrix(basis, p);
  ProbabilityMatrix closed = closed_form_matrix(basis, p);
  const std::string tag = "basis " + std::string(to_string(basis)) + ", p=" + format_sig(p, 6);
  r.tables.push_back(matrix_table("simulated (" + tag + ")", sim, basis));
  r.tables.push_back(matrix_table("closed form (" + tag + ")", closed, basis));
  const double diff = sim.max_abs_diff(closed);
  r.tables.push_back(Table{"comparison",
                           {"quantity", "value"},
                           {{std::string("similarity"), similarity(sim, closed)},
                            {std::string("max |simulated - closed form|"), diff},
                            {std::string("simulated mean fidelity"), sim.trace() / 4.0},
                            {std::string("closed-form mean fidelity"), closed.trace() / 4.0}}});
  if (basis == BasisId::I || basis == BasisId::II) {
    ProbabilityMatrix printed = closed_form_matrix(basis, p, MatrixReading::AsPrinted);
    r.tables.push_back(matrix_table("printed off-diagonals 3-p (" + tag + ")", printed, basis));
    r.notes.push_back("off-diagonal entries use 3(1-p); the printed 3-p form gives row sums of " +
                      format_sig(printed.row_sum(0), 6) + " here and is row-stochastic only at p=0");
  }
  if (diff > kDefaultTolerance) {
    r.notes.push_back("simulation and closed form differ by up to " + format_sig(diff, 6) +
                      " for this basis");
  }
  return r;
}

ExperimentReport fidelity_curve_report(double p_min, double p_max, int steps) {
  if (!(0.0 <= p_min && p_min <= p_max && p_max <= 1.0)) {
    throw std::invalid_argument("need 0 <= p-min <= p-max <= 1");
  }
  if (steps < 2) throw std::invalid_argument("steps must be at least 2");
  ExperimentReport r;
  r.name = "fidelity-curve";
  r.parameters = {{"p-min", format_shortest(p_min)},
                  {"p-max", format_shortest(p_max)},
                  {"steps", std::to_string(steps)}};
  Table t{"average fidelity",
          {"p", "formula", "simulated mean", "basis i", "basis ii", "basis iii", "basis iv"},
          {}};
  for (int k = 0; k < steps; ++k) {
    double p = k == steps - 1 ? p_max : p_min + (p_max - p_min) * k / (steps - 1);
    std::vector<Cell> row{p, average_fidelity(p)};
    std::vector<double> means;
    for (BasisId b : kAllBases) means.push_back(basis_mean_fidelity(b, p));
    double mean = 0.0;
    for (double m : means) mean += m / 4.0;
    row.emplace_back(mean);
    for (double m : means) row.emplace_back(m);
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  r.references.push_back(fidelity_reference());
  r.notes.push_back("the formula column is (3+p)/(9-5p); the simulated mean averages the 16 "
                    "diagonal entries of the four simulated matrices");
  return r;
}

ExperimentReport fit_p_report(const ProbabilityMatrix& observed, BasisId basis,
                              const std::vector<std::pair<std::string, std::string>>& source_args) {
  ExperimentReport r;
  r.name = "fit-p";
  r.parameters = {{"basis", std::string(to_string(basis))}};
  for (const auto& a : source_args) r.parameters.push_back(a);
  double p = fit_p(observed, basis);
  r.tables.push_back(matrix_table("observed", observed, basis));
  r.tables.push_back(Table{"fit",
                           {"quantity", "value"},
                           {{std::string("fitted p"), p},
                            {std::string("similarity at fit"),
                             similarity(observed, closed_form_matrix(basis, p))},
                            {std::string("r(p)"), DistModel(p).r()}}});
  r.tables.push_back(matrix_table("closed form at fitted p", closed_form_matrix(basis, p), basis));
  r.references.push_back(fitted_p_reference());
  r.references.push_back(similarity_reference());
  return r;
}

ExperimentReport run_report(const Circuit& circuit, const SlotValues& slots,
                            const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& slot_args,
                            bool dump_state) {
  ExperimentReport r;
  r.name = "run";
  r.parameters.push_back({"", path});
  for (const auto& a : slot_args) r.parameters.push_back(a);
  if (dump_state) r.parameters.push_back({"dump-state", ""});
  auto outs = run_circuit(circuit, circuit.prepare(slots));
  Table t{"detection patterns", {"pattern", "probability"}, {}};
  double total = 0.0;
  for (const auto& o : outs) {
    t.rows.push_back({o.pattern.label(), o.probability});
    total += o.probability;
  }
  t.rows.push_back({std::string("total"), total});
  r.tables.push_back(std::move(t));
  if (dump_state) {
    Table s{"conditional states", {"pattern", "state"}, {}};
    for (const auto& o : outs) s.rows.push_back({o.pattern.label(), to_json(o.state)});
    r.tables.push_back(std::move(s));
  }
  return r;
}

}  // namespace fockfuse
