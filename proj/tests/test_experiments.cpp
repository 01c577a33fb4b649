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


#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "fockfuse/experiments.hpp"
#include "json.hpp"

namespace fockfuse {
namespace {

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (value) {
      ::setenv(name, value, 1);
    } else {
      ::unsetenv(name);
    }
  }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

TEST(ParseComplexTest, Forms) {
  EXPECT_EQ(parse_complex("0.5"), Complex(0.5, 0.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("0.3+0.4i"), Complex(0.3, 0.4));
  EXPECT_EQ(parse_complex("1e-3-2i"), Complex(1e-3, -2.0));
  EXPECT_EQ(parse_complex("2.5i"), Complex(0.0, 2.5));
  for (const char* bad : {"", "abc", "1+", "1+2", "1i+2", "0.5x"}) {
    EXPECT_THROW(parse_complex(bad), std::invalid_argument) << bad;
  }
}

TEST(ParseAmplitudesTest, ListsAndRoundTrip) {
  auto amps = parse_amplitudes("1, -i ,0.5+0.5i");
  ASSERT_EQ(amps.size(), 3u);
  EXPECT_EQ(amps[1], Complex(0.0, -1.0));
  std::vector<Complex> v{{0.1, -0.2}, {1.0 / 3.0, 0.0}, {0.0, 2.0 / 7.0}};
  EXPECT_EQ(parse_amplitudes(format_amplitudes(v)), v);
}

TEST(ParseStatesTest, NormalizeAndValidateLength) {
  QubitState q = parse_qubit("1,1");
  EXPECT_NEAR(std::abs(q[0]) , 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(parse_qubit("1,0,0"), std::invalid_argument);
  EXPECT_THROW(parse_qubit("0,0"), std::invalid_argument);
  EXPECT_NEAR(std::abs(parse_qudit("1,0,0,1")[3]), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(parse_qudit("1,0"), std::invalid_argument);
}

TEST(ParseMatrixCsvTest, PlainAndLabelled) {
  ProbabilityMatrix plain = parse_matrix_csv("1,2,3,4\n5,6,7,8\n9,10,11,12\n13,14,15,16\n");
  EXPECT_EQ(plain(3, 2), 15.0);
  ProbabilityMatrix labelled = parse_matrix_csv(
      "# comment\ninput,a,b,c,d\nr0,1,0,0,0\nr1,0,1,0,0\nr2,0,0,1,0\nr3,0,0,0,1\n");
  EXPECT_EQ(labelled.entries(), ProbabilityMatrix::identity().entries());
  EXPECT_THROW(parse_matrix_csv("1,2,3,4\n"), std::invalid_argument);
  EXPECT_THROW(parse_matrix_csv("1,2,3\n1,2,3\n1,2,3\n1,2,3\n"), std::invalid_argument);
}

TEST(ParseMatrixCsvTest, ReadsBasisScanOutput) {
  ExperimentReport r = basis_scan_report(BasisId::II, 0.55);
  ProbabilityMatrix m = parse_matrix_csv(render(r, OutputFormat::Csv));
  EXPECT_LT(m.max_abs_diff(simulate_basis_matrix(BasisId::II, 0.55)), 1e-11);
}

TEST(ToleranceTest, Environment) {
  {
    ScopedEnv env("FOCKFUSE_TOL", nullptr);
    EXPECT_EQ(tolerance_from_env(), kDefaultTolerance);
  }
  {
    ScopedEnv env("FOCKFUSE_TOL", "1e-6");
    EXPECT_EQ(tolerance_from_env(), 1e-6);
  }
  for (const char* bad : {"-1", "0", "abc"}) {
    ScopedEnv env("FOCKFUSE_TOL", bad);
    EXPECT_THROW(tolerance_from_env(), std::invalid_argument) << bad;
  }
}

TEST(FormatTest, Parsing) {
  EXPECT_EQ(parse_format("table"), OutputFormat::Table);
  EXPECT_EQ(parse_format("csv"), OutputFormat::Csv);
  EXPECT_EQ(parse_format("json"), OutputFormat::Json);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(RenderTest, DeterministicAndReproducible) {
  ExperimentReport r = fuse_report(QubitState(1.0, 0.0), QubitState(0.6, 0.8));
  for (OutputFormat f : {OutputFormat::Table, OutputFormat::Csv, OutputFormat::Json}) {
    EXPECT_EQ(render(r, f), render(fuse_report(QubitState(1.0, 0.0), QubitState(0.6, 0.8)), f));
  }
  EXPECT_EQ(r.command().rfind("fockfuse fuse --psi ", 0), 0u) << r.command();
  EXPECT_NE(render(r, OutputFormat::Table).find("version: "), std::string::npos);
}

TEST(RenderTest, JsonStructure) {
  auto j = nlohmann::json::parse(render(basis_scan_report(BasisId::I, 0.77), OutputFormat::Json));
  EXPECT_EQ(j["report"], "basis-scan");
  EXPECT_EQ(j["parameters"]["p"], "0.77");
  ASSERT_FALSE(j["tables"].empty());
  EXPECT_EQ(j["tables"][0]["rows"].size(), 4u);
}

TEST(ReportsTest, FuseProbabilities) {
  auto j = nlohmann::json::parse(render(fuse_report(QubitState(1.0, 0.0), QubitState(0.6, 0.8)), OutputFormat::Json));
  const auto& rows = j["tables"][0]["rows"];
  ASSERT_EQ(rows.size(), 5u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(rows[i][1].get<double>(), 1.0 / 32.0, 1e-12);
  EXPECT_NEAR(rows[4][1].get<double>(), 0.125, 1e-12);
}

TEST(ReportsTest, AllReportsRender) {
  const QuditState4 bell = QuditState4::normalized({1.0, 0.0, 0.0, 1.0});
  std::vector<ExperimentReport> reports{
      fuse_entangled_report(bell),
      fission_report(bell),
      abstract_fuse_report(QubitState(1.0, 0.0), QubitState(0.0, 1.0), 0.8),
      abstract_fission_report(bell, 1.0),
      fidelity_curve_report(0.0, 1.0, 4),
      fit_p_report(closed_form_matrix(BasisId::II, 0.77), BasisId::II, {{"p", "0.77"}}),
      run_report(build_fusion_circuit(), SlotValues{{{"psi", QubitState(1.0, 0.0)}, {"phi", QubitState(1.0, 0.0)}}, {}, {}},
                 "fusion.lop", {{"slot", "psi=1,0"}, {"slot", "phi=1,0"}}, true),
  };
  for (const auto& r : reports) {
    for (OutputFormat f : {OutputFormat::Table, OutputFormat::Csv, OutputFormat::Json}) {
      EXPECT_FALSE(render(r, f).empty()) << r.name;
    }
    EXPECT_NO_THROW(nlohmann::json::parse(render(r, OutputFormat::Json))) << r.name;
  }
  EXPECT_THROW(fidelity_curve_report(0.5, 0.2, 3), std::invalid_argument);
}

TEST(ReportsTest, FitReportRecoversParameter) {
  auto j = nlohmann::json::parse(
      render(fit_p_report(closed_form_matrix(BasisId::II, 0.77), BasisId::II, {{"p", "0.77"}}), OutputFormat::Json));
  bool found = false;
  for (const auto& t : j["tables"]) {
    for (const auto& row : t["rows"]) {
      if (row[0] == "fitted p") {
        EXPECT_NEAR(row[1].get<double>(), 0.77, 1e-3);
        found = true;
      }
    }
  }
  EXPECT_TRUE(found) << j.dump(2);
}

TEST(VerifyTest, ExpectedOutcomes) {
  auto results = run_verify(VerifyOptions{});
  EXPECT_GE(results.size(), 30u);
  for (const auto& r : results) {
    const bool known_gap = r.name.find("basis iv simulation") != std::string::npos ||
                           r.name.find("mean diagonal equals") != std::string::npos;
    EXPECT_EQ(r.passed, !known_gap) << r.module << ": " << r.name << " " << r.detail;
  }
}

TEST(VerifyTest, InjectedEtaMismatchIsDetected) {
  VerifyOptions opts;
  opts.inject_eta_mismatch = true;
  int rails_failures = 0;
  for (const auto& r : run_verify(opts)) rails_failures += !r.passed && r.module == "logical-gates";
  EXPECT_GT(rails_failures, 0);
}

TEST(VerifyTest, SeedDeterminism) {
  auto a = run_verify(VerifyOptions{});
  auto b = run_verify(VerifyOptions{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].detail, b[i].detail);
}

}  // namespace
}  // namespace fockfuse
