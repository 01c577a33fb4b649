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

#include <cmath>
#include "json.hpp"

#include "fockfuse/distinguishability.hpp"

namespace fockfuse {
namespace {

using Entries = ProbabilityMatrix::Entries;

constexpr double kTol = 1e-10;

/// Closed-form matrices with row-normalized off-diagonals, written out
/// independently of the library.
Entries closed_form_oracle(BasisId basis, double p) {
  const double q = 1.0 - p;
  switch (basis) {
    case BasisId::I: {
      const double d = 12.0 - 8.0 * p, a = (3.0 + p) / d, b = 3.0 * q / d;
      return Entries{{{a, b, b, b}, {0, 1, 0, 0}, {0, 0, 1, 0}, {b, b, b, a}}};
    }
    case BasisId::II: {
      const double d = 9.0 - 5.0 * p, a = (3.0 + p) / d, b = 3.0 * q / d;
      return Entries{{{a, b, 0, b}, {b, a, 0, b}, {0, b, a, b}, {0, b, b, a}}};
    }
    case BasisId::III: {
      const double d = 4.0 * (9.0 - 5.0 * p);
      const double a = (15.0 + p) / d, e = (21.0 - 5.0 * p) / d, b = 3.0 * q / d, c = 9.0 * q / d;
      return Entries{{{a, b, c, c}, {b, a, c, c}, {b, b, e, c}, {b, b, c, e}}};
    }
    case BasisId::IV: {
      const double d1 = 6.0 - 2.0 * p, d2 = 12.0 - 8.0 * p;
      return Entries{{{(3 + p) / d1, 0, 3 * q / d1, 0},
                      {0, (3 + p) / d2, 9 * q / d2, 0},
                      {0, 3 * q / d2, 2 * (3 - p) / d2, 3 * q / d2},
                      {0, 0, 3 * q / d1, (3 + p) / d1}}};
    }
  }
  return {};
}

double max_diff(const ProbabilityMatrix& m, const Entries& e) {
  return m.max_abs_diff(ProbabilityMatrix(e));
}

double mean_diagonal(const Entries& e) { return (e[0][0] + e[1][1] + e[2][2] + e[3][3]) / 4.0; }

TEST(DistModelTest, ThreePhotonFraction) {
  EXPECT_NEAR(DistModel(0.77).r(), 1.54 / 2.23, 1e-15);
  EXPECT_NEAR(DistModel(0.77).r(), 0.690582959, 1e-9);
  EXPECT_EQ(DistModel(0.0).r(), 0.0);
  EXPECT_EQ(DistModel(1.0).r(), 1.0);
  EXPECT_THROW(DistModel(-0.1), std::invalid_argument);
  EXPECT_THROW(DistModel(1.1), std::invalid_argument);
  EXPECT_THROW(DistModel(std::nan("")), std::invalid_argument);
}

TEST(BasisTest, NamesAndParsing) {
  for (BasisId b : kAllBases) EXPECT_EQ(parse_basis(to_string(b)), b);
  EXPECT_EQ(parse_basis("III"), BasisId::III);
  EXPECT_THROW(parse_basis("v"), std::invalid_argument);
}

TEST(BasisTest, InputsAndOutputsAreOrthonormal) {
  for (BasisId b : kAllBases) {
    auto outs = basis_outputs(b);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(fidelity(outs[static_cast<std::size_t>(i)].vector, outs[static_cast<std::size_t>(j)].vector),
                    i == j ? 1.0 : 0.0, kTol);
      }
    }
    auto ins = basis_inputs(b);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        auto x = QuditState4::product(ins[static_cast<std::size_t>(i)].t, ins[static_cast<std::size_t>(i)].c);
        auto y = QuditState4::product(ins[static_cast<std::size_t>(j)].t, ins[static_cast<std::size_t>(j)].c);
        EXPECT_NEAR(fidelity(x, y), 0.0, kTol);
      }
    }
  }
  EXPECT_EQ(basis_inputs(BasisId::II)[1].label, "H_t -_c");
  EXPECT_EQ(basis_outputs(BasisId::III)[2].label, "H_t-");
}

TEST(ProbabilityMatrixTest, Basics) {
  EXPECT_THROW(ProbabilityMatrix(Entries{{{-1, 0, 0, 0}}}), std::invalid_argument);
  ProbabilityMatrix m(Entries{{{1, 1, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 1}, {1, 1, 1, 1}}});
  EXPECT_EQ(m.sum(), 12.0);
  EXPECT_EQ(m.trace(), 7.0);
  EXPECT_EQ(m.row_sum(2), 4.0);
  EXPECT_EQ(m.row_normalized()(2, 2), 0.75);
  EXPECT_EQ(m.scaled(2.0)(1, 1), 4.0);
  EXPECT_EQ(ProbabilityMatrix::identity().trace(), 4.0);
}

TEST(InputMixtureTest, BranchWeights) {
  MixedState m = build_input_mixture(0.77, QubitState(1.0, 0.0), QubitState(0.0, 1.0));
  ASSERT_EQ(m.branches().size(), 2u);
  EXPECT_NEAR(m.branches()[0].weight, 1.54 / 2.23, 1e-12);
  EXPECT_NEAR(m.branches()[1].weight, 1.0 - 1.54 / 2.23, 1e-12);
  EXPECT_EQ(build_input_mixture(1.0, QubitState(1.0, 0.0), QubitState(1.0, 0.0)).branches().size(), 1u);
}

TEST(OutputProbabilityTest, SumsOverSpectators) {
  const double s = 1.0 / std::sqrt(2.0);
  PureState st = create_photon(create_photon(PureState::vacuum(), "t1", Polarization::H), "a", Polarization::H)
                     .plus(create_photon(create_photon(PureState::vacuum(), "t2", Polarization::V), "a",
                                         Polarization::V))
                     .normalized();
  EXPECT_NEAR(output_probability(st, QuditState4({1.0, 0.0, 0.0, 0.0})), 0.5, kTol);
  // No interference between branches that differ in the spectator photon.
  EXPECT_NEAR(output_probability(st, QuditState4({s, 0.0, 0.0, s})), 0.5, kTol);
}

class SimulatedMatrixTest : public ::testing::TestWithParam<double> {};

TEST_P(SimulatedMatrixTest, BasesOneToThreeMatchClosedForms) {
  const double p = GetParam();
  for (BasisId b : {BasisId::I, BasisId::II, BasisId::III}) {
    EXPECT_LT(max_diff(simulate_basis_matrix(b, p), closed_form_oracle(b, p)), 1e-9) << to_string(b);
    EXPECT_LT(max_diff(closed_form_matrix(b, p), closed_form_oracle(b, p)), 1e-12) << to_string(b);
  }
}

TEST_P(SimulatedMatrixTest, BasisFourSharesMeanDiagonal) {
  const double p = GetParam();
  EXPECT_NEAR(basis_mean_fidelity(BasisId::IV, p), mean_diagonal(closed_form_oracle(BasisId::IV, p)), 1e-9);
  EXPECT_LT(max_diff(closed_form_matrix(BasisId::IV, p), closed_form_oracle(BasisId::IV, p)), 1e-12);
}

TEST_P(SimulatedMatrixTest, RowsAreStochastic) {
  const double p = GetParam();
  for (BasisId b : kAllBases) {
    ProbabilityMatrix m = simulate_basis_matrix(b, p);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(m.row_sum(i), 1.0, kTol);
  }
}

TEST_P(SimulatedMatrixTest, MeanFidelityEqualsClosedFormDiagonals) {
  const double p = GetParam();
  double want = 0.0;
  for (BasisId b : kAllBases) want += mean_diagonal(closed_form_oracle(b, p)) / 4.0;
  EXPECT_NEAR(simulated_mean_fidelity(p), want, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Grid, SimulatedMatrixTest, ::testing::Values(0.0, 0.25, 0.5, 0.77, 0.9, 1.0));

TEST(SimulatedMatrixTest, PerfectSourceIsIdentity) {
  for (BasisId b : kAllBases) {
    for (int branch = 0; branch < 4; ++branch) {
      EXPECT_LT(simulate_basis_matrix(b, 1.0, branch).max_abs_diff(ProbabilityMatrix::identity()), 1e-10);
    }
  }
  EXPECT_THROW(simulate_basis_matrix(BasisId::I, 0.5, 4), std::invalid_argument);
}

TEST(ClosedFormTest, PrintedReadingDiffersOnlyInBasesOneAndTwo) {
  const double p = 0.77;
  ProbabilityMatrix printed = closed_form_matrix(BasisId::I, p, MatrixReading::AsPrinted);
  EXPECT_NEAR(printed(0, 1), (3.0 - p) / (12.0 - 8.0 * p), 1e-15);
  EXPECT_NEAR(printed.row_sum(0), (3.0 + p + 3.0 * (3.0 - p)) / (12.0 - 8.0 * p), 1e-12);
  EXPECT_NEAR(closed_form_matrix(BasisId::II, p, MatrixReading::AsPrinted)(0, 1), (3.0 - p) / (9.0 - 5.0 * p),
              1e-15);
  for (BasisId b : {BasisId::III, BasisId::IV}) {
    EXPECT_EQ(closed_form_matrix(b, p, MatrixReading::AsPrinted).entries(), closed_form_matrix(b, p).entries());
  }
}

TEST(FidelityTest, ClosedFormLaw) {
  EXPECT_NEAR(average_fidelity(0.77), 3.77 / 5.15, 1e-15);
  EXPECT_NEAR(average_fidelity(0.77), 0.732038835, 1e-9);
  EXPECT_NEAR(average_fidelity(1.0), 1.0, 1e-15);
  EXPECT_NEAR(average_fidelity(0.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(basis_mean_fidelity(BasisId::II, 0.0), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(simulate_basis_matrix(BasisId::II, 0.0)(0, 0), 1.0 / 3.0, 1e-10);
  for (double p : {0.1, 0.5, 0.77}) EXPECT_NEAR(basis_mean_fidelity(BasisId::II, p), average_fidelity(p), 1e-9);
}

TEST(SimilarityTest, KnownValues) {
  ProbabilityMatrix uniform(Entries{{{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}}});
  EXPECT_NEAR(similarity(ProbabilityMatrix::identity(), uniform), 0.25, 1e-15);
  EXPECT_NEAR(similarity(uniform, uniform.scaled(7.0)), 1.0, 1e-15);
  EXPECT_EQ(similarity(closed_form_matrix(BasisId::III, 0.3), closed_form_matrix(BasisId::III, 0.3)), 1.0);
  EXPECT_THROW(similarity(ProbabilityMatrix(), uniform), std::invalid_argument);
  ProbabilityMatrix a = closed_form_matrix(BasisId::II, 0.2);
  ProbabilityMatrix b = closed_form_matrix(BasisId::II, 0.9);
  EXPECT_NEAR(similarity(a, b), similarity(b, a), 1e-15);
  EXPECT_LT(similarity(a, b), 1.0);
}

double brute_force_fit(const ProbabilityMatrix& observed, BasisId basis) {
  double best_p = 0.0, best_s = -1.0;
  for (int k = 0; k <= 100000; ++k) {
    const double p = k / 100000.0;
    const double s = similarity(observed, ProbabilityMatrix(closed_form_oracle(basis, p)));
    if (s > best_s) {
      best_s = s;
      best_p = p;
    }
  }
  return best_p;
}

TEST(FitTest, RecoversOffGridParameter) {
  for (BasisId b : kAllBases) {
    for (double p : {0.123456, 0.4321, 0.77, 0.987654}) {
      EXPECT_NEAR(fit_p(closed_form_matrix(b, p).scaled(250.0), b), p, 1e-3) << to_string(b) << " " << p;
    }
  }
}

TEST(FitTest, EdgesOfTheRange) {
  EXPECT_NEAR(fit_p(closed_form_matrix(BasisId::II, 1.0), BasisId::II), 1.0, 1e-3);
  EXPECT_NEAR(fit_p(closed_form_matrix(BasisId::II, 0.0), BasisId::II), 0.0, 1e-3);
}

TEST(FitTest, PerturbedMatrixMatchesBruteForce) {
  Entries e = closed_form_matrix(BasisId::II, 0.6).scaled(1000.0).entries();
  const double noise[4][4] = {{12, -7, 3, 5}, {-4, 9, 1, -11}, {2, 6, -8, 4}, {0, -3, 10, 7}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) e[i][j] = std::max(0.0, e[i][j] + noise[i][j]);
  }
  ProbabilityMatrix observed(e);
  EXPECT_NEAR(fit_p(observed, BasisId::II), brute_force_fit(observed, BasisId::II), 2e-4);
  EXPECT_THROW(fit_p(ProbabilityMatrix(), BasisId::II), std::invalid_argument);
  EXPECT_THROW(fit_p(observed, BasisId::II, 0.0), std::invalid_argument);
}

TEST(SerializationTest, CsvLayout) {
  std::string csv = to_csv(closed_form_matrix(BasisId::I, 1.0), BasisId::I);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "input,H_t1,V_t1,H_t2,V_t2");
  EXPECT_NE(csv.find("\nH_t H_c,1,0,0,0\n"), std::string::npos) << csv;
}

TEST(SerializationTest, JsonLayout) {
  auto j = nlohmann::json::parse(to_json(closed_form_matrix(BasisId::II, 0.77), BasisId::II, 0.77));
  EXPECT_EQ(j["basis"], "ii");
  EXPECT_EQ(j["p"], 0.77);
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["columns"][0], "+_t1");
  EXPECT_NEAR(j["entries"][0][0].get<double>(), 3.77 / 5.15, 1e-11);
}

}  // namespace
}  // namespace fockfuse
