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

#include <string>

#include "fockfuse/circuit.hpp"

namespace fockfuse {
namespace {

std::string source_path(const std::string& rel) { return std::string(FOCKFUSE_SOURCE_DIR) + "/" + rel; }

ParseError parse_error(std::string_view text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return ParseError(0, 0, "");
}

TEST(DslTest, GoldenFilesMatchBuilders) {
  EXPECT_EQ(load_circuit(source_path("data/fusion.lop")), build_fusion_circuit());
  EXPECT_EQ(load_circuit(source_path("data/fission.lop")), build_fission_circuit());
}

TEST(DslTest, RoundTripThroughText) {
  for (const Circuit& c : {build_fusion_circuit(), build_fission_circuit()}) {
    std::string text = to_dsl(c);
    EXPECT_EQ(parse_circuit(text), c);
    EXPECT_EQ(to_dsl(parse_circuit(text)), text);
  }
}

TEST(DslTest, ParsedFusionRunsLikeBuilder) {
  Circuit c = load_circuit(source_path("data/fusion.lop"));
  SlotValues v;
  v.qubits["psi"] = QubitState::normalized(1.0, Complex(0.0, 2.0));
  v.qubits["phi"] = QubitState::normalized(3.0, -1.0);
  auto parsed = run_circuit(c, c.prepare(v));
  auto built = run_fusion(v.qubits["psi"], v.qubits["phi"]);
  ASSERT_EQ(parsed.size(), built.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_NEAR(parsed[i].probability, built[i].probability, 1e-15);
    EXPECT_NEAR(fidelity(parsed[i].state, built[i].state), 1.0, 1e-12);
  }
}

TEST(DslTest, CommentsAndBlankLines) {
  Circuit c = parse_circuit("# header\n\nmode a  # trailing\nphoton a V\n\nhwp a 45\ndetect a H\n");
  EXPECT_EQ(c.declared_modes(), std::vector<ModeId>{"a"});
  EXPECT_EQ(c.elements().size(), 1u);
  auto outs = run_circuit(c, c.prepare({}));
  EXPECT_NEAR(outs[0].probability, 1.0, 1e-12);
}

TEST(DslTest, TaggedPhotonAndPooledDetection) {
  Circuit c = parse_circuit(
      "mode a\nmode t\nphoton a H A\nphoton t V\nunfold t t1 t2\n"
      "detect a H t1+t2 any\ndetect a none\n");
  ASSERT_EQ(c.inputs().size(), 2u);
  EXPECT_EQ(std::get<PhotonInput>(c.inputs()[0]).tag, DistTag::A);
  ASSERT_EQ(c.patterns().size(), 2u);
  EXPECT_EQ(c.patterns()[0].requirements()[1].modes, (std::vector<ModeId>{"t1", "t2"}));
}

struct MalformedCase {
  const char* file;
  int line;
  int column;
  const char* fragment;
};

class MalformedFileTest : public ::testing::TestWithParam<MalformedCase> {};

TEST_P(MalformedFileTest, ReportsPosition) {
  const MalformedCase& mc = GetParam();
  try {
    load_circuit(source_path(std::string("tests/data/malformed/") + mc.file));
    FAIL() << "no error for " << mc.file;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), mc.line);
    EXPECT_EQ(e.column(), mc.column);
    EXPECT_NE(e.reason().find(mc.fragment), std::string::npos) << e.reason();
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(mc.line)), std::string::npos);
  }
}

INSTANTIATE_TEST_SUITE_P(Files, MalformedFileTest,
                         ::testing::Values(MalformedCase{"arity.lop", 4, 6, "expects 2 arguments"},
                                           MalformedCase{"undeclared.lop", 3, 7, "undeclared mode 'b'"},
                                           MalformedCase{"reused_mode.lop", 4, 5, "unfolded into t1/t2"},
                                           MalformedCase{"bad_number.lop", 3, 7, "expected a number"},
                                           MalformedCase{"unknown_keyword.lop", 3, 3, "unknown statement"}));

TEST(DslErrorTest, InlineCases) {
  EXPECT_EQ(parse_error("mode a\nphoton a X\n").column(), 10);
  EXPECT_EQ(parse_error("mode a\nmode a\n").line(), 2);
  EXPECT_EQ(parse_error("mode a\nqubit a s\nqubit a s\n").line(), 3);
  EXPECT_EQ(parse_error("mode a\nphoton a H\nhwp a 1\nmode b\n").line(), 4);
  EXPECT_EQ(parse_error("mode a\nphoton a H\ndetect a H\nhwp a 1\n").line(), 4);
  EXPECT_EQ(parse_error("mode a\nphoton a H\ndetect a H a V\n").column(), 12);
  EXPECT_EQ(parse_error("mode t\nphoton t H\nunfold t t1 t2\ndetect t H\n").column(), 8);
  EXPECT_EQ(parse_error("mode a\nphoton a H\ndetect a maybe\n").column(), 10);
  EXPECT_EQ(parse_error("mode a\nmode b\nphoton a H\nunfold a b c\n").line(), 4);
}

TEST(DslErrorTest, MissingFile) { EXPECT_THROW(load_circuit("/nonexistent/x.lop"), std::runtime_error); }

}  // namespace
}  // namespace fockfuse
