// Copyright 2026 The gnncirc Authors
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

#include <filesystem>
#include <sstream>

#include "gnncirc/circuit_io.hpp"
#include "gnncirc/cli.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/verify.hpp"

namespace gnncirc {
namespace {

namespace fs = std::filesystem;

TEST(Generators, SameSeedSameCircuit) {
  TestSpec spec;
  spec.seed = 99;
  CircuitShape shape;
  shape.dim = 2;
  shape.activations = true;
  EXPECT_EQ(format_circuit(gen_random_circuit(spec, shape)),
            format_circuit(gen_random_circuit(spec, shape)));
  EXPECT_EQ(format_graph(gen_random_graph(spec)), format_graph(gen_random_graph(spec)));
}

TEST(Generators, CircuitsStayWithinBoundsAndAreValid) {
  Rng rng(1234);
  Bounds b;
  b.max_depth = 3;
  b.max_size = 15;
  for (int t = 0; t < 500; ++t) {
    CircuitShape shape;
    shape.dim = static_cast<unsigned>(rng.uniform(1, 3));
    shape.activations = rng.chance(1, 2);
    shape.function_layer = rng.chance(1, 3);
    Circuit c = gen_random_circuit(rng, b, shape);
    ASSERT_TRUE(validate_circuit(c).ok()) << format_circuit(c);
    Measure m = measure(c);
    EXPECT_LE(m.depth, 3u);
    EXPECT_LE(m.size, 15u);
  }
}

TEST(Generators, UnsatisfiableBoundsThrow) {
  Rng rng(1);
  Bounds b;
  b.max_depth = 1;
  CircuitShape shape;
  shape.function_layer = true;
  shape.activations = true;
  shape.require_activation = true;
  EXPECT_THROW(gen_random_circuit(rng, b, shape), Error);
  Bounds tiny;
  tiny.max_size = 1;
  EXPECT_THROW(gen_random_circuit(rng, tiny, CircuitShape{}), Error);
}

TEST(Bounds, ParseAndPrint) {
  Bounds b = parse_bounds("n=5,depth=3,k=1");
  EXPECT_EQ(b.max_n, 5u);
  EXPECT_EQ(b.max_depth, 3u);
  EXPECT_EQ(b.dim, 1u);
  EXPECT_EQ(b.max_size, 20u);
  EXPECT_EQ(parse_bounds(to_string(b)).max_n, 5u);
  EXPECT_THROW(parse_bounds("n=0"), ParseError);
  EXPECT_THROW(parse_bounds("width=3"), ParseError);
  EXPECT_THROW(parse_bounds("n"), ParseError);
}

TEST(Campaigns, ReportsAreReproducible) {
  TestSpec spec;
  spec.seed = 7;
  spec.count = 15;
  spec.bounds.max_n = 4;
  CampaignReport a = run_g2c_campaign(spec);
  CampaignReport b = run_g2c_campaign(spec);
  EXPECT_EQ(a.text, b.text);
  EXPECT_TRUE(a.ok()) << a.text;
  EXPECT_EQ(a.instances, 15u);
  for (Regime r : {Regime::Plain, Regime::GatesInFamilies, Regime::ActivationLayers}) {
    CampaignReport c = run_c2g_campaign(spec, r);
    EXPECT_EQ(c.text, run_c2g_campaign(spec, r).text);
    EXPECT_TRUE(c.ok()) << c.text;
  }
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gnncirc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_text_file(dir_ / "example.circ",
                    "dim 1\ng0 INPUT:1\ng1 INPUT:2\ng2 INPUT:3\ng3 ADD <- g0,g1\n"
                    "g4 MUL <- g3,g2\ng5 OUTPUT:1 <- g4\n");
    write_text_file(dir_ / "id.circ", "dim 1\ng0 INPUT:1\ng1 OUTPUT:1 <- g0\n");
    write_text_file(dir_ / "act.circ",
                    "dim 1\ng0 INPUT:1\ng1 ACT:sigmoid <- g0\ng2 OUTPUT:1 <- g1\n");
    write_text_file(dir_ / "combine.txt", "self 1\nneigh 1\nbias 0\n");
    write_text_file(dir_ / "net.cgnn", "cgnn dim 1 depth 1\nlayer builtin sum combine.txt id\n");
    write_text_file(dir_ / "g.graph", "graph 3 dim 1\nedge 1 2\nedge 2 3\nfeat 1 1\nfeat 2 2\nfeat 3 3\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }
  std::string p(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, EvalCircuit) {
  EXPECT_EQ(run({"eval-circuit", p("example.circ"), "--inputs", "6,9,5"}), kExitOk);
  EXPECT_EQ(out_.str(), "75\n");
  EXPECT_EQ(run({"eval-circuit", p("act.circ"), "--inputs", "0", "--backend", "float"}), kExitOk);
  EXPECT_EQ(out_.str(), "0.5\n");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"eval-circuit", p("example.circ")}), kExitUsage);
  EXPECT_EQ(run({"eval-circuit", p("example.circ"), "--inputs", "6,x,5"}), kExitParse);
  EXPECT_EQ(run({"eval-circuit", p("example.circ"), "--inputs", "6,9"}), kExitSemantic);
  EXPECT_EQ(run({"compile", "c2g", p("act.circ"), "--regime", "plain"}), kExitSemantic);
  EXPECT_EQ(run({"compile", "c2g", p("act.circ"), "--regime", "sideways"}), kExitParse);
  EXPECT_EQ(run({"eval-circuit", p("missing.circ"), "--inputs", "1"}), kExitFile);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("eval-circuit"), std::string::npos);
}

TEST_F(Cli, NormalizeRoundTrips) {
  ASSERT_EQ(run({"normalize", p("id.circ")}), kExitOk);
  Circuit back = parse_circuit(out_.str());
  EXPECT_EQ(structural_hash(back), structural_hash(read_circuit_file(p("id.circ"))));
  ASSERT_EQ(run({"normalize", p("example.circ")}), kExitOk);
  write_text_file(dir_ / "example_n.circ", out_.str());
  ASSERT_EQ(run({"check-form", p("example_n.circ")}), kExitOk);
  EXPECT_NE(out_.str().find("path-length-normal\tyes"), std::string::npos);
}

TEST_F(Cli, CheckFormAndReport) {
  ASSERT_EQ(run({"check-form", p("example.circ")}), kExitOk);
  EXPECT_NE(out_.str().find("path-length-normal\tno"), std::string::npos);
  EXPECT_NE(out_.str().find("liveness"), std::string::npos);
  ASSERT_EQ(run({"report", p("example.circ")}), kExitOk);
  EXPECT_NE(out_.str().find("depth\t3"), std::string::npos);
  EXPECT_NE(out_.str().find("size\t6"), std::string::npos);
}

TEST_F(Cli, CompileCircuitThenRunTheNetwork) {
  ASSERT_EQ(run({"compile", "c2g", p("example.circ"), "--regime", "plain", "--inputs", "6,9,5",
                 "--out", p("out")}),
            kExitOk);
  EXPECT_NE(out_.str().find("output-vertices\t7"), std::string::npos);
  ASSERT_EQ(run({"eval-gnn", p("out/example.cgnn"), p("out/example.graph")}), kExitOk);
  EXPECT_NE(out_.str().find("v7\t75\n"), std::string::npos);
  ASSERT_EQ(run({"eval-gnn", p("out/example.cgnn"), p("out/example.graph"), "--trace"}), kExitOk);
  std::istringstream rows(out_.str());
  std::string header, row0, row1;
  std::getline(rows, header);
  std::getline(rows, row0);
  std::getline(rows, row1);
  EXPECT_EQ(row0, "0\t6\t9\t5\t1\t2\t3\t4");
  EXPECT_EQ(row1.substr(row1.size() - 9), "\t15\t5\t3\t4");
}

TEST_F(Cli, CompileNetworkToCircuits) {
  ASSERT_EQ(run({"compile", "g2c", p("net.cgnn"), "--n", "1..3", "--out", p("k")}), kExitOk);
  std::istringstream rows(out_.str());
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "n\tsize\tdepth");
  ASSERT_TRUE(fs::exists(dir_ / "k" / "K_3.circ"));
  Circuit k3 = read_circuit_file(dir_ / "k" / "K_3.circ");
  EXPECT_EQ(k3.inputs().size(), 12u);
  ASSERT_EQ(run({"encode-graph", p("g.graph")}), kExitOk);
  std::string inputs;
  std::istringstream blocks(out_.str());
  while (std::getline(blocks, line)) inputs += (inputs.empty() ? "" : ",") + line;
  write_text_file(dir_ / "k3.circ", format_circuit(k3));
  ASSERT_EQ(run({"eval-circuit", p("k3.circ"), "--inputs", inputs}), kExitOk);
  EXPECT_EQ(out_.str(), "3\n6\n5\n");
  ASSERT_EQ(run({"eval-gnn", p("net.cgnn"), p("g.graph")}), kExitOk);
  EXPECT_EQ(out_.str(), "v1\t3\nv2\t6\nv3\t5\n");
}

TEST_F(Cli, VerifyIsDeterministic) {
  std::vector<std::string> args = {"verify", "g2c", "--seed", "7", "--count", "10", "--bounds", "n=4"};
  ASSERT_EQ(run(args), kExitOk);
  std::string first = out_.str();
  ASSERT_EQ(run(args), kExitOk);
  EXPECT_EQ(out_.str(), first);
  EXPECT_EQ(run({"verify", "c2g", "--regime", "actlayers", "--count", "10", "--backend", "float"}), kExitOk);
  EXPECT_NE(out_.str().find("mismatches=0"), std::string::npos);
  EXPECT_EQ(run({"verify", "c2g", p("example.circ"), "--inputs", "6,9,5"}), kExitOk);
  EXPECT_EQ(run({"verify", "g2c", p("net.cgnn"), p("g.graph")}), kExitOk);
  EXPECT_EQ(run({"verify", "sideways"}), kExitParse);
}

}  // namespace
}  // namespace gnncirc
