#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lindbladkit/io.hpp"
#include "lindbladkit/models.hpp"

namespace lk = lindbladkit;
namespace fs = std::filesystem;
using lk::Complex;
using lk::ComplexMatrix;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lindbladkit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    lk::io::write_file(p, text);
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST_F(CliTest, ValidateExitCodes) {
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= 0.5;
  EXPECT_EQ(run({"validate", file("half.json", lk::io::format_state(half))}).code, 0);

  const auto bad = run({"validate", file("bad.json", lk::io::format_state(ComplexMatrix::diagonal(std::vector<double>{1.5, -0.5})))});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("min_eigenvalue -0.5"), std::string::npos);

  EXPECT_EQ(run({"validate", file("mal.json", "{\"dim\": 2,")}).code, 2);
  EXPECT_EQ(run({"validate", path("missing.json")}).code, 1);
}

TEST_F(CliTest, EvolveStateTransitionsFinalRow) {
  const auto spec = lk::ModelSpec::state_transitions(1.0, {0.4, 0.3, 0.2, 0.1});
  const auto gen = file("gen.json", lk::io::format_generator(lk::build_generator(spec)));
  const auto rho0 = lk::DensityMatrix::maximally_mixed(4);
  const auto init = file("init.json", lk::io::format_state(rho0.matrix()));
  for (const char* method : {"rk4", "expm"}) {
    const auto r = run({"evolve", "--generator", gen, "--initial", init, "--t-max", "1", "--dt", "1e-3", "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(r.out);
    EXPECT_EQ(rows.size(), std::string(method) == "rk4" ? 1001u : 100u);
    const auto& last = rows.back();
    EXPECT_DOUBLE_EQ(last[0], 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      const double expect = 0.25 * std::exp(-1.0) + spec.p[i] * (1.0 - std::exp(-1.0));
      EXPECT_NEAR(last[1 + 2 * (i * 4 + i)], expect, 1e-8) << method;
    }
  }
}

TEST_F(CliTest, EvolveStepGuardAndZeroTime) {
  const auto gen = file("gen.json", lk::io::format_generator(lk::build_generator(lk::ModelSpec::state_exchange(1.0))));
  const auto init = file("init.json", lk::io::format_state(ComplexMatrix::diagonal(std::vector<double>{0.7, 0.3})));
  const auto guard = run({"evolve", "--generator", gen, "--initial", init, "--t-max", "1", "--dt", "0.5"});
  EXPECT_EQ(guard.code, 1);
  EXPECT_NE(guard.err.find("StepTooLarge"), std::string::npos);

  for (const char* method : {"rk4", "expm"}) {
    const auto r = run({"evolve", "--generator", gen, "--initial", init, "--t-max", "0", "--dt", "0.01", "--method", method});
    ASSERT_EQ(r.code, 0);
    const auto rows = read_csv(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], (std::vector<double>{0, 0.7, 0, 0, 0, 0, 0, 0.3, 0}));
  }
}

TEST_F(CliTest, ChoiReports) {
  const auto id = file("id.json", lk::io::format_channel(lk::KrausChannel{2, {ComplexMatrix::identity(2)}}));
  const auto r = run({"choi", "--channel", id});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eigenvalues 0 0 0 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("\nCP\n"), std::string::npos);

  const auto pauli = file("pauli.json", lk::io::format_channel(lk::pauli_channel(1, 1, -1, 1)));
  const auto p = run({"choi", "--channel", pauli});
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("min_eigenvalue -1\n"), std::string::npos);
  EXPECT_NE(p.out.find("not CP"), std::string::npos);
  EXPECT_EQ(run({"choi", "--channel", pauli, "--require-cp"}).code, 1);

  const auto gen = file("se.json", lk::io::format_generator(lk::build_generator(lk::ModelSpec::state_exchange(1.0))));
  const auto s = run({"choi", "--generator", gen, "--t", "1"});
  EXPECT_EQ(s.code, 0);
  // Reference spectrum {0, 0, 1 - e^-2, 1 + e^-2} from an independent expm.
  EXPECT_NE(s.out.find("eigenvalues 0 0 0.864664716763 1.13533528324\n"), std::string::npos) << s.out;
  EXPECT_NE(s.out.find("\nCP\n"), std::string::npos);

  EXPECT_EQ(run({"choi", "--generator", gen}).code, 2);
}

TEST_F(CliTest, CanonicalReduces) {
  const auto st = file("st.json", lk::io::format_generator(lk::build_generator(
                                      lk::ModelSpec::state_transitions(1.0, {0.4, 0.3, 0.2, 0.1}))));
  const auto r = run({"canonical", "--generator", st, "--out", path("can.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("canonical_ops 15\n"), std::string::npos);
  const auto pos = r.out.find("residual ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(pos + 9)), 1e-10);
  EXPECT_EQ(lk::io::parse_canonical(lk::io::read_file(path("can.json"))).ops.size(), 15u);

  const auto one = file("one.json", lk::io::format_generator(lk::LindbladGenerator(ComplexMatrix(2, 2), {ComplexMatrix::identity(2)})));
  EXPECT_NE(run({"canonical", "--generator", one}).out.find("canonical_ops 0\n"), std::string::npos);

  const auto dup = file("dup.json", lk::io::format_generator(lk::LindbladGenerator(ComplexMatrix(2, 2), {lk::pauli::x(), lk::pauli::x()})));
  const auto d = run({"canonical", "--generator", dup});
  EXPECT_NE(d.out.find("reduced 2 -> 1\n"), std::string::npos);
}

TEST_F(CliTest, RegionDeterministic) {
  const auto a = run({"region", "--resolution", "101"});
  const auto b = run({"region", "--resolution", "101"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\n1,-1,1,positive_only\n"), std::string::npos);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "l1,l3,l4,class");
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string l1, l3, l4, cls;
    std::getline(ss, l1, ',');
    std::getline(ss, l3, ',');
    std::getline(ss, l4, ',');
    std::getline(ss, cls);
    if (std::stod(l1) > 0 && std::stod(l3) > 0 && std::stod(l4) > 0) EXPECT_EQ(cls, "completely_positive") << line;
  }
  const auto summary = run({"region", "--resolution", "101", "--out", path("r.csv")});
  EXPECT_NE(summary.out.find("positive_only 673\n"), std::string::npos);
}

TEST_F(CliTest, SampleStateExchange) {
  const auto r = run({"sample", "--model", "state_exchange", "--params", "lambda=1", "--trajectories", "100000", "--seed",
                      "7", "--dt", "1e-3", "--times", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const double expect = 0.5 + 0.5 * std::exp(-2.0);
  EXPECT_LT(std::abs(rows[0][3] - expect), 3.0 * rows[0][5]);
}

TEST_F(CliTest, SampleDeterministicSingleTrajectory) {
  const std::vector<std::string> args{"sample", "--model", "random_unitary", "--trajectories", "1", "--seed", "5",
                                      "--psi", "1,1,1", "--times", "0.5,1", "--out", path("a.csv")};
  ASSERT_EQ(run(args).code, 0);
  auto args2 = args;
  args2.back() = path("b.csv");
  ASSERT_EQ(run(args2).code, 0);
  EXPECT_EQ(lk::io::read_file(path("a.csv")), lk::io::read_file(path("b.csv")));
}

TEST_F(CliTest, SampleUsageErrors) {
  const auto r = run({"sample", "--model", "nope"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"sample", "--model", "state_exchange", "--params", "g=1"}).code, 2);
  EXPECT_EQ(run({"sample", "--model", "state_exchange", "--params", "lambda=-1"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, SpectralAndKrausStep) {
  const auto pauli = file("pauli.json", lk::io::format_channel(lk::pauli_channel(1, 1, -1, 1)));
  const auto s = run({"spectral", "--channel", pauli});
  ASSERT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("eigenvalues -1 1 1 1\n"), std::string::npos) << s.out;
  EXPECT_NE(s.out.find("eigenvalue_sum 2\n"), std::string::npos);

  const auto gen = file("se.json", lk::io::format_generator(lk::build_generator(lk::ModelSpec::state_exchange(1.0))));
  const auto k = run({"kraus-step", "--generator", gen, "--dt", "1e-3", "--out", path("k.json")});
  ASSERT_EQ(k.code, 0);
  const auto at = k.out.find("completeness_defect ");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NEAR(std::stod(k.out.substr(at + 20)), 2.5e-7, 1e-15);
  const auto ch = lk::io::parse_channel(lk::io::read_file(path("k.json")));
  ASSERT_TRUE(ch.kraus.has_value());
  EXPECT_EQ(ch.kraus->ops.size(), 2u);
}

TEST_F(CliTest, ModelWritesGenerator) {
  const auto r = run({"model", "--name", "unitary_jump", "--params", "lambda=2", "g=0,1.5"});
  ASSERT_EQ(r.code, 0);
  const auto g = lk::io::parse_generator(r.out);
  EXPECT_EQ(g.dim(), 2u);
  EXPECT_EQ(g.lindblad_ops().size(), 1u);
}

}  // namespace
