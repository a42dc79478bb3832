#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcsp_cli.hpp"

namespace fs = std::filesystem;
using hcsp::cli::run_command;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hcsp_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::string generated(const std::string& cls, int tasks, int procs, int seed) {
    auto r = run({"generate", "--class", cls, "--tasks", std::to_string(tasks), "--procs",
                  std::to_string(procs), "--seed", std::to_string(seed)});
    EXPECT_EQ(r.status, 0) << r.err;
    return write(cls + "_" + std::to_string(seed) + ".txt", r.out);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenerateWritesHeaderedInstance) {
  const auto r = run({"generate", "--class", "u_c_hihi", "--tasks", "16", "--procs", "4", "--seed", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  const auto m = hcsp::load_instance(in);
  EXPECT_EQ(m.num_tasks(), 16u);
  EXPECT_EQ(m.num_procs(), 4u);
  EXPECT_EQ(hcsp::check_consistency(m), hcsp::ConsistencyCheck::Consistent);
  EXPECT_EQ(r.out.substr(0, 5), "16 4\n");
}

TEST_F(CliTest, SolveIsByteIdenticalUnderIterationBudget) {
  const auto file = generated("u_i_hilo", 64, 8, 3);
  const std::vector<std::string> args{"solve", "--instance", file, "--iters", "200", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["iterations"], 200);
  EXPECT_EQ(j["trace"].back()[1], j["best_makespan"]);
  EXPECT_EQ(j["schedule"]["makespan"], j["best_makespan"]);
  EXPECT_EQ(j["schedule"]["assignment"].size(), 64u);
}

TEST_F(CliTest, SolveBestOfIsThreadIndependent) {
  const auto file = generated("u_s_lohi", 48, 6, 5);
  auto a = run({"solve", "--instance", file, "--iters", "50", "--best-of", "4", "--threads", "1"});
  auto b = run({"solve", "--instance", file, "--iters", "50", "--best-of", "4", "--threads", "3"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, SolveCsvAndOutFile) {
  const auto file = generated("u_c_lolo", 16, 4, 2);
  const auto csv = run({"solve", "--instance", file, "--iters", "10", "--out", "csv"});
  ASSERT_EQ(csv.status, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("instance,best_makespan,iterations,seed\n", 0), 0u);

  const auto target = (dir_ / "result.json").string();
  const auto to_file = run({"solve", "--instance", file, "--iters", "10", "--out", target});
  ASSERT_EQ(to_file.status, 0) << to_file.err;
  EXPECT_TRUE(to_file.out.empty());
  std::ifstream in(target);
  EXPECT_EQ(nlohmann::json::parse(in)["iterations"], 10);
}

TEST_F(CliTest, HeaderlessFileUsesDimensionFlags) {
  const auto file = write("plain.txt", "1 2\n2 1\n5 5\n");
  const auto r = run({"solve", "--instance", file, "--tasks", "3", "--procs", "2", "--iters", "20"});
  ASSERT_EQ(r.status, 0) << r.err;
  // t0, t1 -> p1 (load 3), t2 -> p0 (load 5).
  EXPECT_EQ(nlohmann::json::parse(r.out)["best_makespan"], 5.0);
}

TEST_F(CliTest, ExactSolvesTinyInstances) {
  const auto file = write("tiny.txt", "3 2\n1 1\n1 1\n1 1\n");
  for (auto args : {std::vector<std::string>{"exact", "--instance", file},
                    std::vector<std::string>{"solve", "--exact", "--instance", file}}) {
    const auto r = run(args);
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["best_makespan"], 2.0);
    EXPECT_EQ(j["schedule"]["assignment"], (std::vector<int>{0, 0, 1}));
  }
}

TEST_F(CliTest, BenchEmitsMeanAndCvTable) {
  const auto f1 = generated("u_c_hihi", 24, 4, 1);
  const auto f2 = generated("u_i_lolo", 24, 4, 2);
  const auto r = run({"bench", "--instance", f1, "--instance", f2, "--iters", "20", "--best-of", "2", "--reps", "3",
                      "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "instance,mean,cv_percent");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(line.back(), '%');
  }
  EXPECT_EQ(rows, 2);

  const auto j = run({"bench", "--instance", f1, "--iters", "20", "--best-of", "2", "--reps", "3"});
  const auto parsed = nlohmann::json::parse(j.out);
  EXPECT_EQ(parsed[0]["best_makespans"].size(), 3u);
}

TEST_F(CliTest, CompareRunsWilcoxon) {
  std::string a = "instance,makespan\n";
  std::string b = "instance,makespan\n";
  for (const auto& row : hcsp::braun::kReferenceMeans) {
    a += std::string(row.instance) + "," + nlohmann::json(row.micro_ea_mean).dump() + "\n";
    b += std::string(row.instance) + "," + nlohmann::json(row.ls_mean).dump() + "\n";
  }
  // Row order of the second file does not matter; labels pair the rows.
  std::istringstream bl(b);
  std::vector<std::string> rows;
  for (std::string l; std::getline(bl, l);) rows.push_back(l);
  std::reverse(rows.begin() + 1, rows.end());
  std::string b_shuffled;
  for (auto& l : rows) b_shuffled += l + "\n";

  const auto r = run({"compare", "--wilcoxon", write("a.csv", a), write("b.csv", b_shuffled)});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["w_plus"], 63.0);
  EXPECT_EQ(j["w_minus"], 15.0);
  EXPECT_EQ(j["n"], 12);
  EXPECT_EQ(j["p_two_sided"], 131.0 / 2048.0);
  EXPECT_EQ(j["pairs"].size(), 12u);

  const auto csv = run({"compare", "--wilcoxon", dir_ / "a.csv", dir_ / "b.csv", "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("w_plus,w_minus,n,n_dropped,p_two_sided,exact\n63.0,15.0,12,0,", 0), 0u) << csv.out;
}

TEST_F(CliTest, CompareAcceptsRepeatedLabels) {
  const auto a = write("a.csv", "x,10\nx,12\ny,5\n");
  const auto b = write("b.csv", "y,4\nx,11\nx,9\n");
  const auto r = run({"compare", "--wilcoxon", a, b});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["pairs"][0]["difference"], -1.0);
  EXPECT_EQ(j["pairs"][1]["difference"], 3.0);
  EXPECT_EQ(j["pairs"][2]["difference"], 1.0);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  for (auto args : {std::vector<std::string>{}, std::vector<std::string>{"frobnicate"},
                    std::vector<std::string>{"solve", "--instance", "/nonexistent/file"},
                    std::vector<std::string>{"solve", "--bogus-flag"},
                    std::vector<std::string>{"generate", "--class", "u_q_hihi"},
                    std::vector<std::string>{"solve", "--instance", "x", "--time", "1", "--iters", "2"}}) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST_F(CliTest, DataErrorsExitOne) {
  const auto bad = write("bad.txt", "1 2 x 4\n");
  const auto short_file = write("short.txt", "1 2 3\n");
  const auto zeros = write("zeros.csv", "x,1\n");
  for (auto args : {std::vector<std::string>{"solve", "--instance", bad, "--tasks", "2", "--procs", "2"},
                    std::vector<std::string>{"solve", "--instance", short_file, "--tasks", "2", "--procs", "2"},
                    std::vector<std::string>{"compare", "--wilcoxon", zeros, zeros},
                    std::vector<std::string>{"exact", "--instance", generated("u_c_hihi", 30, 4, 0)}}) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 1) << r.out;
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  }
}

TEST_F(CliTest, LowerBoundViolationIsAnError) {
  // A file named like a benchmark instance whose optimum sits below the
  // published bound must be reported, not silently printed.
  const auto fake = write("u_c_lolo.0", "2 2\n1 2\n2 1\n");
  const auto r = run({"solve", "--instance", fake, "--iters", "5"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("LowerBoundViolated"), std::string::npos) << r.err;
}
