#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace
{

namespace fs = std::filesystem;

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("lgc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  int run(const std::string& args) const
  {
    const std::string cmd = std::string(LGC_CLI_PATH) + " " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p)
  {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int gen(const std::string& out, int seed = 7) const
  {
    return run("gen --seed " + std::to_string(seed) +
               " --k 2 --clusters '300:0,0;300:10,0:1.0' --out " + out);
  }

  fs::path dir_;
};

TEST_F(Cli, GenIsByteReproducible)
{
  ASSERT_EQ(gen(path("a.csv")), 0);
  ASSERT_EQ(gen(path("b.csv")), 0);
  const auto a = slurp(path("a.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b.csv")));
  ASSERT_EQ(gen(path("c.csv"), 8), 0);
  EXPECT_NE(a, slurp(path("c.csv")));
}

TEST_F(Cli, FitWritesDefaultOutputs)
{
  ASSERT_EQ(gen(path("blobs.csv")), 0);
  EXPECT_EQ(run("fit --input " + path("blobs.csv") + " --ds 4"), 0);
  EXPECT_TRUE(fs::exists(path("blobs.model.json")));
  const auto labels = slurp(path("blobs.labels.csv"));
  EXPECT_EQ(labels.rfind("point_id,cluster_id,p_value\n", 0), 0u);
  EXPECT_EQ(std::count(labels.begin(), labels.end(), '\n'), 601);
}

TEST_F(Cli, FitWithAllOptions)
{
  ASSERT_EQ(gen(path("blobs.csv")), 0);
  EXPECT_EQ(run("fit --input " + path("blobs.csv") +
                " --ds 4 --l 2 --eps 0.01 --lp 1e-6 --lpct 0.1 --ls 0.6"
                " --density-form paper_literal --threads 2 --model-out " +
                path("m.json") + " --labels-out " + path("l.csv") + " --report-out " +
                path("r.json")),
            0);
  EXPECT_TRUE(fs::exists(path("m.json")));
  EXPECT_TRUE(fs::exists(path("l.csv")));
  EXPECT_NE(slurp(path("r.json")).find("\"timings\""), std::string::npos);
  EXPECT_NE(slurp(path("l.csv")).find(",-1,"), std::string::npos);
}

TEST_F(Cli, UsageErrors)
{
  ASSERT_EQ(gen(path("blobs.csv")), 0);
  EXPECT_EQ(run("fit --input " + path("blobs.csv")), 1);
  EXPECT_NE(slurp(path("stderr.txt")).find("--ds"), std::string::npos);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("fit --input " + path("blobs.csv") + " --ds -2"), 1);
  EXPECT_EQ(run("gen --seed 1 --k 2 --clusters 'oops' --out " + path("x.csv")), 1);
}

TEST_F(Cli, DataErrors)
{
  EXPECT_EQ(run("fit --input " + path("missing.csv") + " --ds 1"), 2);
  std::ofstream(path("ragged.csv")) << "1,2\n3\n";
  EXPECT_EQ(run("fit --input " + path("ragged.csv") + " --ds 1"), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("ragged row 2"), std::string::npos);
}

TEST_F(Cli, NoClustersExitCode)
{
  ASSERT_EQ(gen(path("blobs.csv")), 0);
  EXPECT_EQ(run("fit --input " + path("blobs.csv") + " --ds 4 --l 100000"), 3);
}

TEST_F(Cli, BenchEmitsCsv)
{
  EXPECT_EQ(run("bench --sizes 2000,4000 --repeats 1 --out " + path("bench.csv")), 0);
  const auto csv = slurp(path("bench.csv"));
  EXPECT_EQ(csv.rfind("n,index_ms,seed_ms,converge_ms,fit_ms,assign_ms,filter_ms,total_ms,clusters\n", 0),
            0u);
  EXPECT_NE(csv.find("\n2000,"), std::string::npos);
  EXPECT_NE(csv.find("\n4000,"), std::string::npos);
}

}  // namespace
