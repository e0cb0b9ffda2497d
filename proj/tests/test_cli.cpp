#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run gsim_run(const std::string& args) {
  std::string cmd = std::string(GSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t count_data_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenCompleteGraph) {
  auto r = gsim_run("gen gnp --n 10 --p 1 --out " + at("k10.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count_data_lines(slurp(at("k10.txt"))), 45u);
}

TEST_F(Cli, PerturbRemovesFivePercent) {
  std::ostringstream os;
  for (int i = 0; i < 100; ++i) os << i << ' ' << (i + 1) % 100 << '\n';
  spit(at("c.txt"), os.str());
  ASSERT_EQ(gsim_run("perturb --graph " + at("c.txt") + " --remove-frac 0.05 --seed 3 --out " +
                     at("p.txt")).code, 0);
  std::ifstream in(at("p.txt"));
  auto g = gsim::parse_edge_list(in).graph;
  EXPECT_EQ(g.m(), 95u);
}

TEST_F(Cli, ExtractGivesConnectedSet) {
  ASSERT_EQ(gsim_run("gen community --seed 2 --out " + at("g.txt")).code, 0);
  ASSERT_EQ(gsim_run("extract --graph " + at("g.txt") + " --size 20 --seed 5 --out " + at("v.txt") +
                     " --subgraph-out " + at("q.txt")).code, 0);
  EXPECT_EQ(count_data_lines(slurp(at("v.txt"))), 20u);
  std::ifstream in(at("q.txt"));
  auto q = gsim::parse_edge_list(in).graph;
  EXPECT_EQ(q.n(), 20u);
  EXPECT_TRUE(gsim::is_connected(q));
}

TEST_F(Cli, PreprocessTriangle) {
  spit(at("t.txt"), "0 1\n1 2\n2 0\n");
  auto r = gsim_run("preprocess --graph " + at("t.txt") + " --depth 2 --graphlet-size 4 --out " +
                    at("t.gmix"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n=3 m=3 dimension=6"), std::string::npos);
  auto ls = gsim::load_index(at("t.gmix"));
  EXPECT_EQ(ls.size(), 3u);
  for (const auto& f : ls.labels) EXPECT_TRUE(f.is_zero());
}

TEST_F(Cli, PreprocessK5) {
  std::ostringstream os;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) os << i << ' ' << j << '\n';
  spit(at("k5.txt"), os.str());
  ASSERT_EQ(gsim_run("preprocess --graph " + at("k5.txt") + " --depth 1 --out " + at("k5.gmix")).code,
            0);
  auto ls = gsim::load_index(at("k5.gmix"));
  for (const auto& f : ls.labels) EXPECT_EQ(f, ls.labels[0]);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(gsim_run("preprocess --graph " + at("missing.txt") + " --out " + at("x")).code, 3);
  spit(at("bad.txt"), "1 2\nfoo bar\n");
  EXPECT_EQ(gsim_run("preprocess --graph " + at("bad.txt") + " --out " + at("x")).code, 2);
  EXPECT_EQ(gsim_run("bench --suite nope").code, 1);
  EXPECT_NE(gsim_run("frobnicate").code, 0);
}

TEST_F(Cli, QueryFlow) {
  ASSERT_EQ(gsim_run("gen community --seed 7 --out " + at("g.txt")).code, 0);
  ASSERT_EQ(gsim_run("preprocess --graph " + at("g.txt") + " --out " + at("g.gmix")).code, 0);
  ASSERT_EQ(gsim_run("extract --graph " + at("g.txt") + " --size 25 --seed 1 --out " + at("v.txt") +
                     " --subgraph-out " + at("q.txt")).code, 0);
  std::string base = "query --graph " + at("g.txt") + " --index " + at("g.gmix") + " --query " +
                     at("q.txt");

  auto r = gsim_run(base + " --output " + at("m1.txt"));
  ASSERT_EQ(r.code, 0);
  auto m1 = slurp(at("m1.txt"));
  EXPECT_EQ(m1.rfind("# gsim 0.1.0 match l=4 t=2 k=10", 0), 0u);
  auto tail = m1.substr(m1.rfind("# score="));
  double score = std::stod(tail.substr(8));
  EXPECT_GE(score, 0.0);
  EXPECT_LE(score, 1.0);
  EXPECT_LE(count_data_lines(m1), 25u);
  EXPECT_NE(tail.find(" of=25 "), std::string::npos);

  // same inputs, same mapping and score (timings excluded)
  ASSERT_EQ(gsim_run(base + " --output " + at("m2.txt")).code, 0);
  auto m2 = slurp(at("m2.txt"));
  EXPECT_EQ(m1.substr(0, m1.find(" delta=")), m2.substr(0, m2.find(" delta=")));

  EXPECT_EQ(gsim_run(base + " --k 100000").code, 0);
  EXPECT_EQ(gsim_run(base + " --graphlet-size 5").code, 4);
  EXPECT_EQ(gsim_run(base + " --depth 3").code, 4);

  spit(at("d.txt"), "1 2\n3 4\n");
  EXPECT_EQ(gsim_run("query --graph " + at("g.txt") + " --index " + at("g.gmix") + " --query " +
                     at("d.txt")).code, 5);

  spit(at("small.txt"), "0 1\n1 2\n");
  EXPECT_EQ(gsim_run("query --graph " + at("small.txt") + " --index " + at("g.gmix") + " --query " +
                     at("q.txt")).code, 4);
}

TEST_F(Cli, Score) {
  ASSERT_EQ(gsim_run("gen community --seed 3 --out " + at("g.txt")).code, 0);
  ASSERT_EQ(gsim_run("extract --graph " + at("g.txt") + " --size 15 --seed 1 --out " + at("v.txt") +
                     " --subgraph-out " + at("q.txt")).code, 0);
  std::string base = "score --graph " + at("g.txt") + " --query " + at("q.txt");
  auto r = gsim_run(base + " --vertices " + at("v.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::stod(r.out), 1.0);

  spit(at("e.txt"), "# nothing\n");
  EXPECT_EQ(gsim_run(base + " --vertices " + at("e.txt")).code, 2);

  spit(at("k4.txt"), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  spit(at("p.txt"), "0 1\n1 2\n2 3\n");
  spit(at("pv.txt"), "0\n1\n2\n3\n");
  r = gsim_run("score --graph " + at("p.txt") + " --vertices " + at("pv.txt") + " --query " +
               at("k4.txt") + " --graphlet-size 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::stod(r.out), 0.0);
}

TEST_F(Cli, BenchReportsAreReproducible) {
  auto a = gsim_run("bench --suite planted --repeats 2 --seed 9 --report " + at("a.txt") + " --json " +
                    at("a.json"));
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(gsim_run("bench --suite planted --repeats 2 --seed 9 --threads 3 --report " + at("b.txt") +
                     " --json " + at("b.json")).code, 0);
  EXPECT_EQ(slurp(at("a.txt")), slurp(at("b.txt")));
  EXPECT_EQ(slurp(at("a.json")), slurp(at("b.json")));
  EXPECT_NE(a.out.find("mean_delta="), std::string::npos);
  EXPECT_EQ(slurp(at("a.txt")).find("delta="), std::string::npos);
}
