#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("torus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(std::string const& name) const { return (dir_ / name).string(); }

  int run(std::string const& args) const {
    std::string const cmd = std::string(TORUS_RESONANCE_CLI) + " " + args + " 2>" + path("stderr.txt");
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(std::string const& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json load(std::string const& name) const { return json::parse(slurp(path(name))); }

  void write(std::string const& name, std::string const& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
  }

  fs::path dir_;
};

TEST_F(CliTest, CountSaturated) {
  ASSERT_EQ(run("count --x 0 --y 0 --v 1 --k 10 --output " + path("c.json")), 0);
  auto const j = load("c.json");
  EXPECT_EQ(j["command"], "count");
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_EQ(j["result"]["count"], 100);
  EXPECT_EQ(j["config"]["k"], 10);
  EXPECT_FALSE(j.contains("timing"));
}

TEST_F(CliTest, CountWitnesses) {
  ASSERT_EQ(run("count --x 0.5 --y 0.5 --v 1 --k 2 --witnesses " + path("w.csv") + " --output " + path("c.json")), 0);
  EXPECT_EQ(load("c.json")["result"]["count"], 2);
  EXPECT_EQ(slurp(path("w.csv")), "a,b,dist,threshold,nearest_c\n1,1,0,1,-1\n2,2,0,0.25,-4\n");
}

TEST_F(CliTest, HexParamsRoundTripThroughOutput) {
  ASSERT_EQ(run("count --x sqrt:2 --y 1/3 --v 1.5 --k 50 --output " + path("a.json")), 0);
  auto const a = load("a.json");
  std::string const x = a["config"]["x"], y = a["config"]["y"];
  EXPECT_EQ(x, "1+fp:0x6a09e667f3bcc908b2fb1366ea957d3e");
  ASSERT_EQ(run("count --x " + x + " --y " + y + " --v 1.5 --k 50 --output " + path("b.json")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, RecordTimingIsOptIn) {
  ASSERT_EQ(run("count --x 0.1 --y 0.2 --v 1 --k 5 --record-timing --output " + path("t.json")), 0);
  EXPECT_TRUE(load("t.json")["timing"].contains("wall_clock_seconds"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("count --x 0 --y 0 --v 1"), 2);                       // missing --k
  EXPECT_EQ(run("count --x zero --y 0 --v 1 --k 3"), 2);              // unparsable real
  EXPECT_EQ(run("count --x 0 --y 0 --v -1 --k 3"), 2);                // v <= 0
  EXPECT_EQ(run("count --x 0 --y 0 --v 1 --k 4294967296"), 3);        // k² overflows
  EXPECT_EQ(run("expect --v 1 --k 3 --n-samples 2"), 2);              // no seed
  EXPECT_EQ(run("plotdata --k-max 10 --csv-prefix " + path("p")), 2); // no seed
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("solve --input " + path("missing.json") + " --solution " + path("u.json") + " --x 0.3 --y 0.4"), 5);
  EXPECT_EQ(run("count --x 0 --y 0 --v 1 --k 3 --output " + path("nodir/c.json")), 5);
}

TEST_F(CliTest, ScanCommands) {
  ASSERT_EQ(run("scan --equation schrodinger --x 0.5 --y 0.5 --v 1 --k 2 --output " + path("s.json")), 0);
  auto const s = load("s.json");
  EXPECT_EQ(s["result"]["min_margin"], 0.0);
  EXPECT_EQ(s["result"]["argmin"], json::parse(R"({"a":1,"b":1,"c":-1})"));

  ASSERT_EQ(run("scan --equation wave --form factored --x 1 --y 1 --v 1 --k 1 --output " + path("w.json")), 0);
  EXPECT_NEAR(load("w.json")["result"]["min_margin"].get<double>(), 0.41421356237309503, 1e-15);

  EXPECT_EQ(run("scan --equation wave --form factored --x -1 --y 0.2 --v 1 --k 3"), 2);
  EXPECT_EQ(run("scan --equation heat --x 1 --y 1 --v 1 --k 1"), 2);
}

TEST_F(CliTest, SolveRoundTrip) {
  write("f.json", R"({"box_radius": 1, "real_tagged": false, "modes": [[0,0,1,1.0,0.0],[1,0,0,1.0,0.0]]})");
  ASSERT_EQ(run("solve --input " + path("f.json") + " --solution " + path("u.json") +
                " --x 0.5 --y sqrt:3-1 --output " + path("r.json")),
            0);
  auto const u = load("u.json");
  EXPECT_EQ(u["box_radius"], 1);
  EXPECT_EQ(u["modes"], json::parse("[[0,0,1,-1.0,-0.0],[1,0,0,-2.0,-0.0]]"));
  auto const r = load("r.json");
  EXPECT_LE(r["result"]["max_relative_residual"].get<double>(), 1e-12);
  EXPECT_EQ(r["result"]["forced_modes"], 2);
}

TEST_F(CliTest, SolvePhysicalGeometry) {
  write("f.json", R"({"box_radius": 1, "real_tagged": false, "modes": [[1,1,1,1.0,0.5]]})");
  ASSERT_EQ(run("solve --input " + path("f.json") + " --solution " + path("u.json") +
                " --alpha 1.3 --beta 0.7 --gamma 2 --mass 1.1 --output " + path("r.json")),
            0);
  EXPECT_EQ(load("r.json")["config"]["alpha"], 1.3);
  EXPECT_EQ(run("solve --input " + path("f.json") + " --solution " + path("u.json") + " --alpha 1 --x 0.1 --y 0.1"), 2);
  EXPECT_EQ(run("solve --input " + path("f.json") + " --solution " + path("u.json") + " --alpha 1"), 2);
}

TEST_F(CliTest, SolveErrors) {
  write("mean.json", R"({"box_radius": 1, "modes": [[0,0,0,1.0,0.0]]})");
  EXPECT_EQ(run("solve --input " + path("mean.json") + " --solution " + path("u.json") + " --x 0.3 --y 0.4"), 4);
  EXPECT_NE(slurp(path("stderr.txt")).find("zero mode"), std::string::npos);

  write("res.json", R"({"box_radius": 1, "modes": [[1,1,-1,1.0,0.0]]})");
  EXPECT_EQ(run("solve --input " + path("res.json") + " --solution " + path("u.json") + " --x 0.5 --y 0.5"), 4);
  EXPECT_NE(slurp(path("stderr.txt")).find("(1,1,-1)"), std::string::npos);

  write("bad.json", R"({"box_radius": 1, "modes": [[5,0,0,1.0,0.0]]})");
  EXPECT_EQ(run("solve --input " + path("bad.json") + " --solution " + path("u.json") + " --x 0.3 --y 0.4"), 5);
  write("junk.json", "{not json");
  EXPECT_EQ(run("solve --input " + path("junk.json") + " --solution " + path("u.json") + " --x 0.3 --y 0.4"), 5);
  EXPECT_FALSE(fs::exists(path("u.json")));
}

TEST_F(CliTest, ExpectWritesReportsAndCsv) {
  ASSERT_EQ(run("expect --seed 5 --n-samples 20 --v 1 --k 15 --j-max 4 --samples-csv " + path("s.csv") +
                " --blocks-csv " + path("b.csv") + " --output " + path("e.json")),
            0);
  auto const e = load("e.json");
  EXPECT_EQ(e["expectation"]["n_samples"], 20);
  EXPECT_EQ(e["tail"]["blocks"].size(), 4u);
  std::string const samples = slurp(path("s.csv"));
  EXPECT_EQ(samples.substr(0, samples.find('\n')), "sample_index,x_hex,y_hex,count");
  EXPECT_EQ(std::count(samples.begin(), samples.end(), '\n'), 21);
  std::string const blocks = slurp(path("b.csv"));
  EXPECT_EQ(blocks.substr(0, blocks.find('\n')), "block_lo,block_hi,empirical_mean,standard_error,exact_expectation");
  EXPECT_EQ(std::count(blocks.begin(), blocks.end(), '\n'), 5);
}

TEST_F(CliTest, PlotdataSeries) {
  ASSERT_EQ(run("plotdata --seed 2 --n-samples 10 --v 1 --k-max 100 --output " + path("p.json")), 0);
  for (char const* series : {"p_empirical.csv", "p_expected.csv", "p_eq4.csv"}) {
    std::string const csv = slurp(path(series));
    EXPECT_EQ(csv.substr(0, 8), "k,value\n") << series;
    EXPECT_NE(csv.find("\n100,"), std::string::npos) << series;
  }
  EXPECT_EQ(load("p.json")["result"]["points"].back()["k"], 100);
}

TEST_F(CliTest, ThreadCountDoesNotChangeBytes) {
  for (std::string const cmd : {"count --x 0.3 --y sqrt:7 --v 0.7 --k 300 --witnesses {W}",
                                "expect --seed 9 --n-samples 30 --v 1.3 --k 40 --j-max 5 --samples-csv {W}"}) {
    auto expand = [&](std::string tag) {
      std::string c = cmd;
      c.replace(c.find("{W}"), 3, path(tag + ".csv"));
      return c + " --output " + path(tag + ".json");
    };
    ASSERT_EQ(run(expand("one") + " --threads 1"), 0);
    ASSERT_EQ(run(expand("many") + " --threads 8"), 0);
    EXPECT_EQ(slurp(path("one.json")), slurp(path("many.json")));
    EXPECT_EQ(slurp(path("one.csv")), slurp(path("many.csv")));
  }
}

}  // namespace
