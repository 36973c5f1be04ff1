#include "charvar/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace charvar::cli {
namespace {

namespace fs = std::filesystem;
const fs::path kData = fs::path(CHARVAR_SOURCE_DIR) / "data";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("charvar_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run_config(const RunConfig& c) {
    out_.str("");
    err_.str("");
    return run(c, out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, ReduceWord) {
  RunConfig c{.command = Command::reduce, .input = kData / "f2.grp", .word = "aa"};
  ASSERT_EQ(run_config(c), ok) << err_.str();
  EXPECT_NE(out_.str().find("x^2 - 2\n"), std::string::npos);
  EXPECT_NE(out_.str().find("coordinates: x=I_a y=I_b w=I_ab"), std::string::npos);
}

TEST_F(Cli, EquationsForTenOneFiftyThree) {
  RunConfig c{.command = Command::equations, .input = kData / "tenfiftythree.grp", .out = dir_ / "ideal.json"};
  ASSERT_EQ(run_config(c), ok) << err_.str();
  EXPECT_NE(out_.str().find("defining polynomials: 9 in 7 coordinates"), std::string::npos);
  Json j = read_json_file(dir_ / "ideal.json");
  EXPECT_EQ(j["generators"].size(), 9u);
  EXPECT_EQ(j["order"], "grevlex");
  EXPECT_TRUE(j["slope_word"].is_null());
}

TEST_F(Cli, MissingInputIsIoError) {
  RunConfig c{.command = Command::equations, .input = dir_ / "absent.grp"};
  EXPECT_EQ(run_config(c), io_error);
  EXPECT_NE(err_.str().find("error [input]"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  RunConfig no_slope{.command = Command::basis, .input = kData / "figure_eight.grp"};
  EXPECT_EQ(run_config(no_slope), usage_error);
  EXPECT_NE(err_.str().find("error [config]"), std::string::npos);
  RunConfig bad_order{.command = Command::equations, .input = kData / "f2.grp", .order = "deglex"};
  EXPECT_EQ(run_config(bad_order), usage_error);
  RunConfig grevlex_basis{
      .command = Command::basis, .input = kData / "trefoil.grp", .slopes = {"meridian"}, .order = "grevlex"};
  EXPECT_EQ(run_config(grevlex_basis), usage_error);
  RunConfig no_threads{.command = Command::equations, .input = kData / "f2.grp", .threads = 0};
  EXPECT_EQ(run_config(no_threads), usage_error);
}

TEST_F(Cli, ParseErrors) {
  RunConfig bad_file{.command = Command::equations, .input = write("bad.grp", "generators: a b\nrelators: axb\n")};
  EXPECT_EQ(run_config(bad_file), parse_error);
  EXPECT_NE(err_.str().find("error [parse]"), std::string::npos);
  RunConfig bad_slope{.command = Command::basis, .input = kData / "trefoil.grp", .slopes = {"equator"}};
  EXPECT_EQ(run_config(bad_slope), parse_error);
  EXPECT_NE(err_.str().find("error [slope]"), std::string::npos);
  RunConfig bad_word{.command = Command::reduce, .input = kData / "f2.grp", .word = "abq"};
  EXPECT_EQ(run_config(bad_word), parse_error);
}

TEST_F(Cli, RankFourIsUnsupported) {
  RunConfig c{.command = Command::equations, .input = write("f4.grp", "generators: a b c d\nrelators: abcdABCD\n")};
  EXPECT_EQ(run_config(c), unsupported_rank);
  EXPECT_NE(err_.str().find("error [equations]"), std::string::npos);
  // Traces still reduce at rank 4.
  RunConfig r{.command = Command::reduce, .input = dir_ / "f4.grp", .word = "abcd"};
  EXPECT_EQ(run_config(r), ok) << err_.str();
}

TEST_F(Cli, BudgetThenResume) {
  RunConfig fresh{.command = Command::groebner,
                  .input = kData / "figure_eight.grp",
                  .slopes = {"meridian"},
                  .out = dir_ / "fresh.json"};
  ASSERT_EQ(run_config(fresh), ok) << err_.str();

  RunConfig limited = fresh;
  limited.checkpoint = dir_ / "cp.json";
  limited.budget_pairs = 1;
  limited.out = dir_ / "resumed.json";
  ASSERT_EQ(run_config(limited), budget_exhausted);
  EXPECT_NE(err_.str().find("error [groebner]"), std::string::npos);
  EXPECT_NE(err_.str().find("checkpoint written"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir_ / "cp.json"));

  RunConfig resumed = limited;
  resumed.budget_pairs.reset();
  ASSERT_EQ(run_config(resumed), ok) << err_.str();
  EXPECT_NE(out_.str().find("resuming from"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "cp.json"));
  Json a = read_json_file(dir_ / "fresh.json"), b = read_json_file(dir_ / "resumed.json");
  EXPECT_EQ(a["elements"], b["elements"]);
  EXPECT_EQ(a["ring"], b["ring"]);
}

TEST_F(Cli, CheckpointForAnotherIdealIsRejected) {
  RunConfig limited{.command = Command::groebner,
                    .input = kData / "figure_eight.grp",
                    .slopes = {"meridian"},
                    .checkpoint = dir_ / "cp.json",
                    .budget_pairs = 1};
  ASSERT_EQ(run_config(limited), budget_exhausted);
  RunConfig other = limited;
  other.input = kData / "trefoil.grp";
  EXPECT_EQ(run_config(other), usage_error);
  EXPECT_NE(err_.str().find("different ideal"), std::string::npos);
}

TEST_F(Cli, DetectIsDeterministicAcrossThreadsAndCache) {
  std::vector<std::string> outputs;
  for (unsigned threads : {1u, 4u}) {
    RunConfig c{.command = Command::detect,
                .input = kData / "figure_eight.grp",
                .slopes = {"meridian", "longitude"},
                .threads = threads,
                .out = dir_ / ("report" + std::to_string(threads) + ".json")};
    ASSERT_EQ(run_config(c), ok) << err_.str();
    outputs.push_back(slurp(*c.out));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  Json j = Json::parse(outputs[0]);
  EXPECT_EQ(j["conclusion"], "NO_CLOSED_SURFACE_DETECTED");
  EXPECT_EQ(j["slopes"][0]["generators"], (Json{"1", "w", "w^2", "w^3", "w^4"}));

  RunConfig cached{.command = Command::detect,
                   .input = kData / "figure_eight.grp",
                   .slopes = {"meridian", "longitude"},
                   .cache_dir = dir_ / "cache",
                   .out = dir_ / "cached.json"};
  ASSERT_EQ(run_config(cached), ok);
  EXPECT_EQ(out_.str().find("cache hit"), std::string::npos);
  ASSERT_EQ(run_config(cached), ok);
  EXPECT_NE(out_.str().find("cache hit"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "cached.json"), outputs[0]);
}

TEST_F(Cli, FreeGroupIsInconclusive) {
  RunConfig c{.command = Command::detect, .input = kData / "f2.grp", .slopes = {"a"}, .out = dir_ / "r.json"};
  ASSERT_EQ(run_config(c), ok) << err_.str();
  EXPECT_NE(out_.str().find("conclusion: INCONCLUSIVE"), std::string::npos);
  EXPECT_EQ(read_json_file(dir_ / "r.json")["conclusion"], "INCONCLUSIVE");
}

TEST_F(Cli, TimingOnlyWhenAsked) {
  RunConfig c{.command = Command::basis, .input = kData / "trefoil.grp", .slopes = {"meridian"}, .out = dir_ / "b.json"};
  ASSERT_EQ(run_config(c), ok);
  EXPECT_TRUE(read_json_file(dir_ / "b.json")["groebner_stats"]["wall_time"].is_null());
  c.timing = true;
  ASSERT_EQ(run_config(c), ok);
  EXPECT_TRUE(read_json_file(dir_ / "b.json")["groebner_stats"]["wall_time"].is_number());
}

}  // namespace
}  // namespace charvar::cli
