#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "minen/cli.hpp"
#include "test_support.hpp"

namespace minen {
namespace {

namespace fs = std::filesystem;
using testing::scratch_dir;
using testing::slurp;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Tiny network that runs to exhaustion in well under a second.
constexpr const char* kTinyNetwork = R"(
  "node_count": 15, "area_width": 60, "area_height": 60, "initial_energy": 0.02,
  "coverage_grid_cells": 6, "sensing_radius": 10
)";

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << "{" << kTinyNetwork << (body.empty() ? "" : ", ") << body << "}";
  return p;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(Cli, RunWritesThreeArtifacts) {
  const fs::path dir = scratch_dir("cli_run");
  const fs::path cfg = write_config(dir, "");
  const Result r = invoke({"run", "--config", cfg.string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  for (const char* f : {"metrics.csv", "coverage.csv", "summary.json", "run.log"}) {
    EXPECT_TRUE(fs::exists(dir / "o" / f)) << f;
  }
  EXPECT_NE(r.out.find("rounds_total="), std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir / "o" / "summary.json"));
  EXPECT_EQ(summary["series"]["round"].size(), summary["rounds_total"].get<std::size_t>() + 1);
}

TEST(Cli, SameSeedSameBytesDifferentSeedDifferentBytes) {
  const fs::path dir = scratch_dir("cli_seed");
  const fs::path cfg = write_config(dir, R"("protocol": "leach")");
  auto run_to = [&](const std::string& name, const std::string& seed) {
    return invoke({"run", "--config", cfg.string(), "--out", (dir / name).string(), "--seed",
                   seed})
        .code;
  };
  ASSERT_EQ(run_to("a", "5"), 0);
  ASSERT_EQ(run_to("b", "5"), 0);
  ASSERT_EQ(run_to("c", "6"), 0);
  EXPECT_EQ(slurp(dir / "a" / "metrics.csv"), slurp(dir / "b" / "metrics.csv"));
  EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
  EXPECT_NE(slurp(dir / "a" / "summary.json"), slurp(dir / "c" / "summary.json"));
}

TEST(Cli, NonEmptyOutputNeedsForce) {
  const fs::path dir = scratch_dir("cli_force");
  const fs::path cfg = write_config(dir, "");
  const std::string out = (dir / "o").string();
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", out}).code, 0);
  const Result again = invoke({"run", "--config", cfg.string(), "--out", out});
  EXPECT_EQ(again.code, cli::kExitUsage);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(invoke({"run", "--config", cfg.string(), "--out", out, "--force"}).code, 0);
}

TEST(Cli, UsageErrors) {
  const fs::path dir = scratch_dir("cli_usage");
  const fs::path cfg = write_config(dir, "");
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"launch"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", (dir / "nope.json").string()}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", cfg.string(), "--protocol", "teen", "--out",
                    (dir / "o1").string()})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", cfg.string(), "--scheduler", "aco", "--out",
                    (dir / "o2").string()})
                .code,
            cli::kExitUsage);
  std::ofstream(dir / "bad.json") << R"({"node_count": 10, "surprise": 1})";
  const Result unknown =
      invoke({"run", "--config", (dir / "bad.json").string(), "--out", (dir / "o3").string()});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("surprise"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, UnwritableOutputIsIoError) {
  const fs::path dir = scratch_dir("cli_io");
  const fs::path cfg = write_config(dir, "");
  std::ofstream(dir / "blocker") << "x";
  const Result r =
      invoke({"run", "--config", cfg.string(), "--out", (dir / "blocker" / "sub").string()});
  EXPECT_EQ(r.code, cli::kExitIo);
}

TEST(Cli, TraceRoutesWritesOneLinePerRound) {
  const fs::path dir = scratch_dir("cli_trace");
  const fs::path cfg = write_config(dir, "");
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", (dir / "o").string(),
                    "--trace-routes"})
                .code,
            0);
  const auto summary = nlohmann::json::parse(slurp(dir / "o" / "summary.json"));
  const std::string routes = slurp(dir / "o" / "routes.jsonl");
  EXPECT_EQ(line_count(routes), summary["rounds_total"].get<std::size_t>());
  const auto first = nlohmann::json::parse(routes.substr(0, routes.find('\n')));
  EXPECT_EQ(first["round"], 1);
  ASSERT_FALSE(first["routes"].empty());
  EXPECT_EQ(first["routes"][0]["path"].back(), -1);
}

TEST(Cli, CompareThreeVariantsOverTenSeeds) {
  const fs::path dir = scratch_dir("cli_compare");
  const fs::path cfg = write_config(
      dir, R"("variants": [{"protocol": "minen"}, {"protocol": "leach"}, {"protocol": "fcm"}])");
  const Result r = invoke({"compare", "--config", cfg.string(), "--out", (dir / "o").string(),
                           "--seeds", "1..10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "o" / "comparison.csv");
  EXPECT_EQ(line_count(csv), 31U);
  EXPECT_EQ(line_count(slurp(dir / "o" / "comparison_medians.csv")), 4U);
  EXPECT_TRUE(fs::exists(dir / "o" / "leach" / "seed_10" / "metrics.csv"));
  EXPECT_EQ(slurp(dir / "o" / "fcm" / "seed_3" / "summary.json").empty(), false);
}

TEST(Cli, CompareRejectsBadVariantSetups) {
  const fs::path dir = scratch_dir("cli_compare_bad");
  const fs::path one = write_config(dir, R"("variants": [{"protocol": "minen"}])");
  EXPECT_EQ(invoke({"compare", "--config", one.string(), "--out", (dir / "a").string()}).code,
            cli::kExitUsage);
  const fs::path two = write_config(
      dir, R"("variants": [{"protocol": "minen"}, {"protocol": "leach"}], "seeds": "3..2")");
  EXPECT_EQ(invoke({"compare", "--config", two.string(), "--out", (dir / "b").string()}).code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"compare", "--config", two.string(), "--out", (dir / "c").string(),
                    "--seeds", "1..2", "--protocol", "fcm"})
                .code,
            cli::kExitUsage);
}

TEST(Cli, DuplicateVariantLabelsAreSuffixed) {
  const fs::path dir = scratch_dir("cli_compare_dup");
  const fs::path cfg = write_config(
      dir, R"("variants": [{"protocol": "leach"}, {"protocol": "leach"}], "seeds": [4])");
  ASSERT_EQ(invoke({"compare", "--config", cfg.string(), "--out", (dir / "o").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "leach" / "seed_4"));
  EXPECT_TRUE(fs::exists(dir / "o" / "leach-2" / "seed_4"));
}

TEST(Cli, SingleSeedSweepMatchesRun) {
  const fs::path dir = scratch_dir("cli_sweep_one");
  const fs::path cfg = write_config(dir, "");
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", (dir / "run").string(), "--seed",
                    "7"})
                .code,
            0);
  ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", (dir / "sweep").string(),
                    "--seeds", "7..7"})
                .code,
            0);
  for (const char* f : {"metrics.csv", "coverage.csv", "summary.json"}) {
    EXPECT_EQ(slurp(dir / "run" / f), slurp(dir / "sweep" / "seed_7" / f)) << f;
  }
  const auto agg = nlohmann::json::parse(slurp(dir / "sweep" / "aggregate.json"));
  EXPECT_EQ(agg["runs"], 1);
  EXPECT_EQ(agg["rounds_total"]["iqr"], 0.0);
}

TEST(Cli, WorkerCountDoesNotChangeResults) {
  const fs::path dir = scratch_dir("cli_workers");
  const fs::path cfg = write_config(dir, R"("protocol": "fcm")");
  for (const char* w : {"1", "4"}) {
    ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", (dir / w).string(), "--seeds",
                      "1..6", "--workers", w})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(dir / "1" / "sweep.csv"), slurp(dir / "4" / "sweep.csv"));
  EXPECT_EQ(slurp(dir / "1" / "aggregate.json"), slurp(dir / "4" / "aggregate.json"));
  for (int s = 1; s <= 6; ++s) {
    const std::string seed = "seed_" + std::to_string(s);
    EXPECT_EQ(slurp(dir / "1" / seed / "summary.json"), slurp(dir / "4" / seed / "summary.json"));
  }
}

TEST(Cli, EmptySeedRangeIsUsageError) {
  const fs::path dir = scratch_dir("cli_sweep_empty");
  const fs::path cfg = write_config(dir, "");
  EXPECT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", (dir / "o").string(), "--seeds",
                    "5..1"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", (dir / "p").string(), "--seeds",
                    "x..y"})
                .code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace minen
