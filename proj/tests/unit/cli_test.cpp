//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eagqa/cli.hpp"
#include "eagqa/eag.hpp"
#include "eagqa/matcher.hpp"

namespace eagqa {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("eagqa-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string fixture(const std::string& name) {
    return std::string(EAGQA_FIXTURE_DIR) + "/" + name + ".json";
  }
  std::string tmp(const std::string& name) { return (dir_ / name).string(); }

  // build-eag then infer; returns the completed graph path.
  std::string complete(const std::string& name) {
    auto built = run({"build-eag", "--scene", fixture(name), "--out", tmp(name + ".eag")});
    EXPECT_EQ(built.code, 0) << built.err;
    auto inferred = run({"infer", "--eag", tmp(name + ".eag"), "--out", tmp(name + ".done")});
    EXPECT_EQ(inferred.code, 0) << inferred.err;
    return tmp(name + ".done");
  }

  fs::path dir_;
};

TEST_F(CliTest, CountTemplateOnThreePlayers) {
  auto done = complete("three_players");
  auto r = run({"query", "--eag", done, "--template", "Q7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out), json::parse(R"({"kind":"count","payload":3})"));
}

TEST_F(CliTest, InferPrintsPosteriorsWhenWritingGraph) {
  complete("two_teams");
  auto r = run({"infer", "--eag", tmp("two_teams.eag"), "--out", tmp("again")});
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_FALSE(j.empty());
  auto again = run({"infer", "--eag", tmp("again")});
  EXPECT_NE(again.err.find("no blank role to infer"), std::string::npos);
}

TEST_F(CliTest, InferOnCompleteGraphWarns) {
  auto done = complete("two_teams");
  auto r = run({"infer", "--eag", done});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("no blank role to infer"), std::string::npos);
  EXPECT_EQ(parse_eag(r.out), parse_eag(slurp(done)));
}

TEST_F(CliTest, AllTemplatesMatchExpected) {
  auto expected = json::parse(slurp(std::string(EAGQA_FIXTURE_DIR) + "/expected.json"));
  const std::string model = std::string(EAGQA_DATA_DIR) + "/team_model.json";
  for (auto& [scene, per_query] : expected.items()) {
    auto done = complete(scene);
    for (auto& [q, want] : per_query.items()) {
      auto r = run({"query", "--eag", done, "--template", q, "--model", model});
      if (want.contains("error")) {
        EXPECT_EQ(r.code, 7) << scene << " " << q;
        EXPECT_EQ(json::parse(r.err)["error"]["code"], want["error"]) << scene << " " << q;
      } else {
        ASSERT_EQ(r.code, 0) << scene << " " << q << r.err;
        EXPECT_EQ(json::parse(r.out), want) << scene << " " << q;
        EXPECT_EQ(serialize_answer(parse_answer(r.out)), serialize_answer(parse_answer(want.dump())));
      }
    }
  }
}

TEST_F(CliTest, Q5NeedsModel) {
  auto done = complete("two_teams");
  auto r = run({"query", "--eag", done, "--template", "Q5"});
  EXPECT_NE(r.code, 0);
  EXPECT_TRUE(json::parse(r.err).contains("error"));
}

TEST_F(CliTest, EvalIdenticalIsPerfect) {
  const std::string gold = std::string(EAGQA_FIXTURE_DIR) + "/gold.json";
  auto g = json::parse(slurp(gold));
  json pred{{"records", json::array()}};
  for (auto& rec : g["records"]) {
    pred["records"].push_back({{"scene", rec["scene"]},
                               {"query", rec["query"]},
                               {"answer", {{"kind", "label"}, {"payload", rec["references"][0]}}}});
  }
  std::ofstream(tmp("pred.json")) << pred.dump();
  auto r = run({"eval", "--predictions", tmp("pred.json"), "--gold", gold, "--format", "machine"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out)["overall"].get<double>(), 1.0);
}

TEST_F(CliTest, GenFixturesIsDeterministic) {
  auto a = run({"gen-fixtures", "--seed", "5", "--count", "3", "--out", tmp("a")});
  auto b = run({"gen-fixtures", "--seed", "5", "--count", "3", "--out", tmp("b")});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  for (const char* f : {"synth-0000.json", "synth-0001.json", "synth-0002.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  auto c = run({"gen-fixtures", "--seed", "6", "--count", "1", "--out", tmp("c")});
  EXPECT_NE(slurp(dir_ / "a" / "synth-0000.json"), slurp(dir_ / "c" / "synth-0000.json"));
}

TEST_F(CliTest, BundledTeamModelIsReproducible) {
  ASSERT_EQ(run({"gen-fixtures", "--seed", "7", "--count", "2000", "--out", tmp("corpus")}).code, 0);
  auto r = run({"learn", "--target", "team", "--alpha", "1", "--scene", tmp("corpus")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out), json::parse(slurp(std::string(EAGQA_DATA_DIR) + "/team_model.json")));
}

TEST_F(CliTest, ReportCptRoundTripsThroughLearn) {
  auto r = run({"report-cpt"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p(X|"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"query", "--eag", tmp("missing")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);

  auto missing = run({"build-eag", "--scene", tmp("nope.json")});
  EXPECT_EQ(missing.code, 9);
  EXPECT_EQ(json::parse(missing.err)["error"]["family"], "io");

  std::ofstream(tmp("bad.json")) << "{ not json";
  EXPECT_EQ(run({"build-eag", "--scene", tmp("bad.json")}).code, 3);

  auto done = complete("two_teams");
  std::ofstream(tmp("bad.q")) << "ask ?x:person { (?x:person, uniform";
  EXPECT_EQ(run({"query", "--eag", done, "--query", tmp("bad.q")}).code, 3);
  EXPECT_EQ(run({"query", "--eag", tmp("two_teams.eag"), "--template", "Q7"}).code, 7);
}

TEST_F(CliTest, DslQueryFile) {
  auto done = complete("two_teams");
  std::ofstream(tmp("q.txt")) << R"(ask num(?p:person) { (?p:person, role, "referee") })";
  auto r = run({"query", "--eag", done, "--query", tmp("q.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto a = parse_answer(r.out);
  EXPECT_EQ(a.kind(), Answer::Kind::kCount);
  EXPECT_EQ(a.count_value(), 1u);
}

}  // namespace
}  // namespace eagqa
