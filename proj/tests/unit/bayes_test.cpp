//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <numeric>

#include "eagqa/bayes.hpp"
#include "eagqa/error.hpp"
#include "eagqa/training.hpp"
#include "generators.hpp"

namespace eagqa {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInternal;
}

const Variable kClassA{"Y", {"a", "b"}};
const Variable kFeatureT{"F", {"t", "f"}};

TEST(Learn, DegenerateCounts) {
  std::vector<LabeledRecord> data = {{"a", {{"F", "t"}}}, {"a", {{"F", "t"}}}};
  auto net = learn_naive_bayes(data, kClassA, {kFeatureT}, 0.0);
  EXPECT_TRUE(net.is_naive_bayes());
  EXPECT_DOUBLE_EQ(net.cpt(0).rows[0][0], 1.0);
  EXPECT_DOUBLE_EQ(net.cpt(1).rows[0][0], 1.0);
}

TEST(Learn, LaplaceCounts) {
  std::vector<LabeledRecord> data = {{"a", {{"F", "t"}}}, {"a", {{"F", "t"}}}};
  auto net = learn_naive_bayes(data, kClassA, {kFeatureT}, 1.0);
  EXPECT_DOUBLE_EQ(net.cpt(0).rows[0][0], 0.75);
  EXPECT_DOUBLE_EQ(net.cpt(1).rows[0][0], 0.75);
  EXPECT_DOUBLE_EQ(net.cpt(1).rows[1][0], 0.5);  // unseen class b
}

TEST(Learn, Errors) {
  EXPECT_EQ(code_of([] { learn_naive_bayes({}, kClassA, {kFeatureT}, 1.0); }),
            ErrorCode::kInsufficientData);
  EXPECT_EQ(code_of([] {
              learn_naive_bayes({{"z", {{"F", "t"}}}}, kClassA, {kFeatureT}, 1.0);
            }),
            ErrorCode::kValidation);
  EXPECT_EQ(code_of([] {
              learn_naive_bayes({{"a", {{"F", "q"}}}}, kClassA, {kFeatureT}, 1.0);
            }),
            ErrorCode::kValidation);
}

TEST(Learn, PermutationInvariantAndPositive) {
  testing::Rng rng(8);
  const BayesNet truth = testing::random_star(rng, 3);
  std::vector<LabeledRecord> data;
  for (int i = 0; i < 300; ++i) data.push_back(synth::sample_record(rng, truth));
  std::vector<Variable> features(truth.variables().begin() + 1, truth.variables().end());
  auto a = learn_naive_bayes(data, truth.variables()[0], features, 1.0);
  std::reverse(data.begin(), data.end());
  std::swap(data[3], data[100]);
  auto b = learn_naive_bayes(data, truth.variables()[0], features, 1.0);
  EXPECT_EQ(a, b);
  for (std::size_t v = 0; v < a.variables().size(); ++v) {
    for (const auto& row : a.cpt(v).rows) {
      for (double x : row) EXPECT_GT(x, 0.0);
    }
  }
}

TEST(Learn, RecoversKnownTables) {
  testing::Rng rng(1234);
  BayesNet truth = default_role_net();
  std::vector<LabeledRecord> data;
  for (int i = 0; i < 50000; ++i) data.push_back(synth::sample_record(rng, truth));
  auto learned = learn_naive_bayes(data, role_class_variable(), role_feature_variables(), 1.0);
  for (std::size_t v = 0; v < truth.variables().size(); ++v) {
    const auto& t = truth.cpt(v).rows;
    const auto& l = learned.cpt(v).rows;
    ASSERT_EQ(t.size(), l.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
      for (std::size_t c = 0; c < t[r].size(); ++c) EXPECT_NEAR(l[r][c], t[r][c], 0.02);
    }
  }
}

TEST(Joint, SmallProducts) {
  BayesNet one({{"A", {"x", "y"}}}, {{}}, {Cpt{{{0.3, 0.7}}}}, std::nullopt);
  EXPECT_NEAR(joint_probability(one, {{"A", "x"}}), 0.3, 1e-15);
  BayesNet chain({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}}, {{}, {0}},
                 {Cpt{{{0.5, 0.5}}}, Cpt{{{0.4, 0.6}, {0.9, 0.1}}}}, std::nullopt);
  EXPECT_NEAR(joint_probability(chain, {{"A", "a0"}, {"B", "b0"}}), 0.2, 1e-15);
  EXPECT_EQ(code_of([&] { joint_probability(chain, {{"A", "a0"}}); }),
            ErrorCode::kMissingVariable);
}

// Enumerates every full assignment of a net.
double total_mass(const BayesNet& net) {
  const auto& vars = net.variables();
  std::vector<std::size_t> idx(vars.size(), 0);
  double total = 0.0;
  while (true) {
    Observation o;
    for (std::size_t v = 0; v < vars.size(); ++v) o[vars[v].name] = vars[v].domain[idx[v]];
    total += joint_probability(net, o);
    std::size_t v = 0;
    while (v < vars.size() && ++idx[v] == vars[v].domain.size()) idx[v++] = 0;
    if (v == vars.size()) break;
  }
  return total;
}

TEST(Joint, ExhaustiveMassIsOne) {
  testing::Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    auto net = testing::random_net(rng, 1 + rng.below(4));
    EXPECT_NEAR(total_mass(net), 1.0, 1e-9);
  }
}

TEST(BayesNetValidation, RejectsBadTables) {
  EXPECT_EQ(code_of([] { BayesNet({{"A", {"x", "y"}}}, {{}}, {Cpt{{{0.3, 0.6}}}}, 0); }),
            ErrorCode::kValidation);
  EXPECT_EQ(code_of([] {
              BayesNet({{"A", {"x"}}, {"B", {"y"}}}, {{1}, {0}},
                       {Cpt{{{1.0}}}, Cpt{{{1.0}}}}, 0);
            }),
            ErrorCode::kValidation);
}

double product(const BayesNet& net, std::size_t y, const Observation& o) {
  double p = 1.0;
  for (std::size_t v = 1; v < net.variables().size(); ++v) {
    const auto& var = net.variables()[v];
    p *= net.cpt(v).rows[y][*var.index_of(o.at(var.name))];
  }
  return p;
}

TEST(DefaultRoleNet, GoalkeeperAndPlayerCases) {
  const auto net = default_role_net();
  const Observation gk = {{"direction", "B"}, {"status", "E"}, {"u_color", "U"}, {"field", "L"}};
  const Observation pl = {{"direction", "N"}, {"status", "M"}, {"u_color", "M"}, {"field", "M"}};
  // Hand products of the default role table columns (G, R, P), in percent units.
  const double g_gk = 0.8253 * 0.4759 * 0.9598 * 0.5138;
  const double r_gk = 0.044 * 0.0047 * 0.7911 * 0.1676;
  const double p_gk = 0.0806 * 0.0446 * 0.0064 * 0.1501;
  EXPECT_NEAR(product(net, 0, gk), g_gk, 1e-12);
  EXPECT_NEAR(product(net, 1, gk), r_gk, 1e-12);
  EXPECT_NEAR(product(net, 2, gk), p_gk, 1e-12);
  auto post = posterior(net, gk);
  EXPECT_EQ(post.argmax(), "goalkeeper");
  EXPECT_NEAR(post.at("goalkeeper"), g_gk / (g_gk + r_gk + p_gk), 1e-12);

  const double g_pl = 0.1368 * 0.1621 * 0.0402 * 0.0471;
  const double r_pl = 0.7736 * 0.6999 * 0.2089 * 0.7085;
  const double p_pl = 0.7723 * 0.7882 * 0.9936 * 0.7286;
  auto post2 = posterior(net, pl);
  EXPECT_EQ(post2.argmax(), "player");
  EXPECT_NEAR(post2.at("player"), p_pl / (g_pl + r_pl + p_pl), 1e-12);
}

TEST(Posterior, UniformTablesGiveUniformPosterior) {
  BayesNet net({{"Y", {"a", "b", "c"}}, {"F", {"x", "y"}}}, {{}, {0}},
               {Cpt{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}},
                Cpt{{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}}},
               0);
  auto p = posterior(net, {{"F", "y"}});
  for (const auto& [_, x] : p.probabilities) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  EXPECT_EQ(p.argmax(), "a");  // tie goes to domain order
}

TEST(Posterior, DegenerateAndConfigurationErrors) {
  BayesNet net({{"Y", {"a", "b"}}, {"F", {"x", "y"}}}, {{}, {0}},
               {Cpt{{{0.5, 0.5}}}, Cpt{{{1.0, 0.0}, {1.0, 0.0}}}}, 0);
  EXPECT_EQ(code_of([&] { posterior(net, {{"F", "y"}}); }), ErrorCode::kDegenerateEvidence);
  BayesNet no_class({{"F", {"x", "y"}}}, {{}}, {Cpt{{{0.5, 0.5}}}}, std::nullopt);
  EXPECT_EQ(code_of([&] { posterior(no_class, {}); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { posterior(net, {}); }), ErrorCode::kMissingVariable);
}

TEST(Posterior, GeneralAndStarRoutesAgree) {
  testing::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    auto net = testing::random_star(rng, 1 + rng.below(5));
    Observation o;
    for (std::size_t v = 1; v < net.variables().size(); ++v) {
      const auto& var = net.variables()[v];
      o[var.name] = var.domain[rng.below(var.domain.size())];
    }
    auto a = posterior(net, o);
    auto b = naive_posterior(net, o);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.probabilities.size(); ++k) {
      EXPECT_NEAR(a.probabilities[k].second, b.probabilities[k].second, 1e-12);
      EXPECT_GE(a.probabilities[k].second, 0.0);
      sum += a.probabilities[k].second;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Posterior, ArgmaxInvariantUnderScaling) {
  testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> logs;
    for (int k = 0; k < 4; ++k) logs.push_back(rng.uniform(-800.0, 0.0));
    auto base = normalize_log_scores(logs);
    const double shift = std::log(rng.uniform(1e-6, 1e6));
    for (auto& l : logs) l += shift;
    auto scaled = normalize_log_scores(logs);
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(base[k], scaled[k], 1e-12);
    EXPECT_EQ(std::max_element(base.begin(), base.end()) - base.begin(),
              std::max_element(scaled.begin(), scaled.end()) - scaled.begin());
  }
}

TEST(RoleFeatures, UniqueColor) {
  SceneAnnotation s;
  s.scene_id = "u";
  auto person = [](std::string id, std::string color) {
    return PersonAnnotation{std::move(id), std::move(color), {0, 0, 1, 1},
                            Direction::kBacking, Status::kExpansion, {}, {}};
  };
  s.persons.push_back(person("lone", "red"));
  auto g = build_eag(s);
  EXPECT_EQ(extract_role_features(g, {"lone", EntityType::kPerson}).at("u_color"), "U");

  s.persons = {person("a", "green"), person("b", "green")};
  g = build_eag(s);
  EXPECT_EQ(extract_role_features(g, {"a", EntityType::kPerson}).at("u_color"), "M");
  EXPECT_EQ(extract_role_features(g, {"b", EntityType::kPerson}).at("u_color"), "M");

  s.persons.clear();
  for (int i = 0; i < 11; ++i) s.persons.push_back(person("r" + std::to_string(i), "red"));
  s.persons.push_back(person("y", "yellow"));
  g = build_eag(s);
  EXPECT_EQ(extract_role_features(g, {"y", EntityType::kPerson}).at("u_color"), "U");
  for (int i = 0; i < 11; ++i) {
    EXPECT_EQ(extract_role_features(g, {"r" + std::to_string(i), EntityType::kPerson})
                  .at("u_color"),
              "M");
  }
}

TEST(RoleInference, GoalkeeperFixtureAndMonteCarlo) {
  SceneAnnotation s;
  s.scene_id = "gk";
  s.field.part = FieldPart::kLeft;
  s.persons.push_back({"keeper", "green", {0, 0, 1, 1}, Direction::kBacking,
                       Status::kExpansion, {}, {}});
  s.persons.push_back({"a", "red", {5, 5, 6, 6}, Direction::kNone, Status::kMoving, {}, {}});
  s.persons.push_back({"b", "red", {9, 9, 10, 10}, Direction::kNone, Status::kMoving, {}, {}});
  auto roles = infer_roles(build_eag(s), default_role_net());
  EXPECT_EQ(roles.at("keeper").role, "goalkeeper");
  EXPECT_EQ(roles.at("a").role, "player");

  testing::Rng rng(2024);
  const auto net = default_role_net();
  int correct = 0;
  for (int i = 0; i < 1000; ++i) {
    auto r = synth::sample_record(rng, net);
    correct += posterior(net, r.features).argmax() == r.label;
  }
  EXPECT_GT(correct / 1000.0, 0.85);
}

TEST(RoleInference, WrongTaskNet) {
  SceneAnnotation s;
  s.scene_id = "x";
  s.persons.push_back({"a", "red", {0, 0, 1, 1}, Direction::kNone, Status::kMoving, {}, {}});
  BayesNet team = learn_naive_bayes({{"defending", {{"p_status", "true"},
                                                    {"p_direction", "true"},
                                                    {"t_possession", "false"}}}},
                                    team_class_variable(), team_feature_variables(), 1.0);
  EXPECT_EQ(code_of([&] { infer_roles(build_eag(s), team); }), ErrorCode::kConfiguration);
}

SceneAnnotation two_teams() {
  SceneAnnotation s;
  s.scene_id = "teams";
  auto p = [](std::string id, std::string color, double x, Status st, Direction d) {
    return PersonAnnotation{std::move(id), std::move(color), {x, 0, x + 2, 2}, d, st,
                            Role::kPlayer, std::nullopt};
  };
  s.persons = {p("a1", "A", 0, Status::kExpansion, Direction::kBacking),
               p("a2", "A", 10, Status::kExpansion, Direction::kNone),
               p("b1", "B", 20, Status::kMoving, Direction::kFacing),
               p("b2", "B", 30, Status::kStanding, Direction::kBacking)};
  s.soccer = BoundingBox{20, 0, 22, 2};
  return s;
}

TEST(TeamFeatures, MajoritiesAndPossession) {
  auto s = two_teams();
  auto g = build_eag(s);
  auto roles = gold_roles(s);
  auto fa = extract_team_features(g, "A", roles);
  auto fb = extract_team_features(g, "B", roles);
  EXPECT_EQ(fa.at("p_status"), "true");
  EXPECT_EQ(fb.at("p_status"), "false");
  EXPECT_EQ(fa.at("p_direction"), "false");  // 1 vs 1 backing
  EXPECT_EQ(fb.at("p_direction"), "false");
  EXPECT_EQ(fa.at("t_possession"), "false");
  EXPECT_EQ(fb.at("t_possession"), "true");

  // Equal expansion counts: both false.
  s.persons[2].status = Status::kExpansion;
  s.persons[3].status = Status::kExpansion;
  g = build_eag(s);
  EXPECT_EQ(extract_team_features(g, "A", roles).at("p_status"), "false");
  EXPECT_EQ(extract_team_features(g, "B", roles).at("p_status"), "false");

  auto no_ball = two_teams();
  no_ball.soccer.reset();
  EXPECT_EQ(code_of([&] { extract_team_features(build_eag(no_ball), "A", roles); }),
            ErrorCode::kMissingSoccer);
  auto one_team = two_teams();
  for (auto& p : one_team.persons) p.uniform = "A";
  EXPECT_EQ(code_of([&] {
              extract_team_features(build_eag(one_team), "A", gold_roles(one_team));
            }),
            ErrorCode::kTeamPartition);
}

TEST(TeamInference, SymmetricFeaturesGiveEqualPosteriors) {
  auto s = two_teams();
  for (auto& p : s.persons) {
    p.status = Status::kMoving;
    p.direction = Direction::kNone;
  }
  s.soccer.reset();
  s.soccer = BoundingBox{15, 0, 17, 2};  // equidistant from a2 and b1
  BayesNet net({team_class_variable(), {"p_status", {"true", "false"}},
                {"p_direction", {"true", "false"}}, {"t_possession", {"true", "false"}}},
               {{}, {0}, {0}, {0}},
               {Cpt{{{0.5, 0.5}}}, Cpt{{{0.6, 0.4}, {0.4, 0.6}}},
                Cpt{{{0.6, 0.4}, {0.4, 0.6}}}, Cpt{{{0.5, 0.5}, {0.5, 0.5}}}},
               0);
  auto t = infer_team_status(build_eag(s), gold_roles(s), net);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.at("A").posterior, t.at("B").posterior);
}

TEST(TeamInference, PlantedScenesMonteCarlo) {
  testing::Rng rng(4242);
  std::vector<LabeledRecord> train;
  for (int i = 0; i < 2000; ++i) {
    auto more = team_records(synth::scene(rng, "train"));
    train.insert(train.end(), more.begin(), more.end());
  }
  auto net = learn_naive_bayes(train, team_class_variable(), team_feature_variables(), 1.0);
  int correct = 0, total = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = synth::scene(rng, "test");
    auto g = build_eag(s);
    auto truth = *gold_defending_team(s);
    for (const auto& [color, r] : infer_team_status(g, gold_roles(s), net)) {
      ++total;
      correct += (r.status == "defending") == (color == truth);
    }
  }
  EXPECT_EQ(total, 2000);
  EXPECT_GT(double(correct) / total, 0.75);
}

TEST(ModelFile, RoundTrip) {
  testing::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto net = testing::random_net(rng, 1 + rng.below(4));
    EXPECT_EQ(parse_model(serialize_model(net)), net);
    auto star = testing::random_star(rng, 1 + rng.below(4));
    EXPECT_EQ(parse_model(serialize_model(star)), star);
  }
  EXPECT_EQ(parse_model(serialize_model(default_role_net())), default_role_net());
}

TEST(CptReport, DefaultNetCellForCell) {
  const std::string report = export_cpt_report(default_role_net());
  for (const char* cell : {"82.53", "4.40", "77.23", "47.59", "0.47", "78.82", "34.02",
                           "2.42", "4.02", "99.36", "0.64", "51.38", "72.86", "12.13"}) {
    EXPECT_NE(report.find(cell), std::string::npos) << cell;
  }
  auto back = parse_cpt_report(report);
  const auto net = default_role_net();
  ASSERT_EQ(back.variables(), net.variables());
  for (std::size_t v = 0; v < net.variables().size(); ++v) {
    for (std::size_t r = 0; r < net.cpt(v).rows.size(); ++r) {
      for (std::size_t c = 0; c < net.cpt(v).rows[r].size(); ++c) {
        EXPECT_NEAR(back.cpt(v).rows[r][c], net.cpt(v).rows[r][c], 1e-12);
      }
    }
  }
}

TEST(CptReport, UniformRowsAndStructureCheck) {
  BayesNet uniform({{"Y", {"a", "b"}}, {"F", {"x", "y", "z", "w"}}}, {{}, {0}},
                   {Cpt{{{0.5, 0.5}}}, Cpt{{{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}}}},
                   0);
  const auto report = export_cpt_report(uniform);
  std::istringstream in(report);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("F=", 0) != 0) continue;
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), '2'), 2) << line;  // "25.00" twice
  }
  EXPECT_EQ(rows, 4);
  BayesNet chain({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}, {"C", {"c0", "c1"}}},
                 {{}, {0}, {1}},
                 {Cpt{{{0.5, 0.5}}}, Cpt{{{0.4, 0.6}, {0.9, 0.1}}},
                  Cpt{{{0.4, 0.6}, {0.9, 0.1}}}},
                 0);
  EXPECT_EQ(code_of([&] { export_cpt_report(chain); }), ErrorCode::kUnsupportedStructure);
}

}  // namespace
}  // namespace eagqa
