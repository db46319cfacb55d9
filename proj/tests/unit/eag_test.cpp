//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "eagqa/eag.hpp"
#include "eagqa/error.hpp"
#include "generators.hpp"

namespace eagqa {
namespace {

SceneAnnotation one_person(bool with_soccer) {
  SceneAnnotation s;
  s.scene_id = "s1";
  s.persons.push_back({"p1", "red", {0, 0, 10, 20}, Direction::kNone, Status::kStanding,
                       std::nullopt, std::nullopt});
  if (with_soccer) s.soccer = BoundingBox{3, 14, 5, 16};
  return s;
}

std::size_t count_predicate(const EAG& g, std::string_view p) {
  return g.triples_matching({std::nullopt, std::string(p), std::nullopt}).size();
}

TEST(BuildEag, OnePersonAndSoccer) {
  auto g = build_eag(one_person(true));
  EXPECT_EQ(g.entities().size(), 4u);
  EntityRef p1{"p1", EntityType::kPerson};
  auto own = g.triples_matching({p1, std::nullopt, std::nullopt});
  std::size_t obvious = 0, blanks = 0, distances = 0;
  for (const auto& t : own) {
    if (t.predicate == predicates::kDistance) {
      ++distances;
    } else if (std::get<Value>(t.object).is_blank()) {
      ++blanks;
      EXPECT_EQ(t.predicate, predicates::kRole);
    } else {
      ++obvious;
    }
  }
  EXPECT_EQ(obvious, 4u);
  EXPECT_EQ(blanks, 1u);
  EXPECT_EQ(distances, 1u);
  EXPECT_EQ(count_predicate(g, predicates::kDistance), 2u);
  EXPECT_FALSE(is_complete(g));
}

TEST(BuildEag, EmptyScene) {
  SceneAnnotation s;
  s.scene_id = "empty";
  auto g = build_eag(s);
  EXPECT_EQ(count_predicate(g, predicates::kDistance), 0u);
  EXPECT_EQ(g.entities().size(), 2u);  // field, scene
}

TEST(BuildEag, DistanceCountMatchesPairEnumeration) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = testing::random_scene(rng, 8);
    auto g = build_eag(s);
    std::size_t expected = 0;
    const std::size_t n = s.persons.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) expected += a != b;
      if (s.soccer) expected += 2;
    }
    EXPECT_EQ(count_predicate(g, predicates::kDistance), expected);
    // Symmetry: every directed edge has a reverse with the same weight.
    for (const auto& t : g.triples_matching({std::nullopt, "distance", std::nullopt})) {
      auto back = g.triples_matching({std::get<EntityRef>(t.object), "distance",
                                      Node{t.subject}});
      ASSERT_EQ(back.size(), 1u);
      ASSERT_TRUE(t.weight && back[0].weight);
      EXPECT_EQ(t.weight->amount, back[0].weight->amount);
      EXPECT_EQ(t.weight->unit, back[0].weight->unit);
    }
    EXPECT_EQ(build_eag(s), g);
  }
}

TEST(BuildEag, RegisteredDistancesAreInMeters) {
  SceneAnnotation s;
  s.scene_id = "reg";
  s.field.part = FieldPart::kLeft;
  auto targets = *standard_field_targets(FieldPart::kLeft);
  std::array<Point2, 4> kp;
  for (int i = 0; i < 4; ++i) kp[i] = synth::to_image(targets[i]);
  s.field.keypoints = kp;
  // Persons centered on field points (10, 30) and (13, 34): 5 m apart.
  auto box = [](double x, double y) {
    auto c = synth::to_image({x, y, Frame::kField});
    return BoundingBox{c.x - 5, c.y - 5, c.x + 5, c.y + 5};
  };
  s.persons.push_back({"a", "red", box(10, 30), Direction::kNone, Status::kMoving, {}, {}});
  s.persons.push_back({"b", "red", box(13, 34), Direction::kNone, Status::kMoving, {}, {}});
  auto g = build_eag(s);
  auto d = g.triples_matching({EntityRef{"a", EntityType::kPerson}, "distance", std::nullopt});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].weight->unit, Unit::kMeters);
  EXPECT_NEAR(d[0].weight->amount, 5.0, 1e-9);

  auto forced = build_eag(s, Registration::kForceImageFrame);
  auto e = forced.triples_matching({EntityRef{"a", EntityType::kPerson}, "distance", std::nullopt});
  EXPECT_EQ(e[0].weight->unit, Unit::kPixels);
}

TEST(CompleteEag, FillsAndErrors) {
  auto g = build_eag(one_person(false));
  auto done = complete_eag(g, {{FillKey{"p1", "role"}, Value::label("player")}});
  EXPECT_EQ(done.triples().size(), g.triples().size());
  EXPECT_EQ(done.entities(), g.entities());
  auto roles = done.triples_matching({std::nullopt, "role", std::nullopt});
  ASSERT_EQ(roles.size(), 1u);
  EXPECT_EQ(std::get<Value>(roles[0].object), Value::label("player"));
  EXPECT_FALSE(is_complete(done));  // scene type stays blank
  auto all = complete_eag(done, {{FillKey{"scene", "type"}, Value::label("normal")}});
  EXPECT_TRUE(is_complete(all));

  EXPECT_EQ(complete_eag(g, {}), g);
  try {
    complete_eag(done, {{FillKey{"p1", "role"}, Value::label("referee")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAlreadyComplete);
  }
  try {
    complete_eag(g, {{FillKey{"nobody", "role"}, Value::label("player")}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(IsComplete, Vacuous) { EXPECT_TRUE(is_complete(EAG{})); }

TEST(TriplesMatching, DirectLookup) {
  auto g = build_eag(one_person(false));
  auto r = g.triples_matching({EntityRef{"p1", EntityType::kPerson}, "uniform", std::nullopt});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(std::get<Value>(r[0].object), Value::label("red"));
  EXPECT_TRUE(g.triples_matching({std::nullopt, "nonexistent", std::nullopt}).empty());
  EXPECT_EQ(g.triples_matching({}).size(), g.triples().size());
}

TEST(TriplesMatching, IndexEqualsLinearScan) {
  testing::Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = testing::random_eag(rng, 15);
    if (g.triples().empty()) continue;
    for (int f = 0; f < 10; ++f) {
      const auto& probe = g.triples()[rng.below(g.triples().size())];
      TripleFilter filter;
      if (rng.bernoulli(0.5)) filter.subject = probe.subject;
      if (rng.bernoulli(0.5)) filter.predicate = probe.predicate;
      if (rng.bernoulli(0.5)) filter.object = probe.object;
      std::vector<Triple> scan;
      for (const auto& t : g.triples()) {
        if (filter.subject && !(t.subject == *filter.subject)) continue;
        if (filter.predicate && t.predicate != *filter.predicate) continue;
        if (filter.object && compare_nodes(t.object, *filter.object) != 0) continue;
        scan.push_back(t);
      }
      EXPECT_EQ(g.triples_matching(filter), scan);
    }
  }
}

TEST(EagSerialization, RoundTrip) {
  testing::Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    auto g = build_eag(testing::random_scene(rng));
    EXPECT_EQ(parse_eag(serialize_eag(g)), g);
    auto r = testing::random_eag(rng, 12);
    EXPECT_EQ(parse_eag(serialize_eag(r)), r);
  }
}

TEST(EagSerialization, RejectsDanglingReferences) {
  const char* doc = R"({"entities": [{"id": "a", "etype": "person"}],
    "triples": [{"s": "a", "p": "near", "o": {"kind": "entity", "id": "b"}}]})";
  try {
    parse_eag(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(family_of(e.code()), ErrorFamily::kValidation);
  }
}

}  // namespace
}  // namespace eagqa
