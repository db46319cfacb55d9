//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "eagqa/error.hpp"

namespace eagqa::synth {

// splitmix64
std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::below(std::size_t n) {
  return static_cast<std::size_t>(uniform() * double(n)) % n;
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

Point2 to_image(const Point2& p) {
  const auto& h = kCamera;
  double w = h[6] * p.x + h[7] * p.y + h[8];
  return {(h[0] * p.x + h[1] * p.y + h[2]) / w,
          (h[3] * p.x + h[4] * p.y + h[5]) / w, Frame::kImage};
}

namespace {

BoundingBox box_at(const Point2& field_point, double half_w, double half_h) {
  Point2 c = to_image(field_point);
  return {c.x - half_w, c.y - half_h, c.x + half_w, c.y + half_h};
}

const std::vector<double>& column(const BayesNet& net, std::string_view feature,
                                  Role role) {
  auto cls = *net.class_var();
  std::size_t row = *net.variables()[cls].index_of(to_string(role));
  return net.cpt(*net.index_of(feature)).rows.at(row);
}

template <typename E>
E pick(Rng& rng, const std::vector<double>& weights, const std::vector<E>& values) {
  return values.at(rng.categorical(weights));
}

const std::vector<Direction> kDirections = {Direction::kFacing, Direction::kBacking,
                                            Direction::kNone};
const std::vector<Status> kStatuses = {Status::kExpansion, Status::kMoving,
                                       Status::kStanding, Status::kNone};

// Planted player behaviour (weights over F,B,N and E,M,S,N).
const std::vector<double> kDefendDirection = {0.15, 0.55, 0.30};
const std::vector<double> kAttackDirection = {0.35, 0.15, 0.50};
const std::vector<double> kDefendStatus = {0.55, 0.25, 0.18, 0.02};
const std::vector<double> kAttackStatus = {0.15, 0.50, 0.33, 0.02};

const std::vector<std::string> kTeamColors = {"blue", "red", "white", "yellow"};

std::string person_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%02zu", i);
  return buf;
}

}  // namespace

SceneAnnotation scene(Rng& rng, const std::string& scene_id,
                      const SceneOptions& options) {
  if (options.min_team_size == 0 || options.max_team_size < options.min_team_size) {
    throw Error(ErrorCode::kConfiguration, "synth: bad team size range");
  }
  const BayesNet role_net = default_role_net();
  SceneAnnotation s;
  s.scene_id = scene_id;
  s.field.part = std::vector<FieldPart>{FieldPart::kLeft, FieldPart::kMiddle,
                                        FieldPart::kRight}[rng.below(3)];
  double x_lo = 30.0, x_hi = 75.0;
  if (s.field.part == FieldPart::kLeft) {
    x_lo = 2.0;
    x_hi = 40.0;
  } else if (s.field.part == FieldPart::kRight) {
    x_lo = 65.0;
    x_hi = 103.0;
  }
  if (auto targets = standard_field_targets(s.field.part)) {
    std::array<Point2, 4> kp;
    for (std::size_t i = 0; i < 4; ++i) kp[i] = to_image((*targets)[i]);
    s.field.keypoints = kp;
  }

  std::size_t first = rng.below(kTeamColors.size());
  std::size_t second = (first + 1 + rng.below(kTeamColors.size() - 1)) % kTeamColors.size();
  const std::string colors[2] = {kTeamColors[first], kTeamColors[second]};
  const std::size_t defending = rng.below(2);
  const std::size_t span = options.max_team_size - options.min_team_size + 1;

  std::vector<Point2> positions;
  std::vector<std::size_t> team_of;
  auto place = [&] {
    return Point2{rng.uniform(x_lo, x_hi), rng.uniform(5.0, 63.0), Frame::kField};
  };
  for (std::size_t t = 0; t < 2; ++t) {
    std::size_t n = options.min_team_size + rng.below(span);
    const bool def = t == defending;
    for (std::size_t i = 0; i < n; ++i) {
      PersonAnnotation p;
      p.id = person_id(s.persons.size());
      p.uniform = colors[t];
      p.direction = pick(rng, def ? kDefendDirection : kAttackDirection, kDirections);
      p.status = pick(rng, def ? kDefendStatus : kAttackStatus, kStatuses);
      p.role = Role::kPlayer;
      p.defending = def;
      positions.push_back(place());
      p.location = box_at(positions.back(), 10.0, 20.0);
      team_of.push_back(t);
      s.persons.push_back(std::move(p));
    }
  }
  auto add_special = [&](Role role, const std::string& uniform) {
    PersonAnnotation p;
    p.id = person_id(s.persons.size());
    p.uniform = uniform;
    p.direction = pick(rng, column(role_net, role_vars::kDirection, role), kDirections);
    p.status = pick(rng, column(role_net, role_vars::kStatus, role), kStatuses);
    p.role = role;
    p.location = box_at(place(), 10.0, 20.0);
    s.persons.push_back(std::move(p));
  };
  if (rng.bernoulli(options.goalkeeper_rate)) add_special(Role::kGoalkeeper, "green");
  if (rng.bernoulli(options.referee_rate)) add_special(Role::kReferee, "black");

  // The ball sits next to one player, usually an attacker.
  std::size_t holder_team = rng.bernoulli(options.possession_by_attack) ? 1 - defending
                                                                        : defending;
  std::vector<std::size_t> holders;
  for (std::size_t i = 0; i < team_of.size(); ++i) {
    if (team_of[i] == holder_team) holders.push_back(i);
  }
  Point2 at = positions[holders[rng.below(holders.size())]];
  at.x += rng.uniform(-0.5, 0.5);
  at.y += rng.uniform(-0.5, 0.5);
  s.soccer = box_at(at, 3.0, 3.0);
  return s;
}

LabeledRecord sample_record(Rng& rng, const BayesNet& net) {
  if (!net.is_naive_bayes() || !net.class_var()) {
    throw Error(ErrorCode::kUnsupportedStructure, "synth: star net required");
  }
  const std::size_t cls = *net.class_var();
  const std::size_t y = rng.categorical(net.cpt(cls).rows.at(0));
  LabeledRecord r;
  r.label = net.variables()[cls].domain[y];
  for (std::size_t v = 0; v < net.variables().size(); ++v) {
    if (v == cls) continue;
    const auto& var = net.variables()[v];
    r.features[var.name] = var.domain[rng.categorical(net.cpt(v).rows.at(y))];
  }
  return r;
}

}  // namespace eagqa::synth
