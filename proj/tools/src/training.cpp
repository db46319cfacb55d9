//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/training.hpp"

#include "eagqa/eag.hpp"
#include "eagqa/error.hpp"

namespace eagqa {

std::map<std::string, std::string> gold_roles(const SceneAnnotation& s) {
  std::map<std::string, std::string> roles;
  for (const auto& p : s.persons) {
    if (p.role) roles.emplace(p.id, std::string(to_string(*p.role)));
  }
  return roles;
}

std::vector<LabeledRecord> role_records(const SceneAnnotation& s) {
  std::vector<LabeledRecord> records;
  const EAG g = build_eag(s);
  for (const auto& p : s.persons) {
    if (!p.role) continue;
    records.push_back({std::string(to_string(*p.role)),
                       extract_role_features(g, {p.id, EntityType::kPerson})});
  }
  return records;
}

namespace {

// color -> (defending votes, attacking votes) over players.
std::map<std::string, std::pair<std::size_t, std::size_t>> team_votes(
    const SceneAnnotation& s) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> votes;
  for (const auto& p : s.persons) {
    if (p.role != Role::kPlayer) continue;
    auto& v = votes[p.uniform];
    if (p.defending) (*p.defending ? v.first : v.second) += 1;
  }
  return votes;
}

}  // namespace

std::vector<LabeledRecord> team_records(const SceneAnnotation& s, std::string* skipped) {
  const EAG g = build_eag(s);
  const auto roles = gold_roles(s);
  std::vector<LabeledRecord> records;
  try {
    for (const auto& [color, v] : team_votes(s)) {
      if (v.first == v.second) continue;
      records.push_back({v.first > v.second ? "defending" : "attacking",
                         extract_team_features(g, color, roles)});
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTeamPartition && e.code() != ErrorCode::kMissingSoccer) {
      throw;
    }
    if (skipped) *skipped = e.what();
    return {};
  }
  return records;
}

std::optional<std::string> gold_defending_team(const SceneAnnotation& s) {
  std::optional<std::string> out;
  for (const auto& [color, v] : team_votes(s)) {
    if (v.first > v.second) {
      if (out) return std::nullopt;
      out = color;
    }
  }
  return out;
}

}  // namespace eagqa
