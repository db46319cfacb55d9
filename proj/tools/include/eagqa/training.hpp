//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_TRAINING_HPP_
#define EAGQA_TRAINING_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eagqa/bayes.hpp"
#include "eagqa/scene.hpp"

namespace eagqa {

std::map<std::string, std::string> gold_roles(const SceneAnnotation& s);

// One record per person carrying a gold role.
std::vector<LabeledRecord> role_records(const SceneAnnotation& s);

// One record per team whose players' defending labels have a strict
// majority. A scene without two player teams or without a soccer yields
// nothing and sets *skipped to the reason.
std::vector<LabeledRecord> team_records(const SceneAnnotation& s,
                                        std::string* skipped = nullptr);

// The planted defending team: the color whose players are mostly defending.
std::optional<std::string> gold_defending_team(const SceneAnnotation& s);

}  // namespace eagqa

#endif  // EAGQA_TRAINING_HPP_
