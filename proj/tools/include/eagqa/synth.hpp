//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_SYNTH_HPP_
#define EAGQA_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "eagqa/bayes.hpp"
#include "eagqa/scene.hpp"

namespace eagqa::synth {

// Small deterministic generator; the draw helpers below avoid the
// implementation-defined std:: distributions so output is portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                              // [0, 1)
  double uniform(double lo, double hi);
  std::size_t below(std::size_t n);              // [0, n)
  std::size_t categorical(const std::vector<double>& weights);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

// Field frame to image frame for generated scenes.
inline constexpr std::array<double, 9> kCamera = {10.0, 0.0, 40.0, 0.0, 8.0,
                                                  30.0, 0.0, 0.002, 1.0};

Point2 to_image(const Point2& field_point);

struct SceneOptions {
  std::size_t min_team_size = 2;
  std::size_t max_team_size = 5;
  double goalkeeper_rate = 0.7;
  double referee_rate = 0.6;
  double possession_by_attack = 0.8;
};

// One scene with two uniform-colored teams, optional goalkeeper and
// referee, a soccer, and gold role/defending labels. Goalkeeper and referee
// features follow the default role table columns; player features follow their team's
// planted status.
SceneAnnotation scene(Rng& rng, const std::string& scene_id,
                      const SceneOptions& options = {});

// Draws a labeled feature record from a star net's class prior and CPTs.
LabeledRecord sample_record(Rng& rng, const BayesNet& net);

}  // namespace eagqa::synth

#endif  // EAGQA_SYNTH_HPP_
