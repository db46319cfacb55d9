//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_BAYES_HPP_
#define EAGQA_BAYES_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eagqa/eag.hpp"

namespace eagqa {

struct Variable {
  std::string name;
  std::vector<std::string> domain;

  std::optional<std::size_t> index_of(std::string_view value) const;
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Partial assignment variable name -> value.
using Observation = std::map<std::string, std::string, std::less<>>;

// Conditional probability table of one variable. Rows are indexed by the
// parent assignment in mixed radix over the parent list (first parent most
// significant); each row is a distribution over the variable's domain.
struct Cpt {
  std::vector<std::vector<double>> rows;
  friend bool operator==(const Cpt&, const Cpt&) = default;
};

// Discrete Bayesian network over finite-domain variables.
class BayesNet {
 public:
  // Validates acyclicity and that every CPT has one normalized row per
  // parent assignment (tolerance 1e-9).
  BayesNet(std::vector<Variable> variables,
           std::vector<std::vector<std::size_t>> parents, std::vector<Cpt> cpts,
           std::optional<std::size_t> class_var, double alpha = 0.0);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<std::size_t>& parents(std::size_t v) const {
    return parents_.at(v);
  }
  const Cpt& cpt(std::size_t v) const { return cpts_.at(v); }
  std::optional<std::size_t> class_var() const noexcept { return class_var_; }
  double alpha() const noexcept { return alpha_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const Variable& variable(std::string_view name) const;

  // Class is the sole parent of every other variable and has none itself.
  bool is_naive_bayes() const noexcept;

  std::size_t row_index(std::size_t v,
                        const std::vector<std::size_t>& assignment) const;
  double theta(std::size_t v, const std::vector<std::size_t>& assignment) const;

  friend bool operator==(const BayesNet&, const BayesNet&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<Cpt> cpts_;
  std::optional<std::size_t> class_var_;
  double alpha_ = 0.0;
};

// Class value -> probability, in class-domain order.
struct Posterior {
  std::vector<std::pair<std::string, double>> probabilities;

  double at(std::string_view cls) const;
  // First maximum in domain order.
  const std::string& argmax() const;
  friend bool operator==(const Posterior&, const Posterior&) = default;
};

struct LabeledRecord {
  std::string label;
  Observation features;
};

BayesNet learn_naive_bayes(const std::vector<LabeledRecord>& dataset,
                           const Variable& class_var,
                           const std::vector<Variable>& features,
                           double alpha = 1.0);

// Same structure and conditionals with the class prior replaced by uniform.
BayesNet with_uniform_prior(const BayesNet& net);

// Product of every theta under a total assignment, accumulated in log space.
double joint_probability(const BayesNet& net, const Observation& assignment);

// General route: joint probability with the class clamped to each value,
// normalized over the class domain. Works on any DAG.
Posterior posterior(const BayesNet& net, const Observation& evidence);

// Naive Bayes route: prior times class-conditional likelihoods. Throws
// kUnsupportedStructure on a non-star net.
Posterior naive_posterior(const BayesNet& net, const Observation& evidence);

// Normalizes log-space class scores (log-sum-exp). Throws
// kDegenerateEvidence when every score is -inf.
std::vector<double> normalize_log_scores(const std::vector<double>& log_scores);

// --- Role inference -------------------------------------------------------

namespace role_vars {
inline constexpr std::string_view kRole = "role";
inline constexpr std::string_view kDirection = "direction";
inline constexpr std::string_view kStatus = "status";
inline constexpr std::string_view kUColor = "u_color";
inline constexpr std::string_view kField = "field";
}  // namespace role_vars

Variable role_class_variable();
std::vector<Variable> role_feature_variables();

// Naive Bayes role net with fixed reference class-conditional percentages and
// a uniform class prior.
BayesNet default_role_net();

Observation extract_role_features(const EAG& g, const EntityRef& person);

struct RoleInference {
  std::string role;
  Posterior posterior;
  friend bool operator==(const RoleInference&, const RoleInference&) = default;
};

// Keyed by person id.
std::map<std::string, RoleInference> infer_roles(const EAG& g,
                                                 const BayesNet& net);

// Role values currently stored in the graph, keyed by person id; blank roles
// are omitted.
std::map<std::string, std::string> roles_in(const EAG& g);

// --- Team status ----------------------------------------------------------

namespace team_vars {
inline constexpr std::string_view kTeamStatus = "team_status";
inline constexpr std::string_view kPStatus = "p_status";
inline constexpr std::string_view kPDirection = "p_direction";
inline constexpr std::string_view kTPossession = "t_possession";
}  // namespace team_vars

Variable team_class_variable();
std::vector<Variable> team_feature_variables();

// Uniform color -> player ids (sorted). Throws kTeamPartition unless players
// wear exactly two colors.
std::map<std::string, std::vector<std::string>> identify_teams(
    const EAG& g, const std::map<std::string, std::string>& roles);

Observation extract_team_features(const EAG& g, const std::string& team_uniform,
                                  const std::map<std::string, std::string>& roles);

struct TeamInference {
  std::string status;
  Posterior posterior;
  friend bool operator==(const TeamInference&, const TeamInference&) = default;
};

// Keyed by team uniform color.
std::map<std::string, TeamInference> infer_team_status(
    const EAG& g, const std::map<std::string, std::string>& roles,
    const BayesNet& net);

// Team whose players are nearest the given person on average over the
// stored distance relation; ties go to the lexicographically smaller color.
std::string assign_team(const EAG& g,
                        const std::map<std::string, std::string>& roles,
                        const std::string& person_id);

// --- Serialization --------------------------------------------------------

std::string serialize_model(const BayesNet& net);
BayesNet parse_model(std::string_view text);

// Per-class conditional percentages with two decimals, one row per
// (feature, value), preceded by a prior row.
std::string export_cpt_report(const BayesNet& net);
BayesNet parse_cpt_report(std::string_view text);

}  // namespace eagqa

#endif  // EAGQA_BAYES_HPP_
