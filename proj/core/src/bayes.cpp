//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/bayes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "eagqa/error.hpp"

namespace eagqa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, what);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

std::optional<std::size_t> Variable::index_of(std::string_view value) const {
  auto it = std::find(domain.begin(), domain.end(), value);
  if (it == domain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domain.begin());
}

// ---------------------------------------------------------------------------
// BayesNet

BayesNet::BayesNet(std::vector<Variable> variables,
                   std::vector<std::vector<std::size_t>> parents,
                   std::vector<Cpt> cpts, std::optional<std::size_t> class_var,
                   double alpha)
    : variables_(std::move(variables)),
      parents_(std::move(parents)),
      cpts_(std::move(cpts)),
      class_var_(class_var),
      alpha_(alpha) {
  const std::size_t n = variables_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    invalid("bayes net: variables, parents and cpts must align");
  }
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    invalid("bayes net: alpha must be a nonnegative number");
  }
  if (class_var_ && *class_var_ >= n) invalid("bayes net: class_var out of range");
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (v.name.empty()) invalid("bayes net: variable name must be nonempty");
    if (!names.insert(v.name).second) {
      invalid("bayes net: duplicate variable " + v.name);
    }
    if (v.domain.empty()) invalid("bayes net: empty domain for " + v.name);
    std::set<std::string> values(v.domain.begin(), v.domain.end());
    if (values.size() != v.domain.size()) {
      invalid("bayes net: duplicate domain value in " + v.name);
    }
  }

  // Kahn's algorithm for the acyclicity check.
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::set<std::size_t> seen;
    for (std::size_t p : parents_[v]) {
      if (p >= n) invalid("bayes net: parent index out of range");
      if (p == v || !seen.insert(p).second) {
        invalid("bayes net: invalid parent list for " + variables_[v].name);
      }
      children[p].push_back(v);
      ++indegree[v];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t c : children[v]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (visited != n) invalid("bayes net: parent relation has a cycle");

  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (std::size_t p : parents_[v]) rows *= variables_[p].domain.size();
    const auto& cpt = cpts_[v];
    if (cpt.rows.size() != rows) {
      invalid("bayes net: cpt of " + variables_[v].name + " needs " +
              std::to_string(rows) + " rows");
    }
    for (const auto& row : cpt.rows) {
      if (row.size() != variables_[v].domain.size()) {
        invalid("bayes net: cpt row width mismatch for " + variables_[v].name);
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0)) {
          invalid("bayes net: probability outside [0,1] in " +
                  variables_[v].name);
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        invalid("bayes net: cpt row of " + variables_[v].name +
                " does not sum to 1");
      }
    }
  }
}

std::optional<std::size_t> BayesNet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

const Variable& BayesNet::variable(std::string_view name) const {
  auto i = index_of(name);
  if (!i) {
    throw Error(ErrorCode::kMissingVariable,
                "no variable named " + std::string(name));
  }
  return variables_[*i];
}

bool BayesNet::is_naive_bayes() const noexcept {
  if (!class_var_ || !parents_[*class_var_].empty()) return false;
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (v == *class_var_) continue;
    if (parents_[v].size() != 1 || parents_[v][0] != *class_var_) return false;
  }
  return true;
}

std::size_t BayesNet::row_index(
    std::size_t v, const std::vector<std::size_t>& assignment) const {
  std::size_t row = 0;
  for (std::size_t p : parents_[v]) {
    row = row * variables_[p].domain.size() + assignment[p];
  }
  return row;
}

double BayesNet::theta(std::size_t v,
                       const std::vector<std::size_t>& assignment) const {
  return cpts_[v].rows[row_index(v, assignment)][assignment[v]];
}

double Posterior::at(std::string_view cls) const {
  for (const auto& [name, p] : probabilities) {
    if (name == cls) return p;
  }
  throw Error(ErrorCode::kNotFound, "no class value " + std::string(cls));
}

const std::string& Posterior::argmax() const {
  if (probabilities.empty()) {
    throw Error(ErrorCode::kInternal, "argmax of an empty posterior");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (probabilities[i].second > probabilities[best].second) best = i;
  }
  return probabilities[best].first;
}

// ---------------------------------------------------------------------------
// Learning

BayesNet learn_naive_bayes(const std::vector<LabeledRecord>& dataset,
                           const Variable& class_var,
                           const std::vector<Variable>& features,
                           double alpha) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kInsufficientData, "cannot learn from zero records");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    invalid("alpha must be a nonnegative number");
  }
  const std::size_t ny = class_var.domain.size();
  std::vector<std::size_t> class_count(ny, 0);
  // counts[f][y][x]
  std::vector<std::vector<std::vector<std::size_t>>> counts;
  for (const auto& f : features) {
    counts.emplace_back(ny, std::vector<std::size_t>(f.domain.size(), 0));
  }

  for (const auto& rec : dataset) {
    auto y = class_var.index_of(rec.label);
    if (!y) invalid("class value \"" + rec.label + "\" not in domain");
    ++class_count[*y];
    if (rec.features.size() != features.size()) {
      invalid("record must assign exactly the feature variables");
    }
    for (std::size_t f = 0; f < features.size(); ++f) {
      auto it = rec.features.find(features[f].name);
      if (it == rec.features.end()) {
        invalid("record lacks feature " + features[f].name);
      }
      auto x = features[f].index_of(it->second);
      if (!x) {
        invalid("feature " + features[f].name + " value \"" + it->second +
                "\" not in domain");
      }
      ++counts[f][*y][*x];
    }
  }

  const double n = static_cast<double>(dataset.size());
  std::vector<Variable> vars{class_var};
  std::vector<std::vector<std::size_t>> parents{{}};
  std::vector<Cpt> cpts;

  Cpt prior;
  prior.rows.emplace_back();
  for (std::size_t y = 0; y < ny; ++y) {
    prior.rows[0].push_back((class_count[y] + alpha) / (n + alpha * ny));
  }
  cpts.push_back(std::move(prior));

  for (std::size_t f = 0; f < features.size(); ++f) {
    vars.push_back(features[f]);
    parents.push_back({0});
    const std::size_t nx = features[f].domain.size();
    Cpt cpt;
    for (std::size_t y = 0; y < ny; ++y) {
      double denom = class_count[y] + alpha * nx;
      std::vector<double> row(nx, 1.0 / nx);
      if (denom > 0.0) {
        for (std::size_t x = 0; x < nx; ++x) {
          row[x] = (counts[f][y][x] + alpha) / denom;
        }
      }
      cpt.rows.push_back(std::move(row));
    }
    cpts.push_back(std::move(cpt));
  }
  return BayesNet(std::move(vars), std::move(parents), std::move(cpts), 0,
                  alpha);
}

BayesNet with_uniform_prior(const BayesNet& net) {
  if (!net.class_var()) {
    throw Error(ErrorCode::kConfiguration, "net has no class variable");
  }
  const std::size_t c = *net.class_var();
  if (!net.parents(c).empty()) {
    throw Error(ErrorCode::kUnsupportedStructure,
                "uniform prior needs a root class variable");
  }
  std::vector<Variable> vars = net.variables();
  std::vector<std::vector<std::size_t>> parents;
  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    parents.push_back(net.parents(v));
    cpts.push_back(net.cpt(v));
  }
  const std::size_t ny = vars[c].domain.size();
  cpts[c].rows = {std::vector<double>(ny, 1.0 / ny)};
  return BayesNet(std::move(vars), std::move(parents), std::move(cpts), c,
                  net.alpha());
}

// ---------------------------------------------------------------------------
// Probabilities

namespace {

// Domain indices for the named variables; the class slot (if given) is left 0.
std::vector<std::size_t> resolve(const BayesNet& net, const Observation& obs,
                                 std::optional<std::size_t> skip) {
  const auto& vars = net.variables();
  for (const auto& [name, _] : obs) {
    auto i = net.index_of(name);
    if (!i) invalid("observation names unknown variable " + name);
    if (skip && *i == *skip) {
      invalid("evidence must not assign the class variable " + name);
    }
  }
  std::vector<std::size_t> a(vars.size(), 0);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (skip && v == *skip) continue;
    auto it = obs.find(vars[v].name);
    if (it == obs.end()) {
      throw Error(ErrorCode::kMissingVariable,
                  "assignment lacks variable " + vars[v].name);
    }
    auto x = vars[v].index_of(it->second);
    if (!x) {
      invalid("value \"" + it->second + "\" not in domain of " + vars[v].name);
    }
    a[v] = *x;
  }
  return a;
}

double log_joint(const BayesNet& net, const std::vector<std::size_t>& a) {
  double acc = 0.0;
  for (std::size_t v = 0; v < net.variables().size(); ++v) {
    acc += safe_log(net.theta(v, a));
  }
  return acc;
}

std::size_t require_class(const BayesNet& net) {
  if (!net.class_var()) {
    throw Error(ErrorCode::kConfiguration, "net has no designated class variable");
  }
  return *net.class_var();
}

Posterior make_posterior(const Variable& cls, const std::vector<double>& p) {
  Posterior post;
  for (std::size_t y = 0; y < cls.domain.size(); ++y) {
    post.probabilities.emplace_back(cls.domain[y], p[y]);
  }
  return post;
}

}  // namespace

double joint_probability(const BayesNet& net, const Observation& assignment) {
  return std::exp(log_joint(net, resolve(net, assignment, std::nullopt)));
}

std::vector<double> normalize_log_scores(const std::vector<double>& log_scores) {
  double best = kNegInf;
  for (double s : log_scores) best = std::max(best, s);
  if (best == kNegInf) {
    throw Error(ErrorCode::kDegenerateEvidence,
                "evidence has zero probability under every class");
  }
  std::vector<double> p(log_scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_scores[i] - best);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

Posterior posterior(const BayesNet& net, const Observation& evidence) {
  const std::size_t c = require_class(net);
  std::vector<std::size_t> a = resolve(net, evidence, c);
  const Variable& cls = net.variables()[c];
  std::vector<double> scores;
  for (std::size_t y = 0; y < cls.domain.size(); ++y) {
    a[c] = y;
    scores.push_back(log_joint(net, a));
  }
  return make_posterior(cls, normalize_log_scores(scores));
}

Posterior naive_posterior(const BayesNet& net, const Observation& evidence) {
  const std::size_t c = require_class(net);
  if (!net.is_naive_bayes()) {
    throw Error(ErrorCode::kUnsupportedStructure, "net is not a naive Bayes star");
  }
  std::vector<std::size_t> a = resolve(net, evidence, c);
  const Variable& cls = net.variables()[c];
  std::vector<double> scores;
  for (std::size_t y = 0; y < cls.domain.size(); ++y) {
    double s = safe_log(net.cpt(c).rows[0][y]);
    for (std::size_t v = 0; v < net.variables().size(); ++v) {
      if (v == c) continue;
      s += safe_log(net.cpt(v).rows[y][a[v]]);
    }
    scores.push_back(s);
  }
  return make_posterior(cls, normalize_log_scores(scores));
}

// ---------------------------------------------------------------------------
// Role inference

Variable role_class_variable() {
  return {std::string(role_vars::kRole), {"goalkeeper", "referee", "player"}};
}

std::vector<Variable> role_feature_variables() {
  return {{std::string(role_vars::kDirection), {"F", "B", "N"}},
          {std::string(role_vars::kStatus), {"E", "M", "S", "N"}},
          {std::string(role_vars::kUColor), {"M", "U"}},
          {std::string(role_vars::kField), {"L", "M", "R"}}};
}

BayesNet default_role_net() {
  // Percent, columns goalkeeper / referee / player.
  const std::vector<std::vector<std::vector<double>>> percent = {
      {{3.79, 82.53, 13.68}, {18.24, 4.4, 77.36}, {14.71, 8.06, 77.23}},
      {{47.59, 16.21, 34.02, 2.18},
       {0.47, 69.99, 27.36, 2.18},
       {4.46, 78.82, 14.3, 2.42}},
      {{4.02, 95.98}, {20.89, 79.11}, {99.36, 0.64}},
      {{51.38, 4.71, 43.91}, {16.76, 70.85, 12.39}, {15.01, 72.86, 12.13}},
  };
  std::vector<Variable> vars{role_class_variable()};
  std::vector<std::vector<std::size_t>> parents{{}};
  std::vector<Cpt> cpts{Cpt{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}}};
  auto features = role_feature_variables();
  for (std::size_t f = 0; f < features.size(); ++f) {
    vars.push_back(features[f]);
    parents.push_back({0});
    Cpt cpt;
    for (const auto& column : percent[f]) {
      std::vector<double> row;
      for (double pct : column) row.push_back(pct / 100.0);
      cpt.rows.push_back(std::move(row));
    }
    cpts.push_back(std::move(cpt));
  }
  return BayesNet(std::move(vars), std::move(parents), std::move(cpts), 0, 0.0);
}

namespace {

std::optional<std::string> label_of(const EAG& g, const EntityRef& e,
                                    std::string_view predicate) {
  auto ts = g.triples_matching({e, std::string(predicate), std::nullopt});
  for (const auto& t : ts) {
    if (const auto* v = std::get_if<Value>(&t.object); v && v->is_label()) {
      return v->as_label();
    }
  }
  return std::nullopt;
}

std::string require_label(const EAG& g, const EntityRef& e,
                          std::string_view predicate) {
  auto v = label_of(g, e, predicate);
  if (!v) {
    throw Error(ErrorCode::kIncompleteScene,
                "entity " + e.id + " lacks attribute " + std::string(predicate));
  }
  return *v;
}

std::vector<EntityRef> persons_of(const EAG& g) {
  std::vector<EntityRef> out;
  for (const auto& e : g.entities()) {
    if (e.type == EntityType::kPerson) out.push_back(e);
  }
  return out;
}

void require_class_domain(const BayesNet& net,
                          const std::vector<std::string>& expected) {
  if (!net.class_var()) {
    throw Error(ErrorCode::kConfiguration, "net has no designated class variable");
  }
  auto domain = net.variables()[*net.class_var()].domain;
  auto sorted_expected = expected;
  std::sort(domain.begin(), domain.end());
  std::sort(sorted_expected.begin(), sorted_expected.end());
  if (domain != sorted_expected) {
    throw Error(ErrorCode::kConfiguration, "net's class domain does not fit the task");
  }
}

// Evidence restricted to the variables the net actually has.
Observation evidence_for(const BayesNet& net, const Observation& features) {
  Observation obs;
  for (const auto& [k, v] : features) {
    if (auto i = net.index_of(k); i && i != net.class_var()) obs.emplace(k, v);
  }
  return obs;
}

}  // namespace

Observation extract_role_features(const EAG& g, const EntityRef& person) {
  if (!g.find_entity(person.id) || person.type != EntityType::kPerson) {
    throw Error(ErrorCode::kNotFound, "no person entity " + person.id);
  }
  Observation obs;
  obs.emplace(role_vars::kDirection,
              require_label(g, person, predicates::kDirection));
  obs.emplace(role_vars::kStatus, require_label(g, person, predicates::kStatus));
  std::string uniform = require_label(g, person, predicates::kUniform);
  std::size_t sharing = 0;
  for (const auto& other : persons_of(g)) {
    if (other.id == person.id) continue;
    if (label_of(g, other, predicates::kUniform) == uniform) ++sharing;
  }
  obs.emplace(role_vars::kUColor, sharing == 0 ? "U" : "M");
  auto field = g.find_entity(kFieldEntityId);
  if (!field) {
    throw Error(ErrorCode::kIncompleteScene, "graph has no field entity");
  }
  obs.emplace(role_vars::kField, require_label(g, *field, predicates::kPart));
  return obs;
}

std::map<std::string, RoleInference> infer_roles(const EAG& g,
                                                 const BayesNet& net) {
  require_class_domain(net, role_class_variable().domain);
  std::map<std::string, RoleInference> out;
  for (const auto& person : persons_of(g)) {
    Posterior post =
        posterior(net, evidence_for(net, extract_role_features(g, person)));
    std::string role = post.argmax();
    out.emplace(person.id, RoleInference{std::move(role), std::move(post)});
  }
  return out;
}

std::map<std::string, std::string> roles_in(const EAG& g) {
  std::map<std::string, std::string> out;
  for (const auto& person : persons_of(g)) {
    if (auto r = label_of(g, person, predicates::kRole)) out.emplace(person.id, *r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Team status

Variable team_class_variable() {
  return {std::string(team_vars::kTeamStatus), {"defending", "attacking"}};
}

std::vector<Variable> team_feature_variables() {
  return {{std::string(team_vars::kPStatus), {"true", "false"}},
          {std::string(team_vars::kPDirection), {"true", "false"}},
          {std::string(team_vars::kTPossession), {"true", "false"}}};
}

std::map<std::string, std::vector<std::string>> identify_teams(
    const EAG& g, const std::map<std::string, std::string>& roles) {
  std::map<std::string, std::vector<std::string>> teams;
  for (const auto& person : persons_of(g)) {
    auto r = roles.find(person.id);
    if (r == roles.end() || r->second != "player") continue;
    teams[require_label(g, person, predicates::kUniform)].push_back(person.id);
  }
  if (teams.size() != 2) {
    throw Error(ErrorCode::kTeamPartition,
                "players wear " + std::to_string(teams.size()) +
                    " uniform colors; exactly two teams are required");
  }
  for (auto& [_, ids] : teams) std::sort(ids.begin(), ids.end());
  return teams;
}

namespace {

std::optional<double> distance_between(const EAG& g, const EntityRef& a,
                                       const EntityRef& b) {
  auto ts = g.triples_matching({a, std::string(predicates::kDistance), Node{b}});
  if (ts.empty() || !ts.front().weight) return std::nullopt;
  return ts.front().weight->amount;
}

}  // namespace

Observation extract_team_features(
    const EAG& g, const std::string& team_uniform,
    const std::map<std::string, std::string>& roles) {
  auto teams = identify_teams(g, roles);
  if (!teams.contains(team_uniform)) {
    invalid("no player team wears \"" + team_uniform + "\"");
  }
  auto soccer = g.find_entity(kSoccerEntityId);
  if (!soccer) {
    throw Error(ErrorCode::kMissingSoccer, "team features need a soccer entity");
  }

  std::map<std::string, std::size_t> expansion, backing;
  std::vector<std::tuple<double, std::string, std::string>> reach;  // (d, id, color)
  for (const auto& [color, ids] : teams) {
    for (const auto& id : ids) {
      EntityRef e{id, EntityType::kPerson};
      if (require_label(g, e, predicates::kStatus) == "E") ++expansion[color];
      if (require_label(g, e, predicates::kDirection) == "B") ++backing[color];
      auto d = distance_between(g, e, *soccer);
      if (!d) {
        throw Error(ErrorCode::kMissingSoccer,
                    "no distance from " + id + " to the soccer");
      }
      reach.emplace_back(*d, id, color);
    }
  }
  // Nearest player; distances equal within round-off tie on the smaller id.
  double lo = std::get<0>(*std::min_element(reach.begin(), reach.end()));
  double tol = kDistanceTieTolerance * std::max(1.0, std::abs(lo));
  std::optional<std::pair<std::string, std::string>> nearest;  // (id, color)
  for (const auto& [d, id, color] : reach) {
    if (d <= lo + tol && (!nearest || id < nearest->first)) nearest = {id, color};
  }
  const std::string nearest_team = nearest->second;
  std::string other;
  for (const auto& [color, _] : teams) {
    if (color != team_uniform) other = color;
  }
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  Observation obs;
  obs.emplace(team_vars::kPStatus,
              flag(expansion[team_uniform] > expansion[other]));
  obs.emplace(team_vars::kPDirection,
              flag(backing[team_uniform] > backing[other]));
  obs.emplace(team_vars::kTPossession, flag(nearest_team == team_uniform));
  return obs;
}

std::map<std::string, TeamInference> infer_team_status(
    const EAG& g, const std::map<std::string, std::string>& roles,
    const BayesNet& net) {
  require_class_domain(net, team_class_variable().domain);
  std::map<std::string, TeamInference> out;
  for (const auto& [color, _] : identify_teams(g, roles)) {
    Posterior post =
        posterior(net, evidence_for(net, extract_team_features(g, color, roles)));
    std::string status = post.argmax();
    out.emplace(color, TeamInference{std::move(status), std::move(post)});
  }
  return out;
}

std::string assign_team(const EAG& g,
                        const std::map<std::string, std::string>& roles,
                        const std::string& person_id) {
  auto person = g.find_entity(person_id);
  if (!person || person->type != EntityType::kPerson) {
    throw Error(ErrorCode::kNotFound, "no person entity " + person_id);
  }
  std::optional<std::pair<double, std::string>> best;
  for (const auto& [color, ids] : identify_teams(g, roles)) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& id : ids) {
      if (id == person_id) continue;
      if (auto d = distance_between(g, *person, {id, EntityType::kPerson})) {
        total += *d;
        ++n;
      }
    }
    if (n == 0) continue;
    std::pair<double, std::string> key{total / n, color};
    if (!best || key < *best) best = key;
  }
  if (!best) {
    throw Error(ErrorCode::kIncompleteScene,
                "no distances from " + person_id + " to any team");
  }
  return best->second;
}

// ---------------------------------------------------------------------------
// Model file

std::string serialize_model(const BayesNet& net) {
  ordered_json doc;
  if (net.class_var()) {
    doc["class_var"] = net.variables()[*net.class_var()].name;
  } else {
    doc["class_var"] = nullptr;
  }
  doc["alpha"] = net.alpha();
  doc["variables"] = ordered_json::array();
  for (std::size_t v = 0; v < net.variables().size(); ++v) {
    const auto& var = net.variables()[v];
    ordered_json vj;
    vj["name"] = var.name;
    vj["domain"] = var.domain;
    vj["parents"] = ordered_json::array();
    for (std::size_t p : net.parents(v)) {
      vj["parents"].push_back(net.variables()[p].name);
    }
    vj["cpt"] = net.cpt(v).rows;
    doc["variables"].push_back(std::move(vj));
  }
  return doc.dump(2) + "\n";
}

BayesNet parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "model: malformed document at byte " +
                                       std::to_string(e.byte) + ": " + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("variables") ||
        !doc["variables"].is_array()) {
      invalid("model: expected {class_var, alpha, variables}");
    }
    for (const auto& [key, _] : doc.items()) {
      if (key != "class_var" && key != "alpha" && key != "variables") {
        invalid("model: unknown key \"" + key + "\"");
      }
    }
    std::vector<Variable> vars;
    for (const auto& vj : doc["variables"]) {
      vars.push_back({vj.at("name").get<std::string>(),
                      vj.at("domain").get<std::vector<std::string>>()});
    }
    auto index = [&](const std::string& name) -> std::size_t {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name) return i;
      }
      invalid("model: unknown variable " + name);
    };
    std::vector<std::vector<std::size_t>> parents;
    std::vector<Cpt> cpts;
    for (const auto& vj : doc["variables"]) {
      std::vector<std::size_t> ps;
      for (const auto& p : vj.at("parents")) ps.push_back(index(p.get<std::string>()));
      parents.push_back(std::move(ps));
      cpts.push_back(
          Cpt{vj.at("cpt").get<std::vector<std::vector<double>>>()});
    }
    std::optional<std::size_t> cls;
    if (doc.contains("class_var") && !doc["class_var"].is_null()) {
      cls = index(doc["class_var"].get<std::string>());
    }
    double alpha = doc.contains("alpha") ? doc["alpha"].get<double>() : 0.0;
    return BayesNet(std::move(vars), std::move(parents), std::move(cpts), cls,
                    alpha);
  } catch (const json::exception& e) {
    invalid(std::string("model: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CPT report

namespace {

std::string percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", p * 100.0);
  return buf;
}

bool plain_token(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '"' ||
           c == '=' || c == '|' || c == '(' || c == ')';
  });
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

std::string export_cpt_report(const BayesNet& net) {
  if (!net.is_naive_bayes()) {
    throw Error(ErrorCode::kUnsupportedStructure,
                "cpt report needs a naive Bayes star");
  }
  const std::size_t c = *net.class_var();
  const auto& cls = net.variables()[c];
  for (const auto& v : net.variables()) {
    if (!plain_token(v.name)) invalid("cpt report: unprintable name " + v.name);
    for (const auto& x : v.domain) {
      if (!plain_token(x)) invalid("cpt report: unprintable value " + x);
    }
  }

  std::vector<std::string> keys{"prior"};
  std::vector<std::vector<std::string>> cells{{}};
  for (std::size_t y = 0; y < cls.domain.size(); ++y) {
    cells[0].push_back(percent(net.cpt(c).rows[0][y]));
  }
  for (std::size_t v = 0; v < net.variables().size(); ++v) {
    if (v == c) continue;
    const auto& var = net.variables()[v];
    for (std::size_t x = 0; x < var.domain.size(); ++x) {
      keys.push_back(var.name + "=\"" + var.domain[x] + "\"");
      std::vector<std::string> row;
      for (std::size_t y = 0; y < cls.domain.size(); ++y) {
        row.push_back(percent(net.cpt(v).rows[y][x]));
      }
      cells.push_back(std::move(row));
    }
  }

  std::vector<std::string> headers;
  for (const auto& y : cls.domain) headers.push_back("p(X|" + cls.name + "=" + y + ")");
  std::size_t key_width = 0;
  for (const auto& k : keys) key_width = std::max(key_width, k.size());
  std::vector<std::size_t> widths;
  for (const auto& h : headers) widths.push_back(std::max<std::size_t>(h.size(), 6));

  std::ostringstream out;
  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  auto pad_right = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  out << "# Conditional probability (%)\n";
  char alpha_buf[32];
  auto alpha_end =
      std::to_chars(alpha_buf, alpha_buf + sizeof(alpha_buf), net.alpha()).ptr;
  out << "# alpha: " << std::string(alpha_buf, alpha_end) << "\n";
  out << pad_right("", key_width);
  for (std::size_t i = 0; i < headers.size(); ++i) {
    out << "  " << pad_left(headers[i], widths[i]);
  }
  out << "\n";
  for (std::size_t r = 0; r < keys.size(); ++r) {
    out << pad_right(keys[r], key_width);
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      out << "  " << pad_left(cells[r][i], widths[i]);
    }
    out << "\n";
  }
  return out.str();
}

BayesNet parse_cpt_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  double alpha = 0.0;
  std::string class_name;
  std::vector<std::string> class_domain;
  // feature name -> (values in order, per-value cells)
  std::vector<std::string> feature_order;
  std::map<std::string, std::vector<std::pair<std::string, std::vector<double>>>>
      rows;
  bool header_seen = false;
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kParse, "cpt report: " + what);
  };

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto where = " (line " + std::to_string(line_no) + ")";
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "#") {
      if (toks.size() == 3 && toks[1] == "alpha:") {
        try {
          alpha = std::stod(toks[2]);
        } catch (const std::exception&) {
          fail("bad alpha" + where);
        }
      }
      continue;
    }
    if (!header_seen) {
      for (const auto& h : toks) {
        // p(X|<class>=<value>)
        if (h.rfind("p(X|", 0) != 0 || h.back() != ')') fail("bad header" + where);
        auto body = h.substr(4, h.size() - 5);
        auto eq = body.find('=');
        if (eq == std::string::npos) fail("bad header" + where);
        auto name = body.substr(0, eq);
        if (!class_name.empty() && name != class_name) fail("mixed class names" + where);
        class_name = name;
        class_domain.push_back(body.substr(eq + 1));
      }
      header_seen = true;
      continue;
    }
    if (toks.size() != class_domain.size() + 1) fail("row width mismatch" + where);
    std::vector<double> cells;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(toks[i], &used) / 100.0);
        if (used != toks[i].size()) fail("bad number" + where);
      } catch (const std::logic_error&) {
        fail("bad number" + where);
      }
    }
    if (toks[0] == "prior") {
      rows["\x01prior"].push_back({"", cells});
      continue;
    }
    auto eq = toks[0].find("=\"");
    if (eq == std::string::npos || toks[0].back() != '"') fail("bad row key" + where);
    auto name = toks[0].substr(0, eq);
    auto value = toks[0].substr(eq + 2, toks[0].size() - eq - 3);
    if (!rows.contains(name)) feature_order.push_back(name);
    rows[name].push_back({value, cells});
  }
  if (!header_seen || class_domain.empty()) fail("missing header");

  const std::size_t ny = class_domain.size();
  auto normalized = [](std::vector<double> row) {
    double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (!(total > 0.0)) invalid("cpt report: column sums to zero");
    for (double& p : row) p /= total;
    return row;
  };

  std::vector<Variable> vars{{class_name, class_domain}};
  std::vector<std::vector<std::size_t>> parents{{}};
  std::vector<Cpt> cpts;
  if (auto it = rows.find("\x01prior"); it != rows.end()) {
    cpts.push_back(Cpt{{normalized(it->second.front().second)}});
  } else {
    cpts.push_back(Cpt{{std::vector<double>(ny, 1.0 / ny)}});
  }
  for (const auto& name : feature_order) {
    const auto& entries = rows[name];
    Variable var{name, {}};
    for (const auto& [value, _] : entries) var.domain.push_back(value);
    Cpt cpt;
    for (std::size_t y = 0; y < ny; ++y) {
      std::vector<double> column;
      for (const auto& [_, cells] : entries) column.push_back(cells[y]);
      cpt.rows.push_back(normalized(std::move(column)));
    }
    vars.push_back(std::move(var));
    parents.push_back({0});
    cpts.push_back(std::move(cpt));
  }
  return BayesNet(std::move(vars), std::move(parents), std::move(cpts), 0, alpha);
}

}  // namespace eagqa
