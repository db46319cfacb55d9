//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_QUERY_HPP_
#define EAGQA_QUERY_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eagqa/eag.hpp"

namespace eagqa {

// ?name:type
struct EntityVar {
  std::string name;
  EntityType etype = EntityType::kPerson;
  friend bool operator==(const EntityVar&, const EntityVar&) = default;
};

// ?name*
struct ValueVar {
  std::string name;
  friend bool operator==(const ValueVar&, const ValueVar&) = default;
};

// _:type@index
struct Wildcard {
  EntityType etype = EntityType::kPerson;
  int index = 0;
  friend bool operator==(const Wildcard&, const Wildcard&) = default;
};

struct Const {
  Value value;
  friend bool operator==(const Const&, const Const&) = default;
};

using VarTerm = std::variant<EntityVar, ValueVar, Wildcard>;

struct FuncApp {
  std::string function;
  VarTerm argument;
  friend bool operator==(const FuncApp&, const FuncApp&) = default;
};

using Term = std::variant<EntityVar, ValueVar, Wildcard, Const, FuncApp>;

// Identity of the query node a term denotes: equal keys are one node.
std::string node_key(const Term& t);
std::string node_key(const VarTerm& t);
std::string print_term(const Term& t);

struct QueryTriple {
  Term subject;
  std::string predicate;
  Term object;
  friend bool operator==(const QueryTriple&, const QueryTriple&) = default;
};

std::string print_triple(const QueryTriple& t);

enum class AnswerKind { kEntitySet, kValueSet, kCount, kBoolean, kLabel };

std::string_view to_string(AnswerKind k) noexcept;

inline constexpr std::string_view kMinFunction = "min";
inline constexpr std::string_view kNumFunction = "num";

// A validated, canonical query graph: triples sorted by printed form and
// deduplicated. Construction throws kValidation, kConnectivity or
// kUnsupportedFunction.
class QueryGraph {
 public:
  static QueryGraph create(std::vector<QueryTriple> triples, Term focus,
                           std::optional<AnswerKind> kind = std::nullopt);

  const std::vector<QueryTriple>& triples() const noexcept { return triples_; }
  const Term& focus() const noexcept { return focus_; }
  AnswerKind answer_kind() const noexcept { return kind_; }

  // Distinct query nodes (variables, wildcards, constants).
  std::size_t node_count() const;

  // For a min() focus: the position of the distance triple it minimizes.
  std::optional<std::size_t> min_triple() const;

  friend bool operator==(const QueryGraph&, const QueryGraph&) = default;

 private:
  QueryGraph() = default;
  std::vector<QueryTriple> triples_;
  Term focus_;
  AnswerKind kind_ = AnswerKind::kEntitySet;
};

AnswerKind default_answer_kind(const Term& focus);

// Grammar:
//   query  := "ask" [kind] focus "{" triple+ "}"
//   kind   := "entities" | "values" | "count" | "exists" | "label"
//   triple := "(" term "," IDENT "," term ")"
//   focus  := term | ("min" | "num") "(" term ")"
//   term   := "?" IDENT [":" IDENT] ["*"] | "_:" IDENT "@" INT | STRING | NUMBER
// '#' starts a line comment. Errors carry line and column.
QueryGraph parse_query(std::string_view text);

// Canonical text; print(parse(print(q))) == print(q).
std::string print_query(const QueryGraph& q);

// --- Built-in templates ----------------------------------------------------

enum class TemplateId { kQ1 = 1, kQ2, kQ3, kQ4, kQ5, kQ6, kQ7 };

// How a template is answered after (or instead of) matching.
enum class Dispatch { kMatch, kTeamStatusInference };
enum class PostHook { kNone, kGoalkeeperTeam };

struct QueryTemplate {
  TemplateId id;
  std::string question;
  std::optional<QueryGraph> graph;  // absent for team-status inference
  Dispatch dispatch = Dispatch::kMatch;
  PostHook hook = PostHook::kNone;
};

std::optional<TemplateId> parse_template_id(std::string_view s) noexcept;
std::string to_string(TemplateId id);

QueryTemplate query_template(TemplateId id);
std::vector<TemplateId> all_templates();

}  // namespace eagqa

#endif  // EAGQA_QUERY_HPP_
