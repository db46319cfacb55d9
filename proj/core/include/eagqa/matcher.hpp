//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_MATCHER_HPP_
#define EAGQA_MATCHER_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eagqa/eag.hpp"
#include "eagqa/query.hpp"

namespace eagqa {

// One match of a query graph: variable/wildcard bindings (keyed by
// node_key) and, per query triple in canonical order, the position of the
// data triple it maps to.
struct Valuation {
  std::map<std::string, Node> bindings;
  std::vector<std::size_t> triple_map;

  friend bool operator==(const Valuation& a, const Valuation& b);
};

// Subgraph-isomorphism matches: predicates and constants preserved, entity
// terms bound to entities of their type, value variables to non-blank
// values, and distinct query nodes bound to distinct graph nodes. Output is
// sorted by binding tuple.
std::vector<Valuation> find_valuations(const QueryGraph& q, const EAG& g);

// Exhaustive enumeration of injective query-to-data triple assignments.
// Throws kOracleTooLarge beyond 6 query triples or 20 data triples.
std::vector<Valuation> brute_force_valuations(const QueryGraph& q, const EAG& g);

inline constexpr std::size_t kOracleMaxQueryTriples = 6;
inline constexpr std::size_t kOracleMaxGraphTriples = 20;

class Answer {
 public:
  enum class Kind { kNone, kEntitySet, kValueSet, kCount, kBoolean, kLabel };

  static Answer none() { return Answer(Kind::kNone, std::monostate{}); }
  static Answer entity_set(std::vector<std::string> ids);
  static Answer value_set(std::vector<Value> values);
  static Answer count(std::uint64_t n) { return Answer(Kind::kCount, n); }
  static Answer boolean(bool b) { return Answer(Kind::kBoolean, b); }
  static Answer label(std::string s) { return Answer(Kind::kLabel, std::move(s)); }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& entities() const {
    return std::get<std::vector<std::string>>(payload_);
  }
  const std::vector<Value>& values() const {
    return std::get<std::vector<Value>>(payload_);
  }
  std::uint64_t count_value() const { return std::get<std::uint64_t>(payload_); }
  bool boolean_value() const { return std::get<bool>(payload_); }
  const std::string& label_value() const { return std::get<std::string>(payload_); }

  // Plain text used when comparing against reference answers.
  std::string render() const;

  friend bool operator==(const Answer&, const Answer&) = default;

 private:
  using Payload = std::variant<std::monostate, std::vector<std::string>,
                               std::vector<Value>, std::uint64_t, bool,
                               std::string>;
  Answer(Kind k, Payload p) : kind_(k), payload_(std::move(p)) {}
  Kind kind_;
  Payload payload_;
};

std::string_view to_string(Answer::Kind k) noexcept;

// {"kind": ..., "payload": ...}; the no-answer case is {"kind": "none"}.
std::string serialize_answer(const Answer& a);
Answer parse_answer(std::string_view text);

// Matches with functions ignored, then applies the focus function. Throws
// kIncompleteScene when a predicate the query mentions still has a blank
// object in g.
Answer answer_query(const QueryGraph& q, const EAG& g);

}  // namespace eagqa

#endif  // EAGQA_MATCHER_HPP_
