//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "eagqa/error.hpp"

namespace eagqa {

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.triple_map != b.triple_map || a.bindings.size() != b.bindings.size()) {
    return false;
  }
  auto ia = a.bindings.begin();
  auto ib = b.bindings.begin();
  for (; ia != a.bindings.end(); ++ia, ++ib) {
    if (ia->first != ib->first || compare_nodes(ia->second, ib->second) != 0) {
      return false;
    }
  }
  return true;
}

namespace {

struct NodeLess {
  bool operator()(const Node& a, const Node& b) const {
    return compare_nodes(a, b) < 0;
  }
};

bool valuation_less(const Valuation& a, const Valuation& b) {
  auto ia = a.bindings.begin();
  auto ib = b.bindings.begin();
  for (; ia != a.bindings.end() && ib != b.bindings.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (auto c = compare_nodes(ia->second, ib->second); c != 0) return c < 0;
  }
  if (a.bindings.size() != b.bindings.size()) {
    return a.bindings.size() < b.bindings.size();
  }
  return a.triple_map < b.triple_map;
}

void finish(std::vector<Valuation>& out) {
  std::sort(out.begin(), out.end(), valuation_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// Whether a data node can stand for a query term, ignoring bindings.
bool admissible(const Term& term, const Node& node) {
  if (const auto* e = std::get_if<EntityVar>(&term)) {
    const auto* ref = std::get_if<EntityRef>(&node);
    return ref && ref->type == e->etype;
  }
  if (const auto* w = std::get_if<Wildcard>(&term)) {
    const auto* ref = std::get_if<EntityRef>(&node);
    return ref && ref->type == w->etype;
  }
  if (std::holds_alternative<ValueVar>(term)) {
    const auto* v = std::get_if<Value>(&node);
    return v && !v->is_blank();
  }
  if (const auto* c = std::get_if<Const>(&term)) {
    const auto* v = std::get_if<Value>(&node);
    return v && !v->is_blank() && *v == c->value;
  }
  return false;
}

// Backtracking search with dynamic most-constrained-triple ordering.
class Search {
 public:
  Search(const QueryGraph& q, const EAG& g) : q_(q), g_(g) {
    const auto& ts = q_.triples();
    for (const auto& t : ts) {
      subject_keys_.push_back(node_key(t.subject));
      object_keys_.push_back(node_key(t.object));
      if (const auto* c = std::get_if<Const>(&t.object)) {
        // Constants are fixed query nodes and occupy their graph node.
        Node n{c->value};
        auto [it, inserted] = owner_.emplace(n, object_keys_.back());
        (void)it;
        (void)inserted;
      }
    }
    assigned_.assign(ts.size(), kUnassigned);
  }

  std::vector<Valuation> run() {
    recurse(0);
    finish(results_);
    return std::move(results_);
  }

 private:
  static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

  std::optional<Node> bound(const std::string& key) const {
    auto it = bindings_.find(key);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
  }

  // Can `key` take `node` given the current bindings (injectivity included)?
  bool compatible(const std::string& key, const Node& node) const {
    if (auto b = bound(key)) return compare_nodes(*b, node) == 0;
    auto it = owner_.find(node);
    return it == owner_.end() || it->second == key;
  }

  std::vector<std::size_t> candidates(std::size_t i) const {
    const auto& t = q_.triples()[i];
    TripleFilter filter;
    filter.predicate = t.predicate;
    if (auto s = bound(subject_keys_[i])) filter.subject = std::get<EntityRef>(*s);
    if (const auto* c = std::get_if<Const>(&t.object)) {
      filter.object = Node{c->value};
    } else if (auto o = bound(object_keys_[i])) {
      filter.object = *o;
    }
    std::vector<std::size_t> out;
    for (std::size_t idx : g_.matching_indices(filter)) {
      if (used_.contains(idx)) continue;
      const auto& d = g_.triples()[idx];
      Node subject{d.subject};
      if (!admissible(t.subject, subject) || !admissible(t.object, d.object)) continue;
      if (!compatible(subject_keys_[i], subject)) continue;
      if (!std::holds_alternative<Const>(t.object) &&
          !compatible(object_keys_[i], d.object)) {
        continue;
      }
      // Self-loops match self-loops only; distinct ends need distinct nodes.
      if ((subject_keys_[i] == object_keys_[i]) !=
          (compare_nodes(subject, d.object) == 0)) {
        continue;
      }
      out.push_back(idx);
    }
    return out;
  }

  void bind(const std::string& key, const Node& node,
            std::vector<std::string>& added) {
    if (bindings_.contains(key)) return;
    bindings_.emplace(key, node);
    owner_.emplace(node, key);
    added.push_back(key);
  }

  void unbind(const std::vector<std::string>& added) {
    for (const auto& key : added) {
      owner_.erase(bindings_.at(key));
      bindings_.erase(key);
    }
  }

  void recurse(std::size_t depth) {
    const std::size_t n = q_.triples().size();
    if (depth == n) {
      Valuation v;
      v.bindings = bindings_;
      v.triple_map = assigned_;
      results_.push_back(std::move(v));
      return;
    }
    // Forward check every open triple and branch on the tightest one.
    std::optional<std::size_t> pick;
    std::vector<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
      if (assigned_[i] != kUnassigned) continue;
      auto c = candidates(i);
      if (c.empty()) return;
      if (!pick || c.size() < best.size()) {
        pick = i;
        best = std::move(c);
      }
    }
    const auto& t = q_.triples()[*pick];
    for (std::size_t idx : best) {
      const auto& d = g_.triples()[idx];
      std::vector<std::string> added;
      bind(subject_keys_[*pick], Node{d.subject}, added);
      if (!std::holds_alternative<Const>(t.object)) {
        bind(object_keys_[*pick], d.object, added);
      }
      assigned_[*pick] = idx;
      used_.insert(idx);
      recurse(depth + 1);
      used_.erase(idx);
      assigned_[*pick] = kUnassigned;
      unbind(added);
    }
  }

  const QueryGraph& q_;
  const EAG& g_;
  std::vector<std::string> subject_keys_;
  std::vector<std::string> object_keys_;
  std::map<std::string, Node> bindings_;
  std::map<Node, std::string, NodeLess> owner_;
  std::vector<std::size_t> assigned_;
  std::set<std::size_t> used_;
  std::vector<Valuation> results_;
};

}  // namespace

std::vector<Valuation> find_valuations(const QueryGraph& q, const EAG& g) {
  return Search(q, g).run();
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

namespace {

// Checks one complete triple assignment directly against the definition.
std::optional<Valuation> check_assignment(const QueryGraph& q, const EAG& g,
                                          const std::vector<std::size_t>& pick) {
  std::map<std::string, Node> bindings;
  std::map<std::string, Node> all_nodes;  // variables and constants
  auto bind = [&](const Term& term, const Node& node) {
    std::string key = node_key(term);
    auto [it, inserted] = all_nodes.emplace(key, node);
    if (!inserted && compare_nodes(it->second, node) != 0) return false;
    if (!std::holds_alternative<Const>(term)) bindings.emplace(key, node);
    return true;
  };
  for (std::size_t i = 0; i < pick.size(); ++i) {
    const auto& qt = q.triples()[i];
    const auto& d = g.triples()[pick[i]];
    if (qt.predicate != d.predicate) return std::nullopt;

    const auto* s_var = std::get_if<EntityVar>(&qt.subject);
    const auto* s_wild = std::get_if<Wildcard>(&qt.subject);
    EntityType s_type = s_var ? s_var->etype : s_wild->etype;
    if (d.subject.type != s_type) return std::nullopt;
    if (!bind(qt.subject, Node{d.subject})) return std::nullopt;

    const Node& o = d.object;
    if (const auto* c = std::get_if<Const>(&qt.object)) {
      const auto* v = std::get_if<Value>(&o);
      if (!v || v->is_blank() || !(*v == c->value)) return std::nullopt;
    } else if (std::holds_alternative<ValueVar>(qt.object)) {
      const auto* v = std::get_if<Value>(&o);
      if (!v || v->is_blank()) return std::nullopt;
    } else {
      const auto* e = std::get_if<EntityRef>(&o);
      EntityType want = std::holds_alternative<EntityVar>(qt.object)
                            ? std::get<EntityVar>(qt.object).etype
                            : std::get<Wildcard>(qt.object).etype;
      if (!e || e->type != want) return std::nullopt;
    }
    if (!bind(qt.object, o)) return std::nullopt;
  }
  // Node injectivity over every query node, constants included.
  std::vector<Node> images;
  for (const auto& [_, node] : all_nodes) images.push_back(node);
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      if (compare_nodes(images[a], images[b]) == 0) return std::nullopt;
    }
  }
  return Valuation{std::move(bindings), pick};
}

}  // namespace

std::vector<Valuation> brute_force_valuations(const QueryGraph& q, const EAG& g) {
  const std::size_t nq = q.triples().size();
  const std::size_t ng = g.triples().size();
  if (nq > kOracleMaxQueryTriples || ng > kOracleMaxGraphTriples) {
    throw Error(ErrorCode::kOracleTooLarge,
                "brute force oracle limited to 6 query and 20 graph triples");
  }
  std::vector<Valuation> out;
  if (ng < nq) return out;
  std::vector<std::size_t> pick(nq, 0);
  std::vector<bool> taken(ng, false);
  // Depth-first enumeration of all injective maps query -> data triples.
  auto enumerate = [&](auto&& self, std::size_t i) -> void {
    if (i == nq) {
      if (auto v = check_assignment(q, g, pick)) out.push_back(std::move(*v));
      return;
    }
    for (std::size_t d = 0; d < ng; ++d) {
      if (taken[d]) continue;
      taken[d] = true;
      pick[i] = d;
      self(self, i + 1);
      taken[d] = false;
    }
  };
  enumerate(enumerate, 0);
  finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Answers

Answer Answer::entity_set(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Answer(Kind::kEntitySet, std::move(ids));
}

Answer Answer::value_set(std::vector<Value> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return Answer(Kind::kValueSet, std::move(values));
}

std::string_view to_string(Answer::Kind k) noexcept {
  switch (k) {
    case Answer::Kind::kNone: return "none";
    case Answer::Kind::kEntitySet: return "entity_set";
    case Answer::Kind::kValueSet: return "value_set";
    case Answer::Kind::kCount: return "count";
    case Answer::Kind::kBoolean: return "boolean";
    case Answer::Kind::kLabel: return "label";
  }
  return "none";
}

std::string Answer::render() const {
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return out;
  };
  switch (kind_) {
    case Kind::kNone: return "";
    case Kind::kEntitySet: return join(entities());
    case Kind::kValueSet: {
      std::vector<std::string> parts;
      for (const auto& v : values()) parts.push_back(v.text());
      return join(parts);
    }
    case Kind::kCount: return std::to_string(count_value());
    case Kind::kBoolean: return boolean_value() ? "yes" : "no";
    case Kind::kLabel: return label_value();
  }
  return "";
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json value_json(const Value& v) {
  if (v.is_label()) return v.as_label();
  ordered_json j;
  if (v.is_number()) {
    j["number"] = v.as_number().amount;
    j["unit"] = to_string(v.as_number().unit);
  } else if (v.is_box()) {
    const auto& b = v.as_box();
    j["box"] = ordered_json::array({b.xmin, b.ymin, b.xmax, b.ymax});
  } else {
    j["blank"] = true;
  }
  return j;
}

Value parse_value_json(const json& j) {
  if (j.is_string()) return Value::label(j.get<std::string>());
  if (j.is_object() && j.contains("number")) {
    auto unit = parse_unit(j.value("unit", "none"));
    if (!unit) throw Error(ErrorCode::kValidation, "answer: unknown unit");
    return Value::number(j["number"].get<double>(), *unit);
  }
  if (j.is_object() && j.contains("box")) {
    auto b = j["box"].get<std::vector<double>>();
    if (b.size() != 4) throw Error(ErrorCode::kValidation, "answer: bad box");
    return Value::box({b[0], b[1], b[2], b[3]});
  }
  throw Error(ErrorCode::kValidation, "answer: unrecognized value " + j.dump());
}

}  // namespace

std::string serialize_answer(const Answer& a) {
  ordered_json j;
  j["kind"] = to_string(a.kind());
  switch (a.kind()) {
    case Answer::Kind::kNone: break;
    case Answer::Kind::kEntitySet: j["payload"] = a.entities(); break;
    case Answer::Kind::kValueSet: {
      j["payload"] = ordered_json::array();
      for (const auto& v : a.values()) j["payload"].push_back(value_json(v));
      break;
    }
    case Answer::Kind::kCount: j["payload"] = a.count_value(); break;
    case Answer::Kind::kBoolean: j["payload"] = a.boolean_value(); break;
    case Answer::Kind::kLabel: j["payload"] = a.label_value(); break;
  }
  return j.dump();
}

Answer parse_answer(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "answer: malformed document at byte " +
                                       std::to_string(e.byte));
  }
  try {
    if (!j.is_object() || !j.contains("kind")) {
      throw Error(ErrorCode::kValidation, "answer: expected {kind, payload}");
    }
    std::string kind = j["kind"].get<std::string>();
    const bool has_payload = j.contains("payload");
    if (j.size() != (has_payload ? 2u : 1u)) {
      throw Error(ErrorCode::kValidation, "answer: unexpected keys");
    }
    if (kind == "none" && !has_payload) return Answer::none();
    if (!has_payload) throw Error(ErrorCode::kValidation, "answer: missing payload");
    const json& p = j["payload"];
    if (kind == "entity_set") return Answer::entity_set(p.get<std::vector<std::string>>());
    if (kind == "value_set") {
      std::vector<Value> values;
      for (const auto& v : p) values.push_back(parse_value_json(v));
      return Answer::value_set(std::move(values));
    }
    if (kind == "count") {
      if (!p.is_number_unsigned()) {
        throw Error(ErrorCode::kValidation, "answer: count must be a nonnegative integer");
      }
      return Answer::count(p.get<std::uint64_t>());
    }
    if (kind == "boolean") return Answer::boolean(p.get<bool>());
    if (kind == "label") return Answer::label(p.get<std::string>());
    throw Error(ErrorCode::kValidation, "answer: unknown kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("answer: ") + e.what());
  }
}

Answer answer_query(const QueryGraph& q, const EAG& g) {
  std::set<std::string> mentioned;
  for (const auto& t : q.triples()) mentioned.insert(t.predicate);
  for (const auto& t : g.triples()) {
    const auto* v = std::get_if<Value>(&t.object);
    if (v && v->is_blank() && mentioned.contains(t.predicate)) {
      throw Error(ErrorCode::kIncompleteScene,
                  "graph still has a blank " + t.predicate + " for " +
                      t.subject.id + "; run inference first");
    }
  }

  const auto matches = find_valuations(q, g);
  const Term& focus = q.focus();
  const auto* func = std::get_if<FuncApp>(&focus);
  const std::string key = func ? node_key(func->argument) : node_key(focus);

  auto internal = [](const std::string& what) {
    return Error(ErrorCode::kInternal, "answer: " + what);
  };
  auto focus_nodes = [&] {
    std::vector<Node> nodes;
    for (const auto& m : matches) nodes.push_back(m.bindings.at(key));
    std::sort(nodes.begin(), nodes.end(), NodeLess{});
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](const Node& a, const Node& b) {
                              return compare_nodes(a, b) == 0;
                            }),
                nodes.end());
    return nodes;
  };

  if (func && func->function == kMinFunction) {
    auto pos = q.min_triple();
    if (!pos) throw internal("min() without a distance triple");
    std::vector<std::pair<double, std::string>> cands;
    for (const auto& m : matches) {
      const auto& d = g.triples()[m.triple_map[*pos]];
      if (!d.weight) throw internal("distance triple without a weight");
      const auto* e = std::get_if<EntityRef>(&m.bindings.at(key));
      if (!e) throw internal("min() bound a non-entity");
      cands.emplace_back(d.weight->amount, e->id);
    }
    if (cands.empty()) return Answer::none();
    // Distances equal up to registration round-off tie; smallest id wins.
    double lo = std::min_element(cands.begin(), cands.end())->first;
    double tol = kDistanceTieTolerance * std::max(1.0, std::abs(lo));
    std::optional<std::string> best;
    for (const auto& [dist, id] : cands) {
      if (dist <= lo + tol && (!best || id < *best)) best = id;
    }
    return Answer::label(*best);
  }

  switch (q.answer_kind()) {
    case AnswerKind::kCount: {
      std::uint64_t n = 0;
      for (const auto& node : focus_nodes()) {
        if (!std::holds_alternative<EntityRef>(node)) throw internal("num() over values");
        ++n;
      }
      return Answer::count(n);
    }
    case AnswerKind::kBoolean:
      return Answer::boolean(!matches.empty());
    case AnswerKind::kEntitySet: {
      std::vector<std::string> ids;
      for (const auto& node : focus_nodes()) {
        const auto* e = std::get_if<EntityRef>(&node);
        if (!e) throw internal("entity_set focus bound a value");
        ids.push_back(e->id);
      }
      return Answer::entity_set(std::move(ids));
    }
    case AnswerKind::kValueSet: {
      std::vector<Value> values;
      for (const auto& node : focus_nodes()) {
        const auto* v = std::get_if<Value>(&node);
        if (!v) throw internal("value_set focus bound an entity");
        values.push_back(*v);
      }
      return Answer::value_set(std::move(values));
    }
    case AnswerKind::kLabel: {
      auto nodes = focus_nodes();
      if (nodes.empty()) return Answer::none();
      return Answer::label(node_text(nodes.front()));
    }
  }
  throw internal("unhandled answer kind");
}

}  // namespace eagqa
