//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/eag.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "eagqa/error.hpp"

namespace eagqa {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(EntityType t) noexcept {
  switch (t) {
    case EntityType::kPerson: return "person";
    case EntityType::kField: return "field";
    case EntityType::kSoccer: return "soccer";
    case EntityType::kScene: return "scene";
  }
  return "person";
}

std::optional<EntityType> parse_entity_type(std::string_view s) noexcept {
  for (auto t : {EntityType::kPerson, EntityType::kField, EntityType::kSoccer,
                 EntityType::kScene}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Unit u) noexcept {
  switch (u) {
    case Unit::kNone: return "none";
    case Unit::kPixels: return "pixels";
    case Unit::kMeters: return "meters";
  }
  return "none";
}

std::optional<Unit> parse_unit(std::string_view s) noexcept {
  for (auto u : {Unit::kNone, Unit::kPixels, Unit::kMeters}) {
    if (to_string(u) == s) return u;
  }
  return std::nullopt;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::strong_ordering compare_doubles(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::string Value::text() const {
  if (is_blank()) return "_";
  if (is_label()) return as_label();
  if (is_number()) return shortest(as_number().amount);
  const auto& b = as_box();
  return "[" + shortest(b.xmin) + "," + shortest(b.ymin) + "," +
         shortest(b.xmax) + "," + shortest(b.ymax) + "]";
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.v_.index() <=> b.v_.index(); c != 0) return c;
  if (a.is_label()) return a.as_label() <=> b.as_label();
  if (a.is_number()) {
    const auto& x = a.as_number();
    const auto& y = b.as_number();
    if (auto c = x.unit <=> y.unit; c != 0) return c;
    return compare_doubles(x.amount, y.amount);
  }
  if (a.is_box()) {
    const auto& x = a.as_box();
    const auto& y = b.as_box();
    for (auto [p, q] : {std::pair{x.xmin, y.xmin}, std::pair{x.ymin, y.ymin},
                        std::pair{x.xmax, y.xmax}, std::pair{x.ymax, y.ymax}}) {
      if (auto c = compare_doubles(p, q); c != 0) return c;
    }
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compare_nodes(const Node& a, const Node& b) {
  if (auto c = a.index() <=> b.index(); c != 0) return c;
  if (a.index() == 0) return std::get<EntityRef>(a) <=> std::get<EntityRef>(b);
  return std::get<Value>(a) <=> std::get<Value>(b);
}

std::string node_text(const Node& n) {
  if (const auto* e = std::get_if<EntityRef>(&n)) return e->id;
  return std::get<Value>(n).text();
}

std::strong_ordering compare_triples(const Triple& a, const Triple& b) {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return compare_nodes(a.object, b.object);
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, what);
}

void check_value(const Value& v) {
  if (v.is_number() && !std::isfinite(v.as_number().amount)) {
    invalid("numeric value must be finite");
  }
  if (v.is_box()) validate(v.as_box());
}

}  // namespace

EAG::EAG(std::vector<EntityRef> entities, std::vector<Triple> triples)
    : entities_(std::move(entities)), triples_(std::move(triples)) {
  std::sort(entities_.begin(), entities_.end());
  entities_.erase(std::unique(entities_.begin(), entities_.end()),
                  entities_.end());
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (entities_[i].id.empty()) invalid("entity id must be nonempty");
    if (i > 0 && entities_[i - 1].id == entities_[i].id) {
      invalid("entity \"" + entities_[i].id + "\" declared with two types");
    }
  }
  auto known = [this](const EntityRef& e) {
    return std::binary_search(entities_.begin(), entities_.end(), e);
  };
  for (const auto& t : triples_) {
    if (t.predicate.empty()) invalid("triple predicate must be nonempty");
    if (!known(t.subject)) {
      invalid("triple subject \"" + t.subject.id + "\" is not an entity");
    }
    if (const auto* e = std::get_if<EntityRef>(&t.object)) {
      if (!known(*e)) invalid("triple object \"" + e->id + "\" is not an entity");
    } else {
      check_value(std::get<Value>(t.object));
    }
    if (t.weight && !std::isfinite(t.weight->amount)) {
      invalid("triple weight must be finite");
    }
  }
  std::stable_sort(triples_.begin(), triples_.end(),
                   [](const Triple& a, const Triple& b) {
                     return compare_triples(a, b) < 0;
                   });
  // Set semantics on (s, p, o); a conflicting weight is an input error.
  std::vector<Triple> unique;
  unique.reserve(triples_.size());
  for (auto& t : triples_) {
    if (!unique.empty() && compare_triples(unique.back(), t) == 0) {
      if (unique.back().weight != t.weight) {
        invalid("triple (" + t.subject.id + ", " + t.predicate + ", " +
                node_text(t.object) + ") given two weights");
      }
      continue;
    }
    unique.push_back(std::move(t));
  }
  triples_ = std::move(unique);
  build_indexes();
}

void EAG::build_indexes() {
  by_subject_.clear();
  by_predicate_.clear();
  by_predicate_object_.clear();
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const auto& t = triples_[i];
    by_subject_[t.subject.id].push_back(i);
    by_predicate_[t.predicate].push_back(i);
    by_predicate_object_[{t.predicate, t.object}].push_back(i);
  }
}

std::optional<EntityRef> EAG::find_entity(std::string_view id) const {
  auto it = std::lower_bound(
      entities_.begin(), entities_.end(), id,
      [](const EntityRef& e, std::string_view key) { return e.id < key; });
  if (it == entities_.end() || it->id != id) return std::nullopt;
  return *it;
}

std::vector<std::size_t> EAG::matching_indices(
    const TripleFilter& filter) const {
  static const std::vector<std::size_t> kEmpty;
  const std::vector<std::size_t>* candidates = nullptr;
  std::vector<std::size_t> all;

  auto narrow = [&](const std::vector<std::size_t>* list) {
    if (!candidates || list->size() < candidates->size()) candidates = list;
  };
  if (filter.subject) {
    auto it = by_subject_.find(filter.subject->id);
    narrow(it == by_subject_.end() ? &kEmpty : &it->second);
  }
  if (filter.predicate && filter.object) {
    auto it = by_predicate_object_.find({*filter.predicate, *filter.object});
    narrow(it == by_predicate_object_.end() ? &kEmpty : &it->second);
  } else if (filter.predicate) {
    auto it = by_predicate_.find(*filter.predicate);
    narrow(it == by_predicate_.end() ? &kEmpty : &it->second);
  }
  if (!candidates) {
    all.resize(triples_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    candidates = &all;
  }

  std::vector<std::size_t> out;
  for (std::size_t i : *candidates) {
    const auto& t = triples_[i];
    if (filter.subject && t.subject != *filter.subject) continue;
    if (filter.predicate && t.predicate != *filter.predicate) continue;
    if (filter.object && compare_nodes(t.object, *filter.object) != 0) continue;
    out.push_back(i);
  }
  return out;
}

std::vector<Triple> EAG::triples_matching(const TripleFilter& filter) const {
  std::vector<Triple> out;
  for (std::size_t i : matching_indices(filter)) out.push_back(triples_[i]);
  return out;
}

std::vector<Triple> triples_matching(const EAG& g, const TripleFilter& filter) {
  return g.triples_matching(filter);
}

// ---------------------------------------------------------------------------
// Construction from annotations

EAG build_eag(const SceneAnnotation& scene, Registration registration) {
  using namespace predicates;
  std::vector<EntityRef> entities;
  std::vector<Triple> triples;
  auto attr = [&](const EntityRef& e, std::string_view p, Value v) {
    triples.push_back(Triple{e, std::string(p), std::move(v), std::nullopt});
  };

  std::vector<EntityRef> persons;
  for (const auto& p : scene.persons) {
    EntityRef e{p.id, EntityType::kPerson};
    persons.push_back(e);
    entities.push_back(e);
    attr(e, kUniform, Value::label(p.uniform));
    attr(e, kLocation, Value::box(p.location));
    attr(e, kDirection, Value::label(std::string(to_string(p.direction))));
    attr(e, kStatus, Value::label(std::string(to_string(p.status))));
    attr(e, kRole, Value::blank());
  }

  EntityRef field{std::string(kFieldEntityId), EntityType::kField};
  entities.push_back(field);
  attr(field, kPart, Value::label(std::string(to_string(scene.field.part))));

  std::optional<EntityRef> soccer;
  if (scene.soccer) {
    soccer = EntityRef{std::string(kSoccerEntityId), EntityType::kSoccer};
    entities.push_back(*soccer);
    attr(*soccer, kLocation, Value::box(*scene.soccer));
  }

  EntityRef scene_node{std::string(kSceneEntityId), EntityType::kScene};
  entities.push_back(scene_node);
  attr(scene_node, kType, Value::blank());

  // Positions for the distance relation: field frame when the scene can be
  // registered, otherwise the raw bounding-box centers.
  std::vector<Point2> person_pos;
  std::optional<Point2> soccer_pos;
  for (const auto& p : scene.persons) person_pos.push_back(bbox_center(p.location));
  if (scene.soccer) soccer_pos = bbox_center(*scene.soccer);
  Unit unit = Unit::kPixels;

  if (registration == Registration::kAuto) {
    try {
      if (auto h = field_registration(scene.field)) {
        std::vector<Point2> reg;
        for (const auto& p : person_pos) reg.push_back(register_point(*h, p));
        std::optional<Point2> reg_soccer;
        if (soccer_pos) reg_soccer = register_point(*h, *soccer_pos);
        person_pos = std::move(reg);
        soccer_pos = reg_soccer;
        unit = Unit::kMeters;
      }
    } catch (const Error&) {
      // Unusable keypoints or a point at infinity: keep image coordinates.
    }
  }

  auto relate = [&](const EntityRef& a, const EntityRef& b, double d) {
    triples.push_back(Triple{a, std::string(kDistance), b, Quantity{d, unit}});
    triples.push_back(Triple{b, std::string(kDistance), a, Quantity{d, unit}});
  };
  for (std::size_t i = 0; i < persons.size(); ++i) {
    for (std::size_t j = i + 1; j < persons.size(); ++j) {
      relate(persons[i], persons[j],
             pairwise_distance(person_pos[i], person_pos[j]));
    }
    if (soccer) {
      relate(persons[i], *soccer, pairwise_distance(person_pos[i], *soccer_pos));
    }
  }
  return EAG(std::move(entities), std::move(triples));
}

EAG complete_eag(const EAG& g, const std::map<FillKey, Value>& fills) {
  std::vector<Triple> triples = g.triples();
  for (const auto& [key, value] : fills) {
    if (value.is_blank()) {
      invalid("fill for (" + key.entity_id + ", " + key.predicate +
              ") must not be blank");
    }
    bool addressed = false;
    bool filled = false;
    for (auto& t : triples) {
      if (t.subject.id != key.entity_id || t.predicate != key.predicate) continue;
      addressed = true;
      if (const auto* v = std::get_if<Value>(&t.object); v && v->is_blank()) {
        t.object = value;
        filled = true;
      }
    }
    if (!addressed) {
      throw Error(ErrorCode::kNotFound, "no triple (" + key.entity_id + ", " +
                                            key.predicate + ", _)");
    }
    if (!filled) {
      throw Error(ErrorCode::kAlreadyComplete,
                  "triple (" + key.entity_id + ", " + key.predicate +
                      ") has no blank object");
    }
  }
  return EAG(g.entities(), std::move(triples));
}

bool is_complete(const EAG& g) {
  return std::none_of(g.triples().begin(), g.triples().end(),
                      [](const Triple& t) {
                        const auto* v = std::get_if<Value>(&t.object);
                        return v && v->is_blank();
                      });
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json quantity_json(const Quantity& q) {
  ordered_json j;
  j["number"] = q.amount;
  j["unit"] = to_string(q.unit);
  return j;
}

Quantity parse_quantity(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("number") || !j.contains("unit") ||
      !j["number"].is_number() || !j["unit"].is_string()) {
    invalid(where + ": expected {number, unit}");
  }
  auto unit = parse_unit(j["unit"].get<std::string>());
  if (!unit) invalid(where + ": unknown unit");
  return Quantity{j["number"].get<double>(), *unit};
}

ordered_json node_json(const Node& n) {
  ordered_json j;
  if (const auto* e = std::get_if<EntityRef>(&n)) {
    j["kind"] = "entity";
    j["id"] = e->id;
    return j;
  }
  const auto& v = std::get<Value>(n);
  if (v.is_blank()) {
    j["kind"] = "blank";
    return j;
  }
  j["kind"] = "value";
  if (v.is_label()) {
    j["label"] = v.as_label();
  } else if (v.is_number()) {
    j["number"] = v.as_number().amount;
    j["unit"] = to_string(v.as_number().unit);
  } else {
    const auto& b = v.as_box();
    j["box"] = ordered_json::array({b.xmin, b.ymin, b.xmax, b.ymax});
  }
  return j;
}

}  // namespace

std::string serialize_eag(const EAG& g) {
  ordered_json doc;
  doc["entities"] = ordered_json::array();
  for (const auto& e : g.entities()) {
    doc["entities"].push_back({{"id", e.id}, {"etype", to_string(e.type)}});
  }
  doc["triples"] = ordered_json::array();
  for (const auto& t : g.triples()) {
    ordered_json tj;
    tj["s"] = t.subject.id;
    tj["p"] = t.predicate;
    tj["o"] = node_json(t.object);
    if (t.weight) tj["w"] = quantity_json(*t.weight);
    doc["triples"].push_back(std::move(tj));
  }
  return doc.dump(1) + "\n";
}

EAG parse_eag(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "eag: malformed document at byte " +
                                       std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("entities") ||
      !doc.contains("triples") || !doc["entities"].is_array() ||
      !doc["triples"].is_array() || doc.size() != 2) {
    invalid("eag: expected exactly {entities, triples}");
  }
  std::map<std::string, EntityRef, std::less<>> by_id;
  std::vector<EntityRef> entities;
  for (const auto& ej : doc["entities"]) {
    if (!ej.is_object() || !ej.contains("id") || !ej.contains("etype") ||
        !ej["id"].is_string() || !ej["etype"].is_string()) {
      invalid("eag: entity must be {id, etype}");
    }
    auto type = parse_entity_type(ej["etype"].get<std::string>());
    if (!type) invalid("eag: unknown etype " + ej["etype"].dump());
    EntityRef e{ej["id"].get<std::string>(), *type};
    if (!by_id.emplace(e.id, e).second) invalid("eag: duplicate entity " + e.id);
    entities.push_back(e);
  }
  auto entity = [&](const json& id, const std::string& where) {
    if (!id.is_string()) invalid(where + ": entity id must be a string");
    auto it = by_id.find(id.get<std::string>());
    if (it == by_id.end()) invalid(where + ": unknown entity " + id.dump());
    return it->second;
  };

  std::vector<Triple> triples;
  for (std::size_t i = 0; i < doc["triples"].size(); ++i) {
    const auto& tj = doc["triples"][i];
    std::string where = "eag.triples[" + std::to_string(i) + "]";
    if (!tj.is_object() || !tj.contains("s") || !tj.contains("p") ||
        !tj.contains("o") || !tj["p"].is_string() || !tj["o"].is_object()) {
      invalid(where + ": expected {s, p, o}");
    }
    Triple t;
    t.subject = entity(tj["s"], where + ".s");
    t.predicate = tj["p"].get<std::string>();
    const json& oj = tj["o"];
    std::string kind = oj.value("kind", "");
    if (kind == "entity") {
      t.object = entity(oj.value("id", json()), where + ".o");
    } else if (kind == "blank") {
      t.object = Value::blank();
    } else if (kind == "value") {
      if (oj.contains("label") && oj["label"].is_string()) {
        t.object = Value::label(oj["label"].get<std::string>());
      } else if (oj.contains("number")) {
        auto q = parse_quantity(oj, where + ".o");
        t.object = Value::number(q.amount, q.unit);
      } else if (oj.contains("box") && oj["box"].is_array() &&
                 oj["box"].size() == 4) {
        const auto& b = oj["box"];
        for (const auto& c : b) {
          if (!c.is_number()) invalid(where + ".o.box: expected numbers");
        }
        t.object = Value::box(BoundingBox{b[0].get<double>(), b[1].get<double>(),
                                          b[2].get<double>(), b[3].get<double>()});
      } else {
        invalid(where + ".o: value needs label, number or box");
      }
    } else {
      invalid(where + ".o.kind: invalid value \"" + kind + "\"");
    }
    if (tj.contains("w")) t.weight = parse_quantity(tj["w"], where + ".w");
    triples.push_back(std::move(t));
  }
  return EAG(std::move(entities), std::move(triples));
}

}  // namespace eagqa
