//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_EAG_HPP_
#define EAGQA_EAG_HPP_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "eagqa/scene.hpp"

namespace eagqa {

enum class EntityType { kPerson, kField, kSoccer, kScene };

std::string_view to_string(EntityType t) noexcept;
std::optional<EntityType> parse_entity_type(std::string_view s) noexcept;

struct EntityRef {
  std::string id;
  EntityType type = EntityType::kPerson;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
  // Ordered by id only; ids are unique within a graph.
  friend std::strong_ordering operator<=>(const EntityRef& a,
                                          const EntityRef& b) {
    if (auto c = a.id <=> b.id; c != 0) return c;
    return a.type <=> b.type;
  }
};

enum class Unit { kNone, kPixels, kMeters };

std::string_view to_string(Unit u) noexcept;
std::optional<Unit> parse_unit(std::string_view s) noexcept;

struct Quantity {
  double amount = 0.0;
  Unit unit = Unit::kNone;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Attribute value node: blank, category label, number with unit, or a
// pixel-space bounding box (the person/soccer location attribute).
class Value {
 public:
  struct Blank {
    friend bool operator==(Blank, Blank) = default;
  };

  Value() = default;
  static Value blank() { return Value(); }
  static Value label(std::string s) { return Value(Payload{std::move(s)}); }
  static Value number(double amount, Unit unit) {
    return Value(Payload{Quantity{amount, unit}});
  }
  static Value box(const BoundingBox& b) { return Value(Payload{b}); }

  bool is_blank() const noexcept { return std::holds_alternative<Blank>(v_); }
  bool is_label() const noexcept {
    return std::holds_alternative<std::string>(v_);
  }
  bool is_number() const noexcept {
    return std::holds_alternative<Quantity>(v_);
  }
  bool is_box() const noexcept {
    return std::holds_alternative<BoundingBox>(v_);
  }

  const std::string& as_label() const { return std::get<std::string>(v_); }
  const Quantity& as_number() const { return std::get<Quantity>(v_); }
  const BoundingBox& as_box() const { return std::get<BoundingBox>(v_); }

  // Human-readable text: the label itself, a shortest round-trip number,
  // "[xmin,ymin,xmax,ymax]" for boxes, "_" for blank.
  std::string text() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  using Payload = std::variant<Blank, std::string, Quantity, BoundingBox>;
  explicit Value(Payload p) : v_(std::move(p)) {}
  Payload v_;
};

// Triple object, and more generally a graph node: an entity or a value.
using Node = std::variant<EntityRef, Value>;

std::strong_ordering compare_nodes(const Node& a, const Node& b);
std::string node_text(const Node& n);

struct Triple {
  EntityRef subject;
  std::string predicate;
  Node object;
  // Numeric edge attribute for entity-to-entity relations (distance).
  std::optional<Quantity> weight;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// (subject id, predicate, object) order; weight does not take part.
std::strong_ordering compare_triples(const Triple& a, const Triple& b);

namespace predicates {
inline constexpr std::string_view kUniform = "uniform";
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kDirection = "direction";
inline constexpr std::string_view kStatus = "status";
inline constexpr std::string_view kPart = "part";
inline constexpr std::string_view kRole = "role";
inline constexpr std::string_view kType = "type";
inline constexpr std::string_view kDistance = "distance";
}  // namespace predicates

// Relative tolerance under which two distances count as equal when picking
// a nearest entity; such ties go to the smaller id.
inline constexpr double kDistanceTieTolerance = 1e-9;

struct TripleFilter {
  std::optional<EntityRef> subject;
  std::optional<std::string> predicate;
  std::optional<Node> object;
};

class EAG {
 public:
  EAG() = default;
  // Validates ids, subjects, object entities and predicates; merges
  // duplicate triples; sorts everything deterministically.
  EAG(std::vector<EntityRef> entities, std::vector<Triple> triples);

  const std::vector<EntityRef>& entities() const noexcept { return entities_; }
  const std::vector<Triple>& triples() const noexcept { return triples_; }

  std::optional<EntityRef> find_entity(std::string_view id) const;

  // Index-backed lookup; result in triple order.
  std::vector<Triple> triples_matching(const TripleFilter& filter) const;
  // Same, returning positions into triples().
  std::vector<std::size_t> matching_indices(const TripleFilter& filter) const;

  friend bool operator==(const EAG& a, const EAG& b) {
    return a.entities_ == b.entities_ && a.triples_ == b.triples_;
  }

 private:
  void build_indexes();

  std::vector<EntityRef> entities_;
  std::vector<Triple> triples_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_subject_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_predicate_;
  std::map<std::pair<std::string, Node>, std::vector<std::size_t>>
      by_predicate_object_;
};

enum class Registration { kAuto, kForceImageFrame };

EAG build_eag(const SceneAnnotation& scene,
              Registration registration = Registration::kAuto);

struct FillKey {
  std::string entity_id;
  std::string predicate;

  friend auto operator<=>(const FillKey&, const FillKey&) = default;
};

// Replaces the addressed blank objects. Throws kNotFound for a missing
// triple and kAlreadyComplete for a non-blank one.
EAG complete_eag(const EAG& g, const std::map<FillKey, Value>& fills);

bool is_complete(const EAG& g);

std::vector<Triple> triples_matching(const EAG& g, const TripleFilter& filter);

std::string serialize_eag(const EAG& g);
EAG parse_eag(std::string_view text);

}  // namespace eagqa

#endif  // EAGQA_EAG_HPP_
