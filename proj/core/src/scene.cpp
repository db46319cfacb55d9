//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "eagqa/error.hpp"

namespace eagqa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kValidation, what);
}

[[noreturn]] void singular(const std::string& what) {
  throw Error(ErrorCode::kSingularConfiguration, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const BoundingBox& box) {
  if (!finite(box.xmin) || !finite(box.ymin) || !finite(box.xmax) ||
      !finite(box.ymax)) {
    invalid("bounding box has a non-finite coordinate");
  }
  if (!(box.xmin < box.xmax) || !(box.ymin < box.ymax)) {
    invalid("bounding box must satisfy xmin < xmax and ymin < ymax");
  }
}

// ---------------------------------------------------------------------------
// Enum labels

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::kFacing: return "F";
    case Direction::kBacking: return "B";
    case Direction::kNone: return "N";
  }
  return "N";
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::kStanding: return "S";
    case Status::kMoving: return "M";
    case Status::kExpansion: return "E";
    case Status::kNone: return "N";
  }
  return "N";
}

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::kPlayer: return "player";
    case Role::kGoalkeeper: return "goalkeeper";
    case Role::kReferee: return "referee";
  }
  return "player";
}

std::string_view to_string(FieldPart p) noexcept {
  switch (p) {
    case FieldPart::kLeft: return "L";
    case FieldPart::kMiddle: return "M";
    case FieldPart::kRight: return "R";
  }
  return "M";
}

std::string_view to_string(SceneType t) noexcept {
  switch (t) {
    case SceneType::kNormal: return "normal";
    case SceneType::kFreeKick: return "free_kick";
    case SceneType::kKickOff: return "kick_off";
    case SceneType::kCornerKick: return "corner_kick";
    case SceneType::kPenaltyKick: return "penalty_kick";
  }
  return "normal";
}

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::array<E, N>& values) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Direction> parse_direction(std::string_view s) noexcept {
  return lookup(s, std::array{Direction::kFacing, Direction::kBacking,
                              Direction::kNone});
}

std::optional<Status> parse_status(std::string_view s) noexcept {
  return lookup(s, std::array{Status::kStanding, Status::kMoving,
                              Status::kExpansion, Status::kNone});
}

std::optional<Role> parse_role(std::string_view s) noexcept {
  return lookup(s,
                std::array{Role::kPlayer, Role::kGoalkeeper, Role::kReferee});
}

std::optional<FieldPart> parse_field_part(std::string_view s) noexcept {
  return lookup(s, std::array{FieldPart::kLeft, FieldPart::kMiddle,
                              FieldPart::kRight});
}

std::optional<SceneType> parse_scene_type(std::string_view s) noexcept {
  return lookup(s, std::array{SceneType::kNormal, SceneType::kFreeKick,
                              SceneType::kKickOff, SceneType::kCornerKick,
                              SceneType::kPenaltyKick});
}

// ---------------------------------------------------------------------------
// Annotation document

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid(where + ": unknown key \"" + key + "\"");
    }
  }
}

const json& require(const json& obj, const std::string& where,
                    const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(where + ": missing key \"" + key + "\"");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) invalid(where + ": expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) invalid(where + ": expected a number");
  return v.get<double>();
}

const json& as_object(const json& v, const std::string& where) {
  if (!v.is_object()) invalid(where + ": expected an object");
  return v;
}

const json& as_array(const json& v, const std::string& where,
                     std::optional<std::size_t> size = std::nullopt) {
  if (!v.is_array()) invalid(where + ": expected an array");
  if (size && v.size() != *size) {
    invalid(where + ": expected " + std::to_string(*size) + " elements");
  }
  return v;
}

template <typename E>
E as_enum(const json& v, const std::string& where,
          std::optional<E> (*parse)(std::string_view) noexcept) {
  std::string s = as_string(v, where);
  auto parsed = parse(s);
  if (!parsed) invalid(where + ": invalid value \"" + s + "\"");
  return *parsed;
}

BoundingBox parse_bbox(const json& v, const std::string& where) {
  const json& arr = as_array(v, where, 4);
  BoundingBox box{as_number(arr[0], where + "[0]"),
                  as_number(arr[1], where + "[1]"),
                  as_number(arr[2], where + "[2]"),
                  as_number(arr[3], where + "[3]")};
  try {
    validate(box);
  } catch (const Error& e) {
    invalid(where + ": " + e.what());
  }
  return box;
}

PersonAnnotation parse_person(const json& v, const std::string& where) {
  as_object(v, where);
  reject_unknown_keys(v, where, {"id", "uniform", "bbox", "direction",
                                 "status", "role", "defending"});
  PersonAnnotation p;
  p.id = as_string(require(v, where, "id"), where + ".id");
  p.uniform = as_string(require(v, where, "uniform"), where + ".uniform");
  p.location = parse_bbox(require(v, where, "bbox"), where + ".bbox");
  p.direction = as_enum<Direction>(require(v, where, "direction"),
                                   where + ".direction", &parse_direction);
  p.status = as_enum<Status>(require(v, where, "status"), where + ".status",
                             &parse_status);
  if (auto it = v.find("role"); it != v.end()) {
    p.role = as_enum<Role>(*it, where + ".role", &parse_role);
  }
  if (auto it = v.find("defending"); it != v.end()) {
    if (!it->is_boolean()) invalid(where + ".defending: expected a boolean");
    p.defending = it->get<bool>();
  }
  return p;
}

FieldAnnotation parse_field(const json& v, const std::string& where) {
  as_object(v, where);
  reject_unknown_keys(v, where, {"part", "keypoints"});
  FieldAnnotation f;
  f.part = as_enum<FieldPart>(require(v, where, "part"), where + ".part",
                              &parse_field_part);
  if (auto it = v.find("keypoints"); it != v.end()) {
    const json& arr = as_array(*it, where + ".keypoints", 4);
    std::array<Point2, 4> pts;
    for (std::size_t i = 0; i < 4; ++i) {
      std::string at = where + ".keypoints[" + std::to_string(i) + "]";
      const json& xy = as_array(arr[i], at, 2);
      pts[i] = Point2{as_number(xy[0], at + "[0]"),
                      as_number(xy[1], at + "[1]"), Frame::kImage};
    }
    f.keypoints = pts;
  }
  return f;
}

// Squared scale-relative test for three points lying on one line.
bool collinear(const Point2& a, const Point2& b, const Point2& c) {
  double abx = b.x - a.x, aby = b.y - a.y;
  double acx = c.x - a.x, acy = c.y - a.y;
  double cross = abx * acy - aby * acx;
  double scale = std::max(abx * abx + aby * aby, acx * acx + acy * acy);
  return std::abs(cross) <= 1e-12 * scale;
}

bool coincident(const Point2& a, const Point2& b) {
  double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x),
                           std::abs(b.y), 1.0});
  return std::hypot(a.x - b.x, a.y - b.y) <= 1e-12 * scale;
}

// Empty string when the quadruple is usable for registration.
std::string degeneracy(std::span<const Point2, 4> pts) {
  for (int i = 0; i < 4; ++i) {
    if (!finite(pts[i].x) || !finite(pts[i].y)) return "non-finite point";
    for (int j = i + 1; j < 4; ++j) {
      if (coincident(pts[i], pts[j])) return "repeated point";
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        if (collinear(pts[i], pts[j], pts[k])) return "collinear triple";
      }
    }
  }
  return {};
}

ordered_json bbox_json(const BoundingBox& b) {
  return ordered_json::array({b.xmin, b.ymin, b.xmax, b.ymax});
}

}  // namespace

void validate(const SceneAnnotation& scene) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < scene.persons.size(); ++i) {
    const auto& p = scene.persons[i];
    std::string where = "persons[" + std::to_string(i) + "]";
    if (p.id.empty()) invalid(where + ".id: must be nonempty");
    if (p.id == kFieldEntityId || p.id == kSoccerEntityId ||
        p.id == kSceneEntityId) {
      invalid(where + ".id: \"" + p.id + "\" is reserved");
    }
    if (!ids.insert(p.id).second) {
      invalid(where + ".id: duplicate person id \"" + p.id + "\"");
    }
    if (p.uniform.empty()) invalid(where + ".uniform: must be nonempty");
    try {
      validate(p.location);
    } catch (const Error& e) {
      invalid(where + ".bbox: " + e.what());
    }
  }
  if (scene.soccer) {
    try {
      validate(*scene.soccer);
    } catch (const Error& e) {
      invalid(std::string("soccer.bbox: ") + e.what());
    }
  }
  if (scene.field.keypoints) {
    for (const auto& p : *scene.field.keypoints) {
      if (p.frame != Frame::kImage) {
        invalid("field.keypoints: keypoints are image-frame points");
      }
    }
    std::string why = degeneracy(*scene.field.keypoints);
    if (!why.empty()) invalid("field.keypoints: " + why);
  }
}

SceneAnnotation parse_scene_annotation(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                "scene annotation: malformed document at byte " +
                    std::to_string(e.byte) + ": " + e.what());
  }
  const std::string root = "scene";
  as_object(doc, root);
  reject_unknown_keys(doc, root,
                      {"scene_id", "persons", "soccer", "field", "scene_type"});

  SceneAnnotation scene;
  scene.scene_id = as_string(require(doc, root, "scene_id"), "scene_id");
  const json& persons = as_array(require(doc, root, "persons"), "persons");
  for (std::size_t i = 0; i < persons.size(); ++i) {
    scene.persons.push_back(
        parse_person(persons[i], "persons[" + std::to_string(i) + "]"));
  }
  if (auto it = doc.find("soccer"); it != doc.end()) {
    as_object(*it, "soccer");
    reject_unknown_keys(*it, "soccer", {"bbox"});
    scene.soccer = parse_bbox(require(*it, "soccer", "bbox"), "soccer.bbox");
  }
  scene.field = parse_field(require(doc, root, "field"), "field");
  if (auto it = doc.find("scene_type"); it != doc.end()) {
    scene.scene_type =
        as_enum<SceneType>(*it, "scene_type", &parse_scene_type);
  }
  validate(scene);
  return scene;
}

std::string render_scene_annotation(const SceneAnnotation& scene) {
  ordered_json doc;
  doc["scene_id"] = scene.scene_id;
  doc["persons"] = ordered_json::array();
  for (const auto& p : scene.persons) {
    ordered_json pj;
    pj["id"] = p.id;
    pj["uniform"] = p.uniform;
    pj["bbox"] = bbox_json(p.location);
    pj["direction"] = to_string(p.direction);
    pj["status"] = to_string(p.status);
    if (p.role) pj["role"] = to_string(*p.role);
    if (p.defending) pj["defending"] = *p.defending;
    doc["persons"].push_back(std::move(pj));
  }
  if (scene.soccer) doc["soccer"] = {{"bbox", bbox_json(*scene.soccer)}};
  ordered_json fj;
  fj["part"] = to_string(scene.field.part);
  if (scene.field.keypoints) {
    fj["keypoints"] = ordered_json::array();
    for (const auto& k : *scene.field.keypoints) {
      fj["keypoints"].push_back({k.x, k.y});
    }
  }
  doc["field"] = std::move(fj);
  if (scene.scene_type) doc["scene_type"] = to_string(*scene.scene_type);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Geometry

Point2 bbox_center(const BoundingBox& box) {
  return Point2{(box.xmin + box.xmax) / 2.0, (box.ymin + box.ymax) / 2.0,
                Frame::kImage};
}

double pairwise_distance(const Point2& a, const Point2& b) {
  if (a.frame != b.frame) {
    throw Error(ErrorCode::kFrameMismatch,
                "distance between points of different frames");
  }
  return std::hypot(a.x - b.x, a.y - b.y);
}

Homography Homography::identity() {
  return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1});
}

Homography Homography::from_matrix(const std::array<double, 9>& m) {
  double largest = 0.0;
  for (double v : m) {
    if (!finite(v)) singular("homography has a non-finite entry");
    largest = std::max(largest, std::abs(v));
  }
  if (largest == 0.0 || std::abs(m[8]) <= 1e-12 * largest) {
    singular("homography cannot be normalized (h33 is zero)");
  }
  std::array<double, 9> n;
  for (int i = 0; i < 9; ++i) n[i] = m[i] / m[8];
  Homography h(n);
  if (std::abs(h.determinant()) <= 1e-12) {
    singular("homography is not invertible");
  }
  return h;
}

double Homography::determinant() const noexcept {
  const auto& a = h_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) -
         a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

namespace {

using Mat3 = std::array<double, 9>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      for (int col = 0; col < 3; ++col) {
        c[r * 3 + col] += a[r * 3 + k] * b[k * 3 + col];
      }
    }
  }
  return c;
}

struct Conditioning {
  Mat3 forward;  // raw -> normalized
  Mat3 inverse;  // normalized -> raw
};

// Centroid to origin, mean distance sqrt(2).
Conditioning conditioning(std::span<const Point2, 4> pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x / 4.0;
    cy += p.y / 4.0;
  }
  double mean = 0.0;
  for (const auto& p : pts) mean += std::hypot(p.x - cx, p.y - cy) / 4.0;
  double s = std::sqrt(2.0) / mean;
  return {{s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1},
          {1 / s, 0, cx, 0, 1 / s, cy, 0, 0, 1}};
}

// Solves a x = b in place by Gaussian elimination with partial pivoting.
std::array<double, 8> solve8(std::array<std::array<double, 9>, 8> aug) {
  constexpr int n = 8;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    if (std::abs(aug[pivot][col]) < 1e-12) {
      singular("degenerate correspondence configuration");
    }
    std::swap(aug[col], aug[pivot]);
    for (int r = col + 1; r < n; ++r) {
      double f = aug[r][col] / aug[col][col];
      for (int c = col; c <= n; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  std::array<double, 8> x{};
  for (int r = n - 1; r >= 0; --r) {
    double acc = aug[r][n];
    for (int c = r + 1; c < n; ++c) acc -= aug[r][c] * x[c];
    x[r] = acc / aug[r][r];
  }
  return x;
}

}  // namespace

Homography solve_homography(std::span<const Correspondence, 4> pairs) {
  std::array<Point2, 4> src, dst;
  for (int i = 0; i < 4; ++i) {
    if (pairs[i].image.frame != Frame::kImage ||
        pairs[i].field.frame != Frame::kField) {
      throw Error(ErrorCode::kFrameMismatch,
                  "correspondences map image points to field points");
    }
    src[i] = pairs[i].image;
    dst[i] = pairs[i].field;
  }
  if (auto why = degeneracy(src); !why.empty()) singular("source: " + why);
  if (auto why = degeneracy(dst); !why.empty()) singular("target: " + why);

  Conditioning cs = conditioning(src);
  Conditioning cd = conditioning(dst);
  auto apply = [](const Mat3& t, const Point2& p) {
    return std::pair{t[0] * p.x + t[2], t[4] * p.y + t[5]};
  };

  std::array<std::array<double, 9>, 8> aug{};
  for (int i = 0; i < 4; ++i) {
    auto [x, y] = apply(cs.forward, src[i]);
    auto [u, v] = apply(cd.forward, dst[i]);
    aug[2 * i] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
    aug[2 * i + 1] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
  }
  std::array<double, 8> h = solve8(aug);
  Mat3 normalized{h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0};
  return Homography::from_matrix(
      multiply(cd.inverse, multiply(normalized, cs.forward)));
}

Point2 register_point(const Homography& h, const Point2& p) {
  if (p.frame != Frame::kImage) {
    throw Error(ErrorCode::kFrameMismatch, "registration expects image points");
  }
  double w = h(2, 0) * p.x + h(2, 1) * p.y + h(2, 2);
  if (std::abs(w) < 1e-12) {
    throw Error(ErrorCode::kProjection, "point maps to the line at infinity");
  }
  return Point2{(h(0, 0) * p.x + h(0, 1) * p.y + h(0, 2)) / w,
                (h(1, 0) * p.x + h(1, 1) * p.y + h(1, 2)) / w, Frame::kField};
}

std::optional<std::array<Point2, 4>> standard_field_targets(FieldPart part) {
  const double y0 = (kPitchWidth - kPenaltyAreaWidth) / 2.0;
  const double y1 = y0 + kPenaltyAreaWidth;
  switch (part) {
    case FieldPart::kLeft:
      return std::array{Point2{0.0, y0, Frame::kField},
                        Point2{kPenaltyAreaDepth, y0, Frame::kField},
                        Point2{kPenaltyAreaDepth, y1, Frame::kField},
                        Point2{0.0, y1, Frame::kField}};
    case FieldPart::kRight:
      return std::array{
          Point2{kPitchLength, y0, Frame::kField},
          Point2{kPitchLength - kPenaltyAreaDepth, y0, Frame::kField},
          Point2{kPitchLength - kPenaltyAreaDepth, y1, Frame::kField},
          Point2{kPitchLength, y1, Frame::kField}};
    case FieldPart::kMiddle:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Homography> field_registration(const FieldAnnotation& field) {
  if (!field.keypoints) return std::nullopt;
  auto targets = standard_field_targets(field.part);
  if (!targets) return std::nullopt;
  std::array<Correspondence, 4> pairs;
  for (int i = 0; i < 4; ++i) pairs[i] = {(*field.keypoints)[i], (*targets)[i]};
  return solve_homography(pairs);
}

}  // namespace eagqa
