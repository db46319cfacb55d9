//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_SCENE_HPP_
#define EAGQA_SCENE_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eagqa {

enum class Frame { kImage, kField };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  Frame frame = Frame::kImage;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct BoundingBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Throws ErrorCode::kValidation unless xmin < xmax, ymin < ymax, all finite.
void validate(const BoundingBox& box);

enum class Direction { kFacing, kBacking, kNone };        // F, B, N
enum class Status { kStanding, kMoving, kExpansion, kNone };  // S, M, E, N
enum class Role { kPlayer, kGoalkeeper, kReferee };
enum class FieldPart { kLeft, kMiddle, kRight };          // L, M, R
enum class SceneType { kNormal, kFreeKick, kKickOff, kCornerKick, kPenaltyKick };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Status s) noexcept;
std::string_view to_string(Role r) noexcept;
std::string_view to_string(FieldPart p) noexcept;
std::string_view to_string(SceneType t) noexcept;

std::optional<Direction> parse_direction(std::string_view s) noexcept;
std::optional<Status> parse_status(std::string_view s) noexcept;
std::optional<Role> parse_role(std::string_view s) noexcept;
std::optional<FieldPart> parse_field_part(std::string_view s) noexcept;
std::optional<SceneType> parse_scene_type(std::string_view s) noexcept;

struct PersonAnnotation {
  std::string id;
  std::string uniform;
  BoundingBox location;
  Direction direction = Direction::kNone;
  Status status = Status::kNone;
  std::optional<Role> role;        // gold label
  std::optional<bool> defending;   // gold label

  friend bool operator==(const PersonAnnotation&,
                         const PersonAnnotation&) = default;
};

struct FieldAnnotation {
  FieldPart part = FieldPart::kMiddle;
  // Penalty-area corners in image coordinates, ordered to match
  // standard_field_targets().
  std::optional<std::array<Point2, 4>> keypoints;

  friend bool operator==(const FieldAnnotation&,
                         const FieldAnnotation&) = default;
};

struct SceneAnnotation {
  std::string scene_id;
  std::vector<PersonAnnotation> persons;
  std::optional<BoundingBox> soccer;
  FieldAnnotation field;
  std::optional<SceneType> scene_type;  // gold label

  friend bool operator==(const SceneAnnotation&,
                         const SceneAnnotation&) = default;
};

// Entity ids the graph builder reserves for the non-person entities.
inline constexpr std::string_view kFieldEntityId = "field";
inline constexpr std::string_view kSoccerEntityId = "soccer";
inline constexpr std::string_view kSceneEntityId = "scene";

// Parses one annotation document (JSON). Throws kParse with the byte offset
// for malformed text and kValidation naming the offending field otherwise.
SceneAnnotation parse_scene_annotation(std::string_view text);

// Canonical rendering accepted by parse_scene_annotation.
std::string render_scene_annotation(const SceneAnnotation& scene);

// Full validation of an in-memory annotation (the parser calls this).
void validate(const SceneAnnotation& scene);

Point2 bbox_center(const BoundingBox& box);

double pairwise_distance(const Point2& a, const Point2& b);

// Row-major 3x3 projective transform with h[8] == 1.
class Homography {
 public:
  static Homography identity();
  // Normalizes by the bottom-right entry; throws kSingularConfiguration when
  // that entry or the determinant is negligible.
  static Homography from_matrix(const std::array<double, 9>& m);

  const std::array<double, 9>& matrix() const noexcept { return h_; }
  double operator()(int row, int col) const noexcept { return h_[row * 3 + col]; }
  double determinant() const noexcept;

  friend bool operator==(const Homography&, const Homography&) = default;

 private:
  explicit Homography(const std::array<double, 9>& m) : h_(m) {}
  std::array<double, 9> h_;
};

struct Correspondence {
  Point2 image;  // Frame::kImage
  Point2 field;  // Frame::kField
};

// Four-point direct linear transform. Throws kSingularConfiguration when
// either point set has a repeated point or a collinear triple.
Homography solve_homography(std::span<const Correspondence, 4> pairs);

// Perspective image -> field mapping. Throws kProjection when the point lands
// on the line at infinity, kFrameMismatch for a non-image input.
Point2 register_point(const Homography& h, const Point2& p);

// Standard 105 m x 68 m pitch, origin at the corner where the left goal line
// meets the near touch line.
inline constexpr double kPitchLength = 105.0;
inline constexpr double kPitchWidth = 68.0;
inline constexpr double kPenaltyAreaDepth = 16.5;
inline constexpr double kPenaltyAreaWidth = 40.32;

// Field-frame penalty-area corners for the given part, in keypoint order:
// goal line near, box front near, box front far, goal line far. Empty for
// the middle part, which has no penalty area in view.
std::optional<std::array<Point2, 4>> standard_field_targets(FieldPart part);

// Registration from the annotated keypoints, if the scene supports one.
std::optional<Homography> field_registration(const FieldAnnotation& field);

}  // namespace eagqa

#endif  // EAGQA_SCENE_HPP_
