#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace odsim {

enum class NodeKind : std::uint8_t { Fixed, Vehicular, Pedestrian, Elevator };

inline constexpr NodeKind kAllKinds[] = {NodeKind::Fixed, NodeKind::Vehicular, NodeKind::Pedestrian,
                                         NodeKind::Elevator};

constexpr std::size_t kind_index(NodeKind k) { return static_cast<std::size_t>(k); }
char kind_letter(NodeKind k);
std::optional<NodeKind> kind_from_letter(char c);

/// Context attribute attached to every trace record.
struct FloorState {
  enum class Where : std::uint8_t { Inside, OutsideArea, WalkingOutside, DrivingInCar, InParkingLot, InSubwayStation };

  Where where{Where::WalkingOutside};
  /// Floor number; meaningful only for Inside.
  int floor{0};

  static FloorState inside(int n) { return {Where::Inside, n}; }
  static FloorState walking() { return {Where::WalkingOutside, 0}; }
  static FloorState driving() { return {Where::DrivingInCar, 0}; }
  static FloorState outside_area() { return {Where::OutsideArea, 0}; }

  bool is_inside() const { return where == Where::Inside; }
  /// Floor used for vertical separation: the floor number indoors, ground otherwise.
  int level() const { return is_inside() ? floor : 0; }

  friend bool operator==(const FloorState& a, const FloorState& b) {
    return a.where == b.where && (a.where != Where::Inside || a.floor == b.floor);
  }
};

/// Trace codes: I:<n>, OA, WO, DC, PL, SS.
std::string to_code(const FloorState& s);
std::optional<FloorState> floor_state_from_code(std::string_view code);

}  // namespace odsim
