#include "odsim/floor_state.hpp"

#include "odsim/text.hpp"

namespace odsim {

char kind_letter(NodeKind k) {
  switch (k) {
    case NodeKind::Fixed: return 'F';
    case NodeKind::Vehicular: return 'V';
    case NodeKind::Pedestrian: return 'P';
    case NodeKind::Elevator: return 'E';
  }
  return '?';
}

std::optional<NodeKind> kind_from_letter(char c) {
  switch (c) {
    case 'F': return NodeKind::Fixed;
    case 'V': return NodeKind::Vehicular;
    case 'P': return NodeKind::Pedestrian;
    case 'E': return NodeKind::Elevator;
    default: return std::nullopt;
  }
}

std::string to_code(const FloorState& s) {
  using W = FloorState::Where;
  switch (s.where) {
    case W::Inside: return "I:" + std::to_string(s.floor);
    case W::OutsideArea: return "OA";
    case W::WalkingOutside: return "WO";
    case W::DrivingInCar: return "DC";
    case W::InParkingLot: return "PL";
    case W::InSubwayStation: return "SS";
  }
  return "?";
}

std::optional<FloorState> floor_state_from_code(std::string_view code) {
  using W = FloorState::Where;
  if (code.size() > 2 && code.substr(0, 2) == "I:") {
    auto n = text::parse_int<int>(code.substr(2));
    if (!n || *n < 0) return std::nullopt;
    return FloorState::inside(*n);
  }
  if (code == "OA") return FloorState{W::OutsideArea, 0};
  if (code == "WO") return FloorState{W::WalkingOutside, 0};
  if (code == "DC") return FloorState{W::DrivingInCar, 0};
  if (code == "PL") return FloorState{W::InParkingLot, 0};
  if (code == "SS") return FloorState{W::InSubwayStation, 0};
  return std::nullopt;
}

}  // namespace odsim
