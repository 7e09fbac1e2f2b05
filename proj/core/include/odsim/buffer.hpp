#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odsim/roi.hpp"
#include "odsim/tile_grid.hpp"

namespace odsim {

enum class Insertion { Fifo, Selective };
enum class Eviction { Fifo, Selective };

enum class OfferResult {
  Inserted,  // appended, buffer had room
  Replaced,  // appended after evicting an older item
  Updated,   // stored version of the tile moved forward
  Stale,     // same or newer version already stored
  Rejected,  // tile outside the ROI under selective insertion
  Dropped,   // buffer full and no eviction candidate
};

/// Bounded item store, at most one item per tile, ordered by insertion age
/// (oldest first). Version updates keep the original age.
class Buffer {
 public:
  Buffer(std::size_t capacity, const TileGrid& grid);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool full() const { return items_.size() >= capacity_; }

  /// Items oldest first.
  std::span<const InfoItem> items() const { return items_; }
  std::optional<double> version_of(TileIndex t) const;

  /// Applies the insertion and eviction rules for one incoming item.
  OfferResult offer(const InfoItem& item, Insertion insertion, Eviction eviction, const RoiSquare& roi,
                    const TileGrid& grid);

  void clear();

 private:
  std::size_t key(TileIndex t) const {
    return static_cast<std::size_t>(t.y) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(t.x);
  }
  void erase_at(std::size_t pos);

  static constexpr std::int32_t kAbsent = -1;
  std::size_t capacity_;
  int nx_;
  std::vector<InfoItem> items_;
  std::vector<std::int32_t> pos_;
};

}  // namespace odsim
